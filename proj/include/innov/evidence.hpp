#pragma once

// Dempster-Shafer evidence over a frame of grouping intervals on [0,1].

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace innov {

inline constexpr int kMaxIntervals = 16;
inline constexpr double kMassTolerance = 1e-9;
inline constexpr double kConflictTolerance = 1e-12;

/// Non-empty subset of interval indices {1..16}, stored as a bit mask
/// (bit i-1 set when interval i is a member).
class FocalSet {
 public:
  static FocalSet of(std::initializer_list<int> indices);
  static FocalSet of(std::span<const int> indices);
  static FocalSet from_bits(std::uint32_t bits);
  static FocalSet singleton(int index);
  /// The whole frame {1..k}.
  static FocalSet omega(int k);

  std::uint32_t bits() const noexcept { return bits_; }
  int size() const noexcept;
  int max_index() const noexcept;
  bool contains(int index) const noexcept;
  bool subset_of(FocalSet other) const noexcept { return (bits_ & ~other.bits_) == 0; }
  bool intersects(FocalSet other) const noexcept { return (bits_ & other.bits_) != 0; }
  std::vector<int> indices() const;
  std::string to_string() const;

  auto operator<=>(const FocalSet&) const = default;

 private:
  explicit FocalSet(std::uint32_t bits) : bits_(bits) {}
  std::uint32_t bits_;
};

/// Empty intersections are not focal sets; they come back as nullopt.
std::optional<FocalSet> intersect(FocalSet a, FocalSet b) noexcept;

/// Equal-width partition of [0,1] into k labelled intervals. Intervals are
/// half-open [lo,hi) except the last, which is closed.
class Frame {
 public:
  int size() const noexcept { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<double>& edges() const noexcept { return edges_; }
  double lower(int index) const { return edges_.at(index - 1); }
  double upper(int index) const { return edges_.at(index); }
  FocalSet omega() const { return FocalSet::omega(size()); }
  bool contains(FocalSet set) const noexcept { return set.max_index() <= size(); }
  /// 1-based interval holding `value`; values outside [0,1] are an error.
  int locate(double value) const;

  bool operator==(const Frame&) const = default;

 private:
  friend Frame make_frame(int k, std::vector<std::string> labels);
  Frame(std::vector<double> edges, std::vector<std::string> labels)
      : edges_(std::move(edges)), labels_(std::move(labels)) {}

  std::vector<double> edges_;
  std::vector<std::string> labels_;
};

Frame make_frame(int k, std::vector<std::string> labels);
/// Frame with generated labels ("I1".."Ik").
Frame make_frame(int k);

struct FocalElement {
  FocalSet set;
  double mass;
};

/// Basic probability assignment. Holds only positive masses, sorted by set
/// bits, summing to 1 within kMassTolerance.
class MassFunction {
 public:
  const Frame& frame() const noexcept { return frame_; }
  std::span<const FocalElement> focal() const noexcept { return focal_; }
  std::size_t size() const noexcept { return focal_.size(); }
  /// Mass of exactly `set` (0 when it is not focal).
  double mass(FocalSet set) const noexcept;
  bool is_vacuous() const noexcept;

 private:
  friend MassFunction make_mass(const Frame& frame, std::span<const FocalElement> assignments);
  MassFunction(Frame frame, std::vector<FocalElement> focal)
      : frame_(std::move(frame)), focal_(std::move(focal)) {}

  Frame frame_;
  std::vector<FocalElement> focal_;
};

/// Merges duplicate sets by summation and drops zero masses.
MassFunction make_mass(const Frame& frame, std::span<const FocalElement> assignments);
MassFunction make_mass(const Frame& frame, std::initializer_list<FocalElement> assignments);
/// m(Omega) = 1.
MassFunction vacuous_mass(const Frame& frame);

double bel(const MassFunction& m, FocalSet target);
double pl(const MassFunction& m, FocalSet target);

struct SourceProfile {
  std::string id;
  double reliability = 1.0;  // discount coefficient alpha in [0,1]
};

void validate(const SourceProfile& profile);

/// Shafer discounting: proper subsets scaled by alpha, the rest moved to Omega.
MassFunction discount(const MassFunction& m, double alpha);

/// Total mass over pairs of disjoint focal sets.
double conflict(const MassFunction& m1, const MassFunction& m2);

MassFunction combine_dempster(const MassFunction& m1, const MassFunction& m2);

struct SourceEvidence {
  MassFunction mass;
  SourceProfile profile;
};

struct GroupCombination {
  MassFunction combined;
  /// Conflict coefficient of each fold step, size = sources - 1.
  std::vector<double> step_conflicts;
};

/// Discounts every source by its reliability, then folds left to right.
GroupCombination combine_group(std::span<const SourceEvidence> sources);

struct BeliefInterval {
  double bel;
  double pl;
};

struct TargetBelief {
  FocalSet target;
  BeliefInterval interval;
};

struct BeliefSummary {
  std::vector<BeliefInterval> singletons;  // index i-1 holds interval i
  std::vector<TargetBelief> targets;
};

BeliefSummary belief_summary(const MassFunction& m, std::span<const FocalSet> targets = {});

}  // namespace innov
