#include "innov/evidence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>

#include "innov/errors.hpp"

namespace innov {

namespace {

void check_index(int index) {
  if (index < 1 || index > kMaxIntervals) {
    throw Error(ErrorCode::InvalidSet, "interval index " + std::to_string(index) + " outside 1.." +
                                           std::to_string(kMaxIntervals));
  }
}

void require_same_frame(const MassFunction& a, const MassFunction& b) {
  if (!(a.frame() == b.frame())) {
    throw Error(ErrorCode::FrameMismatch, "mass functions are defined over different frames");
  }
}

void require_in_frame(const Frame& frame, FocalSet target) {
  if (!frame.contains(target)) {
    throw Error(ErrorCode::InvalidSet, "set " + target.to_string() + " is outside a frame of " +
                                           std::to_string(frame.size()) + " intervals");
  }
}

}  // namespace

FocalSet FocalSet::of(std::initializer_list<int> indices) {
  return of(std::span<const int>(indices.begin(), indices.size()));
}

FocalSet FocalSet::of(std::span<const int> indices) {
  std::uint32_t bits = 0;
  for (int i : indices) {
    check_index(i);
    bits |= 1u << (i - 1);
  }
  return from_bits(bits);
}

FocalSet FocalSet::from_bits(std::uint32_t bits) {
  if (bits == 0) throw Error(ErrorCode::EmptyFocal, "focal set is empty");
  if (bits >> kMaxIntervals) throw Error(ErrorCode::InvalidSet, "focal set exceeds 16 intervals");
  return FocalSet(bits);
}

FocalSet FocalSet::singleton(int index) {
  check_index(index);
  return FocalSet(1u << (index - 1));
}

FocalSet FocalSet::omega(int k) {
  if (k < 1 || k > kMaxIntervals) throw Error(ErrorCode::InvalidFrame, "bad interval count");
  return FocalSet((1u << k) - 1u);
}

int FocalSet::size() const noexcept { return std::popcount(bits_); }

int FocalSet::max_index() const noexcept { return 32 - std::countl_zero(bits_); }

bool FocalSet::contains(int index) const noexcept {
  return index >= 1 && index <= kMaxIntervals && ((bits_ >> (index - 1)) & 1u);
}

std::vector<int> FocalSet::indices() const {
  std::vector<int> out;
  for (int i = 1; i <= kMaxIntervals; ++i) {
    if (contains(i)) out.push_back(i);
  }
  return out;
}

std::string FocalSet::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int i : indices()) {
    if (!first) os << ',';
    os << i;
    first = false;
  }
  os << '}';
  return os.str();
}

std::optional<FocalSet> intersect(FocalSet a, FocalSet b) noexcept {
  const std::uint32_t bits = a.bits() & b.bits();
  if (bits == 0) return std::nullopt;
  return FocalSet::from_bits(bits);
}

int Frame::locate(double value) const {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "value " + std::to_string(value) + " outside [0,1]");
  }
  const auto it = std::upper_bound(edges_.begin() + 1, edges_.end() - 1, value);
  return static_cast<int>(it - edges_.begin());
}

Frame make_frame(int k, std::vector<std::string> labels) {
  if (k < 2 || k > kMaxIntervals) {
    throw Error(ErrorCode::InvalidFrame, "interval count must be in 2..16, got " + std::to_string(k));
  }
  if (labels.size() != static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::InvalidFrame, "expected " + std::to_string(k) + " labels, got " +
                                             std::to_string(labels.size()));
  }
  std::vector<double> edges(k + 1);
  for (int i = 0; i <= k; ++i) edges[i] = static_cast<double>(i) / k;
  edges.back() = 1.0;
  return Frame(std::move(edges), std::move(labels));
}

Frame make_frame(int k) {
  std::vector<std::string> labels;
  for (int i = 1; i <= std::max(k, 0); ++i) labels.push_back("I" + std::to_string(i));
  return make_frame(k, std::move(labels));
}

double MassFunction::mass(FocalSet set) const noexcept {
  const auto it = std::lower_bound(focal_.begin(), focal_.end(), set,
                                   [](const FocalElement& e, FocalSet s) { return e.set < s; });
  return (it != focal_.end() && it->set == set) ? it->mass : 0.0;
}

bool MassFunction::is_vacuous() const noexcept {
  return focal_.size() == 1 && focal_.front().set == frame_.omega() && focal_.front().mass == 1.0;
}

MassFunction make_mass(const Frame& frame, std::span<const FocalElement> assignments) {
  std::map<FocalSet, double> merged;
  for (const auto& [set, mass] : assignments) {
    require_in_frame(frame, set);
    if (!(mass >= 0.0) || !std::isfinite(mass)) {
      throw Error(ErrorCode::NotNormalized, "mass of " + set.to_string() + " must be a finite value >= 0");
    }
    merged[set] += mass;
  }
  std::vector<FocalElement> focal;
  double total = 0.0;
  for (const auto& [set, mass] : merged) {
    if (mass > 0.0) {
      focal.push_back({set, mass});
      total += mass;
    }
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw Error(ErrorCode::NotNormalized, "masses sum to " + std::to_string(total));
  }
  return MassFunction(frame, std::move(focal));
}

MassFunction make_mass(const Frame& frame, std::initializer_list<FocalElement> assignments) {
  return make_mass(frame, std::span<const FocalElement>(assignments.begin(), assignments.size()));
}

MassFunction vacuous_mass(const Frame& frame) { return make_mass(frame, {{frame.omega(), 1.0}}); }

double bel(const MassFunction& m, FocalSet target) {
  require_in_frame(m.frame(), target);
  double sum = 0.0;
  for (const auto& e : m.focal()) {
    if (e.set.subset_of(target)) sum += e.mass;
  }
  return std::min(sum, 1.0);
}

double pl(const MassFunction& m, FocalSet target) {
  require_in_frame(m.frame(), target);
  double sum = 0.0;
  for (const auto& e : m.focal()) {
    if (e.set.intersects(target)) sum += e.mass;
  }
  return std::min(sum, 1.0);
}

void validate(const SourceProfile& profile) {
  if (!(profile.reliability >= 0.0 && profile.reliability <= 1.0)) {
    throw Error(ErrorCode::InvalidAlpha,
                "source '" + profile.id + "' reliability " + std::to_string(profile.reliability) + " outside [0,1]");
  }
}

MassFunction discount(const MassFunction& m, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidAlpha, "discount coefficient " + std::to_string(alpha) + " outside [0,1]");
  }
  const FocalSet omega = m.frame().omega();
  std::vector<FocalElement> out;
  out.reserve(m.size() + 1);
  double omega_mass = 1.0 - alpha;
  for (const auto& e : m.focal()) {
    if (e.set == omega) {
      omega_mass += alpha * e.mass;
    } else {
      out.push_back({e.set, alpha * e.mass});
    }
  }
  out.push_back({omega, omega_mass});
  return make_mass(m.frame(), out);
}

double conflict(const MassFunction& m1, const MassFunction& m2) {
  require_same_frame(m1, m2);
  double k = 0.0;
  for (const auto& a : m1.focal()) {
    for (const auto& b : m2.focal()) {
      if (!a.set.intersects(b.set)) k += a.mass * b.mass;
    }
  }
  return std::clamp(k, 0.0, 1.0);
}

MassFunction combine_dempster(const MassFunction& m1, const MassFunction& m2) {
  require_same_frame(m1, m2);
  std::map<FocalSet, double> joint;
  double agreeing = 0.0;
  double conflicting = 0.0;
  for (const auto& a : m1.focal()) {
    for (const auto& b : m2.focal()) {
      const double product = a.mass * b.mass;
      if (const auto common = intersect(a.set, b.set)) {
        joint[*common] += product;
        agreeing += product;
      } else {
        conflicting += product;
      }
    }
  }
  // Renormalising by the agreeing mass equals dividing by 1 - K but stays
  // exact when only one intersection survives. Without conflict the divisor
  // is 1 and is skipped, keeping the vacuous mass an exact neutral element.
  if (agreeing <= kConflictTolerance) {
    throw TotalConflictError(0, "sources are totally conflicting (K = " + std::to_string(conflicting) + ")");
  }
  std::vector<FocalElement> out;
  out.reserve(joint.size());
  const double norm = conflicting == 0.0 ? 1.0 : agreeing;
  for (const auto& [set, mass] : joint) out.push_back({set, mass / norm});
  return make_mass(m1.frame(), out);
}

GroupCombination combine_group(std::span<const SourceEvidence> sources) {
  if (sources.empty()) throw Error(ErrorCode::EmptyGroup, "no evidence sources to combine");
  for (const auto& s : sources) {
    validate(s.profile);
    require_same_frame(sources.front().mass, s.mass);
  }

  GroupCombination result{discount(sources.front().mass, sources.front().profile.reliability), {}};
  for (std::size_t i = 1; i < sources.size(); ++i) {
    const MassFunction next = discount(sources[i].mass, sources[i].profile.reliability);
    const double k = conflict(result.combined, next);
    try {
      result.combined = combine_dempster(result.combined, next);
    } catch (const TotalConflictError&) {
      throw TotalConflictError(i, "total conflict at fold step " + std::to_string(i) + " (source '" +
                                      sources[i].profile.id + "')");
    }
    result.step_conflicts.push_back(k);
  }
  return result;
}

BeliefSummary belief_summary(const MassFunction& m, std::span<const FocalSet> targets) {
  BeliefSummary summary;
  const int k = m.frame().size();
  summary.singletons.reserve(k);
  for (int i = 1; i <= k; ++i) {
    const FocalSet s = FocalSet::singleton(i);
    summary.singletons.push_back({bel(m, s), pl(m, s)});
  }
  for (FocalSet t : targets) summary.targets.push_back({t, {bel(m, t), pl(m, t)}});
  return summary;
}

}  // namespace innov
