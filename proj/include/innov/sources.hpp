#pragma once

// Search sources: hit counts over a document corpus, query frequencies from
// a usage log, and a synthetic generator of both.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "innov/evidence.hpp"
#include "innov/pattern.hpp"
#include "innov/text.hpp"

namespace innov {

struct Capabilities {
  bool counts = false;
  bool frequencies = false;
  bool dated_counts = false;
  bool retrieval = false;
};

/// Word lists whose per-document occurrence is counted by feature_counts.
using Feature = std::vector<std::string>;

/// Behavioural contract of a search source. Every query is conjunctive:
/// a document matches when it contains every word of the marker and of each
/// term. Unsupported capabilities throw SourceError. Implementations must be
/// safe for concurrent const use.
class SourceAdapter {
 public:
  virtual ~SourceAdapter() = default;

  virtual const SourceProfile& profile() const = 0;
  virtual Capabilities capabilities() const = 0;

  /// Number of matching documents, optionally only those dated <= until.
  virtual std::uint64_t count(const Query& query, std::optional<Date> until = std::nullopt) const;

  /// Usage frequency of queries analogous to `query` in `period` (a year),
  /// or over all periods when none is given.
  virtual double frequency(const Query& query, std::optional<int> period = std::nullopt) const;

  /// For the first `limit` matching documents (source order), the number of
  /// times each feature occurs, a feature occurring as often as its rarest word.
  virtual std::vector<std::vector<std::uint32_t>> feature_counts(const Query& query, std::size_t limit,
                                                                 std::span<const Feature> features) const;
};

struct CorpusDocument {
  std::string id;
  Date date;
  std::string text;
};

struct QueryLogEntry {
  int period = 0;
  std::vector<std::string> tokens;  // sorted multiset
  double frequency = 0.0;
};

/// Builds a log entry from free query text.
QueryLogEntry make_log_entry(int period, std::string_view query_text, double frequency);

enum class AnalogyMode {
  /// Entry contains the marker and shares at least one term word with the
  /// query. A marker-only query takes every entry that contains the marker.
  Analogous,
  /// Entry token multiset equals the query's.
  Exact,
};

double query_frequency(std::span<const QueryLogEntry> log, const Query& query, std::optional<int> period,
                       AnalogyMode mode = AnalogyMode::Analogous);

/// Immutable inverted index over a document corpus, optionally paired with
/// a query log for frequencies. Documents are ordered by id.
class OfflineCorpusSource final : public SourceAdapter {
 public:
  const SourceProfile& profile() const override { return profile_; }
  Capabilities capabilities() const override;

  std::uint64_t count(const Query& query, std::optional<Date> until = std::nullopt) const override;
  double frequency(const Query& query, std::optional<int> period = std::nullopt) const override;
  std::vector<std::vector<std::uint32_t>> feature_counts(const Query& query, std::size_t limit,
                                                         std::span<const Feature> features) const override;

  void set_profile(SourceProfile profile);
  void attach_query_log(std::vector<QueryLogEntry> log, AnalogyMode mode = AnalogyMode::Analogous);

  std::size_t document_count() const noexcept { return documents_.size(); }
  const std::string& document_id(std::size_t ordinal) const { return documents_.at(ordinal).id; }
  /// Ids of documents containing `token`, in index order.
  std::vector<std::string> postings(std::string_view token) const;
  /// Ordinals of documents matching the query, ascending.
  std::vector<std::uint32_t> match(const Query& query, std::optional<Date> until = std::nullopt) const;
  std::optional<Date> latest_date() const;

 private:
  friend OfflineCorpusSource build_index(std::span<const CorpusDocument> corpus, SourceProfile profile);

  struct IndexedDocument {
    std::string id;
    Date date;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> term_counts;  // (token id, count), sorted
  };

  std::optional<std::uint32_t> token_id(std::string_view token) const;
  std::uint32_t occurrences(const IndexedDocument& doc, std::uint32_t token) const;

  SourceProfile profile_;
  std::unordered_map<std::string, std::uint32_t> vocabulary_;
  std::vector<std::vector<std::uint32_t>> postings_;  // by token id
  std::vector<IndexedDocument> documents_;
  std::optional<std::vector<QueryLogEntry>> log_;
  AnalogyMode mode_ = AnalogyMode::Analogous;
};

OfflineCorpusSource build_index(std::span<const CorpusDocument> corpus, SourceProfile profile = {"corpus", 1.0});

std::uint64_t count_documents(const OfflineCorpusSource& source, const Query& query,
                              std::optional<Date> until = std::nullopt);

struct SyntheticObjectSpec {
  std::string name;
  std::string marker;
  std::vector<std::string> terms;
  bool planted = false;
};

/// Synthetic generator settings. Each object owns a marker domain with
/// docs_per_year documents per year; a planted object starts with low
/// coverage and rising demand, a common object has high flat coverage.
struct SyntheticSpec {
  std::size_t vocab = 200;  // filler words
  std::size_t planted_objects = 1;
  std::size_t common_objects = 1;
  std::size_t terms_per_object = 6;
  std::size_t docs_per_year = 40;
  int years = 20;
  int start_year = 2000;
  double noise = 0.1;
  std::uint64_t seed = 1;
  /// When non-empty, replaces the generated object list.
  std::vector<SyntheticObjectSpec> objects;
};

struct SyntheticObject {
  SearchPattern pattern;
  bool planted = false;
};

struct SyntheticData {
  std::vector<CorpusDocument> corpus;
  std::vector<QueryLogEntry> query_log;
  std::vector<SyntheticObject> objects;
};

SyntheticData synthetic_source(const SyntheticSpec& spec);

}  // namespace innov
