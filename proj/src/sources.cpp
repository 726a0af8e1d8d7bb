#include "innov/sources.hpp"

#include <algorithm>
#include <set>

#include "innov/errors.hpp"

namespace innov {

namespace {

std::vector<std::string> query_words(const Query& query) {
  std::vector<std::string> words = tokenize(query.marker);
  for (const auto& t : query.terms) {
    auto more = tokenize(t);
    words.insert(words.end(), more.begin(), more.end());
  }
  return words;
}

[[noreturn]] void unsupported(const SourceProfile& p, const char* what) {
  throw Error(ErrorCode::SourceError, "source '" + p.id + "' does not support " + what);
}

}  // namespace

std::uint64_t SourceAdapter::count(const Query&, std::optional<Date>) const { unsupported(profile(), "counts"); }

double SourceAdapter::frequency(const Query&, std::optional<int>) const { unsupported(profile(), "frequencies"); }

std::vector<std::vector<std::uint32_t>> SourceAdapter::feature_counts(const Query&, std::size_t,
                                                                      std::span<const Feature>) const {
  unsupported(profile(), "document retrieval");
}

QueryLogEntry make_log_entry(int period, std::string_view query_text, double frequency) {
  if (!(frequency >= 0.0)) throw Error(ErrorCode::ParseError, "query log frequency must be >= 0");
  QueryLogEntry e{period, tokenize(query_text), frequency};
  std::sort(e.tokens.begin(), e.tokens.end());
  return e;
}

double query_frequency(std::span<const QueryLogEntry> log, const Query& query, std::optional<int> period,
                       AnalogyMode mode) {
  std::vector<std::string> marker = tokenize(query.marker);
  std::sort(marker.begin(), marker.end());
  std::vector<std::string> all = query_words(query);
  std::sort(all.begin(), all.end());
  std::set<std::string> term_words;
  for (const auto& t : query.terms) {
    for (auto& w : tokenize(t)) term_words.insert(std::move(w));
  }

  double total = 0.0;
  for (const auto& e : log) {
    if (period && e.period != *period) continue;
    bool hit = false;
    if (mode == AnalogyMode::Exact) {
      hit = e.tokens == all;
    } else if (std::includes(e.tokens.begin(), e.tokens.end(), marker.begin(), marker.end())) {
      hit = term_words.empty() ||
            std::any_of(e.tokens.begin(), e.tokens.end(), [&](const std::string& w) { return term_words.contains(w); });
    }
    if (hit) total += e.frequency;
  }
  return total;
}

Capabilities OfflineCorpusSource::capabilities() const {
  return Capabilities{.counts = true, .frequencies = log_.has_value(), .dated_counts = true, .retrieval = true};
}

void OfflineCorpusSource::set_profile(SourceProfile profile) {
  validate(profile);
  profile_ = std::move(profile);
}

void OfflineCorpusSource::attach_query_log(std::vector<QueryLogEntry> log, AnalogyMode mode) {
  log_ = std::move(log);
  mode_ = mode;
}

std::optional<std::uint32_t> OfflineCorpusSource::token_id(std::string_view token) const {
  const auto it = vocabulary_.find(std::string(token));
  if (it == vocabulary_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t OfflineCorpusSource::occurrences(const IndexedDocument& doc, std::uint32_t token) const {
  const auto it = std::lower_bound(doc.term_counts.begin(), doc.term_counts.end(), token,
                                   [](const auto& tc, std::uint32_t t) { return tc.first < t; });
  return (it != doc.term_counts.end() && it->first == token) ? it->second : 0;
}

std::vector<std::string> OfflineCorpusSource::postings(std::string_view token) const {
  std::vector<std::string> ids;
  if (const auto id = token_id(token)) {
    for (std::uint32_t d : postings_[*id]) ids.push_back(documents_[d].id);
  }
  return ids;
}

std::vector<std::uint32_t> OfflineCorpusSource::match(const Query& query, std::optional<Date> until) const {
  std::vector<const std::vector<std::uint32_t>*> lists;
  for (const auto& w : query_words(query)) {
    const auto id = token_id(w);
    if (!id) return {};
    lists.push_back(&postings_[*id]);
  }
  if (lists.empty()) return {};
  std::sort(lists.begin(), lists.end(), [](const auto* a, const auto* b) { return a->size() < b->size(); });

  std::vector<std::uint32_t> result = *lists.front();
  std::vector<std::uint32_t> scratch;
  for (std::size_t i = 1; i < lists.size() && !result.empty(); ++i) {
    scratch.clear();
    std::set_intersection(result.begin(), result.end(), lists[i]->begin(), lists[i]->end(),
                          std::back_inserter(scratch));
    result.swap(scratch);
  }
  if (until) {
    std::erase_if(result, [&](std::uint32_t d) { return documents_[d].date > *until; });
  }
  return result;
}

std::uint64_t OfflineCorpusSource::count(const Query& query, std::optional<Date> until) const {
  return match(query, until).size();
}

double OfflineCorpusSource::frequency(const Query& query, std::optional<int> period) const {
  if (!log_) unsupported(profile_, "frequencies (no query log attached)");
  return query_frequency(*log_, query, period, mode_);
}

std::vector<std::vector<std::uint32_t>> OfflineCorpusSource::feature_counts(const Query& query, std::size_t limit,
                                                                            std::span<const Feature> features) const {
  // Token ids of each feature word; a word unknown to the index never occurs.
  std::vector<std::vector<std::optional<std::uint32_t>>> ids;
  ids.reserve(features.size());
  for (const auto& f : features) {
    auto& row = ids.emplace_back();
    for (const auto& w : f) row.push_back(token_id(w));
  }

  std::vector<std::vector<std::uint32_t>> out;
  const auto matched = match(query);
  const std::size_t n = std::min(limit, matched.size());
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const IndexedDocument& doc = documents_[matched[i]];
    auto& counts = out.emplace_back();
    counts.reserve(features.size());
    for (const auto& row : ids) {
      std::uint32_t c = row.empty() ? 0 : UINT32_MAX;
      for (const auto& id : row) c = std::min(c, id ? occurrences(doc, *id) : 0u);
      counts.push_back(c);
    }
  }
  return out;
}

std::optional<Date> OfflineCorpusSource::latest_date() const {
  std::optional<Date> latest;
  for (const auto& d : documents_) {
    if (!latest || d.date > *latest) latest = d.date;
  }
  return latest;
}

OfflineCorpusSource build_index(std::span<const CorpusDocument> corpus, SourceProfile profile) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus has no documents");
  validate(profile);

  std::vector<const CorpusDocument*> order;
  order.reserve(corpus.size());
  for (const auto& d : corpus) order.push_back(&d);
  std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) { return a->id < b->id; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (order[i]->id == order[i - 1]->id) {
      throw Error(ErrorCode::DuplicateDocument, "document id '" + order[i]->id + "' occurs twice");
    }
  }

  OfflineCorpusSource src;
  src.profile_ = std::move(profile);
  src.documents_.reserve(order.size());
  for (std::uint32_t ordinal = 0; ordinal < order.size(); ++ordinal) {
    const CorpusDocument& doc = *order[ordinal];
    std::vector<std::uint32_t> token_ids;
    for (const auto& w : tokenize(doc.text)) {
      auto [it, inserted] = src.vocabulary_.try_emplace(w, static_cast<std::uint32_t>(src.vocabulary_.size()));
      if (inserted) src.postings_.emplace_back();
      token_ids.push_back(it->second);
    }
    std::sort(token_ids.begin(), token_ids.end());
    OfflineCorpusSource::IndexedDocument indexed{doc.id, doc.date, {}};
    for (std::size_t i = 0; i < token_ids.size();) {
      std::size_t j = i;
      while (j < token_ids.size() && token_ids[j] == token_ids[i]) ++j;
      indexed.term_counts.emplace_back(token_ids[i], static_cast<std::uint32_t>(j - i));
      src.postings_[token_ids[i]].push_back(ordinal);
      i = j;
    }
    src.documents_.push_back(std::move(indexed));
  }
  return src;
}

std::uint64_t count_documents(const OfflineCorpusSource& source, const Query& query, std::optional<Date> until) {
  return source.count(query, until);
}

}  // namespace innov
