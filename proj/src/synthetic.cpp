#include <algorithm>
#include <cstdio>
#include <set>

#include "innov/errors.hpp"
#include "innov/rng.hpp"
#include "innov/sources.hpp"

namespace innov {

namespace {

constexpr double kTermInclusion = 0.75;
constexpr std::size_t kObjectLogEntries = 8;

class WordFactory {
 public:
  explicit WordFactory(Rng& rng) : rng_(rng) {}

  std::string fresh() {
    static constexpr const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "tr", "st"};
    static constexpr const char* kNuclei[] = {"a", "e", "i", "o", "u", "ai", "ou"};
    for (;;) {
      std::string w;
      const auto syllables = 2 + rng_.below(3);
      for (std::uint64_t s = 0; s < syllables; ++s) {
        w += kOnsets[rng_.below(std::size(kOnsets))];
        w += kNuclei[rng_.below(std::size(kNuclei))];
      }
      if (used_.insert(w).second) return w;
    }
  }

  void reserve(const std::string& word) { used_.insert(word); }

 private:
  Rng& rng_;
  std::set<std::string> used_;
};

std::string doc_id(Rng& rng, std::size_t counter) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "d%08llx-%zu", static_cast<unsigned long long>(rng.next() >> 32), counter);
  return buf;
}

double jitter(Rng& rng, double noise) { return rng.uniform(1.0 - noise, 1.0 + noise); }

void validate(const SyntheticSpec& spec) {
  if (spec.years < 1) throw Error(ErrorCode::InvalidSpec, "years must be >= 1");
  if (!(spec.noise >= 0.0 && spec.noise <= 1.0)) throw Error(ErrorCode::InvalidSpec, "noise must be in [0,1]");
  if (spec.vocab < 1) throw Error(ErrorCode::InvalidSpec, "filler vocabulary must be non-empty");
  if (spec.objects.empty()) {
    if (spec.planted_objects + spec.common_objects == 0) throw Error(ErrorCode::InvalidSpec, "no objects");
    if (spec.terms_per_object < 1) throw Error(ErrorCode::InvalidSpec, "terms_per_object must be >= 1");
  }
  for (const auto& o : spec.objects) {
    if (tokenize(o.marker).empty() || o.terms.empty()) {
      throw Error(ErrorCode::InvalidSpec, "object '" + o.name + "' needs a marker and terms");
    }
  }
  if (spec.docs_per_year == 0) throw Error(ErrorCode::EmptyCorpus, "docs_per_year is 0");
}

}  // namespace

SyntheticData synthetic_source(const SyntheticSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  WordFactory words(rng);

  std::vector<SyntheticObjectSpec> objects = spec.objects;
  for (const auto& o : objects) {
    for (const auto& w : tokenize(o.marker)) words.reserve(w);
    for (const auto& t : o.terms) {
      for (const auto& w : tokenize(t)) words.reserve(w);
    }
  }
  if (objects.empty()) {
    const std::size_t n = spec.planted_objects + spec.common_objects;
    for (std::size_t i = 0; i < n; ++i) {
      SyntheticObjectSpec o;
      o.planted = i < spec.planted_objects;
      o.name = (o.planted ? "planted-" : "common-") + std::to_string(o.planted ? i : i - spec.planted_objects);
      o.marker = words.fresh();
      for (std::size_t t = 0; t < spec.terms_per_object; ++t) o.terms.push_back(words.fresh());
      objects.push_back(std::move(o));
    }
  }
  std::vector<std::string> filler(spec.vocab);
  for (auto& w : filler) w = words.fresh();

  SyntheticData data;
  for (const auto& o : objects) {
    SearchPattern p;
    p.name = o.name;
    p.marker = o.marker;
    const TermClass classes[] = {TermClass::Structure, TermClass::Application, TermClass::Result};
    for (std::size_t t = 0; t < o.terms.size(); ++t) p.terms.push_back({o.terms[t], classes[t % 3], 1.0});
    data.objects.push_back({normalized(std::move(p)), o.planted});
  }

  std::size_t counter = 0;
  for (int t = 0; t < spec.years; ++t) {
    const int year = spec.start_year + t;
    const double progress = spec.years > 1 ? static_cast<double>(t) / (spec.years - 1) : 0.0;
    for (const auto& obj : data.objects) {
      const SearchPattern& p = obj.pattern;
      const double coverage = obj.planted ? 0.03 + 0.5 * progress : 0.6;
      const double demand = obj.planted ? 0.05 + 0.6 * progress : 0.3;

      auto random_date = [&] {
        return Date{year, 1 + static_cast<int>(rng.below(12)), 1 + static_cast<int>(rng.below(28))};
      };
      auto add_filler = [&](std::vector<std::string>& tokens) {
        const auto n = 15 + rng.below(10);
        for (std::uint64_t i = 0; i < n; ++i) tokens.push_back(filler[rng.below(filler.size())]);
      };
      auto emit = [&](std::vector<std::string> tokens) {
        for (std::size_t i = tokens.size(); i > 1; --i) std::swap(tokens[i - 1], tokens[rng.below(i)]);
        std::string text;
        for (const auto& w : tokens) {
          if (!text.empty()) text += ' ';
          text += w;
        }
        data.corpus.push_back({doc_id(rng, counter++), random_date(), std::move(text)});
      };

      for (std::size_t d = 0; d < spec.docs_per_year; ++d) {
        std::vector<std::string> tokens;
        const auto marker_reps = 1 + rng.below(2);
        for (std::uint64_t r = 0; r < marker_reps; ++r) tokens.push_back(p.marker);
        if (rng.bernoulli(coverage)) {
          for (const auto& term : p.terms) {
            if (!rng.bernoulli(kTermInclusion)) continue;
            const auto reps = 1 + rng.below(3);
            for (std::uint64_t r = 0; r < reps; ++r) tokens.push_back(term.text);
          }
        } else if (rng.bernoulli(spec.noise)) {
          tokens.push_back(p.terms[rng.below(p.terms.size())].text);
        }
        add_filler(tokens);
        emit(std::move(tokens));
      }
      // Off-domain mentions of object terms without the marker.
      const auto stray = static_cast<std::size_t>(spec.noise * static_cast<double>(spec.docs_per_year));
      for (std::size_t d = 0; d < stray; ++d) {
        std::vector<std::string> tokens{p.terms[rng.below(p.terms.size())].text};
        add_filler(tokens);
        emit(std::move(tokens));
      }

      const double volume = 1000.0 * jitter(rng, spec.noise);
      data.query_log.push_back(make_log_entry(year, p.marker, (1.0 - demand) * volume * jitter(rng, spec.noise)));
      for (std::size_t e = 0; e < kObjectLogEntries; ++e) {
        std::string text = p.marker;
        bool any = false;
        for (const auto& term : p.terms) {
          if (rng.bernoulli(0.5)) {
            text += ' ' + term.text;
            any = true;
          }
        }
        if (!any) text += ' ' + p.terms[rng.below(p.terms.size())].text;
        const double f = demand * volume / kObjectLogEntries * jitter(rng, spec.noise);
        data.query_log.push_back(make_log_entry(year, text, f));
      }
      if (rng.bernoulli(spec.noise)) {
        const std::string text = p.marker + ' ' + filler[rng.below(filler.size())];
        data.query_log.push_back(make_log_entry(year, text, 0.02 * volume * jitter(rng, spec.noise)));
      }
    }
  }
  return data;
}

}  // namespace innov
