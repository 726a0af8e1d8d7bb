#pragma once

// Linguistic model of an object archetype: a domain marker plus classified
// key terms. Queries are conjunctions of the marker and some of the terms.

#include <string>
#include <string_view>
#include <vector>

namespace innov {

enum class TermClass { Structure, Application, Result };

std::string_view to_string(TermClass c) noexcept;
TermClass parse_term_class(std::string_view text);

struct Term {
  std::string text;  // lowercase token or phrase
  TermClass term_class = TermClass::Structure;
  double weight = 1.0;  // in (0,1]
};

struct SearchPattern {
  std::string name;
  std::string marker;
  std::vector<Term> terms;

  std::size_t vocabulary_size() const noexcept { return terms.size(); }
};

/// Trims and lowercases texts, then checks uniqueness, weights and that the
/// marker is not repeated among the terms. Throws InvalidPattern.
SearchPattern normalized(SearchPattern pattern);
void validate(const SearchPattern& pattern);

struct Query {
  std::string marker;
  std::vector<std::string> terms;

  /// Space-joined "marker term1 term2 ...".
  std::string text() const;
  bool operator==(const Query&) const = default;
};

inline Query marker_query(const SearchPattern& pattern) { return Query{pattern.marker, {}}; }

}  // namespace innov
