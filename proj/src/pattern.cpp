#include "innov/pattern.hpp"

#include <set>

#include "innov/errors.hpp"
#include "innov/text.hpp"

namespace innov {

std::string_view to_string(TermClass c) noexcept {
  switch (c) {
    case TermClass::Structure: return "structure";
    case TermClass::Application: return "application";
    case TermClass::Result: return "result";
  }
  return "structure";
}

TermClass parse_term_class(std::string_view text) {
  if (text == "structure") return TermClass::Structure;
  if (text == "application") return TermClass::Application;
  if (text == "result") return TermClass::Result;
  throw Error(ErrorCode::InvalidPattern, "unknown term class '" + std::string(text) + "'");
}

SearchPattern normalized(SearchPattern pattern) {
  pattern.marker = normalize_phrase(pattern.marker);
  for (auto& t : pattern.terms) t.text = normalize_phrase(t.text);
  validate(pattern);
  return pattern;
}

void validate(const SearchPattern& pattern) {
  if (tokenize(pattern.marker).empty()) throw Error(ErrorCode::InvalidPattern, "pattern marker is empty");
  if (pattern.terms.empty()) throw Error(ErrorCode::InvalidPattern, "pattern has no terms");
  std::set<std::string> seen{pattern.marker};
  for (const auto& t : pattern.terms) {
    if (tokenize(t.text).empty()) throw Error(ErrorCode::InvalidPattern, "pattern term is empty");
    if (!(t.weight > 0.0 && t.weight <= 1.0)) {
      throw Error(ErrorCode::InvalidPattern, "weight of term '" + t.text + "' outside (0,1]");
    }
    if (!seen.insert(t.text).second) {
      throw Error(ErrorCode::InvalidPattern, "term '" + t.text + "' is duplicated or equals the marker");
    }
  }
}

std::string Query::text() const {
  std::string out = marker;
  for (const auto& t : terms) {
    out += ' ';
    out += t;
  }
  return out;
}

}  // namespace innov
