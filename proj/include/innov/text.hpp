#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace innov {

/// Maximal runs of Unicode letters/digits, lowercased. Invalid UTF-8 bytes
/// act as separators.
std::vector<std::string> tokenize(std::string_view utf8);

/// Lowercases and collapses whitespace; used for pattern terms.
std::string normalize_phrase(std::string_view utf8);

struct Date {
  int year = 0;
  int month = 1;
  int day = 1;

  /// Accepts "YYYY-MM-DD" or a bare "YYYY" (read as January 1st).
  static Date parse(std::string_view text);
  static Date end_of_year(int year) { return Date{year, 12, 31}; }
  std::string iso() const;

  auto operator<=>(const Date&) const = default;
};

}  // namespace innov
