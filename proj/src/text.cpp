#include "innov/text.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <charconv>
#include <cstdio>

#include "innov/errors.hpp"

namespace innov {

std::vector<std::string> tokenize(std::string_view utf8) {
  std::vector<std::string> tokens;
  std::string current;
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(utf8.data());
  const auto length = static_cast<std::int32_t>(utf8.size());
  std::int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c >= 0 && u_isalnum(c)) {
      const UChar32 lower = u_tolower(c);
      char buf[U8_MAX_LENGTH];
      std::int32_t n = 0;
      [[maybe_unused]] UBool error = false;
      U8_APPEND(reinterpret_cast<std::uint8_t*>(buf), n, U8_MAX_LENGTH, lower, error);
      current.append(buf, static_cast<std::size_t>(n));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string normalize_phrase(std::string_view utf8) {
  std::string out;
  for (const auto& t : tokenize(utf8)) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

Date Date::parse(std::string_view text) {
  auto field = [&](std::size_t pos, std::size_t len) {
    int value = 0;
    const char* first = text.data() + pos;
    const auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc{} || ptr != first + len) {
      throw Error(ErrorCode::ParseError, "bad date '" + std::string(text) + "'");
    }
    return value;
  };
  Date d;
  if (text.size() == 4) {
    d.year = field(0, 4);
  } else if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
    d.year = field(0, 4);
    d.month = field(5, 2);
    d.day = field(8, 2);
  } else {
    throw Error(ErrorCode::ParseError, "bad date '" + std::string(text) + "'");
  }
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) {
    throw Error(ErrorCode::ParseError, "bad date '" + std::string(text) + "'");
  }
  return d;
}

std::string Date::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

}  // namespace innov
