#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "medcons/error.hpp"

namespace medcons::detail {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' ||
         c == '\f';
}

// Splits on any whitespace run.
inline std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

inline std::uint64_t parse_uint(std::string_view token, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line_no, "expected a non-negative integer, got '" +
                                  std::string(token) + "'");
  }
  return value;
}

// Iterates over data lines of a stream: strips CR, skips blank lines and
// lines whose first non-blank character is '#'. The callback receives the
// 1-based physical line number and the tokens of the line.
template <typename F>
void for_each_data_line(std::istream& in, F&& on_line) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = tokenize(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    on_line(line_no, tokens);
  }
  if (in.bad()) throw Error("I/O error while reading input");
}

}  // namespace medcons::detail
