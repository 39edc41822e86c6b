#pragma once

// Small text helpers shared by the config, record and report code.

#include "gssl/error.hpp"

#include <charconv>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gssl::text {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

inline std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

inline std::optional<long long> to_integer(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  long long value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

/// Splits on commas that are not nested inside parentheses.
inline std::vector<std::string> split_top_level(std::string_view s) {
  std::vector<std::string> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (depth < 0) throw ValidationError("unbalanced ')' in '" + std::string(s) + "'");
    if (s[i] == ',' && depth == 0) {
      parts.emplace_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw ValidationError("unbalanced '(' in '" + std::string(s) + "'");
  parts.emplace_back(trim(s.substr(start)));
  return parts;
}

/// `name(key=value, ...)` with the argument list optional.
struct Call {
  std::string name;
  std::map<std::string, std::string> args;
};

inline Call parse_call(std::string_view s) {
  s = trim(s);
  Call call;
  const auto open = s.find('(');
  if (open == std::string_view::npos) {
    call.name = lower(s);
  } else {
    if (s.back() != ')') throw ValidationError("expected ')' at the end of '" + std::string(s) + "'");
    call.name = lower(trim(s.substr(0, open)));
    const auto inner = s.substr(open + 1, s.size() - open - 2);
    if (!trim(inner).empty()) {
      for (const auto& part : split_top_level(inner)) {
        const auto eq = part.find('=');
        if (eq == std::string::npos)
          throw ValidationError("expected key=value in '" + std::string(s) + "'");
        auto key = lower(trim(std::string_view(part).substr(0, eq)));
        auto value = std::string(trim(std::string_view(part).substr(eq + 1)));
        if (!call.args.emplace(std::move(key), std::move(value)).second)
          throw ValidationError("duplicate argument in '" + std::string(s) + "'");
      }
    }
  }
  if (call.name.empty()) throw ValidationError("missing name in '" + std::string(s) + "'");
  return call;
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

/// Splits one CSV line, honoring double-quoted fields.
inline std::vector<std::string> csv_split(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        fields.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else if (ch != '\r') {
      fields.back() += ch;
    }
  }
  return fields;
}

}  // namespace gssl::text
