#pragma once

#include <array>
#include <charconv>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace swes {

// Local name of a class, property, or relation. Names are exact and
// case-sensitive; they are never empty once inside a graph.
using ElementName = std::string;

// The four dataset attributes, in fixed column order.
enum class Attribute : int { Class = 0, Property = 1, Incoming = 2, Outgoing = 3 };

inline constexpr int kAttributeCount = 4;

inline constexpr std::array<Attribute, kAttributeCount> kAllAttributes = {
    Attribute::Class, Attribute::Property, Attribute::Incoming, Attribute::Outgoing};

inline constexpr std::string_view attribute_name(Attribute attr) {
  switch (attr) {
    case Attribute::Class: return "class";
    case Attribute::Property: return "property";
    case Attribute::Incoming: return "incoming";
    case Attribute::Outgoing: return "outgoing";
  }
  return "";
}

inline std::optional<Attribute> attribute_from_name(std::string_view name) {
  for (Attribute attr : kAllAttributes) {
    if (attribute_name(attr) == name) return attr;
  }
  return std::nullopt;
}

// Absent value in a dataset cell, selector, or fact. Stored as the empty
// string (element names are never empty) and rendered as U+2205.
inline constexpr std::string_view kNoneText = "∅";

inline bool is_none(std::string_view value) { return value.empty(); }

inline std::string display_value(std::string_view value) {
  return value.empty() ? std::string(kNoneText) : std::string(value);
}

inline std::string value_from_display(std::string_view text) {
  return text == kNoneText ? std::string() : std::string(text);
}

inline std::string_view strip(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t' ||
                           text.front() == '\r' || text.front() == '\n')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' ||
                           text.back() == '\r' || text.back() == '\n')) {
    text.remove_suffix(1);
  }
  return text;
}

inline ElementName make_element_name(std::string_view text) {
  std::string_view stripped = strip(text);
  if (stripped.empty()) {
    throw std::invalid_argument("element name is empty");
  }
  return ElementName(stripped);
}

// Membership degrees live in [0, 1]; 1.0 is the default when no annotation
// is present.
inline void validate_membership(double mu, const char* context) {
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw std::invalid_argument(std::string(context) + ": membership " +
                                std::to_string(mu) + " outside [0,1]");
  }
}

// Shortest decimal that parses back to the same double.
inline std::string format_membership(double mu) {
  char buf[32];
  auto result = std::to_chars(buf, buf + sizeof buf, mu);
  return std::string(buf, result.ptr);
}

// Fixed six decimal digits, used by the CSV and fact-base writers.
inline std::string format_membership_fixed(double mu) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", mu);
  return std::string(buf);
}

// A named element together with its membership degree.
struct WeightedName {
  ElementName name;
  double mu = 1.0;

  friend bool operator==(const WeightedName&, const WeightedName&) = default;
};

// Error with a 1-based document position. Column 0 means "line only".
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message)
      : std::runtime_error(format(line, column, message)), line_(line), column_(column) {}

  explicit ParseError(const std::string& message)
      : std::runtime_error(message), line_(0), column_(0) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(int line, int column, const std::string& message) {
    std::string out = "parse error at line " + std::to_string(line);
    if (column > 0) out += ", column " + std::to_string(column);
    return out + ": " + message;
  }

  int line_;
  int column_;
};

}  // namespace swes
