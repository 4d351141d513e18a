#pragma once

#include "phaselift/linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace phaselift {

/// One line of structured text: `<kind> key:value key:value ...`.
/// Keys are unique within a record and keep insertion order; values carry
/// no whitespace. Doubles are written with 17 significant digits so that
/// parsing recovers them exactly.
class Record {
 public:
  Record() = default;
  explicit Record(std::string kind) : kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

  Record& add(std::string_view key, std::string value);
  Record& add(std::string_view key, const char* value) { return add(key, std::string(value)); }
  Record& add(std::string_view key, double value);
  Record& add(std::string_view key, std::int64_t value);
  Record& add(std::string_view key, std::uint64_t value);
  Record& add(std::string_view key, int value) { return add(key, static_cast<std::int64_t>(value)); }
  Record& add(std::string_view key, bool value);
  Record& add(std::string_view key, const Vector& value);

  bool has(std::string_view key) const;
  /// Throws std::out_of_range if the key is absent.
  const std::string& get(std::string_view key) const;
  double get_double(std::string_view key) const;
  std::int64_t get_int(std::string_view key) const;
  std::uint64_t get_uint(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  Vector get_vector(std::string_view key) const;

  const std::vector<std::pair<std::string, std::string>>& fields() const { return fields_; }

  std::string to_line() const;
  /// Throws std::invalid_argument on malformed input.
  static Record parse(std::string_view line);

 private:
  std::string kind_;
  std::vector<std::pair<std::string, std::string>> fields_;
};

std::string format_double(double v);
double parse_double_exact(std::string_view s);

}  // namespace phaselift
