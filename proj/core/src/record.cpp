#include "phaselift/record.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace phaselift {

namespace {

bool valid_token(std::string_view s) {
  for (char c : s)
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') return false;
  return true;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double_exact(std::string_view s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::invalid_argument("cannot parse number '" + std::string(s) + "'");
  return v;
}

Record& Record::add(std::string_view key, std::string value) {
  if (key.empty() || !valid_token(key) || key.find(':') != std::string_view::npos)
    throw std::invalid_argument("record: invalid key '" + std::string(key) + "'");
  if (!valid_token(value)) throw std::invalid_argument("record: value for '" + std::string(key) + "' has whitespace");
  if (has(key)) throw std::invalid_argument("record: duplicate key '" + std::string(key) + "'");
  fields_.emplace_back(std::string(key), std::move(value));
  return *this;
}

Record& Record::add(std::string_view key, double value) { return add(key, format_double(value)); }
Record& Record::add(std::string_view key, std::int64_t value) { return add(key, std::to_string(value)); }
Record& Record::add(std::string_view key, std::uint64_t value) { return add(key, std::to_string(value)); }
Record& Record::add(std::string_view key, bool value) { return add(key, std::string(value ? "1" : "0")); }

Record& Record::add(std::string_view key, const Vector& value) {
  std::string s;
  for (Eigen::Index i = 0; i < value.size(); ++i) {
    if (i) s += ',';
    s += format_double(value[i]);
  }
  return add(key, std::move(s));
}

bool Record::has(std::string_view key) const {
  for (const auto& [k, v] : fields_)
    if (k == key) return true;
  return false;
}

const std::string& Record::get(std::string_view key) const {
  for (const auto& [k, v] : fields_)
    if (k == key) return v;
  throw std::out_of_range("record '" + kind_ + "': missing key '" + std::string(key) + "'");
}

double Record::get_double(std::string_view key) const { return parse_double_exact(get(key)); }

std::int64_t Record::get_int(std::string_view key) const {
  const std::string& s = get(key);
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::invalid_argument("record: key '" + std::string(key) + "' is not an integer");
  return v;
}

std::uint64_t Record::get_uint(std::string_view key) const {
  const std::string& s = get(key);
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::invalid_argument("record: key '" + std::string(key) + "' is not an unsigned integer");
  return v;
}

bool Record::get_bool(std::string_view key) const {
  const std::string& s = get(key);
  if (s == "1") return true;
  if (s == "0") return false;
  throw std::invalid_argument("record: key '" + std::string(key) + "' is not a flag");
}

Vector Record::get_vector(std::string_view key) const {
  std::string_view s = get(key);
  std::vector<double> vals;
  while (!s.empty()) {
    const auto comma = s.find(',');
    vals.push_back(parse_double_exact(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

std::string Record::to_line() const {
  std::string line = kind_;
  for (const auto& [k, v] : fields_) {
    line += ' ';
    line += k;
    line += ':';
    line += v;
  }
  return line;
}

Record Record::parse(std::string_view line) {
  auto next = [&line]() -> std::string_view {
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    std::size_t end = 0;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
    std::string_view tok = line.substr(0, end);
    line.remove_prefix(end);
    if (!line.empty() && line.front() == '\r') line.remove_prefix(1);
    return tok;
  };
  const std::string_view kind = next();
  if (kind.empty()) throw std::invalid_argument("record: empty line");
  Record r{std::string(kind)};
  for (std::string_view tok = next(); !tok.empty(); tok = next()) {
    const auto colon = tok.find(':');
    if (colon == std::string_view::npos || colon == 0)
      throw std::invalid_argument("record: malformed field '" + std::string(tok) + "'");
    r.add(tok.substr(0, colon), std::string(tok.substr(colon + 1)));
  }
  return r;
}

}  // namespace phaselift
