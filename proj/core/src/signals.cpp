#include "phaselift/signals.hpp"

#include "phaselift/rng.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace phaselift {

namespace {

constexpr int kMaxRejections = 10'000;

double parse_double(std::string_view s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::invalid_argument("signal: cannot parse number '" + std::string(s) + "'");
  return v;
}

std::size_t parse_size(std::string_view s) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::invalid_argument("signal: cannot parse integer '" + std::string(s) + "'");
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Unit vector of length `len` with flatness <= mu (relative to its own norm).
Vector flat_block(std::size_t len, double mu, Rng& rng) {
  Vector g(static_cast<Eigen::Index>(len));
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    for (auto& v : g) v = rng.gaussian();
    const double nrm = g.norm();
    if (nrm == 0.0) continue;
    g /= nrm;
    if (flatness(g) <= mu) return g;
  }
  // Equal magnitudes are 1/√len-flat, which is <= mu by feasibility.
  Vector base(static_cast<Eigen::Index>(len));
  for (auto& v : base) v = rng.sign() / std::sqrt(static_cast<double>(len));
  Vector perturbed = base;
  for (auto& v : perturbed) v += 1e-3 * rng.gaussian() / std::sqrt(static_cast<double>(len));
  perturbed.normalize();
  return flatness(perturbed) <= mu ? perturbed : base;
}

}  // namespace

SignalSpec SignalSpec::flat(double mu, std::size_t n, double norm) {
  SignalSpec s;
  s.kind = Kind::Flat;
  s.mu = mu;
  s.n = n;
  s.norm = norm;
  return s;
}

SignalSpec SignalSpec::sparse_flat(double mu, std::size_t k, std::size_t n, double norm) {
  SignalSpec s = flat(mu, n, norm);
  s.kind = Kind::SparseFlat;
  s.k = k;
  return s;
}

SignalSpec SignalSpec::peaky(std::size_t index, std::size_t n, double norm) {
  SignalSpec s;
  s.kind = Kind::Peaky;
  s.index = index;
  s.n = n;
  s.norm = norm;
  return s;
}

SignalSpec SignalSpec::explicit_vector(std::vector<double> values) {
  SignalSpec s;
  s.kind = Kind::Explicit;
  s.n = values.size();
  s.values = std::move(values);
  return s;
}

SignalSpec SignalSpec::parse(std::string_view text, std::size_t n) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (head == "flat") return flat(parse_double(rest), n);
  if (head == "sparse_flat") {
    const auto c2 = rest.find(':');
    if (c2 == std::string_view::npos) throw std::invalid_argument("signal: expected sparse_flat:<mu>:<k>");
    return sparse_flat(parse_double(rest.substr(0, c2)), parse_size(rest.substr(c2 + 1)), n);
  }
  if (head == "peaky") return peaky(rest.empty() ? 0 : parse_size(rest), n);
  if (head == "explicit") {
    std::vector<double> vals;
    std::string_view r = rest;
    while (!r.empty()) {
      const auto comma = r.find(',');
      vals.push_back(parse_double(r.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      r.remove_prefix(comma + 1);
    }
    if (n != 0 && vals.size() != n)
      throw std::invalid_argument("signal: explicit vector has " + std::to_string(vals.size()) +
                                  " entries, expected " + std::to_string(n));
    return explicit_vector(std::move(vals));
  }
  throw std::invalid_argument("unknown signal kind '" + std::string(head) + "'");
}

std::string SignalSpec::descriptor() const {
  switch (kind) {
    case Kind::Flat: return "flat:" + fmt(mu);
    case Kind::SparseFlat: return "sparse_flat:" + fmt(mu) + ":" + std::to_string(k);
    case Kind::Peaky: return "peaky:" + std::to_string(index);
    case Kind::Explicit: {
      std::string s = "explicit:";
      for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + fmt(values[i]);
      return s;
    }
  }
  return {};
}

void SignalSpec::validate() const {
  if (n == 0) throw std::invalid_argument("signal: dimension must be >= 1");
  if (!(norm > 0.0) && kind != Kind::Explicit) throw std::invalid_argument("signal: norm must be positive");
  switch (kind) {
    case Kind::Flat:
      if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("flat signal: mu must lie in (0, 1)");
      if (mu * mu * static_cast<double>(n) < 1.0)
        throw std::invalid_argument("flat signal: infeasible, a mu-flat unit vector needs n >= 1/mu^2 (mu^2*n = " +
                                    fmt(mu * mu * static_cast<double>(n)) + ")");
      break;
    case Kind::SparseFlat:
      if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument("sparse_flat signal: mu must lie in (0, 1]");
      if (k == 0 || k > n) throw std::invalid_argument("sparse_flat signal: need 1 <= k <= n");
      if (mu * mu * static_cast<double>(k) < 1.0)
        throw std::invalid_argument("sparse_flat signal: infeasible, k nonzeros can only be mu-flat when k >= 1/mu^2 "
                                    "(mu^2*k = " + fmt(mu * mu * static_cast<double>(k)) + ")");
      break;
    case Kind::Peaky:
      if (index >= n) throw std::invalid_argument("peaky signal: index out of range");
      break;
    case Kind::Explicit:
      if (values.size() != n) throw std::invalid_argument("explicit signal: length mismatch");
      break;
  }
}

double flatness(const Vector& x) {
  const double nrm = x.norm();
  if (x.size() == 0 || nrm == 0.0) throw std::invalid_argument("flatness: zero vector");
  return x.lpNorm<Eigen::Infinity>() / nrm;
}

Vector generate_signal(const SignalSpec& spec, std::uint64_t seed) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(spec.n);
  Rng rng(seed);
  switch (spec.kind) {
    case SignalSpec::Kind::Flat:
      return spec.norm * flat_block(spec.n, spec.mu, rng);
    case SignalSpec::Kind::SparseFlat: {
      // Partial Fisher–Yates for the support.
      std::vector<std::size_t> idx(spec.n);
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      for (std::size_t i = 0; i < spec.k; ++i) std::swap(idx[i], idx[i + rng.below(spec.n - i)]);
      const Vector block = flat_block(spec.k, spec.mu, rng);
      Vector x = Vector::Zero(n);
      for (std::size_t i = 0; i < spec.k; ++i) x[static_cast<Eigen::Index>(idx[i])] = block[static_cast<Eigen::Index>(i)];
      return spec.norm * x;
    }
    case SignalSpec::Kind::Peaky: {
      Vector x = Vector::Zero(n);
      x[static_cast<Eigen::Index>(spec.index)] = spec.norm;
      return x;
    }
    case SignalSpec::Kind::Explicit:
      return Eigen::Map<const Vector>(spec.values.data(), n);
  }
  return {};
}

Vector random_unit(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("random_unit: n must be >= 1");
  Rng rng(seed);
  Vector g(static_cast<Eigen::Index>(n));
  do {
    for (auto& v : g) v = rng.gaussian();
  } while (g.norm() == 0.0);
  return g.normalized();
}

}  // namespace phaselift
