#include "phaselift/ensemble.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace phaselift {

namespace {

constexpr double kMomentTol = 1e-12;

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(std::string_view s) {
  const auto slash = s.find('/');
  if (slash != std::string_view::npos)
    return parse_number(s.substr(0, slash)) / parse_number(s.substr(slash + 1));
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw std::invalid_argument("ensemble: cannot parse number '" + std::string(s) + "'");
  return v;
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    out.push_back(parse_number(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

Ensemble Ensemble::gaussian() {
  Ensemble e;
  e.kind_ = Kind::Gaussian;
  e.c4_ = 3.0;
  e.psi2_ = 1.0;
  return e;
}

Ensemble Ensemble::rademacher() {
  Ensemble e;
  e.kind_ = Kind::Rademacher;
  e.support_ = {{-1.0, 1.0}, {0.5, 0.5}};
  e.finalize();
  return e;
}

Ensemble Ensemble::erasure(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("erasure ensemble: p must lie in (0, 1), got " + fmt_double(p));
  Ensemble e;
  e.kind_ = Kind::Erasure;
  e.p_ = p;
  const double v = 1.0 / std::sqrt(1.0 - p);
  const double q = 0.5 * (1.0 - p);
  e.support_ = {{-v, 0.0, v}, {q, p, q}};
  e.finalize();
  // Closed form; the support sum differs in the last bits.
  e.c4_ = 1.0 / (1.0 - p);
  return e;
}

Ensemble Ensemble::erasure_preset() { return erasure(2.0 / 3.0); }

Ensemble Ensemble::discrete(std::vector<double> values, std::vector<double> probs) {
  if (values.empty() || values.size() != probs.size())
    throw std::invalid_argument("discrete ensemble: values and probs must be non-empty and equal length");
  double total = 0.0, mean = 0.0, second = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(probs[i] >= 0.0) || !std::isfinite(values[i]))
      throw std::invalid_argument("discrete ensemble: probabilities must be >= 0 and values finite");
    total += probs[i];
    mean += probs[i] * values[i];
    second += probs[i] * values[i] * values[i];
  }
  if (std::abs(total - 1.0) > kMomentTol)
    throw std::invalid_argument("discrete ensemble: probabilities sum to " + fmt_double(total));
  if (std::abs(mean) > kMomentTol || std::abs(second - 1.0) > kMomentTol)
    throw std::invalid_argument("discrete ensemble: mean must be 0 and variance 1 (got " + fmt_double(mean) +
                                ", " + fmt_double(second) + ")");
  Ensemble e;
  e.kind_ = Kind::Discrete;
  e.support_ = {std::move(values), std::move(probs)};
  e.finalize();
  return e;
}

void Ensemble::finalize() {
  cumulative_.clear();
  double acc = 0.0, fourth = 0.0, vmax = 0.0;
  for (std::size_t i = 0; i < support_.values.size(); ++i) {
    acc += support_.probs[i];
    cumulative_.push_back(acc);
    const double v = support_.values[i];
    fourth += support_.probs[i] * v * v * v * v;
    if (support_.probs[i] > 0.0) vmax = std::max(vmax, std::abs(v));
  }
  cumulative_.back() = 1.0;
  c4_ = fourth;
  psi2_ = vmax;
}

Ensemble Ensemble::parse(std::string_view text) {
  if (text == "gaussian") return gaussian();
  if (text == "rademacher" || text == "bernoulli") return rademacher();
  if (text.starts_with("erasure:")) return erasure(parse_number(text.substr(8)));
  if (text == "erasure") return erasure_preset();
  if (text.starts_with("discrete:")) {
    const auto body = text.substr(9);
    const auto semi = body.find(';');
    if (semi == std::string_view::npos)
      throw std::invalid_argument("discrete ensemble: expected 'discrete:<values>;<probs>'");
    return discrete(parse_list(body.substr(0, semi)), parse_list(body.substr(semi + 1)));
  }
  throw std::invalid_argument("unknown ensemble '" + std::string(text) + "'");
}

std::string Ensemble::descriptor() const {
  switch (kind_) {
    case Kind::Gaussian: return "gaussian";
    case Kind::Rademacher: return "rademacher";
    case Kind::Erasure: return "erasure:" + fmt_double(p_);
    case Kind::Discrete: {
      std::string s = "discrete:";
      for (std::size_t i = 0; i < support_.values.size(); ++i)
        s += (i ? "," : "") + fmt_double(support_.values[i]);
      s += ';';
      for (std::size_t i = 0; i < support_.probs.size(); ++i)
        s += (i ? "," : "") + fmt_double(support_.probs[i]);
      return s;
    }
  }
  return {};
}

const Support& Ensemble::support() const {
  if (kind_ == Kind::Gaussian) throw std::logic_error("gaussian ensemble has no finite support");
  return support_;
}

std::optional<double> Ensemble::bound() const {
  if (kind_ == Kind::Gaussian) return std::nullopt;
  return psi2_;
}

double Ensemble::draw(Rng& rng) const {
  switch (kind_) {
    case Kind::Gaussian: return rng.gaussian();
    case Kind::Rademacher: return rng.sign();
    case Kind::Erasure:
    case Kind::Discrete: {
      const double u = rng.uniform();
      const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      const auto idx = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
          it - cumulative_.begin(), static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
      return support_.values[idx];
    }
  }
  return 0.0;
}

}  // namespace phaselift
