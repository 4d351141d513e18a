#include "phaselift/sampling.hpp"

#include <stdexcept>
#include <string>

namespace phaselift {

namespace {

void check_rows(const RowMatrix& a, Eigen::Index n, const char* what) {
  if (a.cols() != n)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (A has " + std::to_string(a.cols()) +
                                " columns, operand has " + std::to_string(n) + ")");
}

}  // namespace

RowMatrix sample_matrix(const Ensemble& e, std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m == 0 || n == 0) throw std::invalid_argument("sample_matrix: m and n must be >= 1");
  Rng rng(seed);
  RowMatrix a(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = e.draw(rng);
  return a;
}

Vector phi(const Vector& s) { return s.array().square().matrix(); }

Vector measure(const RowMatrix& a, const Vector& x, const Vector& w) {
  check_rows(a, x.size(), "measure");
  if (w.size() != a.rows()) throw std::invalid_argument("measure: noise length must equal m");
  return phi(a * x) + w;
}

Vector apply_A(const RowMatrix& a, const SymMatrix& x) {
  check_rows(a, static_cast<Eigen::Index>(x.dim()), "apply_A");
  const RowMatrix ax = a * x.dense();
  return ax.cwiseProduct(a).rowwise().sum();
}

SymMatrix apply_A_adjoint(const RowMatrix& a, const Vector& lambda) {
  if (lambda.size() != a.rows()) throw std::invalid_argument("apply_A_adjoint: λ length must equal m");
  // Aᵀ diag(λ) A
  const RowMatrix scaled = lambda.asDiagonal() * a;
  return SymMatrix::symmetrize(a.transpose() * scaled);
}

Vector noise_with_level(std::size_t m, double level, std::uint64_t seed) {
  if (m == 0) throw std::invalid_argument("noise_with_level: m must be >= 1");
  if (level < 0.0) throw std::invalid_argument("noise_with_level: level must be >= 0");
  Vector w = Vector::Zero(static_cast<Eigen::Index>(m));
  if (level == 0.0) return w;
  Rng rng(seed);
  for (auto& v : w) v = rng.gaussian();
  w *= level * static_cast<double>(m) / w.lpNorm<1>();
  return w;
}

}  // namespace phaselift
