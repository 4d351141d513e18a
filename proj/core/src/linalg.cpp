#include "phaselift/linalg.hpp"

#include "phaselift/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace phaselift {

SymMatrix::SymMatrix(std::size_t dim) : m_(Eigen::MatrixXd::Zero(dim, dim)) {
  if (dim == 0) throw std::invalid_argument("SymMatrix: dimension must be >= 1");
}

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("SymMatrix: expected a non-empty square matrix");
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != m(j, i))
        throw std::invalid_argument("SymMatrix: input is not symmetric at (" + std::to_string(i) +
                                    ", " + std::to_string(j) + ")");
  SymMatrix s;
  s.m_ = m;
  return s;
}

SymMatrix SymMatrix::symmetrize(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("SymMatrix: expected a non-empty square matrix");
  SymMatrix s;
  s.m_ = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      s.m_(i, j) = v;
      s.m_(j, i) = v;
    }
  return s;
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix s(dim);
  s.m_.setIdentity();
  return s;
}

SymMatrix SymMatrix::outer(const Vector& x) {
  SymMatrix s(static_cast<std::size_t>(x.size()));
  s.m_.noalias() = x * x.transpose();
  return s;
}

SymMatrix SymMatrix::sym_outer(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("sym_outer: dimension mismatch");
  SymMatrix s(static_cast<std::size_t>(x.size()));
  const auto n = x.size();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = x[i] * y[j] + y[i] * x[j];
      s.m_(i, j) = v;
      s.m_(j, i) = v;
    }
  return s;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix s(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) s.m_(i, i) = d[i];
  return s;
}

void SymMatrix::set(std::size_t i, std::size_t j, double v) {
  m_(i, j) = v;
  m_(j, i) = v;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  if (o.dim() != dim()) throw std::invalid_argument("SymMatrix: dimension mismatch");
  m_ += o.m_;
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
  if (o.dim() != dim()) throw std::invalid_argument("SymMatrix: dimension mismatch");
  m_ -= o.m_;
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

double inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("inner: dimension mismatch");
  return a.dense().cwiseProduct(b.dense()).sum();
}

EigenDecomp eig_sym(const SymMatrix& m) {
  if (!m.is_finite()) throw std::invalid_argument("eig_sym: matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.dense());
  if (solver.info() != Eigen::Success) throw std::runtime_error("eig_sym: eigensolver failed");
  // Eigen orders ascending.
  EigenDecomp out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

SymMatrix psd_project(const SymMatrix& m) {
  const EigenDecomp ed = eig_sym(m);
  if (ed.values.minCoeff() >= 0.0) return m;
  const Vector clipped = ed.values.cwiseMax(0.0);
  return SymMatrix::symmetrize(ed.vectors * clipped.asDiagonal() * ed.vectors.transpose());
}

double op_norm(const SymMatrix& m) {
  const EigenDecomp ed = eig_sym(m);
  return std::max(std::abs(ed.values[0]), std::abs(ed.values[ed.values.size() - 1]));
}

double frob_norm(const SymMatrix& m) { return m.dense().norm(); }

double l1_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double linf_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

double l1_norm(const Vector& v) { return v.lpNorm<1>(); }
double linf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

TangentSpace::TangentSpace(Vector anchor) : x0_(std::move(anchor)) {
  if (x0_.size() == 0) throw std::invalid_argument("TangentSpace: empty anchor");
  if (std::abs(x0_.norm() - 1.0) > tol::kTight)
    throw std::invalid_argument("TangentSpace: anchor must have unit norm");
}

TangentSplit project_tangent(const SymMatrix& m, const TangentSpace& t) {
  if (m.dim() != t.dim()) throw std::invalid_argument("project_tangent: dimension mismatch");
  const Vector& x0 = t.anchor();
  const Eigen::MatrixXd& M = m.dense();
  const Vector mx0 = M * x0;
  const double c = x0.dot(mx0);
  // P M + M P - P M P = x0 (M x0)ᵀ + (M x0) x0ᵀ - c x0 x0ᵀ
  Eigen::MatrixXd in_t = x0 * mx0.transpose() + mx0 * x0.transpose() - c * x0 * x0.transpose();
  SymMatrix mt = SymMatrix::symmetrize(in_t);
  SymMatrix mperp = SymMatrix::symmetrize(M - mt.dense());
  return {std::move(mt), std::move(mperp)};
}

double tangent_frob_norm(const SymMatrix& m, const TangentSpace& t) {
  if (m.dim() != t.dim()) throw std::invalid_argument("tangent_frob_norm: dimension mismatch");
  const Vector& x0 = t.anchor();
  const Vector mx0 = m.dense() * x0;
  const double c = x0.dot(mx0);
  const Vector off = mx0 - c * x0;  // Π0 M x0
  return std::sqrt(c * c + 2.0 * off.squaredNorm());
}

std::size_t argmax_abs(const Vector& v) {
  std::size_t best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > best_abs) {
      best_abs = std::abs(v[i]);
      best = static_cast<std::size_t>(i);
    }
  }
  return best;
}

}  // namespace phaselift
