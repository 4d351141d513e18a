#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <utility>

namespace phaselift {

using Vector = Eigen::VectorXd;
/// Row-major so that row i is the measurement vector a_i.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense symmetric matrix. Every mutating path writes both triangles, so
/// entries(i, j) == entries(j, i) holds bitwise.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim);

  /// Throws std::invalid_argument unless `m` is square and exactly symmetric.
  static SymMatrix from_dense(const Eigen::MatrixXd& m);
  /// Averages `m` with its transpose.
  static SymMatrix symmetrize(const Eigen::MatrixXd& m);
  static SymMatrix identity(std::size_t dim);
  static SymMatrix outer(const Vector& x);
  /// x yᵀ + y xᵀ
  static SymMatrix sym_outer(const Vector& x, const Vector& y);
  static SymMatrix diagonal(std::span<const double> d);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  void set(std::size_t i, std::size_t j, double v);

  const Eigen::MatrixXd& dense() const { return m_; }
  double trace() const { return m_.trace(); }
  bool is_finite() const { return m_.allFinite(); }

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double s);
  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

 private:
  Eigen::MatrixXd m_;
};

/// Frobenius inner product.
double inner(const SymMatrix& a, const SymMatrix& b);

struct EigenDecomp {
  Vector values;            // nonincreasing
  Eigen::MatrixXd vectors;  // column k pairs with values[k]
};

/// Throws std::invalid_argument on non-finite input.
EigenDecomp eig_sym(const SymMatrix& m);

/// Frobenius-nearest PSD matrix (negative eigenvalues clipped to zero).
SymMatrix psd_project(const SymMatrix& m);

double op_norm(const SymMatrix& m);
double frob_norm(const SymMatrix& m);
double l1_norm(std::span<const double> v);
double linf_norm(std::span<const double> v);
double l1_norm(const Vector& v);
double linf_norm(const Vector& v);

/// T(x0) = { x x0ᵀ + x0 xᵀ }. The anchor must be a unit vector.
class TangentSpace {
 public:
  explicit TangentSpace(Vector anchor);
  const Vector& anchor() const { return x0_; }
  std::size_t dim() const { return static_cast<std::size_t>(x0_.size()); }

 private:
  Vector x0_;
};

struct TangentSplit {
  SymMatrix in_t;
  SymMatrix in_t_perp;
};

/// Orthogonal projection onto T(x0) and its complement:
/// M_T = P M + M P - P M P with P = x0 x0ᵀ, M_T⊥ = Π0 M Π0.
TangentSplit project_tangent(const SymMatrix& m, const TangentSpace& t);

/// ‖M_T‖_F through the scalar decomposition |x0ᵀMx0|² + 2‖Π0 M x0‖², without
/// forming the projection.
double tangent_frob_norm(const SymMatrix& m, const TangentSpace& t);

/// Index of the largest-magnitude entry, lowest index on ties.
std::size_t argmax_abs(const Vector& v);

}  // namespace phaselift
