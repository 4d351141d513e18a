#include "phaselift/solver.hpp"

#include "phaselift/sampling.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace phaselift {

namespace {

constexpr int kLogEvery = 10;

Vector soft_threshold(const Vector& v, const Vector& t) {
  return v.binaryExpr(t, [](double x, double s) { return x > s ? x - s : (x < -s ? x + s : 0.0); });
}

void emit(std::ostream* log, int iter, double objective, double primal, double dual, double penalty) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "iter:%d objective:%.9e primal:%.3e dual:%.3e penalty:%.3e", iter, objective,
                primal, dual, penalty);
  *log << buf << '\n';
}

}  // namespace

SolverConfig SolverConfig::for_measurements(std::size_t m) {
  SolverConfig c;
  c.primal_tol = 1e-7 * static_cast<double>(m);
  c.dual_tol = c.primal_tol;
  return c;
}

void SolverConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("solver: max_iters must be >= 1");
  if (!(primal_tol > 0.0) || !(dual_tol > 0.0)) throw std::invalid_argument("solver: tolerances must be > 0");
  if (!(penalty > 0.0)) throw std::invalid_argument("solver: penalty must be > 0");
  if (!(balance_ratio > 1.0)) throw std::invalid_argument("solver: balance_ratio must be > 1");
}

std::string SolverConfig::descriptor() const {
  char buf[200];
  std::snprintf(buf, sizeof buf, "max_iters=%d,primal_tol=%.17g,dual_tol=%.17g,penalty=%.17g,balance_ratio=%.17g",
                max_iters, primal_tol, dual_tol, penalty, balance_ratio);
  return buf;
}

Vector svec(const SymMatrix& x) {
  const std::size_t n = x.dim();
  Vector v(static_cast<Eigen::Index>(n * (n + 1) / 2));
  Eigen::Index k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    v[k++] = x(i, i);
    for (std::size_t j = i + 1; j < n; ++j) v[k++] = std::numbers::sqrt2 * x(i, j);
  }
  return v;
}

SymMatrix smat(const Vector& v, std::size_t n) {
  if (static_cast<std::size_t>(v.size()) != n * (n + 1) / 2) throw std::invalid_argument("smat: length mismatch");
  SymMatrix x(n);
  Eigen::Index k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    x.set(i, i, v[k++]);
    for (std::size_t j = i + 1; j < n; ++j) x.set(i, j, v[k++] / std::numbers::sqrt2);
  }
  return x;
}

PhaseLiftSolver::PhaseLiftSolver(RowMatrix a) : a_(std::move(a)) {
  if (a_.rows() < 1 || a_.cols() < 1) throw std::invalid_argument("PhaseLiftSolver: empty measurement matrix");
  const std::size_t n = this->n();
  const Eigen::Index lifted_dim = static_cast<Eigen::Index>(n * (n + 1) / 2);
  raw_lifted_.resize(a_.rows(), lifted_dim);
  for (Eigen::Index r = 0; r < a_.rows(); ++r) {
    Eigen::Index k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ai = a_(r, static_cast<Eigen::Index>(i));
      raw_lifted_(r, k++) = ai * ai;
      for (std::size_t j = i + 1; j < n; ++j)
        raw_lifted_(r, k++) = std::numbers::sqrt2 * ai * a_(r, static_cast<Eigen::Index>(j));
    }
  }
}

const PhaseLiftSolver::Operator& PhaseLiftSolver::op(Program prog) const {
  const int idx = prog == Program::Noisy ? 1 : 0;
  std::call_once(once_[idx], [&] {
    Operator& o = ops_[idx];
    o.row_scale = Vector::Ones(a_.rows());
    if (prog == Program::Noisy) {
      // Unit-norm lifted rows; all-zero rows (possible under erasures) keep weight 1.
      for (Eigen::Index r = 0; r < a_.rows(); ++r) {
        const double norm = raw_lifted_.row(r).norm();
        if (norm > 0.0) o.row_scale[r] = 1.0 / norm;
      }
    }
    o.lifted = o.row_scale.asDiagonal() * raw_lifted_;
    const Eigen::Index dim = o.lifted.cols();
    Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(dim, dim);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(o.lifted.transpose());
    o.gram.compute(gram);
    if (o.gram.info() != Eigen::Success) throw std::runtime_error("PhaseLiftSolver: Gram factorization failed");
  });
  return ops_[idx];
}

LiftedSolution PhaseLiftSolver::solve_noiseless(const Vector& y, const SolverConfig& cfg, std::ostream* log) const {
  return run(y, cfg, Program::Noiseless, log);
}

LiftedSolution PhaseLiftSolver::solve_noisy(const Vector& y, const SolverConfig& cfg, std::ostream* log) const {
  return run(y, cfg, Program::Noisy, log);
}

LiftedSolution PhaseLiftSolver::run(const Vector& y, const SolverConfig& cfg, Program prog, std::ostream* log) const {
  cfg.validate();
  if (y.size() != a_.rows()) throw std::invalid_argument("PhaseLiftSolver: y length must equal m");
  if (!y.allFinite()) throw std::invalid_argument("PhaseLiftSolver: y has non-finite entries");
  if (!cfg.verbose) log = nullptr;

  const std::size_t n = this->n();
  const Operator& o = op(prog);
  const Eigen::MatrixXd& lifted = o.lifted;
  const Eigen::Index lifted_dim = lifted.cols();
  const double trace_weight = prog == Program::Noiseless ? 1.0 : 0.0;
  const Vector trace_dir = svec(SymMatrix::identity(n));

  // Scaled constraint D(A(X) − y) = r; f(r) = Σ |r_i| / d_i.
  const Vector ys = o.row_scale.cwiseProduct(y);
  const Vector thresholds = o.row_scale.cwiseInverse();

  Vector x = Vector::Zero(lifted_dim), z = x, dual_z = x;
  Vector r = Vector::Zero(a_.rows()), dual_r = r;
  double rho = cfg.penalty;

  LiftedSolution out;
  double primal = 0.0, dual = 0.0;
  int iter = 0;
  for (iter = 1; iter <= cfg.max_iters; ++iter) {
    // X-update: (MᵀM + I) x = Mᵀ(r + y − u) + (z − V) − (γ/ρ) svec(I)
    Vector rhs = lifted.transpose() * (r + ys - dual_r) + (z - dual_z);
    if (trace_weight != 0.0) rhs -= (trace_weight / rho) * trace_dir;
    x = o.gram.solve(rhs);
    const Vector ax = lifted * x;

    const Vector r_old = r, z_old = z;
    if (prog == Program::Noisy)
      r = soft_threshold(ax - ys + dual_r, (thresholds / rho).eval());
    else
      r.setZero();

    const EigenDecomp ed = eig_sym(smat(x + dual_z, n));
    const Vector clipped = ed.values.cwiseMax(0.0);
    z = svec(SymMatrix::symmetrize(ed.vectors * clipped.asDiagonal() * ed.vectors.transpose()));

    const Vector res_r = ax - r - ys;
    const Vector res_z = x - z;
    dual_r += res_r;
    dual_z += res_z;

    // Stopping uses feasibility of the returned PSD iterate in the objective's norm.
    primal = (lifted * z - r - ys).cwiseProduct(thresholds).lpNorm<1>() + res_z.norm();
    dual = rho * (lifted.transpose() * (r - r_old) + (z - z_old)).norm();

    if (log && (iter % kLogEvery == 1 || iter == cfg.max_iters)) {
      const double obj = prog == Program::Noisy ? (ax - ys).cwiseProduct(thresholds).lpNorm<1>() : trace_dir.dot(x);
      emit(log, iter, obj, primal, dual, rho);
    }
    if (primal <= cfg.primal_tol && dual <= cfg.dual_tol) {
      out.converged = true;
      break;
    }
    // Residual balancing on the scaled residuals; scaled duals move inversely with ρ.
    const double balance_primal = std::sqrt(res_r.squaredNorm() + res_z.squaredNorm());
    if (balance_primal > cfg.balance_ratio * dual) {
      rho *= 2.0;
      dual_r *= 0.5;
      dual_z *= 0.5;
    } else if (dual > cfg.balance_ratio * balance_primal) {
      rho *= 0.5;
      dual_r *= 2.0;
      dual_z *= 2.0;
    }
  }

  out.iters = std::min(iter, cfg.max_iters);
  out.x_hat = smat(z, n);
  out.signal = extract_signal(out.x_hat);
  out.primal_residual = primal;
  out.dual_residual = dual;
  if (prog == Program::Noisy)
    out.objective = (apply_A(a_, out.x_hat) - y).lpNorm<1>();
  else
    out.objective = out.x_hat.trace();
  if (log) emit(log, out.iters, out.objective, primal, dual, rho);
  return out;
}

LiftedSolution solve_noiseless(const SampleSet& s, const SolverConfig& cfg, std::ostream* log) {
  s.validate();
  return PhaseLiftSolver(s.a).solve_noiseless(s.y, cfg, log);
}

LiftedSolution solve_noisy(const SampleSet& s, const SolverConfig& cfg, std::ostream* log) {
  s.validate();
  return PhaseLiftSolver(s.a).solve_noisy(s.y, cfg, log);
}

Vector extract_signal(const SymMatrix& x_hat) {
  const EigenDecomp ed = eig_sym(x_hat);
  const double lambda = std::max(ed.values[0], 0.0);
  Vector v = ed.vectors.col(0);
  if (v[static_cast<Eigen::Index>(argmax_abs(v))] < 0.0) v = -v;
  return std::sqrt(lambda) * v;
}

double sign_invariant_error(const Vector& x_hat, const Vector& x0) {
  if (x_hat.size() != x0.size()) throw std::invalid_argument("sign_invariant_error: dimension mismatch");
  return std::min((x_hat - x0).norm(), (x_hat + x0).norm());
}

double relative_lift_error(const SymMatrix& x_hat, const Vector& x0) {
  if (x_hat.dim() != static_cast<std::size_t>(x0.size()))
    throw std::invalid_argument("relative_lift_error: dimension mismatch");
  const Eigen::MatrixXd lift = x0 * x0.transpose();
  return (x_hat.dense() - lift).norm() / lift.norm();
}

}  // namespace phaselift
