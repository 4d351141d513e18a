#include "phaselift/ensemble.hpp"
#include "phaselift/expectation.hpp"
#include "phaselift/rng.hpp"
#include "phaselift/sample_set.hpp"
#include "phaselift/sampling.hpp"
#include "phaselift/tolerances.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <sstream>

using namespace phaselift;
using phaselift::testing::basis;
using phaselift::testing::random_sym;
using phaselift::testing::random_vector;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.gaussian();
    EXPECT_EQ(x, b.gaussian());
    differs |= x != c.gaussian();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, UniformRangeAndBelow) {
  Rng r(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_GT(r.uniform_open0(), 0.0);
    EXPECT_LT(r.below(7), 7u);
  }
}

TEST(Rng, DeriveSeedDependsOnPath) {
  EXPECT_EQ(derive_seed(5, {1, 2}), derive_seed(5, {1, 2}));
  EXPECT_NE(derive_seed(5, {1, 2}), derive_seed(5, {2, 1}));
  EXPECT_NE(derive_seed(5, {1}), derive_seed(5, {1, 0}));
  EXPECT_NE(derive_seed(5, {1, 2}), derive_seed(6, {1, 2}));
}

TEST(Ensemble, Moments) {
  EXPECT_EQ(Ensemble::gaussian().c4(), 3.0);
  EXPECT_EQ(Ensemble::rademacher().c4(), 1.0);
  const Ensemble e = Ensemble::erasure_preset();
  EXPECT_NEAR(e.c4(), 3.0, tol::kTight);
  EXPECT_NEAR(Ensemble::erasure(0.5).c4(), 2.0, tol::kTight);
  EXPECT_EQ(Ensemble::gaussian().psi2_scale(), 1.0);
  EXPECT_NEAR(e.psi2_scale(), std::sqrt(3.0), tol::kTight);
}

TEST(Ensemble, ErasureSupport) {
  const Ensemble e = Ensemble::erasure(2.0 / 3.0);
  const Support& s = e.support();
  ASSERT_EQ(s.values.size(), 3u);
  EXPECT_NEAR(s.values[0], -std::sqrt(3.0), tol::kTight);
  EXPECT_EQ(s.values[1], 0.0);
  EXPECT_NEAR(s.values[2], std::sqrt(3.0), tol::kTight);
  EXPECT_NEAR(s.probs[0], 1.0 / 6.0, tol::kTight);
  EXPECT_NEAR(s.probs[1], 2.0 / 3.0, tol::kTight);
  double mean = 0.0, var = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    mean += s.probs[i] * s.values[i];
    var += s.probs[i] * s.values[i] * s.values[i];
    m4 += s.probs[i] * std::pow(s.values[i], 4);
  }
  EXPECT_NEAR(mean, 0.0, tol::kTight);
  EXPECT_NEAR(var, 1.0, tol::kTight);
  EXPECT_NEAR(m4, e.c4(), tol::kTight);
}

TEST(Ensemble, RejectsBadParameters) {
  EXPECT_THROW(Ensemble::erasure(0.0), std::invalid_argument);
  EXPECT_THROW(Ensemble::erasure(1.0), std::invalid_argument);
  EXPECT_THROW(Ensemble::erasure(-0.2), std::invalid_argument);
  EXPECT_THROW(Ensemble::discrete({1.0, -1.0}, {0.6, 0.6}), std::invalid_argument);
  EXPECT_THROW(Ensemble::discrete({2.0, -2.0}, {0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(Ensemble::discrete({1.0, 0.0}, {0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(Ensemble::parse("laplace"), std::invalid_argument);
}

TEST(Ensemble, ParseRoundTrip) {
  for (const char* text : {"gaussian", "rademacher", "erasure:2/3", "erasure:0.25", "discrete:-1,1;0.5,0.5"}) {
    const Ensemble e = Ensemble::parse(text);
    EXPECT_EQ(Ensemble::parse(e.descriptor()), e) << text;
  }
  EXPECT_EQ(Ensemble::parse("erasure"), Ensemble::erasure_preset());
  EXPECT_EQ(Ensemble::parse("bernoulli"), Ensemble::rademacher());
}

TEST(SampleMatrix, RademacherEntries) {
  const RowMatrix a = sample_matrix(Ensemble::rademacher(), 50, 9, 3);
  for (double v : a.reshaped()) EXPECT_TRUE(v == 1.0 || v == -1.0);
}

TEST(SampleMatrix, ErasureEntriesAndZeroFraction) {
  const std::size_t m = 400, n = 50;
  const RowMatrix a = sample_matrix(Ensemble::erasure_preset(), m, n, 11);
  const double r3 = std::sqrt(3.0);
  std::size_t zeros = 0;
  for (double v : a.reshaped()) {
    EXPECT_TRUE(v == 0.0 || std::abs(std::abs(v) - r3) < tol::kTight);
    zeros += v == 0.0;
  }
  const double total = static_cast<double>(m * n), p = 2.0 / 3.0;
  const double sigma = std::sqrt(p * (1 - p) / total);
  EXPECT_NEAR(static_cast<double>(zeros) / total, p, 3 * sigma);
}

TEST(SampleMatrix, GaussianVariance) {
  const RowMatrix a = sample_matrix(Ensemble::gaussian(), 1000, 100, 5);
  const double mean = a.mean();
  const double var = (a.array() - mean).square().sum() / static_cast<double>(a.size() - 1);
  EXPECT_GE(var, 0.97);
  EXPECT_LE(var, 1.03);
}

TEST(SampleMatrix, Deterministic) {
  for (const Ensemble& e : {Ensemble::gaussian(), Ensemble::rademacher(), Ensemble::erasure(0.3)}) {
    const RowMatrix a = sample_matrix(e, 20, 7, 99), b = sample_matrix(e, 20, 7, 99);
    EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()), 0);
  }
}

TEST(Phi, Examples) {
  Vector s(3);
  s << 1, -2, 3;
  EXPECT_EQ(phi(s), Vector((Vector(3) << 1, 4, 9).finished()));
  EXPECT_EQ(phi(Vector::Zero(4)), Vector::Zero(4));
}

TEST(Measure, SignBlindAndExamples) {
  const RowMatrix a = sample_matrix(Ensemble::rademacher(), 30, 6, 1);
  const Vector zero = Vector::Zero(30);
  const Vector y1 = measure(a, basis(6, 0), zero), y2 = measure(a, basis(6, 1), zero);
  EXPECT_EQ(y1, Vector::Ones(30));
  EXPECT_EQ(y1, y2);
  const Vector x = random_vector(6, 2), w = random_vector(30, 3);
  EXPECT_EQ(measure(a, x, zero), measure(a, -x, zero));
  EXPECT_EQ(measure(a, Vector::Zero(6), w), w);
  EXPECT_THROW(measure(a, Vector::Zero(5), zero), std::invalid_argument);
  EXPECT_THROW(measure(a, x, Vector::Zero(29)), std::invalid_argument);
}

TEST(ApplyA, Examples) {
  const RowMatrix a = sample_matrix(Ensemble::gaussian(), 12, 5, 4);
  const Vector x = random_vector(5, 5);
  EXPECT_LE((apply_A(a, SymMatrix::outer(x)) - phi(a * x)).norm(), tol::kStandard * phi(a * x).norm());
  const Vector diag = apply_A(a, SymMatrix::identity(5));
  for (Eigen::Index i = 0; i < 12; ++i) EXPECT_NEAR(diag[i], a.row(i).squaredNorm(), tol::kStandard);
  EXPECT_THROW(apply_A(a, SymMatrix::identity(4)), std::invalid_argument);
}

TEST(ApplyA, TangentCounterexampleIsExactlyZero) {
  const std::size_t n = 8;
  const RowMatrix a = sample_matrix(Ensemble::rademacher(), 64, n, 9);
  Vector x0 = Vector::Zero(n), x = Vector::Zero(n);
  x0[0] = x0[1] = 1.0 / std::sqrt(2.0);
  x[0] = 1.0;
  x[1] = -1.0;
  const Vector out = apply_A(a, SymMatrix::sym_outer(x, x0));
  for (double v : out) EXPECT_EQ(v, 0.0);
}

TEST(ApplyAAdjoint, Examples) {
  const RowMatrix a = sample_matrix(Ensemble::gaussian(), 5, 4, 6);
  Vector e1 = Vector::Zero(5);
  e1[0] = 1.0;
  const Vector a1 = a.row(0).transpose();
  EXPECT_LE((apply_A_adjoint(a, e1).dense() - a1 * a1.transpose()).norm(), tol::kStandard);
  EXPECT_EQ(frob_norm(apply_A_adjoint(a, Vector::Zero(5))), 0.0);
  EXPECT_THROW(apply_A_adjoint(a, Vector::Zero(4)), std::invalid_argument);
}

TEST(ApplyAAdjoint, AdjointIdentity) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const RowMatrix a = sample_matrix(Ensemble::gaussian(), 5, 4, seed);
    const Vector lambda = random_vector(5, seed + 1000);
    const SymMatrix x = random_sym(4, seed + 2000);
    const double lhs = apply_A(a, x).dot(lambda), rhs = inner(x, apply_A_adjoint(a, lambda));
    EXPECT_NEAR(lhs, rhs, tol::kStandard * std::max(1.0, std::abs(lhs)));
  }
}

TEST(ApplyA, UpperBoundOnPsdMatrices) {
  const std::size_t n = 16, m = 40 * n;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const RowMatrix a = sample_matrix(Ensemble::rademacher(), m, n, seed);
    Rng rng(seed + 77);
    Eigen::MatrixXd g(n, 3);
    for (auto& v : g.reshaped()) v = rng.gaussian();
    const SymMatrix x = SymMatrix::symmetrize(g * g.transpose());
    EXPECT_LE(l1_norm(apply_A(a, x)) / static_cast<double>(m), 1.5 * x.trace());
  }
}

TEST(NoiseWithLevel, HitsL1Budget) {
  const Vector w = noise_with_level(200, 0.01, 3);
  EXPECT_NEAR(l1_norm(w) / 200.0, 0.01, tol::kTight);
  EXPECT_EQ(noise_with_level(10, 0.0, 3), Vector::Zero(10));
}

TEST(Expectation, EnumerationCap) {
  EXPECT_EQ(enumeration_states(Ensemble::rademacher(), 20), 1u << 20);
  EXPECT_GT(enumeration_states(Ensemble::rademacher(), 21), kMaxEnumerationStates);
  EXPECT_THROW(require_enumerable(Ensemble::rademacher(), 21, "test"), std::invalid_argument);
  const Estimate e = expect_exact(Ensemble::erasure(0.5), 3, [](const Vector& a) { return a.squaredNorm(); });
  EXPECT_NEAR(e.value, 3.0, tol::kTight);
  EXPECT_TRUE(e.exact);
  EXPECT_EQ(e.std_error, 0.0);
}

namespace {

InstanceFile small_instance() {
  InstanceFile inst;
  inst.samples.ensemble = Ensemble::erasure(0.25);
  inst.samples.seed = 1234;
  inst.samples.a = sample_matrix(inst.samples.ensemble, 7, 3, 1234);
  inst.samples.w = noise_with_level(7, 0.1, 2);
  const Vector x = random_vector(3, 5);
  inst.samples.y = measure(inst.samples.a, x, inst.samples.w);
  inst.truth = x;
  return inst;
}

}  // namespace

TEST(SampleSetFile, BitExactRoundTrip) {
  const InstanceFile inst = small_instance();
  std::stringstream ss;
  write_instance(ss, inst);
  const std::string bytes = ss.str();
  const InstanceFile back = read_instance(ss);
  EXPECT_EQ(back.samples.ensemble, inst.samples.ensemble);
  EXPECT_EQ(back.samples.seed, inst.samples.seed);
  EXPECT_EQ(back.samples.a, inst.samples.a);
  EXPECT_EQ(back.samples.y, inst.samples.y);
  EXPECT_EQ(back.samples.w, inst.samples.w);
  ASSERT_TRUE(back.truth.has_value());
  EXPECT_EQ(*back.truth, *inst.truth);
  std::stringstream again;
  write_instance(again, back);
  EXPECT_EQ(again.str(), bytes);
}

TEST(SampleSetFile, RejectsBadMagicVersionAndTruncation) {
  std::stringstream ss;
  write_instance(ss, small_instance());
  const std::string good = ss.str();

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  std::istringstream in1(bad_magic);
  EXPECT_THROW(read_instance(in1), FormatError);

  std::string bad_version = good;
  bad_version[8] = 9;
  std::istringstream in2(bad_version);
  try {
    read_instance(in2);
    FAIL() << "version mismatch accepted";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 8u);
  }

  std::istringstream in3(good.substr(0, good.size() - 5));
  try {
    read_instance(in3);
    FAIL() << "truncated file accepted";
  } catch (const FormatError& e) {
    EXPECT_GT(e.offset(), 0u);
    EXPECT_LE(e.offset(), good.size());
  }
}
