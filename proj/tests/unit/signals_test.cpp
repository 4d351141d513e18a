#include "phaselift/signals.hpp"
#include "phaselift/tolerances.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace phaselift;
using phaselift::testing::basis;
using phaselift::testing::random_vector;

TEST(Flatness, Examples) {
  EXPECT_EQ(flatness(basis(5, 0)), 1.0);
  EXPECT_NEAR(flatness(Vector::Ones(9) / 3.0), 1.0 / 3.0, tol::kTight);
  Vector v(2);
  v << 3.0 / 5.0, 4.0 / 5.0;
  EXPECT_NEAR(flatness(v), 0.8, tol::kTight);
  EXPECT_THROW(flatness(Vector::Zero(3)), std::invalid_argument);
}

TEST(Flatness, ScaleInvariantAndInRange) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Vector x = random_vector(10, seed);
    EXPECT_NEAR(flatness(-3.5 * x), flatness(x), tol::kTight);
    EXPECT_GE(flatness(x), 1.0 / std::sqrt(10.0) - tol::kTight);
    EXPECT_LE(flatness(x), 1.0);
  }
}

TEST(Generate, FlatAlwaysPassesFlatness) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Vector x = generate_signal(SignalSpec::flat(0.3, 16), seed);
    EXPECT_LE(flatness(x), 0.3);
    EXPECT_NEAR(x.norm(), 1.0, tol::kTight);
  }
}

TEST(Generate, FlatNearTheFeasibilityEdgeUsesFallback) {
  // μ²n barely above 1: rejection sampling almost never succeeds.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Vector x = generate_signal(SignalSpec::flat(0.26, 16), seed);
    EXPECT_LE(flatness(x), 0.26);
    EXPECT_NEAR(x.norm(), 1.0, tol::kTight);
  }
}

TEST(Generate, CustomNorm) {
  const Vector x = generate_signal(SignalSpec::flat(0.5, 8, 2.5), 3);
  EXPECT_NEAR(x.norm(), 2.5, tol::kTight);
  EXPECT_LE(flatness(x), 0.5);
}

TEST(Generate, Peaky) {
  EXPECT_EQ(generate_signal(SignalSpec::peaky(0, 8), 1), basis(8, 0));
  EXPECT_EQ(generate_signal(SignalSpec::peaky(3, 8), 1), basis(8, 3));
  EXPECT_THROW(generate_signal(SignalSpec::peaky(8, 8), 1), std::invalid_argument);
}

TEST(Generate, SparseFlat) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Vector x = generate_signal(SignalSpec::sparse_flat(0.5, 4, 32), seed);
    EXPECT_EQ((x.array() != 0.0).count(), 4);
    EXPECT_LE(flatness(x), 0.5);
    EXPECT_NEAR(x.norm(), 1.0, tol::kTight);
  }
}

TEST(Generate, RejectsInfeasibleSpecs) {
  EXPECT_THROW(generate_signal(SignalSpec::flat(0.1, 16), 1), std::invalid_argument);
  EXPECT_THROW(generate_signal(SignalSpec::flat(1.5, 16), 1), std::invalid_argument);
  EXPECT_THROW(generate_signal(SignalSpec::sparse_flat(0.3, 4, 32), 1), std::invalid_argument);
  EXPECT_THROW(generate_signal(SignalSpec::sparse_flat(0.5, 40, 32), 1), std::invalid_argument);
}

TEST(Generate, Deterministic) {
  EXPECT_EQ(generate_signal(SignalSpec::flat(0.3, 32), 9), generate_signal(SignalSpec::flat(0.3, 32), 9));
  EXPECT_NE(generate_signal(SignalSpec::flat(0.3, 32), 9), generate_signal(SignalSpec::flat(0.3, 32), 10));
}

TEST(Generate, SumOrDifferenceIsTwiceAsFlat) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Vector s = generate_signal(SignalSpec::flat(0.3, 16), 2 * seed);
    const Vector t = generate_signal(SignalSpec::flat(0.3, 16), 2 * seed + 1);
    EXPECT_TRUE(flatness(s + t) <= 0.6 || flatness(s - t) <= 0.6);
  }
}

TEST(SignalSpec, ParseAndDescriptor) {
  EXPECT_EQ(SignalSpec::parse("flat:0.3", 16).descriptor(), SignalSpec::flat(0.3, 16).descriptor());
  EXPECT_EQ(SignalSpec::parse("peaky:2", 8).index, 2u);
  const SignalSpec sf = SignalSpec::parse("sparse_flat:0.5:4", 32);
  EXPECT_EQ(sf.k, 4u);
  EXPECT_EQ(SignalSpec::parse(sf.descriptor(), 32).descriptor(), sf.descriptor());
  const SignalSpec ex = SignalSpec::parse("explicit:1,0,-2", 3);
  EXPECT_EQ(ex.values, (std::vector<double>{1.0, 0.0, -2.0}));
  EXPECT_THROW(SignalSpec::parse("explicit:1,2", 3), std::invalid_argument);
  EXPECT_THROW(SignalSpec::parse("wavy:1", 3), std::invalid_argument);
}

TEST(RandomUnit, UnitNorm) {
  EXPECT_NEAR(random_unit(20, 4).norm(), 1.0, tol::kTight);
}
