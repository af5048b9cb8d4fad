#include <gtest/gtest.h>

#include <cmath>

#include "fgeo/diff.hpp"
#include "fgeo/jet.hpp"
#include "fgeo/rng.hpp"
#include "fgeo/tensor.hpp"

using namespace fgeo;

namespace {

constexpr Variance lo = Variance::lower;
constexpr Variance up = Variance::upper;

Tensor random_tensor(Rng& rng, int dim, std::initializer_list<Variance> v) {
  return Tensor::generate(dim, v, [&](const MultiIndex&) { return rng.uniform(-1.0, 1.0); });
}

// Symmetric metric Q^T diag(lambda) Q with eigenvalues of magnitude in
// [1, 1e3]; `indefinite` flips the sign of every other eigenvalue.
Tensor random_metric(Rng& rng, int dim, bool indefinite) {
  // Gram-Schmidt on random vectors gives an orthogonal basis.
  std::vector<std::vector<double>> q(static_cast<std::size_t>(dim), std::vector<double>(static_cast<std::size_t>(dim)));
  for (int a = 0; a < dim; ++a) {
    auto& v = q[static_cast<std::size_t>(a)];
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    for (int b = 0; b < a; ++b) {
      const auto& w = q[static_cast<std::size_t>(b)];
      double d = 0.0;
      for (int i = 0; i < dim; ++i) d += v[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
      for (int i = 0; i < dim; ++i) v[static_cast<std::size_t>(i)] -= d * w[static_cast<std::size_t>(i)];
    }
    double n = 0.0;
    for (double x : v) n += x * x;
    for (auto& x : v) x /= std::sqrt(n);
  }
  std::vector<double> lambda(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) {
    const double mag = std::pow(10.0, rng.uniform(0.0, 3.0));
    lambda[static_cast<std::size_t>(a)] = (indefinite && a % 2 == 1) ? -mag : mag;
  }
  return Tensor::generate(dim, {lo, lo}, [&](const MultiIndex& ix) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) {
      const auto& v = q[static_cast<std::size_t>(a)];
      s += lambda[static_cast<std::size_t>(a)] * v[static_cast<std::size_t>(ix[0])] * v[static_cast<std::size_t>(ix[1])];
    }
    return s;
  });
}

}  // namespace

TEST(Tensor, ComponentCountIsDimToTheRank) {
  for (int n = 1; n <= kMaxDim; ++n) {
    EXPECT_EQ(Tensor(n, {lo}).size(), static_cast<std::size_t>(n));
    EXPECT_EQ(Tensor(n, {lo, up, lo, lo}).size(), static_cast<std::size_t>(n * n * n * n));
  }
  EXPECT_EQ(Tensor().size(), 1u);
}

TEST(Tensor, RejectsRankAboveFourAndDimensionAboveEight) {
  EXPECT_THROW(Tensor(2, {lo, lo, lo, lo, lo}), Error);
  EXPECT_THROW(Tensor(9, {lo}), Error);
}

TEST(Tensor, RowMajorLayoutFollowsWrittenIndexOrder) {
  Tensor t(3, {lo, up, lo});
  t(1, 2, 0) = 7.0;
  EXPECT_EQ(t[(1 * 3 + 2) * 3 + 0], 7.0);
  const MultiIndex ix = t.index_of((1 * 3 + 2) * 3 + 0);
  EXPECT_EQ(ix[0], 1);
  EXPECT_EQ(ix[1], 2);
  EXPECT_EQ(ix[2], 0);
}

TEST(Tensor, TraceOfDeltaIsDimension) {
  for (int n = 1; n <= kMaxDim; ++n) EXPECT_EQ(contract(Tensor::delta(n), 0, 1).value(), n);
}

TEST(Tensor, ContractionRequiresOppositeVariance) {
  const Tensor t(3, {lo, lo});
  try {
    (void)contract(t, 0, 1);
    FAIL() << "expected a contract-variance error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::contract_variance);
  }
  EXPECT_THROW((void)contract(Tensor(3, {lo}), 0, Tensor(3, {lo}), 0), Error);
}

TEST(Tensor, ContractionDimensionMismatchIsShapeError) {
  try {
    (void)contract(Tensor(3, {lo}), 0, Tensor(4, {up}), 0);
    FAIL() << "expected a shape error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::shape);
  }
}

TEST(Tensor, AdditionRefusesVarianceMismatch) {
  EXPECT_THROW((void)(Tensor(3, {lo}) + Tensor(3, {up})), Error);
  EXPECT_THROW((void)(Tensor(3, {lo}) + Tensor(4, {lo})), Error);
}

TEST(Tensor, ContractionMatchesExplicitSums) {
  Rng rng(7);
  const Tensor a = random_tensor(rng, 4, {lo, up, lo});
  const Tensor b = random_tensor(rng, 4, {up, lo});
  const Tensor c = contract(a, 0, b, 0);  // (i, k, m) = a_n^i_k b^n_m
  ASSERT_EQ(c.rank(), 3);
  EXPECT_EQ(c.variance(0), up);
  EXPECT_EQ(c.variance(1), lo);
  EXPECT_EQ(c.variance(2), lo);
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      for (int m = 0; m < 4; ++m) {
        double s = 0.0;
        for (int n = 0; n < 4; ++n) s += a(n, i, k) * b(n, m);
        EXPECT_DOUBLE_EQ(c(i, k, m), s);
      }
  const Tensor tr = contract(a, 0, 1);
  for (int k = 0; k < 4; ++k) {
    double s = 0.0;
    for (int n = 0; n < 4; ++n) s += a(n, n, k);
    EXPECT_DOUBLE_EQ(tr[static_cast<std::size_t>(k)], s);
  }
}

TEST(Tensor, ContractionIsLinear) {
  Rng rng(11);
  const Tensor a = random_tensor(rng, 5, {lo, up, lo});
  const Tensor b = random_tensor(rng, 5, {lo, up, lo});
  const double alpha = 1.7, beta = -0.3;
  const Tensor lhs = contract(alpha * a + beta * b, 0, 1);
  const Tensor rhs = alpha * contract(a, 0, 1) + beta * contract(b, 0, 1);
  EXPECT_LT(max_abs_diff(lhs, rhs), 1e-14);
}

TEST(Tensor, DisjointContractionsCommuteExactly) {
  Rng rng(13);
  const Tensor t = random_tensor(rng, 4, {lo, up, up, lo});
  // Trace (0,1) then (the remaining pair) against trace (2,3) then (0,1).
  const double first = contract(contract(t, 0, 1), 0, 1).value();
  const double second = contract(contract(t, 2, 3), 0, 1).value();
  EXPECT_EQ(first, second);
}

TEST(Tensor, InverseContractsToDelta) {
  Rng rng(17);
  const Tensor g = random_metric(rng, 4, true);
  const Tensor gi = inverse(g);
  EXPECT_EQ(gi.variance(0), up);
  EXPECT_EQ(gi.variance(1), up);
  EXPECT_LT(max_abs_diff(contract(g, 1, gi, 0), Tensor::delta(4, lo)), 1e-12);
}

TEST(Tensor, SingularInverseThrows) { EXPECT_THROW((void)inverse(Tensor(3, {lo, lo})), Error); }

class RaiseLowerRoundTrip : public ::testing::TestWithParam<bool> {};

TEST_P(RaiseLowerRoundTrip, RestoresComponents) {
  Rng rng(GetParam() ? 101 : 103);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 7;
    const Tensor g = random_metric(rng, n, GetParam());
    const Tensor gi = inverse(g);
    const Tensor t = random_tensor(rng, n, {lo, up, lo});
    for (int axis = 0; axis < 3; ++axis) {
      const Tensor there = t.variance(axis) == lo ? raise(t, axis, gi) : lower(t, axis, g);
      EXPECT_NE(there.variance(axis), t.variance(axis));
      const Tensor back = there.variance(axis) == lo ? raise(there, axis, gi) : lower(there, axis, g);
      EXPECT_LT(relative_frobenius(back, t), 1e-12) << "n=" << n << " axis=" << axis;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Metrics, RaiseLowerRoundTrip, ::testing::Values(false, true),
                         [](const auto& info) { return info.param ? "Indefinite" : "Definite"; });

TEST(Tensor, PermuteMovesAxes) {
  Rng rng(19);
  const Tensor t = random_tensor(rng, 3, {lo, up, lo});
  const Tensor p = permute(t, {2, 0, 1});
  EXPECT_EQ(p.variance(0), lo);
  EXPECT_EQ(p.variance(1), lo);
  EXPECT_EQ(p.variance(2), up);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) EXPECT_EQ(p(c, a, b), t(a, b, c));
}

TEST(Tensor, OuterProductAndNorms) {
  const Tensor a = Tensor::covector({1.0, 2.0});
  const Tensor b = Tensor::vector({3.0, -4.0});
  const Tensor o = outer(a, b);
  EXPECT_EQ(o(1, 1), -8.0);
  EXPECT_EQ(max_abs(o), 8.0);
  EXPECT_DOUBLE_EQ(frobenius(b), 5.0);
  EXPECT_EQ(relative_frobenius(Tensor(2, {lo}), Tensor(2, {lo})), 0.0);
}

TEST(Jet2, ProductAndQuotientRules) {
  const Jet2 x = Jet2::variable(0.7);
  const Jet2 f = x * x * x / (Jet2(1.0) + x);
  // f = x^3/(1+x); compare against order-4 differences of the value channel.
  auto val = [](double t) { return t * t * t / (1.0 + t); };
  EXPECT_NEAR(f.d1, fd_derivative(val, 0.7, 1e-3), 1e-10);
  EXPECT_NEAR(f.d2, fd_second_derivative(val, 0.7, 1e-3), 1e-7);
}

TEST(Jet2, ElementaryFunctionsMatchFiniteDifferences) {
  const double x0 = 1.3;
  const Jet2 x = Jet2::variable(x0);
  const Jet2 f = sqrt(x) * exp(-x) + log(x) * pow(x, -2);
  auto val = [](double t) { return std::sqrt(t) * std::exp(-t) + std::log(t) / (t * t); };
  EXPECT_NEAR(f.value, val(x0), 1e-15);
  EXPECT_NEAR(f.d1, fd_derivative(val, x0, 1e-3), 1e-10);
  EXPECT_NEAR(f.d2, fd_second_derivative(val, x0, 1e-3), 1e-7);
}

TEST(FiniteDifference, GradientOfRadiusIsRadialCovector) {
  const Tensor x = Tensor::vector({0.4, 3.0, 4.0, 0.0});
  auto radius = [](const Tensor& p) { return std::sqrt(p[1] * p[1] + p[2] * p[2] + p[3] * p[3]); };
  const Tensor grad = fd_gradient(radius, x, DiffConfig{});
  EXPECT_EQ(grad.variance(0), lo);
  EXPECT_NEAR(grad[0], 0.0, 1e-12);
  EXPECT_NEAR(grad[1], 0.6, 1e-10);
  EXPECT_NEAR(grad[2], 0.8, 1e-10);
  EXPECT_NEAR(grad[3], 0.0, 1e-12);
}

TEST(FiniteDifference, GradientOfConstantVanishes) {
  const Tensor x = Tensor::vector({1.0, 2.0, 3.0});
  const Tensor grad = fd_gradient([](const Tensor&) { return 4.2; }, x, DiffConfig{});
  EXPECT_EQ(max_abs(grad), 0.0);
}

TEST(FiniteDifference, NonFiniteStencilValueThrows) {
  const Tensor x = Tensor::vector({0.0, 0.0});
  auto f = [](const Tensor& p) { return 1.0 / p[0]; };
  try {
    (void)fd_gradient(f, x, DiffConfig{});
    FAIL() << "expected a stencil-evaluation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::stencil_evaluation);
  }
}

TEST(FiniteDifference, OrderFourBeatsOrderTwo) {
  auto f = [](double t) { return std::sin(3.0 * t); };
  const double exact = 3.0 * std::cos(1.5);
  const double e2 = std::abs(fd_derivative(f, 0.5, 1e-3, 2) - exact);
  const double e4 = std::abs(fd_derivative(f, 0.5, 1e-3, 4) - exact);
  EXPECT_LT(e4, e2 * 1e-3);
}

TEST(FiniteDifference, FieldGradientPrependsCovariantAxis) {
  const Tensor x = Tensor::vector({1.0, 2.0});
  auto field = [](const Tensor& p) { return Tensor::vector({p[0] * p[1], p[1] * p[1]}); };
  const Tensor d = fd_field_gradient(field, x, DiffConfig{});
  ASSERT_EQ(d.rank(), 2);
  EXPECT_EQ(d.variance(0), lo);
  EXPECT_EQ(d.variance(1), up);
  EXPECT_NEAR(d(0, 0), 2.0, 1e-9);  // d/dx0 (x0 x1)
  EXPECT_NEAR(d(1, 0), 1.0, 1e-9);
  EXPECT_NEAR(d(0, 1), 0.0, 1e-9);
  EXPECT_NEAR(d(1, 1), 4.0, 1e-9);
}

TEST(DiffConfig, ValidatesStepAndOrder) {
  DiffConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.fd_step = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = DiffConfig{};
  cfg.fd_order = 3;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(ToleranceProfile, RejectsUnknownClassesAndNonPositiveValues) {
  ToleranceProfile t;
  EXPECT_EQ(t.get("algebraic"), 1e-10);
  EXPECT_THROW(t.set("nope", 1e-3), Error);
  EXPECT_THROW(t.set("jet", 0.0), Error);
  t.set("jet", 1e-6);
  EXPECT_EQ(t.get("jet"), 1e-6);
}
