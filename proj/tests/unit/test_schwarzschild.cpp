#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "fgeo/schwarzschild.hpp"

using namespace fgeo;

namespace {

MetricState state(double xi, double r, int dim = 4, int signature = -1) {
  const Geometry g(Frame::standard(dim, signature), SchwarzschildIsotropic{xi, static_cast<double>(signature)});
  return g.state_at(vacuum_probe_point(dim, r));
}

}  // namespace

TEST(Prefactor, AtUnitRadius) { EXPECT_NEAR(curvature_prefactor(1.0, 1.0), 0.32, 1e-15); }

TEST(Prefactor, ScalesAsInverseSquare) {
  for (double lambda : {0.5, 2.0}) {
    EXPECT_NEAR(curvature_prefactor(lambda, lambda * 1.7) * lambda * lambda, curvature_prefactor(1.0, 1.7), 1e-15);
  }
}

TEST(ReducedCurvature, MatchesClosedFormAtUnitRadius) {
  const MetricState s = state(1.0, 1.0);
  const Tensor closed = curvature_closed(s);
  EXPECT_LT(relative_frobenius(reduced_curvature(s, 1.0), closed), 1e-12);
  EXPECT_LT(relative_frobenius(reduced_curvature_expanded(s, 1.0), closed), 1e-12);
}

TEST(ReducedCurvature, MatchesClosedFormAcrossRadiiAndCharges) {
  for (double xi : {0.5, 1.0, 3.0}) {
    for (double r : {0.3, 1.0, 4.0, 25.0}) {
      if (r <= xi / 4.0) continue;
      for (int sig : {-1, 1}) {
        const MetricState s = state(xi, r * xi, 4, sig);
        EXPECT_LT(relative_frobenius(reduced_curvature(s, xi), curvature_closed(s)), 1e-12);
      }
    }
  }
}

TEST(ReducedCurvature, RequiresFourDimensions) {
  EXPECT_THROW((void)reduced_curvature(state(1.0, 1.0, 5), 1.0), Error);
}

TEST(ReducedCurvature, VanishesInTheFlatLimit) {
  const MetricState s = state(1e-8, 1.0);
  EXPECT_LT(max_abs(curvature_closed(s)), 1e-7);
  EXPECT_LT(max_abs(reduced_curvature(s, 1e-8)), 1e-7);
}

TEST(Contractions, AxisLastAtUnitRadius) {
  const ContractionResiduals c = contraction_identities(state(1.0, 1.0), 1.0, vacuum_probe_fiber(4));
  EXPECT_LT(c.axis_last, 1e-9);
}

TEST(Contractions, AxisFirstAtRadiusThreeHalfCharge) {
  const ContractionResiduals c = contraction_identities(state(0.5, 3.0), 0.5, vacuum_probe_fiber(4));
  EXPECT_LT(c.axis_first, 1e-9);
}

TEST(Contractions, MixedIdentityNeedsTheNormalizedCoefficient) {
  const ContractionResiduals c = contraction_identities(state(1.0, 1.0), 1.0, vacuum_probe_fiber(4));
  EXPECT_LT(c.mixed_normalized, 1e-9);
  EXPECT_GT(c.mixed_literal, 1e-3);  // c = 5/3 here
}

TEST(Contractions, MixedIdentityAlongTheAxisDirection) {
  // y = b^i / c^2 has b = 1; both sides collapse consistently.
  const MetricState s = state(1.0, 2.0);
  const Tensor y = s.b_upper / (s.c() * s.c());
  const ContractionResiduals c = contraction_identities(s, 1.0, y);
  EXPECT_LT(c.mixed_normalized, 1e-9);
}

TEST(VerifyVacuum, PassesInFourDimensions) {
  const auto start = std::chrono::steady_clock::now();
  const VacuumReport rep = verify_vacuum(1.0, {0.5, 1.0, 2.0, 5.0, 10.0}, 4, DiffConfig{});
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_TRUE(rep.pass());
  ASSERT_EQ(rep.radii.size(), 5u);
  for (const VacuumRadius& v : rep.radii) {
    EXPECT_LT(v.ricci_max, 1e-9);
    EXPECT_LT(std::abs(v.n1), 1e-10);
    EXPECT_LT(std::abs(v.n2), 1e-10);
    EXPECT_LT(std::abs(v.n3), 1e-10);
    EXPECT_LT(v.closed_vs_oracle, 1e-6) << "r=" << v.r;
  }
  EXPECT_LT(seconds, 1.0);
}

TEST(VerifyVacuum, FailsInFiveDimensions) {
  const VacuumReport rep = verify_vacuum(1.0, {1.0}, 5, DiffConfig{});
  EXPECT_FALSE(rep.pass());
  EXPECT_NEAR(rep.radii[0].n1, 0.64, 1e-13);
  EXPECT_NEAR(rep.radii[0].n2, -0.32, 1e-13);
  EXPECT_NEAR(rep.radii[0].n3, -0.96, 1e-13);
  EXPECT_FALSE(rep.radii[0].reduced_vs_closed.has_value());
}

TEST(VerifyVacuum, ParallelEvaluationIsIdentical) {
  const std::vector<double> radii{0.5, 1.0, 2.0, 5.0, 10.0};
  const VacuumReport a = verify_vacuum(1.0, radii, 4, DiffConfig{}, false);
  const VacuumReport b = verify_vacuum(1.0, radii, 4, DiffConfig{}, true);
  for (std::size_t j = 0; j < radii.size(); ++j) {
    EXPECT_EQ(a.radii[j].ricci_max, b.radii[j].ricci_max);
    EXPECT_EQ(a.radii[j].closed_vs_oracle, b.radii[j].closed_vs_oracle);
  }
}

TEST(VerifyVacuum, RadiusInsideThePoleIsADomainError) {
  try {
    (void)verify_vacuum(1.0, {0.2}, 4, DiffConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::domain);
  }
}
