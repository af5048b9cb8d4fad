#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fgeo/diff.hpp"
#include "fgeo/riemann.hpp"

namespace fgeo {

// (2/r^2) (xi/4r) / (1 + xi/4r)^2: the overall factor of the reduced
// curvature at N = 4.
double curvature_prefactor(double xi, double r);

// Curvature of the isotropic Schwarzschild pair at N = 4 in the reduced form
// with (u_k^i - 3 n_k n^i) blocks. `s` must come from SchwarzschildIsotropic
// with parameter `xi`.
Tensor reduced_curvature(const MetricState& s, double xi);
// The same tensor before the n-b block is folded into the b-b block.
Tensor reduced_curvature_expanded(const MetricState& s, double xi);

/// Residuals of the axis contractions of the N = 4 Schwarzschild curvature.
/// Each is max|lhs - rhs| in units of 1/r^2.
struct ContractionResiduals {
  double axis_last = 0.0;   // b^m a_n^i_km
  double axis_first = 0.0;  // b^n a_n^i_km
  // (b b^m b^n - b^m y^n - b^n y^m) a_n^i_km against the compact right-hand
  // side; holds only where c = 1.
  double mixed_literal = 0.0;
  // Same identity with the leading coefficient (b/c^2) b^m b^n, for which the
  // right-hand side is exact.
  double mixed_normalized = 0.0;
};

ContractionResiduals contraction_identities(const MetricState& s, double xi, const Tensor& y);

struct VacuumRadius {
  double r = 0.0;
  double ricci_max = 0.0;  // max |a_n^i_im| * r^2, from the closed curvature
  double n1 = 0.0;         // n1 * r^2, likewise n2, n3
  double n2 = 0.0;
  double n3 = 0.0;
  double closed_vs_oracle = 0.0;  // relative Frobenius
  std::optional<double> reduced_vs_closed;  // N = 4 only; relative Frobenius
  std::optional<ContractionResiduals> contractions;  // N = 4 only
};

struct VacuumCheck {
  std::string name;
  std::string tolerance_class;
  std::vector<double> values;  // one per radius
  double worst = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VacuumReport {
  double xi = 1.0;
  int dim = 4;
  std::vector<VacuumRadius> radii;
  std::vector<VacuumCheck> checks;

  bool pass() const;
};

// Runs the Schwarzschild profiles through the Riemannian pipeline at each
// radius (point in a fixed generic direction) and grades the residuals with
// the tolerance classes of `cfg`: vacuum_ricci, algebraic (n1..n3),
// curvature (oracle), jet (reduced form), contraction.
VacuumReport verify_vacuum(double xi, const std::vector<double>& radii, int dim, const DiffConfig& cfg,
                           bool parallel = false, int signature = -1);

// Point of the standard chart at radius r used by verify_vacuum, and the
// fiber vector used for the mixed contraction.
Tensor vacuum_probe_point(int dim, double r);
Tensor vacuum_probe_fiber(int dim);

}  // namespace fgeo
