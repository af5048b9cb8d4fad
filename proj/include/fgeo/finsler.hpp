#pragma once

#include <string>
#include <vector>

#include "fgeo/diff.hpp"
#include "fgeo/riemann.hpp"

namespace fgeo {

/// (x, y)-local Finsleroid quantities over the Riemannian state at x:
///   y_i = a_ij y^j, S^2 = y_i y^i, b = b_i y^i, q = sqrt(S^2 - b^2),
///   v_i = y_i - b b_i, v^i = y^i - b b^i, nu = q + g (1 - c^2) b,
///   nu_k = v_k / q + (1 - c^2) g b_k,
///   r^i_k = delta^i_k - b^i b_k, r_km = a_km - b_k b_m,
///   eta_km = r_km - v_k v_m / q^2,
///   s_k = y^h nabla_k b_h, (ys) = y^j s_j, sigma = b^m s_m, (yc) = y^i c_i,
///   e_k = (b / q^2) v_k - b_k.
struct FinsleroidState {
  Tensor x;
  Tensor y;
  double g = 0.0;
  double c = 1.0;
  double b = 0.0;
  double S2 = 0.0;
  double q = 0.0;
  double nu = 0.0;
  double ys = 0.0;
  double sigma = 0.0;
  double yc = 0.0;
  Tensor y_lower;
  Tensor v_lower;
  Tensor v_upper;
  Tensor nu_lower;
  Tensor r_mixed;  // r^i_k stored (i, k)
  Tensor r_lower;
  Tensor eta;
  Tensor s_lower;
  Tensor e_lower;
};

// Throws degenerate-fiber when q^2 <= 0 (y along the axis or outside the
// space-like sector) and outside-admissible-cone when nu <= 0.
FinsleroidState kinematics(const MetricState& s, const Tensor& y, double g);

// G^i = (g/nu)(ys) v^i + a^i_km y^k y^m.
Tensor spray(const MetricState& s, const Tensor& y, double g);
// a^i_km y^k y^m, the g = 0 geodesic spray.
Tensor riemannian_spray(const MetricState& s, const Tensor& y);

struct SprayDerivatives {
  Tensor first;          // G^i_k from exact y-jets, stored (i, k)
  Tensor second;         // G^i_km from exact y-jets, stored (i, k, m)
  Tensor first_closed;   // closed form in nu_k, s_k, r^i_k
  Tensor second_closed;  // differentiated closed form (diagnostic)
  Tensor first_fd;       // central differences of the spray in y
  Tensor second_fd;      // central differences of `first` in y
  double fd_step_used = 0.0;  // relative y-step after any cone retry
};

// Relative disagreement max|a - b| / max(1, max|b|).
double relative_max_diff(const Tensor& a, const Tensor& b);

// y-steps are cfg.fd_step * |y|. A stencil point that leaves the admissible
// cone shrinks the step tenfold once; a second failure is a cone-stencil
// error.
SprayDerivatives spray_derivatives(const MetricState& s, const Tensor& y, double g, const DiffConfig& cfg);

struct CurvatureBundle {
  Tensor k2r;           // K^2 R^i_k with exact y-jets and x-differences, (i, k)
  Tensor k2r_fd;        // the same assembly with every derivative by differences
  Tensor y_contraction; // y^k K^2 R^i_k
  // max|L - L^T| / max|L| for L_ik = a_ij K^2 R^j_k; lowered with the
  // Riemannian metric since the Finsler metric tensor is not available.
  double lowered_asymmetry = 0.0;
};

// K^2 R^i_k = 2 dG'^i/dx^k - G'^i_j G'^j_k - y^j d G'^i_k/dx^j + 2 G'^j G'^i_kj
// with G' = G/2. x-steps are cfg.fd_step * r (nested_step * r where a
// difference is taken of differences).
CurvatureBundle hh_curvature(const Geometry& geom, const Tensor& x, const Tensor& y, double g, const DiffConfig& cfg);

// Identity residuals of the kinematic quantities at one (x, y), each scaled
// by max(1, largest term). Derivatives are exact y-jets.
std::vector<NamedResidual> finsler_identity_residuals(const MetricState& s, const Tensor& y, double g);

// Residuals of the spray at one sample.
struct SprayConsistency {
  double homogeneity = 0.0;      // y^k G^i_k - 2 G^i
  double scaling = 0.0;          // G(2y) - 4 G(y)
  double closed_vs_numeric = 0.0;  // first_closed against first_fd and first
  double closed_second_vs_numeric = 0.0;  // second_closed against second (diagnostic)
  double jet_vs_fd = 0.0;        // first against first_fd
  double collapse = 0.0;         // g = 0 spray and G^i_k against the Riemannian ones
};

SprayConsistency spray_consistency(const MetricState& s, const Tensor& y, double g, const DiffConfig& cfg);

// With g = 0: dq/dx^k - G'^j_k dq/dy^j + (1/q) b s_k, the horizontal
// derivative of q against its closed form. Returns max over k, scaled by
// max(1, |b s|/q).
double horizontal_q_residual(const Geometry& geom, const Tensor& x, const Tensor& y, const DiffConfig& cfg);

}  // namespace fgeo
