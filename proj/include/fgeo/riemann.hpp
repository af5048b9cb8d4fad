#pragma once

#include <string>
#include <vector>

#include "fgeo/diff.hpp"
#include "fgeo/frame.hpp"
#include "fgeo/profiles.hpp"
#include "fgeo/tensor.hpp"

namespace fgeo {

/// Point-local Riemannian quantities of the metric
///   a_ij = (1/c^2) b_i b_j + m u_ij,   b_i = e_i,   c = c(r), m = m(r).
struct MetricState {
  Tensor x;
  double r = 0.0;
  ProfilePair profiles;
  Tensor n_lower;      // n_i = u_ij x^j / r = dr/dx^i
  Tensor n_upper;      // n^i = u^ij n_j
  Tensor a_lower;      // a_ij
  Tensor a_upper;      // a^ij
  Tensor b_lower;      // b_i
  Tensor b_upper;      // b^i = a^ij b_j
  Tensor c_lower;      // c_i = c' n_i
  Tensor c_upper;      // c^i = a^ij c_j
  Tensor christoffel;  // a^k_ij stored as (k, i, j)
  Tensor u_lower;      // u_ij, u^ij and u_i^j copied from the frame
  Tensor u_upper;
  Tensor u_mixed;

  int dim() const noexcept { return x.dim(); }
  double c() const noexcept { return profiles.c.value; }
  double m() const noexcept { return profiles.m.value; }
};

/// Frame plus radial profiles; evaluates the metric family at any point.
class Geometry {
 public:
  Geometry(Frame frame, ProfileKind profile);

  // Throws radial-singularity at r = 0 and propagates profile domain errors.
  MetricState state_at(const Tensor& x) const;
  Tensor metric_at(const Tensor& x) const;

  const Frame& frame() const noexcept { return frame_; }
  const ProfileKind& profile() const noexcept { return profile_; }
  int dim() const noexcept { return frame_.dim(); }

 private:
  Frame frame_;
  ProfileKind profile_;
};

// Closed-form Christoffel symbols a^k_ij from the profile derivatives.
Tensor christoffel_closed(const MetricState& s);

// (1/2) a^kn (d_i a_nj + d_j a_ni - d_n a_ij) with the metric differentiated
// by central differences.
Tensor christoffel_definitional(const Geometry& g, const Tensor& x, const DiffConfig& cfg);

struct CovariantDerivative {
  Tensor closed;
  Tensor definitional;
  double residual() const { return max_abs_diff(closed, definitional); }
};

// nabla_i b_j = (1/c)(c_i b_j + c_j b_i).
Tensor nabla_b_closed(const MetricState& s);
// nabla_i c_j expressed through c', c'', m, m'.
Tensor nabla_c_closed(const MetricState& s);

// Closed form against d_i X_j - X_n a^n_ij (finite-difference metric and field).
CovariantDerivative nabla_b(const Geometry& g, const Tensor& x, const DiffConfig& cfg);
CovariantDerivative nabla_c(const Geometry& g, const Tensor& x, const DiffConfig& cfg);

// y^i y^j nabla_i b_j - (2/c) b (yc); vanishes identically.
double nabla_b_bilinear_residual(const MetricState& s, const Tensor& y);

// Curvature a_n^i_km, stored (n, i, k, m), with
//   a_n^i_km = d_k a^i_nm - d_m a^i_nk + a^u_nm a^i_uk - a^u_nk a^i_um.
// Frame form: blocks built from u_ij, u_i^j, n, b.
Tensor curvature_frame_form(const MetricState& s);
// Same tensor with u eliminated from the leading block in favour of a_ij and
// delta.
Tensor curvature_closed(const MetricState& s);
// Definition applied to closed-form Christoffels differentiated by central
// differences (steps scaled by r).
Tensor curvature_oracle(const Geometry& g, const Tensor& x, const DiffConfig& cfg);

struct RicciDecomposition {
  Tensor ricci;  // a_n^i_im, stored (n, m)
  RicciScalars scalars;
};

RicciDecomposition ricci_closed(const MetricState& s);

// a_n^i_im: trace of the upper index against the first derivative index.
Tensor ricci_contraction(const Tensor& curvature);

// a_{n j k m} = a_ji a_n^i_km, stored (n, j, k, m).
Tensor lower_curvature(const Tensor& curvature, const Tensor& a_lower);

// a_n^i_km y^n y^m, stored (i, k).
Tensor flag_curvature(const Tensor& curvature, const Tensor& y);

struct NamedResidual {
  std::string name;
  double residual = 0.0;
};

// Algebraic identities of the frame and metric state (orthogonality, norms,
// inverse).
std::vector<NamedResidual> frame_identity_residuals(const MetricState& s);

}  // namespace fgeo
