#pragma once

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "fgeo/jet.hpp"

namespace fgeo {

// c = c0, m = m0 everywhere: the flat (pseudo-)Euclidean background when c0 = 1.
struct ConstantProfile {
  double c0 = 1.0;
  double m0 = -1.0;
};

// Isotropic Schwarzschild pair with s = xi / (4 r):
//   c = (1 + s) / (1 - s),   m = m_sign * (1 + s)^4.
// m_sign = -1 is the relativistic case; +1 gives its positive-definite
// (Euclidean-signature) continuation. Valid for r > xi / 4.
struct SchwarzschildIsotropic {
  double xi = 1.0;
  double m_sign = -1.0;
};

// c and m as ratios of polynomials in 1/r:
//   c = sum_k c_num[k] r^-k / sum_k c_den[k] r^-k, likewise for m,
// on the declared interval (r_min, r_max).
struct RationalProfile {
  std::vector<double> c_num{1.0};
  std::vector<double> c_den{1.0};
  std::vector<double> m_num{1.0};
  std::vector<double> m_den{1.0};
  double r_min = 0.0;
  double r_max = std::numeric_limits<double>::infinity();
};

using ProfileKind = std::variant<ConstantProfile, SchwarzschildIsotropic, RationalProfile>;

// Open interval of admissible radii.
struct RadialDomain {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  bool contains(double r) const { return r > lower && r < upper; }
};

// c(r) and m(r) with first and second radial derivatives.
struct ProfilePair {
  Jet2 c;
  Jet2 m;
};

// The recurring combinations of profile derivatives:
//   A = c''/c - 2 (c'/c)^2 - c'/(r c)
//   B = (1/m) (m'' - m'/r - (3/2) m'^2 / m)
//   C = (m'/m) ((1/4) m'/m + 1/r)
//   D = (1/2) (c'/c) (m'/m + 2/r)
// plus the cross term E = (c'/c)(m'/m) that enters the Ricci scalars.
struct ComboScalars {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
  double E = 0.0;
};

// Coefficients of the Ricci decomposition
//   Ric_nm = n1 u_nm + (1/c^2)(1/m) n2 b_m b_n + n3 n_m n_n.
struct RicciScalars {
  double n1 = 0.0;
  double n2 = 0.0;
  double n3 = 0.0;
};

std::string profile_name(const ProfileKind& kind);
RadialDomain profile_domain(const ProfileKind& kind);

// Validates parameters (xi > 0, m_sign = +-1, non-empty coefficient lists,
// c0 > 0, m0 != 0); throws ErrorCode::validation.
void validate_profile(const ProfileKind& kind);

// Throws ErrorCode::domain outside the declared interval, or where c <= 0 or
// m == 0.
ProfilePair eval_profiles(const ProfileKind& kind, double r);

ComboScalars combo_scalars(const ProfileKind& kind, double r);
ComboScalars combo_scalars(const ProfilePair& p, double r);

RicciScalars ricci_scalars(const ComboScalars& s, int dim);

}  // namespace fgeo
