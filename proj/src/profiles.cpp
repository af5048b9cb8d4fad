#include "fgeo/profiles.hpp"

#include <cmath>
#include <sstream>

#include "fgeo/error.hpp"

namespace fgeo {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

Jet2 horner(const std::vector<double>& coeffs, const Jet2& u) {
  Jet2 acc(0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u + Jet2(*it);
  return acc;
}

// Radial jets of y(s(r)) given y, y', y'' in s = xi/(4r); this is the
// substitution c' = -(xi/4r^2) y', c'' = (xi/2r^3) y' + (xi^2/16r^4) y''.
Jet2 through_inverse_radius(double xi, double r, double y, double dy, double d2y) {
  const double r2 = r * r;
  return {y, -xi / (4.0 * r2) * dy, xi / (2.0 * r2 * r) * dy + xi * xi / (16.0 * r2 * r2) * d2y};
}

ProfilePair eval_schwarzschild(const SchwarzschildIsotropic& p, double r) {
  const double s = p.xi / (4.0 * r);
  const double one_minus = 1.0 - s;
  const double one_plus = 1.0 + s;
  const Jet2 c = through_inverse_radius(p.xi, r, one_plus / one_minus, 2.0 / (one_minus * one_minus),
                                        4.0 / (one_minus * one_minus * one_minus));
  const double z = p.m_sign * std::pow(one_plus, 4);
  const Jet2 m = through_inverse_radius(p.xi, r, z, 4.0 * p.m_sign * std::pow(one_plus, 3),
                                        12.0 * p.m_sign * one_plus * one_plus);
  return {c, m};
}

ProfilePair eval_rational(const RationalProfile& p, double r) {
  const Jet2 u = reciprocal(Jet2::variable(r));
  return {horner(p.c_num, u) / horner(p.c_den, u), horner(p.m_num, u) / horner(p.m_den, u)};
}

}  // namespace

std::string profile_name(const ProfileKind& kind) {
  return std::visit(overloaded{[](const ConstantProfile&) { return std::string("constant"); },
                               [](const SchwarzschildIsotropic&) { return std::string("schwarzschild_isotropic"); },
                               [](const RationalProfile&) { return std::string("rational"); }},
                    kind);
}

RadialDomain profile_domain(const ProfileKind& kind) {
  return std::visit(overloaded{[](const ConstantProfile&) { return RadialDomain{}; },
                               [](const SchwarzschildIsotropic& p) { return RadialDomain{p.xi / 4.0}; },
                               [](const RationalProfile& p) { return RadialDomain{p.r_min, p.r_max}; }},
                    kind);
}

void validate_profile(const ProfileKind& kind) {
  std::visit(overloaded{
                 [](const ConstantProfile& p) {
                   if (!(p.c0 > 0.0)) throw Error(ErrorCode::validation, "c0 must be > 0");
                   if (p.m0 == 0.0 || !std::isfinite(p.m0)) throw Error(ErrorCode::validation, "m0 must be nonzero");
                 },
                 [](const SchwarzschildIsotropic& p) {
                   if (!(p.xi > 0.0) || !std::isfinite(p.xi)) throw Error(ErrorCode::validation, "xi must be > 0");
                   if (p.m_sign != 1.0 && p.m_sign != -1.0) {
                     throw Error(ErrorCode::validation, "m_sign must be +1 or -1");
                   }
                 },
                 [](const RationalProfile& p) {
                   if (p.c_num.empty() || p.c_den.empty() || p.m_num.empty() || p.m_den.empty()) {
                     throw Error(ErrorCode::validation, "rational coefficient lists must be non-empty");
                   }
                   if (!(p.r_min >= 0.0) || !(p.r_max > p.r_min)) {
                     throw Error(ErrorCode::validation, "rational domain requires 0 <= r_min < r_max");
                   }
                 },
             },
             kind);
}

ProfilePair eval_profiles(const ProfileKind& kind, double r) {
  const RadialDomain dom = profile_domain(kind);
  if (!std::isfinite(r) || !dom.contains(r)) {
    if (std::holds_alternative<SchwarzschildIsotropic>(kind)) {
      throw Error(ErrorCode::domain, "r = " + fmt(r) + " is not beyond the pole of c at r = xi/4 = " + fmt(dom.lower));
    }
    throw Error(ErrorCode::domain,
                "r = " + fmt(r) + " outside profile domain (" + fmt(dom.lower) + ", " + fmt(dom.upper) + ")");
  }
  const ProfilePair p = std::visit(
      overloaded{[](const ConstantProfile& k) { return ProfilePair{Jet2::constant(k.c0), Jet2::constant(k.m0)}; },
                 [r](const SchwarzschildIsotropic& k) { return eval_schwarzschild(k, r); },
                 [r](const RationalProfile& k) { return eval_rational(k, r); }},
      kind);
  if (!(p.c.value > 0.0)) throw Error(ErrorCode::domain, "c(r) = " + fmt(p.c.value) + " is not positive at r = " + fmt(r));
  if (p.m.value == 0.0 || !std::isfinite(p.m.value)) {
    throw Error(ErrorCode::domain, "m(r) vanishes or is not finite at r = " + fmt(r));
  }
  return p;
}

ComboScalars combo_scalars(const ProfilePair& p, double r) {
  const double c = p.c.value, c1 = p.c.d1, c2 = p.c.d2;
  const double m = p.m.value, m1 = p.m.d1, m2 = p.m.d2;
  const double lc = c1 / c;
  const double lm = m1 / m;
  ComboScalars s;
  s.A = c2 / c - 2.0 * lc * lc - lc / r;
  s.B = (m2 - m1 / r - 1.5 * m1 * m1 / m) / m;
  s.C = lm * (0.25 * lm + 1.0 / r);
  s.D = 0.5 * lc * (lm + 2.0 / r);
  s.E = lc * lm;
  return s;
}

ComboScalars combo_scalars(const ProfileKind& kind, double r) { return combo_scalars(eval_profiles(kind, r), r); }

RicciScalars ricci_scalars(const ComboScalars& s, int dim) {
  const double n = static_cast<double>(dim);
  return {-(n - 2.0) * s.C - 0.5 * s.B + s.D, (s.A - s.E) + s.D * (n - 1.0), (s.A - s.E) - 0.5 * s.B * (n - 3.0)};
}

}  // namespace fgeo
