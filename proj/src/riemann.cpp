#include "fgeo/riemann.hpp"

#include <cmath>
#include <utility>

namespace fgeo {

namespace {

constexpr Variance lo = Variance::lower;
constexpr Variance up = Variance::upper;

double kron(int a, int b) { return a == b ? 1.0 : 0.0; }

double relative_to(double residual, double scale) { return residual / std::max(1.0, std::abs(scale)); }

}  // namespace

Geometry::Geometry(Frame frame, ProfileKind profile) : frame_(std::move(frame)), profile_(std::move(profile)) {
  validate_profile(profile_);
}

MetricState Geometry::state_at(const Tensor& x) const {
  if (x.rank() != 1 || x.variance(0) != up || x.dim() != dim()) {
    throw Error(ErrorCode::shape, "point must be a contravariant vector of the frame dimension");
  }
  MetricState s;
  s.x = x;
  s.r = frame_.radius(x);
  if (!(s.r > 1e-12 * default_step_scale(x))) {
    throw Error(ErrorCode::radial_singularity, "r = 0: the radial direction is undefined at the center");
  }
  s.profiles = eval_profiles(profile_, s.r);
  const double c = s.c(), m = s.m(), dc = s.profiles.c.d1;

  s.u_lower = frame_.transverse_lower();
  s.u_upper = frame_.transverse_upper();
  s.u_mixed = frame_.transverse_mixed();
  s.n_lower = contract(s.u_lower, 1, x, 0) / s.r;
  s.n_upper = contract(s.u_upper, 1, s.n_lower, 0);

  s.b_lower = frame_.axis_lower();
  s.b_upper = c * c * frame_.axis_upper();
  s.a_lower = outer(s.b_lower, s.b_lower) / (c * c) + m * s.u_lower;
  s.a_upper = outer(s.b_upper, s.b_upper) / (c * c) + s.u_upper / m;
  s.c_lower = dc * s.n_lower;
  s.c_upper = (dc / m) * s.n_upper;
  s.christoffel = christoffel_closed(s);
  return s;
}

Tensor Geometry::metric_at(const Tensor& x) const {
  const double r = frame_.radius(x);
  if (!(r > 1e-12 * default_step_scale(x))) {
    throw Error(ErrorCode::radial_singularity, "r = 0: the radial direction is undefined at the center");
  }
  const ProfilePair p = eval_profiles(profile_, r);
  const double c = p.c.value;
  return outer(frame_.axis_lower(), frame_.axis_lower()) / (c * c) + p.m.value * frame_.transverse_lower();
}

Tensor christoffel_closed(const MetricState& s) {
  const double c = s.c(), c1 = s.profiles.c.d1;
  const double m = s.m(), m1 = s.profiles.m.d1;
  const double c3 = c * c * c;
  const Tensor& bl = s.b_lower;
  const Tensor& bu = s.b_upper;
  const Tensor& nl = s.n_lower;
  const Tensor& nu = s.n_upper;
  const Tensor& um = s.u_mixed;
  const Tensor& ul = s.u_lower;
  return Tensor::generate(s.dim(), {up, lo, lo}, [&](const MultiIndex& ix) {
    const int k = ix[0], i = ix[1], j = ix[2];
    return -(c1 / c3) * bu[k] * (nl[i] * bl[j] + nl[j] * bl[i]) +
           (0.5 / m) * (m1 * nl[i] * um(j, k) + m1 * nl[j] * um(i, k) +
                        nu[k] * ((2.0 * c1 / c3) * bl[i] * bl[j] - m1 * ul(i, j)));
  });
}

Tensor christoffel_definitional(const Geometry& g, const Tensor& x, const DiffConfig& cfg) {
  const MetricState s = g.state_at(x);
  const Tensor da = fd_field_gradient([&](const Tensor& p) { return g.metric_at(p); }, x, cfg, s.r);
  // first kind: [ij, n] = (1/2)(d_i a_nj + d_j a_ni - d_n a_ij), stored (n, i, j)
  const Tensor first = Tensor::generate(s.dim(), {lo, lo, lo}, [&](const MultiIndex& ix) {
    const int n = ix[0], i = ix[1], j = ix[2];
    return 0.5 * (da(i, n, j) + da(j, n, i) - da(n, i, j));
  });
  return contract(s.a_upper, 1, first, 0);
}

Tensor nabla_b_closed(const MetricState& s) {
  const Tensor cb = outer(s.c_lower, s.b_lower);
  return (cb + permute(cb, {1, 0})) / s.c();
}

Tensor nabla_c_closed(const MetricState& s) {
  const double c = s.c(), c1 = s.profiles.c.d1, c2 = s.profiles.c.d2;
  const double m = s.m(), m1 = s.profiles.m.d1;
  const double r = s.r;
  const Tensor& nl = s.n_lower;
  const Tensor& bl = s.b_lower;
  const Tensor& ul = s.u_lower;
  return Tensor::generate(s.dim(), {lo, lo}, [&](const MultiIndex& ix) {
    const int i = ix[0], j = ix[1];
    const double nn = nl[i] * nl[j];
    return c2 * nn + (c1 / r) * (ul(i, j) - nn) -
           (0.5 / m) * c1 * (2.0 * m1 * nn + (2.0 / (c * c * c)) * c1 * bl[i] * bl[j] - m1 * ul(i, j));
  });
}

namespace {

CovariantDerivative covariant_derivative_of(const Geometry& g, const Tensor& x, const DiffConfig& cfg,
                                            Tensor (*field)(const MetricState&), Tensor closed) {
  const MetricState s = g.state_at(x);
  const Tensor gamma = christoffel_definitional(g, x, cfg);
  const Tensor partial = fd_field_gradient([&](const Tensor& p) { return field(g.state_at(p)); }, x, cfg, s.r);
  const Tensor connection = contract(field(s), 0, gamma, 0);  // X_n a^n_ij
  return {std::move(closed), partial - connection};
}

Tensor b_field(const MetricState& s) { return s.b_lower; }
Tensor c_field(const MetricState& s) { return s.c_lower; }

}  // namespace

CovariantDerivative nabla_b(const Geometry& g, const Tensor& x, const DiffConfig& cfg) {
  return covariant_derivative_of(g, x, cfg, &b_field, nabla_b_closed(g.state_at(x)));
}

CovariantDerivative nabla_c(const Geometry& g, const Tensor& x, const DiffConfig& cfg) {
  return covariant_derivative_of(g, x, cfg, &c_field, nabla_c_closed(g.state_at(x)));
}

double nabla_b_bilinear_residual(const MetricState& s, const Tensor& y) {
  const double lhs = contract(contract(nabla_b_closed(s), 0, y, 0), 0, y, 0).value();
  const double b = contract(s.b_lower, 0, y, 0).value();
  const double yc = contract(s.c_lower, 0, y, 0).value();
  return lhs - (2.0 / s.c()) * b * yc;
}

namespace {

// Everything but the leading u u block, which the two closed forms write
// differently.
struct CurvatureBlocks {
  double t;   // (m'/m)(m'/(4m) + 1/r)
  double k1;  // c''/c - 2c'^2/c^2 - c'/(rc) - (c'/c)(m'/m)
  double hb;  // (1/2m)(m'' - m'/r - (3/2) m'^2/m)
  double d3;  // (1/2)(c'/c^3)(m'/m + 2/r)
};

CurvatureBlocks blocks_of(const MetricState& s) {
  const ComboScalars cs = combo_scalars(s.profiles, s.r);
  const double c = s.c();
  return {cs.C, cs.A - cs.E, 0.5 * cs.B, cs.D / (c * c)};
}

double tail(const MetricState& s, const CurvatureBlocks& k, int n, int i, int kk, int l) {
  const double c = s.c(), m = s.m();
  const Tensor& nl = s.n_lower;
  const Tensor& nu = s.n_upper;
  const Tensor& bl = s.b_lower;
  const Tensor& bu = s.b_upper;
  const Tensor& ul = s.u_lower;
  const Tensor& um = s.u_mixed;
  const double wedge_nb = nl[kk] * bl[l] - nl[l] * bl[kk];
  return -(k.k1 / (c * c)) * (nl[n] * wedge_nb * bu[i] - bl[n] * wedge_nb * nu[i] / m) -
         k.hb * (nl[n] * (nl[l] * um(kk, i) - nl[kk] * um(l, i)) - (nl[l] * ul(n, kk) - nl[kk] * ul(n, l)) * nu[i]) +
         k.d3 * (bl[n] * (bl[l] * um(kk, i) - bl[kk] * um(l, i)) / m - (bl[l] * ul(n, kk) - bl[kk] * ul(n, l)) * bu[i]);
}

}  // namespace

Tensor curvature_frame_form(const MetricState& s) {
  const CurvatureBlocks k = blocks_of(s);
  const Tensor& ul = s.u_lower;
  const Tensor& um = s.u_mixed;
  return Tensor::generate(s.dim(), {lo, up, lo, lo}, [&](const MultiIndex& ix) {
    const int n = ix[0], i = ix[1], kk = ix[2], l = ix[3];
    return -k.t * (ul(l, n) * um(kk, i) - ul(kk, n) * um(l, i)) + tail(s, k, n, i, kk, l);
  });
}

Tensor curvature_closed(const MetricState& s) {
  const CurvatureBlocks k = blocks_of(s);
  const double c = s.c(), m = s.m();
  const Tensor& al = s.a_lower;
  const Tensor& bl = s.b_lower;
  const Tensor& bu = s.b_upper;
  return Tensor::generate(s.dim(), {lo, up, lo, lo}, [&](const MultiIndex& ix) {
    const int n = ix[0], i = ix[1], kk = ix[2], l = ix[3];
    const double lead = -(k.t / m) * (al(l, n) * kron(kk, i) - al(kk, n) * kron(l, i)) +
                        (k.t / (c * c * m)) * ((al(l, n) * bl[kk] - al(kk, n) * bl[l]) * bu[i] +
                                               bl[l] * bl[n] * kron(kk, i) - bl[kk] * bl[n] * kron(l, i));
    return lead + tail(s, k, n, i, kk, l);
  });
}

Tensor curvature_oracle(const Geometry& g, const Tensor& x, const DiffConfig& cfg) {
  const MetricState s = g.state_at(x);
  const Tensor& gamma = s.christoffel;
  // dg(k, i, n, m) = d_k a^i_nm
  const Tensor dg = fd_field_gradient([&](const Tensor& p) { return g.state_at(p).christoffel; }, x, cfg, s.r);
  const int dim = s.dim();
  return Tensor::generate(dim, {lo, up, lo, lo}, [&](const MultiIndex& ix) {
    const int n = ix[0], i = ix[1], k = ix[2], m = ix[3];
    double v = dg(k, i, n, m) - dg(m, i, n, k);
    for (int u = 0; u < dim; ++u) v += gamma(u, n, m) * gamma(i, u, k) - gamma(u, n, k) * gamma(i, u, m);
    return v;
  });
}

RicciDecomposition ricci_closed(const MetricState& s) {
  const RicciScalars sc = ricci_scalars(combo_scalars(s.profiles, s.r), s.dim());
  const double c = s.c(), m = s.m();
  Tensor ricci = sc.n1 * s.u_lower + (sc.n2 / (c * c * m)) * outer(s.b_lower, s.b_lower) +
                 sc.n3 * outer(s.n_lower, s.n_lower);
  return {std::move(ricci), sc};
}

Tensor ricci_contraction(const Tensor& curvature) { return contract(curvature, 1, 2); }

Tensor lower_curvature(const Tensor& curvature, const Tensor& a_lower) { return lower(curvature, 1, a_lower); }

Tensor flag_curvature(const Tensor& curvature, const Tensor& y) {
  return contract(contract(curvature, 0, y, 0), 2, y, 0);
}

std::vector<NamedResidual> frame_identity_residuals(const MetricState& s) {
  const int dim = s.dim();
  const double c = s.c();
  const Tensor delta_up = Tensor::delta(dim, up);
  const Tensor delta_lo = Tensor::delta(dim, lo);
  const Tensor e_lo = s.b_lower;
  const Tensor e_up = s.b_upper / (c * c);

  std::vector<NamedResidual> out;
  out.push_back({"axis_unit_norm", std::abs(contract(e_lo, 0, e_up, 0).value() - 1.0)});
  out.push_back({"axis_transverse_orthogonal", max_abs(contract(e_up, 0, s.u_lower, 0))});
  out.push_back({"transverse_projector", max_abs_diff(contract(s.u_upper, 1, s.u_lower, 0), delta_up - outer(e_up, e_lo))});
  out.push_back({"transverse_mixed", max_abs_diff(s.u_mixed, delta_lo - outer(e_lo, e_up))});
  out.push_back({"metric_inverse", max_abs_diff(contract(s.a_lower, 1, s.a_upper, 0), delta_lo)});
  out.push_back({"axis_raised_by_metric", relative_to(max_abs_diff(contract(s.a_upper, 1, s.b_lower, 0), s.b_upper), c * c)});
  out.push_back({"axis_transverse_null", max_abs(contract(s.b_upper, 0, s.u_lower, 0))});
  out.push_back({"axis_norm_c2", relative_to(contract(s.b_upper, 0, s.b_lower, 0).value() - c * c, c * c)});
  out.push_back({"radial_unit_norm", std::abs(contract(s.n_upper, 0, s.n_lower, 0).value() - 1.0)});
  out.push_back({"radial_axis_orthogonal", std::abs(contract(s.n_lower, 0, s.b_upper, 0).value())});
  out.push_back({"radial_raised_by_metric", max_abs_diff(contract(s.a_upper, 1, s.n_lower, 0), s.n_upper / s.m())});
  out.push_back({"axis_gradient_c_orthogonal", std::abs(contract(s.b_upper, 0, s.c_lower, 0).value())});
  out.push_back({"gradient_c_raised_by_metric", max_abs_diff(contract(s.a_upper, 1, s.c_lower, 0), s.c_upper)});
  return out;
}

}  // namespace fgeo
