#include "fgeo/finsler.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "fgeo/jet.hpp"

namespace fgeo {

namespace {

constexpr Variance lo = Variance::lower;
constexpr Variance up = Variance::upper;

double sq_root(double x) { return std::sqrt(x); }
Jet2 sq_root(const Jet2& x) { return sqrt(x); }

template <class T>
using Comp = std::array<T, kMaxDim>;

// Per-point data shared by every fiber evaluation.
struct PointData {
  const MetricState* s;
  Tensor nabla_b;  // nabla_i b_j
};

PointData point_data(const MetricState& s) { return {&s, nabla_b_closed(s)}; }

template <class T>
struct Kinematics {
  Comp<T> y{}, y_lo{}, v_lo{}, v_up{}, nu_lo{}, s_lo{}, e_lo{};
  T S2{}, b{}, q{}, nu{}, ys{}, sigma{}, yc{};
};

template <class T>
Kinematics<T> kinematics_core(const PointData& pd, double g, const Comp<T>& y) {
  const MetricState& s = *pd.s;
  const int n = s.dim();
  const double c2 = s.c() * s.c();
  Kinematics<T> k;
  k.y = y;
  double yy = 0.0;
  for (int i = 0; i < n; ++i) {
    T acc{};
    for (int j = 0; j < n; ++j) acc += s.a_lower(i, j) * y[static_cast<std::size_t>(j)];
    k.y_lo[static_cast<std::size_t>(i)] = acc;
    const double yi = value_of(y[static_cast<std::size_t>(i)]);
    yy += yi * yi;
  }
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    k.S2 += k.y_lo[ui] * y[ui];
    k.b += s.b_lower[ui] * y[ui];
    k.yc += s.c_lower[ui] * y[ui];
  }
  const T q2 = k.S2 - k.b * k.b;
  if (!(value_of(q2) > 1e-24 * std::max(1.0, yy))) {
    throw Error(ErrorCode::degenerate_fiber, "q^2 = S^2 - b^2 is not positive; y is along the axis or not space-like");
  }
  k.q = sq_root(q2);
  k.nu = k.q + g * (1.0 - c2) * k.b;
  if (!(value_of(k.nu) > 0.0)) {
    throw Error(ErrorCode::outside_admissible_cone, "nu = q + g(1 - c^2) b is not positive");
  }
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    k.v_lo[ui] = k.y_lo[ui] - k.b * s.b_lower[ui];
    k.v_up[ui] = y[ui] - k.b * s.b_upper[ui];
    k.nu_lo[ui] = k.v_lo[ui] / k.q + (1.0 - c2) * g * s.b_lower[ui];
    T acc{};
    for (int h = 0; h < n; ++h) acc += y[static_cast<std::size_t>(h)] * pd.nabla_b(i, h);
    k.s_lo[ui] = acc;
  }
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    k.ys += y[ui] * k.s_lo[ui];
    k.sigma += s.b_upper[ui] * k.s_lo[ui];
    k.e_lo[ui] = (k.b / q2) * k.v_lo[ui] - s.b_lower[ui];
  }
  return k;
}

template <class T>
Comp<T> spray_core(const PointData& pd, double g, const Comp<T>& y) {
  const MetricState& s = *pd.s;
  const int n = s.dim();
  const Kinematics<T> k = kinematics_core(pd, g, y);
  const T coeff = (g / k.nu) * k.ys;
  Comp<T> out{};
  for (int i = 0; i < n; ++i) {
    T acc = coeff * k.v_up[static_cast<std::size_t>(i)];
    for (int a = 0; a < n; ++a)
      for (int m = 0; m < n; ++m)
        acc += s.christoffel(i, a, m) * y[static_cast<std::size_t>(a)] * y[static_cast<std::size_t>(m)];
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

Comp<double> components(const Tensor& y) {
  Comp<double> out{};
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i];
  return out;
}

// y + t d as jets in t.
Comp<Jet2> along(const Tensor& y, const Comp<double>& d) {
  Comp<Jet2> out{};
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = Jet2(y[i], d[i], 0.0);
  return out;
}

Comp<double> unit(int k) {
  Comp<double> d{};
  d[static_cast<std::size_t>(k)] = 1.0;
  return d;
}

Tensor vector_of(const Comp<double>& c, int n, Variance v) {
  Tensor t(n, {v});
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)];
  return t;
}

Tensor spray_at(const PointData& pd, const Tensor& y, double g) {
  return vector_of(spray_core(pd, g, components(y)), pd.s->dim(), up);
}

struct JetDerivatives {
  Tensor first;   // (i, k)
  Tensor second;  // (i, k, m)
};

JetDerivatives jet_derivatives(const PointData& pd, const Tensor& y, double g) {
  const int n = pd.s->dim();
  JetDerivatives out{Tensor(n, {up, lo}), Tensor(n, {up, lo, lo})};
  for (int k = 0; k < n; ++k) {
    const Comp<Jet2> gk = spray_core(pd, g, along(y, unit(k)));
    for (int i = 0; i < n; ++i) {
      out.first(i, k) = gk[static_cast<std::size_t>(i)].d1;
      out.second(i, k, k) = gk[static_cast<std::size_t>(i)].d2;
    }
  }
  // Off-diagonal second derivatives by polarization along e_k + e_m.
  for (int k = 0; k < n; ++k)
    for (int m = k + 1; m < n; ++m) {
      Comp<double> d = unit(k);
      d[static_cast<std::size_t>(m)] = 1.0;
      const Comp<Jet2> gkm = spray_core(pd, g, along(y, d));
      for (int i = 0; i < n; ++i) {
        const double v = 0.5 * (gkm[static_cast<std::size_t>(i)].d2 - out.second(i, k, k) - out.second(i, m, m));
        out.second(i, k, m) = v;
        out.second(i, m, k) = v;
      }
    }
  return out;
}

bool leaves_cone(const Error& e) {
  return e.code() == ErrorCode::degenerate_fiber || e.code() == ErrorCode::outside_admissible_cone ||
         e.code() == ErrorCode::cone_stencil;
}

// Runs f(h); if a stencil point leaves the admissible cone, retries once with
// h / 10. `used` receives the step that succeeded.
template <class F>
auto with_cone_retry(F&& f, double h, double* used = nullptr) {
  try {
    if (used) *used = h;
    return f(h);
  } catch (const Error& e) {
    if (!leaves_cone(e)) throw;
  }
  try {
    if (used) *used = 0.1 * h;
    return f(0.1 * h);
  } catch (const Error& e) {
    if (!leaves_cone(e)) throw;
    throw Error(ErrorCode::cone_stencil, "difference stencil leaves the admissible cone even after shrinking the step");
  }
}

double euclidean_norm(const Tensor& y) {
  double s = 0.0;
  for (double v : y.components()) s += v * v;
  return std::sqrt(s);
}

// d/dy^k of F(y) for every k, F Tensor-valued; the derivative index is
// appended last.
template <class F>
Tensor fd_y_gradient(F&& f, const Tensor& y, double h, int order) {
  const int n = y.dim();
  std::vector<Tensor> cols;
  cols.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Tensor e(n, {up});
    e[static_cast<std::size_t>(k)] = 1.0;
    cols.push_back(fd_directional(f, y, e, h, order));
  }
  std::vector<Variance> v(cols[0].variances().begin(), cols[0].variances().end());
  v.push_back(lo);
  Tensor out(n, std::span<const Variance>(v));
  const std::size_t block = cols[0].size();
  for (std::size_t j = 0; j < block; ++j)
    for (int k = 0; k < n; ++k) out[j * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)] = cols[static_cast<std::size_t>(k)][j];
  return out;
}

Tensor first_fd_at(const PointData& pd, const Tensor& y, double g, const DiffConfig& cfg, double* used = nullptr) {
  const double scale = euclidean_norm(y);
  return with_cone_retry(
      [&](double h) { return fd_y_gradient([&](const Tensor& p) { return spray_at(pd, p, g); }, y, h, cfg.fd_order); },
      cfg.fd_step * scale, used);
}

Tensor closed_first(const PointData& pd, const Kinematics<double>& k, double g) {
  const MetricState& s = *pd.s;
  const int n = s.dim();
  const double gn = g / k.nu;
  return Tensor::generate(n, {up, lo}, [&](const MultiIndex& ix) {
    const int i = ix[0], kk = ix[1];
    const auto ui = static_cast<std::size_t>(i), uk = static_cast<std::size_t>(kk);
    const double r_ik = (i == kk ? 1.0 : 0.0) - s.b_upper[ui] * s.b_lower[uk];
    double gamma_y = 0.0;
    for (int m = 0; m < n; ++m) gamma_y += s.christoffel(i, kk, m) * k.y[static_cast<std::size_t>(m)];
    return -(k.nu_lo[uk] / k.nu) * gn * k.ys * k.v_up[ui] + 2.0 * gn * k.s_lo[uk] * k.v_up[ui] +
           gn * k.ys * r_ik + 2.0 * gamma_y;
  });
}

Tensor closed_second(const PointData& pd, const Kinematics<double>& k, double g) {
  const MetricState& s = *pd.s;
  const int n = s.dim();
  const double nu = k.nu, gn = g / nu, gn2 = g / (nu * nu);
  auto r_mixed = [&](int i, int kk) {
    return (i == kk ? 1.0 : 0.0) - s.b_upper[static_cast<std::size_t>(i)] * s.b_lower[static_cast<std::size_t>(kk)];
  };
  return Tensor::generate(n, {up, lo, lo}, [&](const MultiIndex& ix) {
    const int i = ix[0], kk = ix[1], m = ix[2];
    const auto ui = static_cast<std::size_t>(i), uk = static_cast<std::size_t>(kk), um = static_cast<std::size_t>(m);
    const double r_km = s.a_lower(kk, m) - s.b_lower[uk] * s.b_lower[um];
    const double eta = r_km - k.v_lo[uk] * k.v_lo[um] / (k.q * k.q);
    const double nk = k.nu_lo[uk], nm = k.nu_lo[um];
    return -(-2.0 * nk * nm / (nu * nu) + eta / (nu * k.q)) * gn * k.ys * k.v_up[ui] +
           2.0 * gn * pd.nabla_b(m, kk) * k.v_up[ui] - 2.0 * gn2 * (nm * k.s_lo[uk] + nk * k.s_lo[um]) * k.v_up[ui] +
           2.0 * gn * (k.s_lo[uk] * r_mixed(i, m) + k.s_lo[um] * r_mixed(i, kk)) -
           gn2 * k.ys * (nm * r_mixed(i, kk) + nk * r_mixed(i, m)) + 2.0 * s.christoffel(i, kk, m);
  });
}

double scaled(double residual, double scale) { return residual / std::max(1.0, scale); }

}  // namespace

double relative_max_diff(const Tensor& a, const Tensor& b) { return max_abs_diff(a, b) / std::max(1.0, max_abs(b)); }

FinsleroidState kinematics(const MetricState& s, const Tensor& y, double g) {
  if (y.rank() != 1 || y.variance(0) != up || y.dim() != s.dim()) {
    throw Error(ErrorCode::shape, "fiber vector must be contravariant of the state dimension");
  }
  const PointData pd = point_data(s);
  const Kinematics<double> k = kinematics_core(pd, g, components(y));
  const int n = s.dim();
  FinsleroidState f;
  f.x = s.x;
  f.y = y;
  f.g = g;
  f.c = s.c();
  f.b = k.b;
  f.S2 = k.S2;
  f.q = k.q;
  f.nu = k.nu;
  f.ys = k.ys;
  f.sigma = k.sigma;
  f.yc = k.yc;
  f.y_lower = vector_of(k.y_lo, n, lo);
  f.v_lower = vector_of(k.v_lo, n, lo);
  f.v_upper = vector_of(k.v_up, n, up);
  f.nu_lower = vector_of(k.nu_lo, n, lo);
  f.s_lower = vector_of(k.s_lo, n, lo);
  f.e_lower = vector_of(k.e_lo, n, lo);
  f.r_mixed = Tensor::delta(n, up) - outer(s.b_upper, s.b_lower);
  f.r_lower = s.a_lower - outer(s.b_lower, s.b_lower);
  f.eta = f.r_lower - outer(f.v_lower, f.v_lower) / (k.q * k.q);
  return f;
}

Tensor spray(const MetricState& s, const Tensor& y, double g) { return spray_at(point_data(s), y, g); }

Tensor riemannian_spray(const MetricState& s, const Tensor& y) {
  return contract(contract(s.christoffel, 1, y, 0), 1, y, 0);
}

SprayDerivatives spray_derivatives(const MetricState& s, const Tensor& y, double g, const DiffConfig& cfg) {
  const PointData pd = point_data(s);
  const Kinematics<double> k = kinematics_core(pd, g, components(y));
  JetDerivatives jets = jet_derivatives(pd, y, g);
  SprayDerivatives out;
  out.first = std::move(jets.first);
  out.second = std::move(jets.second);
  out.first_closed = closed_first(pd, k, g);
  out.second_closed = closed_second(pd, k, g);
  double used = 0.0;
  out.first_fd = first_fd_at(pd, y, g, cfg, &used);
  out.fd_step_used = used / std::max(euclidean_norm(y), 1e-300);
  out.second_fd = with_cone_retry(
      [&](double h) {
        return fd_y_gradient([&](const Tensor& p) { return jet_derivatives(pd, p, g).first; }, y, h, cfg.fd_order);
      },
      cfg.fd_step * euclidean_norm(y));
  return out;
}

CurvatureBundle hh_curvature(const Geometry& geom, const Tensor& x, const Tensor& y, double g, const DiffConfig& cfg) {
  const MetricState s = geom.state_at(x);
  const PointData pd = point_data(s);
  const int n = s.dim();
  const double ynorm = euclidean_norm(y);
  const double hx = cfg.fd_step * s.r;
  const double hx_nested = cfg.nested_step * s.r;
  // Admissibility of the center is reported as such, not as a stencil failure.
  const Tensor half = spray_at(pd, y, g) * 0.5;

  auto half_spray_at_x = [&](const Tensor& p) {
    const MetricState sp = geom.state_at(p);
    return spray_at(point_data(sp), y, g) * 0.5;
  };
  // dG'^i/dx^k stored (k, i)
  const Tensor dx_spray = with_cone_retry(
      [&](double h) { return fd_field_gradient(half_spray_at_x, x, cfg, h / cfg.fd_step); }, hx);

  auto assemble = [&](const Tensor& g1, const Tensor& g2, const Tensor& y_dx_g1) {
    return Tensor::generate(n, {up, lo}, [&](const MultiIndex& ix) {
      const int i = ix[0], k = ix[1];
      double v = 2.0 * dx_spray(k, i) - y_dx_g1(i, k);
      for (int j = 0; j < n; ++j) v += -g1(i, j) * g1(j, k) + 2.0 * half[static_cast<std::size_t>(j)] * g2(i, k, j);
      return v;
    });
  };

  CurvatureBundle out;
  {
    const JetDerivatives jets = jet_derivatives(pd, y, g);
    auto half_first_at_x = [&](const Tensor& p) {
      const MetricState sp = geom.state_at(p);
      return jet_derivatives(point_data(sp), y, g).first * 0.5;
    };
    const Tensor y_dx = with_cone_retry(
        [&](double h) { return fd_directional(half_first_at_x, x, y, h / ynorm, cfg.fd_order); }, hx);
    out.k2r = assemble(jets.first * 0.5, jets.second * 0.5, y_dx);
  }
  {
    const Tensor g1 = first_fd_at(pd, y, g, cfg) * 0.5;
    const Tensor g2 = with_cone_retry(
        [&](double h) {
          return fd_y_gradient([&](const Tensor& p) { return first_fd_at(pd, p, g, cfg); }, y, h, cfg.fd_order);
        },
        cfg.nested_step * ynorm) *
                      0.5;
    auto half_first_fd_at_x = [&](const Tensor& p) {
      const MetricState sp = geom.state_at(p);
      return first_fd_at(point_data(sp), y, g, cfg) * 0.5;
    };
    const Tensor y_dx = with_cone_retry(
        [&](double h) { return fd_directional(half_first_fd_at_x, x, y, h / ynorm, cfg.fd_order); }, hx_nested);
    out.k2r_fd = assemble(g1, g2, y_dx);
  }
  out.y_contraction = contract(out.k2r, 1, y, 0);
  const Tensor lowered = contract(s.a_lower, 1, out.k2r, 0);
  const double scale = max_abs(lowered);
  out.lowered_asymmetry = scale > 0.0 ? max_abs_diff(lowered, permute(lowered, {1, 0})) / scale : 0.0;
  return out;
}

std::vector<NamedResidual> finsler_identity_residuals(const MetricState& s, const Tensor& y, double g) {
  const PointData pd = point_data(s);
  const int n = s.dim();
  const double c2 = s.c() * s.c();
  const FinsleroidState f = kinematics(s, y, g);
  std::vector<NamedResidual> out;

  // Derivatives of nu, nu_k / nu and e_k along each e_m by exact jets.
  Tensor dnu(n, {lo});
  Tensor dlog(n, {lo, lo});  // d(nu_k/nu)/dy^m stored (k, m)
  Tensor de(n, {lo, lo});    // de_k/dy^m stored (k, m)
  for (int m = 0; m < n; ++m) {
    const Kinematics<Jet2> kj = kinematics_core(pd, g, along(y, unit(m)));
    dnu[static_cast<std::size_t>(m)] = kj.nu.d1;
    for (int k = 0; k < n; ++k) {
      dlog(k, m) = (kj.nu_lo[static_cast<std::size_t>(k)] / kj.nu).d1;
      de(k, m) = kj.e_lo[static_cast<std::size_t>(k)].d1;
    }
  }
  out.push_back({"nu_gradient", scaled(max_abs_diff(dnu, f.nu_lower), max_abs(f.nu_lower))});

  const Tensor dlog_rhs = -outer(f.nu_lower, f.nu_lower) / (f.nu * f.nu) + f.eta / (f.nu * f.q);
  out.push_back({"nu_log_gradient_derivative", scaled(max_abs_diff(dlog, dlog_rhs), max_abs(dlog_rhs))});

  const double q2 = f.q * f.q;
  const Tensor de_rhs = (f.b / q2) * f.eta - outer(f.v_lower, f.e_lower) / q2;
  out.push_back({"axis_covector_derivative", scaled(max_abs_diff(de, de_rhs), max_abs(de_rhs))});

  const double vs = contract(f.v_upper, 0, f.s_lower, 0).value();
  out.push_back({"transverse_s_contraction",
                 scaled(std::abs(vs - (f.ys - f.b * f.sigma)), std::max(std::abs(vs), std::abs(f.ys)))});

  const Tensor vr = contract(f.r_mixed, 1, f.v_upper, 0);
  const Tensor vr_rhs = f.v_upper - ((1.0 - c2) * f.b) * s.b_upper;
  out.push_back({"projector_on_transverse_vector", scaled(max_abs_diff(vr, vr_rhs), max_abs(vr_rhs))});

  const Tensor rr = contract(f.r_mixed, 1, f.r_mixed, 0);
  const Tensor rr_rhs = f.r_mixed - (1.0 - c2) * outer(s.b_upper, s.b_lower);
  out.push_back({"projector_square", scaled(max_abs_diff(rr, rr_rhs), max_abs(rr_rhs))});

  const double vv = contract(f.v_lower, 0, f.v_upper, 0).value();
  const double vv_rhs = q2 - (1.0 - c2) * f.b * f.b;
  out.push_back({"transverse_norm", scaled(std::abs(vv - vv_rhs), std::max(q2, f.b * f.b * std::abs(1.0 - c2)))});

  const double nv = contract(f.nu_lower, 0, f.v_upper, 0).value();
  const double nv_rhs = f.nu - (1.0 - c2) * (f.b * f.b + g * c2 * f.b * f.q) / f.q;
  out.push_back({"nu_on_transverse_vector", scaled(std::abs(nv - nv_rhs), std::max(std::abs(nv), f.nu))});
  return out;
}

SprayConsistency spray_consistency(const MetricState& s, const Tensor& y, double g, const DiffConfig& cfg) {
  const PointData pd = point_data(s);
  const Tensor G = spray_at(pd, y, g);
  const SprayDerivatives d = spray_derivatives(s, y, g, cfg);
  SprayConsistency out;
  out.homogeneity = relative_max_diff(contract(d.first, 1, y, 0), 2.0 * G);
  out.scaling = relative_max_diff(spray_at(pd, 2.0 * y, g), 4.0 * G);
  out.closed_vs_numeric = std::max(relative_max_diff(d.first_closed, d.first_fd), relative_max_diff(d.first_closed, d.first));
  out.closed_second_vs_numeric = relative_max_diff(d.second_closed, d.second);
  out.jet_vs_fd = relative_max_diff(d.first, d.first_fd);

  const Tensor riem = riemannian_spray(s, y);
  const Tensor riem_first = 2.0 * contract(s.christoffel, 2, y, 0);
  const JetDerivatives flat = jet_derivatives(pd, y, 0.0);
  out.collapse = std::max({relative_max_diff(spray_at(pd, y, 0.0), riem), relative_max_diff(flat.first, riem_first),
                           relative_max_diff(flat.second, 2.0 * s.christoffel)});
  return out;
}

double horizontal_q_residual(const Geometry& geom, const Tensor& x, const Tensor& y, const DiffConfig& cfg) {
  const MetricState s = geom.state_at(x);
  const PointData pd = point_data(s);
  const int n = s.dim();
  const Tensor dq_dx = with_cone_retry(
      [&](double h) {
        return fd_gradient([&](const Tensor& p) { return kinematics(geom.state_at(p), y, 0.0).q; }, x, cfg,
                           h / cfg.fd_step);
      },
      cfg.fd_step * s.r);
  Tensor dq_dy(n, {lo});
  for (int j = 0; j < n; ++j) dq_dy[static_cast<std::size_t>(j)] = kinematics_core(pd, 0.0, along(y, unit(j))).q.d1;
  const Tensor half_first = jet_derivatives(pd, y, 0.0).first * 0.5;
  const FinsleroidState f = kinematics(s, y, 0.0);
  const Tensor lhs = dq_dx - contract(dq_dy, 0, half_first, 0);
  const Tensor rhs = (-f.b / f.q) * f.s_lower;
  return scaled(max_abs_diff(lhs, rhs), max_abs(rhs));
}

}  // namespace fgeo
