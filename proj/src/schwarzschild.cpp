#include "fgeo/schwarzschild.hpp"

#include <algorithm>
#include <cmath>

#include "fgeo/parallel.hpp"

namespace fgeo {

namespace {

constexpr Variance lo = Variance::lower;
constexpr Variance up = Variance::upper;

void require_four_dimensions(const MetricState& s) {
  if (s.dim() != 4) throw Error(ErrorCode::validation, "the reduced Schwarzschild curvature requires N = 4");
}

// U_k^i = u_k^i - 3 n_k n^i
double u3_mixed(const MetricState& s, int k, int i) { return s.u_mixed(k, i) - 3.0 * s.n_lower[k] * s.n_upper[i]; }
// U_nk = u_nk - 3 n_n n_k
double u3_lower(const MetricState& s, int n, int k) { return s.u_lower(n, k) - 3.0 * s.n_lower[n] * s.n_lower[k]; }

double transverse_block(const MetricState& s, int n, int i, int k, int l) {
  return 2.0 * (s.u_lower(l, n) * s.u_mixed(k, i) - s.u_lower(k, n) * s.u_mixed(l, i));
}

double radial_block(const MetricState& s, int n, int i, int k, int l) {
  const Tensor& nl = s.n_lower;
  return -3.0 * (nl[n] * (nl[l] * s.u_mixed(k, i) - nl[k] * s.u_mixed(l, i)) -
                 (nl[l] * s.u_lower(n, k) - nl[k] * s.u_lower(n, l)) * s.n_upper[i]);
}

}  // namespace

double curvature_prefactor(double xi, double r) {
  const double s = xi / (4.0 * r);
  return 2.0 / (r * r) * s / ((1.0 + s) * (1.0 + s));
}

Tensor reduced_curvature_expanded(const MetricState& s, double xi) {
  require_four_dimensions(s);
  const double p = curvature_prefactor(xi, s.r);
  const double c2 = s.c() * s.c(), m = s.m();
  const Tensor& nl = s.n_lower;
  const Tensor& bl = s.b_lower;
  return Tensor::generate(4, {lo, up, lo, lo}, [&](const MultiIndex& ix) {
    const int n = ix[0], i = ix[1], k = ix[2], l = ix[3];
    const double wedge = nl[k] * bl[l] - nl[l] * bl[k];
    const double nb = nl[n] * wedge * s.b_upper[i] - bl[n] * wedge * s.n_upper[i] / m;
    const double bb = bl[n] * (bl[l] * s.u_mixed(k, i) - bl[k] * s.u_mixed(l, i)) / m -
                      (bl[l] * s.u_lower(n, k) - bl[k] * s.u_lower(n, l)) * s.b_upper[i];
    return p * (transverse_block(s, n, i, k, l) - (3.0 / c2) * nb + radial_block(s, n, i, k, l) - bb / c2);
  });
}

Tensor reduced_curvature(const MetricState& s, double xi) {
  require_four_dimensions(s);
  const double p = curvature_prefactor(xi, s.r);
  const double c2 = s.c() * s.c(), m = s.m();
  const Tensor& bl = s.b_lower;
  return Tensor::generate(4, {lo, up, lo, lo}, [&](const MultiIndex& ix) {
    const int n = ix[0], i = ix[1], k = ix[2], l = ix[3];
    const double bb = bl[n] * (bl[l] * u3_mixed(s, k, i) - bl[k] * u3_mixed(s, l, i)) / m -
                      (bl[l] * u3_lower(s, n, k) - bl[k] * u3_lower(s, n, l)) * s.b_upper[i];
    return p * (transverse_block(s, n, i, k, l) + radial_block(s, n, i, k, l) - bb / c2);
  });
}

ContractionResiduals contraction_identities(const MetricState& s, double xi, const Tensor& y) {
  require_four_dimensions(s);
  const double p = curvature_prefactor(xi, s.r);
  const double m = s.m(), c2 = s.c() * s.c();
  const double r2 = s.r * s.r;
  const Tensor a = curvature_closed(s);
  const Tensor& bl = s.b_lower;
  const Tensor& bu = s.b_upper;

  ContractionResiduals out;

  const Tensor last = contract(a, 3, bu, 0);  // (n, i, k)
  const Tensor last_rhs = Tensor::generate(4, {lo, up, lo}, [&](const MultiIndex& ix) {
    const int n = ix[0], i = ix[1], k = ix[2];
    return -p * (bl[n] * u3_mixed(s, k, i) / m - u3_lower(s, n, k) * bu[i]);
  });
  out.axis_last = max_abs_diff(last, last_rhs) * r2;

  const Tensor first = contract(a, 0, bu, 0);  // (i, k, m)
  const Tensor first_rhs = Tensor::generate(4, {up, lo, lo}, [&](const MultiIndex& ix) {
    const int i = ix[0], k = ix[1], l = ix[2];
    return -p / m * (bl[l] * u3_mixed(s, k, i) - bl[k] * u3_mixed(s, l, i));
  });
  out.axis_first = max_abs_diff(first, first_rhs) * r2;

  const double b = contract(bl, 0, y, 0).value();
  const Tensor bb = contract(first, 2, bu, 0);                                   // b^n b^m a_n^i_km, (i, k)
  const Tensor by = contract(contract(a, 3, bu, 0), 0, y, 0);                    // y^n b^m a_n^i_km
  const Tensor yb = contract(first, 2, y, 0);                                    // b^n y^m a_n^i_km
  const Tensor rhs = Tensor::generate(4, {up, lo}, [&](const MultiIndex& ix) {
    const int i = ix[0], k = ix[1];
    double uy = 0.0, uy_mixed = 0.0;
    for (int n = 0; n < 4; ++n) {
      uy += u3_lower(s, n, k) * y[static_cast<std::size_t>(n)];
      uy_mixed += u3_mixed(s, n, i) * y[static_cast<std::size_t>(n)];
    }
    return p * (-uy * bu[i] + b * u3_mixed(s, k, i) / m - bl[k] * uy_mixed / m);
  });
  out.mixed_literal = max_abs_diff(b * bb - by - yb, rhs) * r2;
  out.mixed_normalized = max_abs_diff((b / c2) * bb - by - yb, rhs) * r2;
  return out;
}

bool VacuumReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const VacuumCheck& c) { return c.pass; });
}

Tensor vacuum_probe_point(int dim, double r) {
  Tensor x(dim, {up});
  x[0] = 0.3;
  double norm = 0.0;
  for (int i = 1; i < dim; ++i) norm += static_cast<double>(i * i);
  for (int i = 1; i < dim; ++i) x[static_cast<std::size_t>(i)] = r * i / std::sqrt(norm);
  return x;
}

Tensor vacuum_probe_fiber(int dim) {
  return Tensor::generate(dim, {up}, [](const MultiIndex& ix) { return ix[0] == 0 ? 1.0 : 0.5 - 0.2 * ix[0]; });
}

VacuumReport verify_vacuum(double xi, const std::vector<double>& radii, int dim, const DiffConfig& cfg, bool parallel,
                           int signature) {
  const Geometry geom(Frame::standard(dim, signature), SchwarzschildIsotropic{xi, static_cast<double>(signature)});
  VacuumReport report;
  report.xi = xi;
  report.dim = dim;
  report.radii = parallel_map(
      radii.size(),
      [&](std::size_t j) {
        const double r = radii[j];
        const Tensor x = vacuum_probe_point(dim, r);
        const MetricState s = geom.state_at(x);
        const Tensor closed = curvature_closed(s);
        const RicciDecomposition ric = ricci_closed(s);
        VacuumRadius out;
        out.r = r;
        out.ricci_max = max_abs(ricci_contraction(closed)) * r * r;
        out.n1 = ric.scalars.n1 * r * r;
        out.n2 = ric.scalars.n2 * r * r;
        out.n3 = ric.scalars.n3 * r * r;
        out.closed_vs_oracle = relative_frobenius(closed, curvature_oracle(geom, x, cfg));
        if (dim == 4) {
          out.reduced_vs_closed = relative_frobenius(reduced_curvature(s, xi), closed);
          out.contractions = contraction_identities(s, xi, vacuum_probe_fiber(dim));
        }
        return out;
      },
      parallel);

  auto add = [&](const char* name, const char* tolerance_class, auto get) {
    VacuumCheck c;
    c.name = name;
    c.tolerance_class = tolerance_class;
    for (const VacuumRadius& v : report.radii) {
      c.values.push_back(get(v));
      c.worst = std::max(c.worst, c.values.back());
    }
    c.tolerance = cfg.tolerances.get(tolerance_class);
    c.pass = std::all_of(c.values.begin(), c.values.end(), [&](double v) { return v < c.tolerance; });
    report.checks.push_back(std::move(c));
  };
  add("ricci_zero", "vacuum_ricci", [](const VacuumRadius& v) { return v.ricci_max; });
  add("ricci_scalars_zero", "algebraic",
      [](const VacuumRadius& v) { return std::max({std::abs(v.n1), std::abs(v.n2), std::abs(v.n3)}); });
  add("curvature_closed_vs_oracle", "curvature", [](const VacuumRadius& v) { return v.closed_vs_oracle; });
  if (dim == 4) {
    add("curvature_reduced_vs_closed", "jet", [](const VacuumRadius& v) { return *v.reduced_vs_closed; });
    add("axis_contraction_last", "contraction", [](const VacuumRadius& v) { return v.contractions->axis_last; });
    add("axis_contraction_first", "contraction", [](const VacuumRadius& v) { return v.contractions->axis_first; });
    add("mixed_contraction", "contraction", [](const VacuumRadius& v) { return v.contractions->mixed_normalized; });
  }
  return report;
}

}  // namespace fgeo
