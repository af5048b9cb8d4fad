#include "fgeo/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fgeo/finsler.hpp"
#include "fgeo/parallel.hpp"
#include "fgeo/sampling.hpp"
#include "fgeo/schwarzschild.hpp"

namespace fgeo {

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Largest value; NaN if any value is NaN.
double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) {
    if (std::isnan(x)) return x;
    m = std::max(m, x);
  }
  return m;
}

// max|a - b| relative to max|b|, or absolute when b vanishes identically.
double relative_or_absolute(const Tensor& a, const Tensor& b) {
  const double scale = max_abs(b);
  const double diff = max_abs_diff(a, b);
  return scale > 0.0 ? diff / scale : diff;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string status_name(SuiteStatus s) {
  switch (s) {
    case SuiteStatus::pass: return "pass";
    case SuiteStatus::fail: return "fail";
    case SuiteStatus::skipped: return "skipped";
  }
  return "fail";
}

/// Accumulates the graded checks of one suite.
class SuiteBuilder {
 public:
  SuiteBuilder(SuiteResult& result, const ToleranceProfile& tol) : result_(result), tol_(tol) {}

  void check(const std::string& name, const std::string& tolerance_class, std::vector<double> values) {
    CheckResult c;
    c.name = name;
    c.tolerance_class = tolerance_class;
    c.tolerance = tol_.get(tolerance_class);
    c.values = std::move(values);
    c.max = max_of(c.values);
    c.median = median_of(c.values);
    // NaN never passes.
    c.pass = std::all_of(c.values.begin(), c.values.end(), [&](double v) { return v < c.tolerance; });
    result_.checks.push_back(std::move(c));
  }

  void diagnostic(const std::string& name, const std::vector<double>& values) {
    result_.diagnostics.push_back({name, max_of(values)});
  }

  void note(std::string text) { result_.notes.push_back(std::move(text)); }

  void dump(const std::string& name, const Tensor& t) { dumps.emplace_back(name, t); }

  std::vector<std::pair<std::string, Tensor>> dumps;

 private:
  SuiteResult& result_;
  const ToleranceProfile& tol_;
};

Geometry scenario_geometry(const Scenario& s) { return Geometry(Frame::standard(s.dim, s.signature), s.profile); }

// Transposes per-sample named residuals into one value list per name, keeping
// the order of first appearance.
std::vector<std::pair<std::string, std::vector<double>>> by_name(
    const std::vector<std::vector<NamedResidual>>& per_sample) {
  std::vector<std::pair<std::string, std::vector<double>>> out;
  for (const auto& sample : per_sample)
    for (const NamedResidual& r : sample) {
      auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == r.name; });
      if (it == out.end()) {
        out.push_back({r.name, {}});
        it = std::prev(out.end());
      }
      it->second.push_back(r.residual);
    }
  return out;
}

template <class T, class F>
std::vector<double> column(const std::vector<T>& rows, F&& get) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const T& r : rows) out.push_back(get(r));
  return out;
}

void run_frame_identities(const Scenario& sc, SuiteBuilder& b) {
  const Geometry geom = scenario_geometry(sc);
  const std::vector<Tensor> points = scenario_points(sc, Suite::frame_identities);
  const auto per_point = parallel_map(
      points.size(), [&](std::size_t j) { return frame_identity_residuals(geom.state_at(points[j])); }, sc.parallel);
  for (auto& [name, values] : by_name(per_point)) b.check(name, "algebraic", std::move(values));
  const MetricState s0 = geom.state_at(points[0]);
  b.dump("metric_lower", s0.a_lower);
  b.dump("metric_upper", s0.a_upper);
}

void run_christoffel_xcheck(const Scenario& sc, SuiteBuilder& b) {
  const Geometry geom = scenario_geometry(sc);
  const std::vector<Tensor> points = scenario_points(sc, Suite::christoffel_xcheck);
  struct Row {
    double christoffel, symmetry, nabla_b, nabla_c;
  };
  const auto rows = parallel_map(
      points.size(),
      [&](std::size_t j) {
        const MetricState s = geom.state_at(points[j]);
        const Tensor def = christoffel_definitional(geom, points[j], sc.diff);
        const CovariantDerivative db = nabla_b(geom, points[j], sc.diff);
        const CovariantDerivative dc = nabla_c(geom, points[j], sc.diff);
        return Row{relative_max_diff(s.christoffel, def),
                   max_abs_diff(s.christoffel, permute(s.christoffel, {0, 2, 1})),
                   relative_max_diff(db.closed, db.definitional), relative_or_absolute(dc.closed, dc.definitional)};
      },
      sc.parallel);
  b.check("christoffel_closed_vs_definitional", "christoffel", column(rows, [](const Row& r) { return r.christoffel; }));
  b.check("christoffel_lower_symmetry", "algebraic", column(rows, [](const Row& r) { return r.symmetry; }));
  b.check("nabla_b_closed_vs_definitional", "nabla_b", column(rows, [](const Row& r) { return r.nabla_b; }));
  b.check("nabla_c_closed_vs_definitional", "nabla_c", column(rows, [](const Row& r) { return r.nabla_c; }));

  // y^i y^j nabla_i b_j = (2/c) b (yc) for sample_count fiber vectors spread
  // over the points.
  Rng rng(suite_seed(sc.seed, Suite::christoffel_xcheck) + 1);
  std::vector<double> bilinear;
  std::vector<MetricState> states;
  for (const Tensor& p : points) states.push_back(geom.state_at(p));
  for (int k = 0; k < sc.sample_count; ++k) {
    Tensor y(sc.dim, {Variance::upper});
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = rng.uniform(-1.0, 1.0);
    bilinear.push_back(std::abs(nabla_b_bilinear_residual(states[static_cast<std::size_t>(k) % states.size()], y)));
  }
  b.check("nabla_b_bilinear_identity", "algebraic", std::move(bilinear));

  b.dump("christoffel_closed", states[0].christoffel);
  b.dump("christoffel_definitional", christoffel_definitional(geom, points[0], sc.diff));
}

void run_curvature_xcheck(const Scenario& sc, SuiteBuilder& b) {
  const Geometry geom = scenario_geometry(sc);
  const std::vector<Tensor> points = scenario_points(sc, Suite::curvature_xcheck);
  struct Row {
    double oracle, frame_form, antisymmetry, bianchi, ricci;
  };
  const auto rows = parallel_map(
      points.size(),
      [&](std::size_t j) {
        const MetricState s = geom.state_at(points[j]);
        const Tensor closed = curvature_closed(s);
        const Tensor oracle = curvature_oracle(geom, points[j], sc.diff);
        const double scale = std::max(1.0, max_abs(closed));
        Tensor cyclic = closed + permute(closed, {2, 1, 3, 0}) + permute(closed, {3, 1, 0, 2});
        Row r;
        r.oracle = max_abs(oracle) > 0.0 ? relative_frobenius(closed, oracle) : frobenius(closed);
        r.frame_form = max_abs_diff(curvature_frame_form(s), closed) / scale;
        r.antisymmetry = max_abs(closed + permute(closed, {0, 1, 3, 2})) / scale;
        r.bianchi = max_abs(cyclic) / scale;
        const Tensor ric = ricci_contraction(closed);
        r.ricci = max_abs_diff(ric, ricci_closed(s).ricci) / std::max(1.0, max_abs(ric));
        return r;
      },
      sc.parallel);
  b.check("curvature_closed_vs_oracle", "curvature", column(rows, [](const Row& r) { return r.oracle; }));
  b.check("curvature_frame_form_vs_closed", "algebraic", column(rows, [](const Row& r) { return r.frame_form; }));
  b.check("curvature_antisymmetry", "algebraic", column(rows, [](const Row& r) { return r.antisymmetry; }));
  b.check("curvature_first_bianchi", "algebraic", column(rows, [](const Row& r) { return r.bianchi; }));
  b.check("ricci_closed_vs_contraction", "ricci_consistency", column(rows, [](const Row& r) { return r.ricci; }));

  const MetricState s0 = geom.state_at(points[0]);
  const Tensor closed0 = curvature_closed(s0);
  b.dump("curvature_closed", closed0);
  b.dump("curvature_oracle", curvature_oracle(geom, points[0], sc.diff));
  b.dump("ricci", ricci_contraction(closed0));
}

void run_vacuum(const Scenario& sc, SuiteBuilder& b, SuiteResult& result) {
  const auto& p = std::get<SchwarzschildIsotropic>(sc.profile);
  const VacuumReport rep = verify_vacuum(p.xi, sc.radii, sc.dim, sc.diff, sc.parallel, sc.signature);
  for (const VacuumCheck& c : rep.checks) b.check(c.name, c.tolerance_class, c.values);
  auto radii = nlohmann::ordered_json::array();
  for (const VacuumRadius& v : rep.radii) {
    nlohmann::ordered_json row;
    row["r"] = v.r;
    row["ricci_max_r2"] = v.ricci_max;
    row["n1_r2"] = v.n1;
    row["n2_r2"] = v.n2;
    row["n3_r2"] = v.n3;
    row["closed_vs_oracle"] = v.closed_vs_oracle;
    radii.push_back(row);
  }
  result.details["radii"] = radii;
  result.details["units"] = "Ricci components and n1, n2, n3 are multiplied by r^2";
  if (sc.dim != 4) b.note("reduced form and axis contractions apply at N = 4 only");
  const Geometry geom(Frame::standard(sc.dim, sc.signature),
                      SchwarzschildIsotropic{p.xi, static_cast<double>(sc.signature)});
  const MetricState s0 = geom.state_at(vacuum_probe_point(sc.dim, sc.radii[0]));
  const Tensor closed = curvature_closed(s0);
  b.dump("curvature_closed", closed);
  b.dump("ricci", ricci_contraction(closed));
}

void run_schwarzschild_reductions(const Scenario& sc, SuiteBuilder& b) {
  const double xi = std::get<SchwarzschildIsotropic>(sc.profile).xi;
  const Geometry geom = scenario_geometry(sc);
  struct Row {
    double reduced, expanded, oracle;
    ContractionResiduals contractions;
  };
  const auto rows = parallel_map(
      sc.radii.size(),
      [&](std::size_t j) {
        const Tensor x = vacuum_probe_point(sc.dim, sc.radii[j]);
        const MetricState s = geom.state_at(x);
        const Tensor closed = curvature_closed(s);
        const Tensor reduced = reduced_curvature(s, xi);
        return Row{relative_frobenius(reduced, closed), relative_frobenius(reduced_curvature_expanded(s, xi), closed),
                   relative_frobenius(reduced, curvature_oracle(geom, x, sc.diff)),
                   contraction_identities(s, xi, vacuum_probe_fiber(sc.dim))};
      },
      sc.parallel);
  b.check("reduced_vs_closed", "jet", column(rows, [](const Row& r) { return r.reduced; }));
  b.check("expanded_vs_closed", "jet", column(rows, [](const Row& r) { return r.expanded; }));
  b.check("reduced_vs_oracle", "curvature", column(rows, [](const Row& r) { return r.oracle; }));
  b.check("axis_contraction_last", "contraction", column(rows, [](const Row& r) { return r.contractions.axis_last; }));
  b.check("axis_contraction_first", "contraction",
          column(rows, [](const Row& r) { return r.contractions.axis_first; }));
  b.check("mixed_contraction", "contraction",
          column(rows, [](const Row& r) { return r.contractions.mixed_normalized; }));
  b.diagnostic("mixed_contraction_unnormalized",
               column(rows, [](const Row& r) { return r.contractions.mixed_literal; }));
  b.note("mixed_contraction uses the leading coefficient (b/c^2) b^m b^n; with b b^m b^n the identity holds only "
         "where c = 1 (see mixed_contraction_unnormalized)");
  b.dump("curvature_reduced", reduced_curvature(geom.state_at(vacuum_probe_point(sc.dim, sc.radii[0])), xi));
}

void run_finsler_identities(const Scenario& sc, SuiteBuilder& b) {
  const Geometry geom = scenario_geometry(sc);
  const std::vector<FiberSample> samples = scenario_samples(sc, Suite::finsler_identities);
  struct Row {
    std::vector<NamedResidual> identities;
    SprayConsistency spray;
  };
  const auto rows = parallel_map(
      samples.size(),
      [&](std::size_t j) {
        const MetricState s = geom.state_at(samples[j].x);
        return Row{finsler_identity_residuals(s, samples[j].y, sc.charge),
                   spray_consistency(s, samples[j].y, sc.charge, sc.diff)};
      },
      sc.parallel);
  std::vector<std::vector<NamedResidual>> identities;
  for (const Row& r : rows) identities.push_back(r.identities);
  for (auto& [name, values] : by_name(identities)) b.check(name, "finsler_identity", std::move(values));
  b.check("spray_homogeneity", "spray_homogeneity", column(rows, [](const Row& r) { return r.spray.homogeneity; }));
  b.check("spray_scaling", "spray_scaling", column(rows, [](const Row& r) { return r.spray.scaling; }));
  b.check("spray_first_closed_vs_numeric", "spray_closed_form",
          column(rows, [](const Row& r) { return r.spray.closed_vs_numeric; }));
  b.check("spray_second_closed_vs_jet", "jet",
          column(rows, [](const Row& r) { return r.spray.closed_second_vs_numeric; }));
  b.check("riemannian_collapse", "riemannian_collapse", column(rows, [](const Row& r) { return r.spray.collapse; }));
  b.diagnostic("spray_first_jet_vs_fd", column(rows, [](const Row& r) { return r.spray.jet_vs_fd; }));

  const MetricState s0 = geom.state_at(samples[0].x);
  const SprayDerivatives d = spray_derivatives(s0, samples[0].y, sc.charge, sc.diff);
  b.dump("spray", spray(s0, samples[0].y, sc.charge));
  b.dump("spray_first_derivative", d.first);
  b.dump("spray_second_derivative", d.second);
}

void run_finsler_curvature(const Scenario& sc, SuiteBuilder& b, SuiteResult& result) {
  const Geometry geom = scenario_geometry(sc);
  const std::vector<FiberSample> samples = scenario_samples(sc, Suite::finsler_curvature);
  struct Row {
    CurvatureBundle bundle;
    CurvatureBundle limit;  // at g = 0
    Tensor flag;
    double horizontal_q;
  };
  const auto rows = parallel_map(
      samples.size(),
      [&](std::size_t j) {
        const Tensor& x = samples[j].x;
        const Tensor& y = samples[j].y;
        Row r;
        r.bundle = hh_curvature(geom, x, y, sc.charge, sc.diff);
        r.limit = sc.charge == 0.0 ? r.bundle : hh_curvature(geom, x, y, 0.0, sc.diff);
        r.flag = flag_curvature(curvature_closed(geom.state_at(x)), y);
        r.horizontal_q = horizontal_q_residual(geom, x, y, sc.diff);
        return r;
      },
      sc.parallel);

  // The sign relating the bundle to a_n^i_km y^n y^m is read off the first
  // sample and then held for all others.
  double overlap = 0.0;
  for (std::size_t k = 0; k < rows[0].flag.size(); ++k) overlap += rows[0].limit.k2r[k] * rows[0].flag[k];
  const double sign = overlap < 0.0 ? -1.0 : 1.0;
  result.details["riemannian_limit_sign"] = sign;
  result.details["charge"] = sc.charge;

  b.check("bundle_routes_agree", "bundle_routes", column(rows, [](const Row& r) {
            return relative_or_absolute(r.bundle.k2r_fd, r.bundle.k2r);
          }));
  b.check("bundle_fiber_contraction", "bundle_fiber_contraction", column(rows, [](const Row& r) {
            const double scale = max_abs(r.bundle.k2r);
            const double v = max_abs(r.bundle.y_contraction);
            return scale > 0.0 ? v / scale : v;
          }));
  b.check("bundle_riemannian_limit", "bundle_riemannian_limit",
          column(rows, [&](const Row& r) { return relative_or_absolute(r.limit.k2r, sign * r.flag); }));
  b.check("horizontal_q_zero_charge", "horizontal_derivative",
          column(rows, [](const Row& r) { return r.horizontal_q; }));
  b.diagnostic("lowered_bundle_asymmetry", column(rows, [](const Row& r) { return r.bundle.lowered_asymmetry; }));
  b.note("indices of the bundle are lowered with the Riemannian metric a_ij; the Finsler metric tensor is not "
         "available");
  b.dump("bundle", rows[0].bundle.k2r);
  b.dump("bundle_fd", rows[0].bundle.k2r_fd);
  b.dump("flag_curvature", rows[0].flag);
}

bool radius_in(const RadialDomain& d, double r) { return d.contains(r); }

std::string domain_text(const RadialDomain& d) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << d.lower << ", " << d.upper << ")";
  return os.str();
}

std::string points_precondition(const Scenario& s, bool fibers) {
  const RadialDomain d = profile_domain(s.profile);
  const Frame frame = Frame::standard(s.dim, s.signature);
  if (fibers ? !s.samples.empty() : !s.points.empty()) {
    std::size_t count = fibers ? s.samples.size() : s.points.size();
    for (std::size_t j = 0; j < count; ++j) {
      const double r = frame.radius(fibers ? s.samples[j].x : s.points[j]);
      if (!radius_in(d, r)) return "point " + std::to_string(j) + " lies outside the profile domain " + domain_text(d);
    }
    return "";
  }
  if (!radius_in(d, s.radius_lo) || !radius_in(d, s.radius_hi))
    return "radius_range leaves the profile domain " + domain_text(d);
  return "";
}

std::string radii_precondition(const Scenario& s) {
  const RadialDomain d = profile_domain(s.profile);
  for (double r : s.radii)
    if (!radius_in(d, r)) return "radius " + format_double(r) + " lies outside the profile domain " + domain_text(d);
  return "";
}

}  // namespace

std::uint64_t suite_seed(std::uint64_t base, Suite suite) {
  return base + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(suite) + 1);
}

std::vector<Tensor> scenario_points(const Scenario& s, Suite suite) {
  if (!s.points.empty()) return s.points;
  Rng rng(suite_seed(s.seed, suite));
  std::vector<Tensor> out;
  for (int j = 0; j < s.point_count; ++j) out.push_back(sample_point(rng, s.dim, s.radius_lo, s.radius_hi));
  return out;
}

std::vector<FiberSample> scenario_samples(const Scenario& s, Suite suite) {
  if (!s.samples.empty()) return s.samples;
  const Geometry geom = scenario_geometry(s);
  Rng rng(suite_seed(s.seed, suite));
  std::vector<FiberSample> out;
  for (int j = 0; j < s.sample_count; ++j) {
    Tensor x = sample_point(rng, s.dim, s.radius_lo, s.radius_hi);
    Tensor y = sample_fiber(rng, geom.state_at(x), s.charge);
    out.push_back({std::move(x), std::move(y)});
  }
  return out;
}

std::string suite_precondition(const Scenario& s, Suite suite) {
  const bool schwarzschild = std::holds_alternative<SchwarzschildIsotropic>(s.profile);
  switch (suite) {
    case Suite::frame_identities:
    case Suite::christoffel_xcheck:
    case Suite::curvature_xcheck:
      return points_precondition(s, false);
    case Suite::vacuum: {
      if (!schwarzschild) return "the vacuum suite needs the schwarzschild profile";
      if (std::get<SchwarzschildIsotropic>(s.profile).m_sign != s.signature)
        return "the vacuum suite needs m_sign equal to the signature";
      return radii_precondition(s);
    }
    case Suite::schwarzschild_reductions:
      if (!schwarzschild) return "the reductions need the schwarzschild profile";
      if (s.dim != 4) return "the reductions hold at N = 4 only";
      return radii_precondition(s);
    case Suite::finsler_identities:
    case Suite::finsler_curvature:
      if (s.signature != 1 && !s.allow_indefinite_finsler)
        return "Finsler suites with signature -1 need allow_indefinite_finsler: true";
      return points_precondition(s, true);
  }
  return "";
}

void write_tensor_csv(const std::string& path, const Tensor& t) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::validation, "cannot write '" + path + "'");
  char buf[40];
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    const MultiIndex ix = t.index_of(flat);
    for (int a = 0; a < t.rank(); ++a) out << ix[static_cast<std::size_t>(a)] << ',';
    std::snprintf(buf, sizeof buf, "%.17g", t[flat]);
    out << buf << '\n';
  }
}

RunReport run(const Scenario& sc) {
  validate_scenario(sc);
  RunReport report;
  report.scenario = scenario_echo(sc);
  report.config_hash = config_hash(sc);
  report.seed = sc.seed;

  std::vector<std::string> reasons;
  for (Suite suite : sc.suites) reasons.push_back(suite_precondition(sc, suite));

  const auto run_start = std::chrono::steady_clock::now();
  for (std::size_t k = 0; k < sc.suites.size(); ++k) {
    const Suite suite = sc.suites[k];
    SuiteResult result;
    result.name = std::string(suite_name(suite));
    result.seed = suite_seed(sc.seed, suite);
    const auto start = std::chrono::steady_clock::now();
    if (!reasons[k].empty()) {
      result.status = SuiteStatus::skipped;
      result.reason = reasons[k];
    } else {
      SuiteBuilder b(result, sc.diff.tolerances);
      try {
        switch (suite) {
          case Suite::frame_identities: run_frame_identities(sc, b); break;
          case Suite::christoffel_xcheck: run_christoffel_xcheck(sc, b); break;
          case Suite::curvature_xcheck: run_curvature_xcheck(sc, b); break;
          case Suite::vacuum: run_vacuum(sc, b, result); break;
          case Suite::schwarzschild_reductions: run_schwarzschild_reductions(sc, b); break;
          case Suite::finsler_identities: run_finsler_identities(sc, b); break;
          case Suite::finsler_curvature: run_finsler_curvature(sc, b, result); break;
        }
        const bool ok =
            std::all_of(result.checks.begin(), result.checks.end(), [](const CheckResult& c) { return c.pass; });
        result.status = ok ? SuiteStatus::pass : SuiteStatus::fail;
        if (!sc.dump_dir.empty()) {
          std::filesystem::create_directories(sc.dump_dir);
          for (const auto& [name, tensor] : b.dumps) {
            const std::string file = result.name + "_" + name + ".csv";
            write_tensor_csv((std::filesystem::path(sc.dump_dir) / file).string(), tensor);
            result.dumps.push_back(file);
          }
        }
      } catch (const std::exception& e) {
        result.status = SuiteStatus::fail;
        result.diagnostic = e.what();
      }
    }
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.suites.push_back(std::move(result));
  }
  report.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - run_start).count();
  return report;
}

bool RunReport::pass() const {
  return std::none_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.status == SuiteStatus::fail; });
}

int RunReport::exit_code() const { return pass() ? 0 : 1; }

nlohmann::ordered_json RunReport::body() const {
  nlohmann::ordered_json j;
  j["schema"] = "fgeo-run-report/1";
  j["scenario"] = scenario;
  nlohmann::ordered_json env;
  env["config_hash"] = config_hash;
  env["seed"] = seed;
  env["tolerances"] = scenario["tolerances"];
  nlohmann::ordered_json seeds = nlohmann::ordered_json::object();
  for (const SuiteResult& s : suites) seeds[s.name] = s.seed;
  env["suite_seeds"] = seeds;
  j["environment"] = env;

  auto list = nlohmann::ordered_json::array();
  int passed = 0, failed = 0, skipped = 0;
  for (const SuiteResult& s : suites) {
    nlohmann::ordered_json e;
    e["name"] = s.name;
    e["status"] = status_name(s.status);
    if (s.status == SuiteStatus::skipped) e["reason"] = "skipped (" + s.reason + ")";
    if (!s.diagnostic.empty()) e["diagnostic"] = s.diagnostic;
    auto checks = nlohmann::ordered_json::array();
    for (const CheckResult& c : s.checks) {
      checks.push_back({{"name", c.name},
                        {"tolerance_class", c.tolerance_class},
                        {"tolerance", c.tolerance},
                        {"samples", c.values.size()},
                        {"max", c.max},
                        {"median", c.median},
                        {"pass", c.pass}});
    }
    e["checks"] = checks;
    auto diags = nlohmann::ordered_json::array();
    for (const Diagnostic& d : s.diagnostics) diags.push_back({{"name", d.name}, {"max", d.max}});
    e["diagnostics"] = diags;
    e["notes"] = s.notes;
    e["details"] = s.details;
    list.push_back(e);
    passed += s.status == SuiteStatus::pass;
    failed += s.status == SuiteStatus::fail;
    skipped += s.status == SuiteStatus::skipped;
  }
  j["suites"] = list;
  j["summary"] = {{"suites", suites.size()},
                  {"passed", passed},
                  {"failed", failed},
                  {"skipped", skipped},
                  {"pass", pass()},
                  {"exit_code", exit_code()}};
  return j;
}

nlohmann::ordered_json RunReport::timing() const {
  nlohmann::ordered_json t;
  t["total_seconds"] = total_seconds;
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (const SuiteResult& s : suites) per[s.name] = s.wall_seconds;
  t["suites"] = per;
  return t;
}

nlohmann::ordered_json RunReport::outputs() const {
  nlohmann::ordered_json o = nlohmann::ordered_json::object();
  for (const SuiteResult& s : suites)
    if (!s.dumps.empty()) o[s.name] = s.dumps;
  return {{"tensor_dumps", o}};
}

nlohmann::ordered_json RunReport::document() const {
  nlohmann::ordered_json d;
  d["report"] = body();
  d["timing"] = timing();
  d["outputs"] = outputs();
  return d;
}

std::string RunReport::summary_table() const {
  const nlohmann::ordered_json b = body();
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-26s %-8s %-7s %-34s %-10s %-10s %s\n", "suite", "status", "checks",
                "worst check (max / tolerance)", "max", "tolerance", "time [s]");
  os << line;
  for (std::size_t k = 0; k < suites.size(); ++k) {
    const auto& e = b["suites"][k];
    int ok = 0;
    std::string worst = "-", worst_max = "-", worst_tol = "-";
    double worst_ratio = -1.0;
    for (const auto& c : e["checks"]) {
      ok += c["pass"].get<bool>();
      const double mx = c["max"].is_number() ? c["max"].get<double>() : INFINITY;
      const double ratio = mx / c["tolerance"].get<double>();
      if (!(ratio <= worst_ratio)) {
        worst_ratio = ratio;
        worst = c["name"].get<std::string>();
        worst_max = format_double(mx);
        worst_tol = format_double(c["tolerance"].get<double>());
      }
    }
    std::string status = e["status"].get<std::string>();
    const std::string checks = std::to_string(ok) + "/" + std::to_string(e["checks"].size());
    std::snprintf(line, sizeof line, "%-26s %-8s %-7s %-34s %-10s %-10s %.3f\n", e["name"].get<std::string>().c_str(),
                  status.c_str(), checks.c_str(), worst.c_str(), worst_max.c_str(), worst_tol.c_str(),
                  suites[k].wall_seconds);
    os << line;
    if (e.contains("reason")) os << "    " << e["reason"].get<std::string>() << '\n';
    if (e.contains("diagnostic")) os << "    " << e["diagnostic"].get<std::string>() << '\n';
  }
  const auto& sum = b["summary"];
  os << "result: " << (pass() ? "PASS" : "FAIL") << " (" << sum["passed"] << " passed, " << sum["failed"]
     << " failed, " << sum["skipped"] << " skipped; config " << config_hash << ")\n";
  return os.str();
}

}  // namespace fgeo
