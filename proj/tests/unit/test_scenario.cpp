#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fgeo/runner.hpp"

using namespace fgeo;

namespace {

ErrorCode code_of(std::string_view text, std::string* message = nullptr) {
  try {
    (void)parse_scenario(text);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ErrorCode::shape;
}

const SuiteResult& only_suite(const RunReport& r) {
  EXPECT_EQ(r.suites.size(), 1u);
  return r.suites.at(0);
}

const CheckResult& check_named(const SuiteResult& s, const std::string& name) {
  for (const CheckResult& c : s.checks)
    if (c.name == name) return c;
  throw std::runtime_error("no check " + name);
}

}  // namespace

TEST(ParseScenario, EmptyFileGivesDefaults) {
  const Scenario s = parse_scenario("");
  EXPECT_EQ(s.dim, 4);
  EXPECT_EQ(s.signature, -1);
  EXPECT_EQ(s.charge, 0.0);
  ASSERT_TRUE(std::holds_alternative<SchwarzschildIsotropic>(s.profile));
  EXPECT_EQ(std::get<SchwarzschildIsotropic>(s.profile).xi, 1.0);
  EXPECT_EQ(std::get<SchwarzschildIsotropic>(s.profile).m_sign, -1.0);
  EXPECT_TRUE(s.suites.empty());
  EXPECT_EQ(s.diff.tolerances.get("algebraic"), 1e-10);
  EXPECT_EQ(s.diff.tolerances.get("jet"), 1e-8);
  EXPECT_EQ(s.diff.tolerances.get("finite_difference"), 1e-6);
}

TEST(ParseScenario, MinimalVacuumFileFillsThePresetRadii) {
  const Scenario s = parse_scenario("suites: [vacuum]\nprofile: {kind: schwarzschild, xi: 1}\n");
  EXPECT_EQ(s.dim, 4);
  EXPECT_EQ(s.radii, (std::vector<double>{0.5, 1.0, 2.0, 5.0, 10.0}));
  ASSERT_EQ(s.suites.size(), 1u);
  EXPECT_EQ(s.suites[0], Suite::vacuum);
}

TEST(ParseScenario, FullFileRoundTripsEveryField) {
  const Scenario s = parse_scenario(R"(
dimension: 5
signature: 1
profile:
  kind: rational
  c_num: [0.5, 0.3]
  c_den: [1.0, 0.1]
  m_num: [1.0, 0.5, 0.1]
  r_min: 0.1
charge: -0.4
seed: 7
radii: [1, 2]
point_count: 3
sample_count: 4
radius_range: [1, 3]
points:
  - [0, 1, 1, 0, 0]
samples:
  - {x: [0, 1, 0, 0, 0], y: [0.2, 0, 1, 0, 0]}
differentiation: {fd_step: 2.0e-5, nested_step: 1.0e-3, fd_order: 2}
tolerances: {curvature: 1.0e-7}
suites: [frame-identities, finsler-curvature]
output: {report: r.json, summary: s.txt, dump_tensors: dumps}
parallel: true
)");
  EXPECT_EQ(s.dim, 5);
  EXPECT_EQ(s.signature, 1);
  const auto& p = std::get<RationalProfile>(s.profile);
  EXPECT_EQ(p.m_num.size(), 3u);
  EXPECT_EQ(p.r_min, 0.1);
  EXPECT_EQ(s.charge, -0.4);
  EXPECT_EQ(s.seed, 7u);
  EXPECT_EQ(s.point_count, 3);
  EXPECT_EQ(s.sample_count, 4);
  EXPECT_EQ(s.radius_lo, 1.0);
  EXPECT_EQ(s.radius_hi, 3.0);
  ASSERT_EQ(s.points.size(), 1u);
  ASSERT_EQ(s.samples.size(), 1u);
  EXPECT_EQ(s.samples[0].y[2], 1.0);
  EXPECT_EQ(s.diff.fd_step, 2e-5);
  EXPECT_EQ(s.diff.fd_order, 2);
  EXPECT_EQ(s.diff.tolerances.get("curvature"), 1e-7);
  EXPECT_EQ(s.suites, (std::vector<Suite>{Suite::frame_identities, Suite::finsler_curvature}));
  EXPECT_EQ(s.report_path, "r.json");
  EXPECT_EQ(s.summary_path, "s.txt");
  EXPECT_EQ(s.dump_dir, "dumps");
  EXPECT_TRUE(s.parallel);
}

TEST(ParseScenario, ProfileSignsFollowTheSignature) {
  const Scenario a = parse_scenario("signature: 1\n");
  EXPECT_EQ(std::get<SchwarzschildIsotropic>(a.profile).m_sign, 1.0);
  const Scenario b = parse_scenario("signature: 1\nprofile: {kind: constant}\n");
  EXPECT_EQ(std::get<ConstantProfile>(b.profile).m0, 1.0);
  const Scenario c = parse_scenario("profile: {kind: constant, c0: 2}\n");
  EXPECT_EQ(std::get<ConstantProfile>(c.profile).m0, -1.0);
}

TEST(ParseScenario, DimensionOutOfRange) {
  std::string message;
  EXPECT_EQ(code_of("dimension: 9\n", &message), ErrorCode::validation);
  EXPECT_NE(message.find("N must be in [2,8]"), std::string::npos) << message;
  EXPECT_EQ(code_of("dimension: 1\n"), ErrorCode::validation);
}

TEST(ParseScenario, ConstraintViolationsNameTheConstraint) {
  std::string message;
  EXPECT_EQ(code_of("profile: {kind: schwarzschild, xi: 0}\n", &message), ErrorCode::validation);
  EXPECT_NE(message.find("xi must be > 0"), std::string::npos) << message;
  EXPECT_EQ(code_of("signature: 2\n", &message), ErrorCode::validation);
  EXPECT_NE(message.find("signature"), std::string::npos);
  EXPECT_EQ(code_of("radius_range: [2, 1]\n"), ErrorCode::validation);
  EXPECT_EQ(code_of("radii: [1, -1]\n"), ErrorCode::validation);
  EXPECT_EQ(code_of("point_count: 0\n"), ErrorCode::validation);
  EXPECT_EQ(code_of("differentiation: {fd_step: 0}\n"), ErrorCode::validation);
  EXPECT_EQ(code_of("differentiation: {fd_order: 3}\n"), ErrorCode::validation);
  EXPECT_EQ(code_of("tolerances: {curvature: -1}\n"), ErrorCode::validation);
  EXPECT_EQ(code_of("points: [[1, 2, 3]]\n"), ErrorCode::validation);
}

TEST(ParseScenario, UnknownKeyReportsItsLocation) {
  std::string message;
  EXPECT_EQ(code_of("dimension: 4\nsuites: [vacuum]\nfoo: 1\n", &message), ErrorCode::parse);
  EXPECT_NE(message.find("unknown key 'foo'"), std::string::npos) << message;
  EXPECT_NE(message.find("line 3, column 1"), std::string::npos) << message;

  EXPECT_EQ(code_of("profile:\n  kind: schwarzschild\n  xii: 2\n", &message), ErrorCode::parse);
  EXPECT_NE(message.find("line 3, column 3"), std::string::npos) << message;
}

TEST(ParseScenario, MalformedValuesAreParseErrors) {
  std::string message;
  EXPECT_EQ(code_of("dimension: four\n", &message), ErrorCode::parse);
  EXPECT_NE(message.find("line 1"), std::string::npos) << message;
  EXPECT_EQ(code_of("suites: [vacuum, nonsense]\n"), ErrorCode::parse);
  EXPECT_EQ(code_of("tolerances: {nonsense: 1}\n"), ErrorCode::parse);
  EXPECT_EQ(code_of("profile: {kind: cubic}\n"), ErrorCode::parse);
  EXPECT_EQ(code_of("radii: 3\n"), ErrorCode::parse);
  EXPECT_EQ(code_of("radius_range: [1, 2, 3]\n"), ErrorCode::parse);
  EXPECT_EQ(code_of("samples: [{x: [1, 1, 0, 0]}]\n"), ErrorCode::parse);
  EXPECT_EQ(code_of("- just\n- a list\n"), ErrorCode::parse);
  EXPECT_EQ(code_of("suites: [vacuum\n"), ErrorCode::parse);
}

TEST(ParseScenario, MissingFileIsAParseError) {
  try {
    (void)load_scenario("/nonexistent/scenario.yaml");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::parse);
  }
}

TEST(ParseScenario, ConfigHashTracksTheNumbersOnly) {
  const Scenario a = parse_scenario("seed: 1\nsuites: [vacuum]\n");
  const Scenario b = parse_scenario("seed: 1\nsuites: [vacuum]\noutput: {report: x.json}\nparallel: true\n");
  const Scenario c = parse_scenario("seed: 2\nsuites: [vacuum]\n");
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_NE(config_hash(a), config_hash(c));
  EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(ScenarioSamples, SeededFinslerSamplesAreReproducible) {
  const std::string text = "signature: 1\ncharge: 0.3\nseed: 42\nsuites: [finsler-curvature]\n";
  const auto a = scenario_samples(parse_scenario(text), Suite::finsler_curvature);
  const auto b = scenario_samples(parse_scenario(text), Suite::finsler_curvature);
  ASSERT_EQ(a.size(), 100u);
  ASSERT_EQ(b.size(), 100u);
  for (std::size_t j = 0; j < a.size(); ++j) {
    EXPECT_EQ(max_abs_diff(a[j].x, b[j].x), 0.0);
    EXPECT_EQ(max_abs_diff(a[j].y, b[j].y), 0.0);
  }
  const auto c = scenario_samples(parse_scenario("signature: 1\ncharge: 0.3\nseed: 43\n"), Suite::finsler_curvature);
  EXPECT_GT(max_abs_diff(a[0].x, c[0].x), 0.0);
}

TEST(ScenarioSamples, SuitesDrawIndependentStreams) {
  const Scenario s = parse_scenario("");
  EXPECT_NE(suite_seed(42, Suite::frame_identities), suite_seed(42, Suite::christoffel_xcheck));
  const auto a = scenario_points(s, Suite::frame_identities);
  const auto b = scenario_points(s, Suite::christoffel_xcheck);
  EXPECT_GT(max_abs_diff(a[0], b[0]), 0.0);
}

TEST(ScenarioSamples, ExplicitPointsReplaceRandomOnes) {
  const Scenario s = parse_scenario("points: [[0, 1, 2, 2]]\n");
  const auto pts = scenario_points(s, Suite::frame_identities);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0][3], 2.0);
}

TEST(Run, EmptySuiteListIsAValidEmptyReport) {
  const RunReport r = run(parse_scenario("suites: []\n"));
  EXPECT_TRUE(r.suites.empty());
  EXPECT_EQ(r.exit_code(), 0);
  EXPECT_TRUE(r.body()["suites"].empty());
  EXPECT_EQ(r.body()["summary"]["exit_code"], 0);
}

TEST(Run, VacuumScenarioPasses) {
  const RunReport r = run(parse_scenario("suites: [vacuum]\n"));
  const SuiteResult& s = only_suite(r);
  EXPECT_EQ(s.status, SuiteStatus::pass);
  EXPECT_LT(check_named(s, "ricci_zero").max, 1e-9);
  EXPECT_EQ(check_named(s, "ricci_zero").values.size(), 5u);
  EXPECT_EQ(r.exit_code(), 0);
}

TEST(Run, FiveDimensionalVacuumFailsOnRicci) {
  const RunReport r = run(parse_scenario("dimension: 5\nsuites: [vacuum]\n"));
  const SuiteResult& s = only_suite(r);
  EXPECT_EQ(s.status, SuiteStatus::fail);
  EXPECT_FALSE(check_named(s, "ricci_zero").pass);
  EXPECT_EQ(r.exit_code(), 1);
}

TEST(Run, UnmetPreconditionsSkipWithoutFailing) {
  const RunReport r = run(parse_scenario(
      "profile: {kind: constant}\nsuites: [vacuum, schwarzschild-reductions, finsler-identities, frame-identities]\n"));
  ASSERT_EQ(r.suites.size(), 4u);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(r.suites[static_cast<std::size_t>(k)].status, SuiteStatus::skipped);
  EXPECT_EQ(r.suites[3].status, SuiteStatus::pass);
  EXPECT_EQ(r.exit_code(), 0);
  const std::string reason = r.body()["suites"][0]["reason"];
  EXPECT_EQ(reason.rfind("skipped (", 0), 0u) << reason;
}

TEST(Run, RadiiInsideThePoleAreSkipped) {
  const RunReport r = run(parse_scenario("profile: {xi: 4}\nradius_range: [2, 10]\nsuites: [vacuum, frame-identities]\n"));
  EXPECT_EQ(r.suites[0].status, SuiteStatus::skipped);
  EXPECT_NE(r.suites[0].reason.find("outside the profile domain"), std::string::npos);
  EXPECT_EQ(r.suites[1].status, SuiteStatus::pass);
}

TEST(Run, ReductionsNeedFourDimensions) {
  const RunReport r = run(parse_scenario("dimension: 5\nsuites: [schwarzschild-reductions]\n"));
  EXPECT_EQ(only_suite(r).status, SuiteStatus::skipped);
}

TEST(Run, NumericalErrorFailsTheSuiteWithADiagnostic) {
  // Signature -1 with m < 0 leaves no admissible fiber vectors.
  const RunReport r = run(parse_scenario("allow_indefinite_finsler: true\nsuites: [finsler-identities, vacuum]\n"));
  EXPECT_EQ(r.suites[0].status, SuiteStatus::fail);
  EXPECT_NE(r.suites[0].diagnostic.find("no admissible fiber"), std::string::npos) << r.suites[0].diagnostic;
  EXPECT_EQ(r.suites[1].status, SuiteStatus::pass);
  EXPECT_EQ(r.exit_code(), 1);
}

TEST(Run, ToleranceOverrideCanFailACheck) {
  const RunReport r = run(parse_scenario("suites: [curvature-xcheck]\ntolerances: {curvature: 1.0e-16}\n"));
  EXPECT_EQ(only_suite(r).status, SuiteStatus::fail);
  EXPECT_FALSE(check_named(r.suites[0], "curvature_closed_vs_oracle").pass);
}

TEST(Run, EverySuitePassesOnThePositiveDefiniteSchwarzschildScenario) {
  const RunReport r = run(parse_scenario(
      "signature: 1\ncharge: 0.3\nsample_count: 20\npoint_count: 5\n"
      "suites: [frame-identities, christoffel-xcheck, curvature-xcheck, vacuum, schwarzschild-reductions, "
      "finsler-identities, finsler-curvature]\n"));
  ASSERT_EQ(r.suites.size(), 7u);
  for (const SuiteResult& s : r.suites) {
    EXPECT_EQ(s.status, SuiteStatus::pass) << s.name << " " << s.diagnostic;
    EXPECT_FALSE(s.checks.empty()) << s.name;
  }
  EXPECT_EQ(r.suites[6].details["riemannian_limit_sign"], 1.0);
}

TEST(Run, BodyIsDeterministicAndIndependentOfParallelism) {
  const std::string text =
      "signature: 1\ncharge: 0.3\nsample_count: 10\nsuites: [christoffel-xcheck, finsler-identities, "
      "finsler-curvature]\n";
  const RunReport a = run(parse_scenario(text));
  const RunReport b = run(parse_scenario(text));
  Scenario par = parse_scenario(text);
  par.parallel = true;
  const RunReport c = run(par);
  EXPECT_EQ(a.body().dump(), b.body().dump());
  EXPECT_EQ(a.body().dump(), c.body().dump());
  EXPECT_FALSE(a.body().contains("timing"));
  EXPECT_TRUE(a.document().contains("timing"));
}

TEST(Run, ChecksReportMaxAndMedian) {
  const RunReport r = run(parse_scenario("suites: [frame-identities]\npoint_count: 3\n"));
  for (const CheckResult& c : only_suite(r).checks) {
    ASSERT_EQ(c.values.size(), 3u);
    std::vector<double> v = c.values;
    std::sort(v.begin(), v.end());
    EXPECT_EQ(c.max, v[2]);
    EXPECT_EQ(c.median, v[1]);
  }
}

TEST(Run, SummaryTableListsEverySuite) {
  const RunReport r = run(parse_scenario("suites: [vacuum, finsler-curvature]\n"));
  const std::string t = r.summary_table();
  EXPECT_NE(t.find("vacuum"), std::string::npos);
  EXPECT_NE(t.find("skipped ("), std::string::npos);
  EXPECT_NE(t.find("result: PASS"), std::string::npos);
}

TEST(TensorDump, OneRowPerComponentAtFullPrecision) {
  const auto dir = std::filesystem::temp_directory_path() / "fgeo_dump_test";
  std::filesystem::create_directories(dir);
  Tensor t(3, {Variance::upper, Variance::lower});
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = 1.0 / (3.0 + static_cast<double>(k));
  const std::string path = (dir / "t.csv").string();
  write_tensor_csv(path, t);
  std::ifstream in(path);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string i, j, value;
    std::getline(row, i, ',');
    std::getline(row, j, ',');
    std::getline(row, value);
    const std::size_t flat = static_cast<std::size_t>(std::stoi(i) * 3 + std::stoi(j));
    EXPECT_EQ(std::strtod(value.c_str(), nullptr), t[flat]);
    ++rows;
  }
  EXPECT_EQ(rows, 9u);
}

TEST(TensorDump, RunWritesDumpsOutsideTheBody) {
  const auto dir = std::filesystem::temp_directory_path() / "fgeo_run_dumps";
  std::filesystem::remove_all(dir);
  Scenario s = parse_scenario("suites: [curvature-xcheck]\n");
  s.dump_dir = dir.string();
  const RunReport r = run(s);
  EXPECT_TRUE(std::filesystem::exists(dir / "curvature-xcheck_curvature_closed.csv"));
  EXPECT_EQ(r.outputs()["tensor_dumps"]["curvature-xcheck"].size(), 3u);
  EXPECT_EQ(r.body().dump(), run(parse_scenario("suites: [curvature-xcheck]\n")).body().dump());
}
