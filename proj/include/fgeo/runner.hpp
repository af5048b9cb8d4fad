#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fgeo/scenario.hpp"

namespace fgeo {

/// One graded residual family: a value per sample against one tolerance.
struct CheckResult {
  std::string name;
  std::string tolerance_class;
  double tolerance = 0.0;
  std::vector<double> values;
  double max = 0.0;
  double median = 0.0;
  bool pass = false;
};

// Reported but not graded.
struct Diagnostic {
  std::string name;
  double max = 0.0;
};

enum class SuiteStatus { pass, fail, skipped };

struct SuiteResult {
  std::string name;
  SuiteStatus status = SuiteStatus::pass;
  std::string reason;      // why a suite was skipped
  std::string diagnostic;  // runtime error that failed the suite
  std::vector<CheckResult> checks;
  std::vector<Diagnostic> diagnostics;
  std::vector<std::string> notes;
  std::vector<std::string> dumps;  // CSV file names written under the dump directory
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
};

struct RunReport {
  nlohmann::ordered_json scenario;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<SuiteResult> suites;
  double total_seconds = 0.0;

  bool pass() const;
  // 0 when no suite failed, 1 otherwise.
  int exit_code() const;
  // Everything except wall times; identical for identical scenarios.
  nlohmann::ordered_json body() const;
  nlohmann::ordered_json timing() const;
  // CSV dump file names per suite; depends on the output options.
  nlohmann::ordered_json outputs() const;
  // {"report": body, "timing": timing, "outputs": outputs}
  nlohmann::ordered_json document() const;
  // Fixed-width table derived from the body, with wall times appended.
  std::string summary_table() const;
};

// Seed of one suite's sample stream, derived from the scenario seed.
std::uint64_t suite_seed(std::uint64_t base, Suite suite);

// Points and (x, y) samples a suite uses: explicit ones if given, otherwise
// drawn from suite_seed(scenario.seed, suite).
std::vector<Tensor> scenario_points(const Scenario& s, Suite suite);
std::vector<FiberSample> scenario_samples(const Scenario& s, Suite suite);

// Empty when the suite can run; otherwise the reason it is skipped.
std::string suite_precondition(const Scenario& s, Suite suite);

// Validates every precondition first, then runs the suites in order. Writes
// CSV dumps when s.dump_dir is set; does not write the report itself.
RunReport run(const Scenario& s);

// One row per component: indices..., value (17 significant digits).
void write_tensor_csv(const std::string& path, const Tensor& t);

}  // namespace fgeo
