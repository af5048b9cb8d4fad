// Command-line front end: runs verification suites and writes reports.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fgeo/runner.hpp"

namespace {

constexpr int kConfigError = 2;

struct CommonOptions {
  std::optional<std::uint64_t> seed;
  std::vector<std::string> tolerance_overrides;
  std::string dump_dir;
  bool parallel = false;
  std::string report_path;
  std::string summary_path;
  bool json = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--seed", o.seed, "Base seed of all random sampling");
  cmd->add_option("--tolerance-class", o.tolerance_overrides, "Override a tolerance class, name=value (repeatable)");
  cmd->add_option("--dump-tensors", o.dump_dir, "Write per-component CSV dumps into this directory");
  cmd->add_flag("--parallel", o.parallel, "Evaluate samples within a suite on all hardware threads");
  cmd->add_option("--report", o.report_path, "Write the JSON report document to this file");
  cmd->add_option("--summary", o.summary_path, "Write the summary table to this file");
  cmd->add_flag("--json", o.json, "Print the JSON report document instead of the summary table");
  cmd->add_flag("--quiet", o.quiet, "Print nothing; rely on the exit code and output files");
}

void apply_common(fgeo::Scenario& s, const CommonOptions& o) {
  if (o.seed) s.seed = *o.seed;
  for (const std::string& item : o.tolerance_overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw fgeo::Error(fgeo::ErrorCode::parse, "--tolerance-class expects name=value, got '" + item + "'");
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw fgeo::Error(fgeo::ErrorCode::parse, "--tolerance-class value is not a number in '" + item + "'");
    }
    s.diff.tolerances.set(item.substr(0, eq), value);
  }
  if (!o.dump_dir.empty()) s.dump_dir = o.dump_dir;
  if (o.parallel) s.parallel = true;
  if (!o.report_path.empty()) s.report_path = o.report_path;
  if (!o.summary_path.empty()) s.summary_path = o.summary_path;
  fgeo::validate_scenario(s);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out || !(out << text)) throw fgeo::Error(fgeo::ErrorCode::validation, "cannot write '" + path + "'");
}

int execute(const fgeo::Scenario& s, const CommonOptions& o) {
  const fgeo::RunReport report = fgeo::run(s);
  const std::string document = report.document().dump(2) + "\n";
  const std::string table = report.summary_table();
  if (!s.report_path.empty()) write_file(s.report_path, document);
  if (!s.summary_path.empty()) write_file(s.summary_path, table);
  if (!o.quiet) std::cout << (o.json ? document : table);
  return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification runner for the Finsleroid-Riemann metric family"};
  app.require_subcommand(1);

  CommonOptions common;

  std::string scenario_file;
  CLI::App* run_cmd = app.add_subcommand("run", "Run the suites of a scenario file");
  run_cmd->add_option("scenario-file", scenario_file, "YAML scenario")->required();
  add_common(run_cmd, common);

  double vac_xi = 1.0;
  int vac_dim = 4;
  int vac_signature = -1;
  std::vector<double> vac_radii{0.5, 1.0, 2.0, 5.0, 10.0};
  CLI::App* vac_cmd = app.add_subcommand("verify-vacuum", "Ricci-flatness of the isotropic Schwarzschild profiles");
  vac_cmd->add_option("--xi", vac_xi, "Schwarzschild parameter xi")->capture_default_str();
  vac_cmd->add_option("--dim", vac_dim, "Dimension N")->capture_default_str();
  vac_cmd->add_option("--signature", vac_signature, "Background signature, +1 or -1")->capture_default_str();
  vac_cmd->add_option("--radii", vac_radii, "Sample radii")->capture_default_str();
  add_common(vac_cmd, common);

  double fc_charge = 0.0;
  int fc_dim = 4;
  int fc_samples = 5;
  int fc_signature = 1;
  std::string fc_profile = "schwarzschild";
  double fc_xi = 1.0;
  bool fc_indefinite = false;
  CLI::App* fc_cmd = app.add_subcommand("finsler-curvature", "Curvature bundle of the Finsleroid spray");
  fc_cmd->add_option("--charge", fc_charge, "Finsleroid charge g")->capture_default_str();
  fc_cmd->add_option("--dim", fc_dim, "Dimension N")->capture_default_str();
  fc_cmd->add_option("--samples", fc_samples, "Number of seeded (x, y) samples")->capture_default_str();
  fc_cmd->add_option("--profile", fc_profile, "schwarzschild or rational")
      ->check(CLI::IsMember({"schwarzschild", "rational"}))
      ->capture_default_str();
  fc_cmd->add_option("--xi", fc_xi, "Schwarzschild parameter xi")->capture_default_str();
  fc_cmd->add_option("--signature", fc_signature, "Background signature, +1 or -1")->capture_default_str();
  fc_cmd->add_flag("--allow-indefinite", fc_indefinite, "Permit signature -1 (exploratory)");
  add_common(fc_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  fgeo::Scenario scenario;
  try {
    if (run_cmd->parsed()) {
      scenario = fgeo::load_scenario(scenario_file);
    } else if (vac_cmd->parsed()) {
      scenario.dim = vac_dim;
      scenario.signature = vac_signature;
      scenario.profile = fgeo::SchwarzschildIsotropic{vac_xi, static_cast<double>(vac_signature)};
      scenario.radii = vac_radii;
      scenario.suites = {fgeo::Suite::vacuum};
    } else {
      scenario.dim = fc_dim;
      scenario.signature = fc_signature;
      scenario.allow_indefinite_finsler = fc_indefinite;
      scenario.charge = fc_charge;
      scenario.sample_count = fc_samples;
      if (fc_profile == "rational") {
        fgeo::RationalProfile p;
        p.c_num = {0.5, 0.3};
        p.c_den = {1.0, 0.1};
        p.m_num = {1.0, 0.5, 0.1};
        scenario.profile = p;
      } else {
        scenario.profile = fgeo::SchwarzschildIsotropic{fc_xi, static_cast<double>(fc_signature)};
      }
      scenario.suites = {fgeo::Suite::finsler_curvature};
    }
    apply_common(scenario, common);
  } catch (const fgeo::Error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    return execute(scenario, common);
  } catch (const fgeo::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
}
