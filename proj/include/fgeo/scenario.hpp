#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fgeo/diff.hpp"
#include "fgeo/profiles.hpp"
#include "fgeo/tensor.hpp"

namespace fgeo {

enum class Suite {
  frame_identities,
  christoffel_xcheck,
  curvature_xcheck,
  vacuum,
  schwarzschild_reductions,
  finsler_identities,
  finsler_curvature,
};

std::string_view suite_name(Suite suite);
std::optional<Suite> suite_from_name(std::string_view name);

// An explicit fiber sample: point x with fiber vector y at x.
struct FiberSample {
  Tensor x;
  Tensor y;
};

/// Declarative run configuration. Every field has a default; see
/// scenarios/README.md for the file format.
struct Scenario {
  int dim = 4;
  int signature = -1;
  ProfileKind profile = SchwarzschildIsotropic{1.0, -1.0};
  double charge = 0.0;
  bool allow_indefinite_finsler = false;

  std::uint64_t seed = 42;
  std::vector<double> radii{0.5, 1.0, 2.0, 5.0, 10.0};
  int point_count = 10;
  int sample_count = 100;
  double radius_lo = 0.5;
  double radius_hi = 10.0;
  std::vector<Tensor> points;          // replaces random points when non-empty
  std::vector<FiberSample> samples;    // replaces random (x, y) pairs when non-empty

  DiffConfig diff;
  std::vector<Suite> suites;
  bool parallel = false;

  std::string report_path;
  std::string summary_path;
  std::string dump_dir;
};

// Parses YAML text. Unknown keys and malformed values raise ErrorCode::parse
// with "line L, column C"; constraint violations raise ErrorCode::validation.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

// Re-checks every constraint (used after command-line overrides).
void validate_scenario(const Scenario& s);

// Everything that determines the numbers of a run (output paths and the
// parallel flag excluded), with defaults filled in.
nlohmann::ordered_json scenario_echo(const Scenario& s);

// FNV-1a 64 of the compact echo, as 16 hex digits.
std::string config_hash(const Scenario& s);

}  // namespace fgeo
