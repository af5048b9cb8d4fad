#include "fgeo/scenario.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace fgeo {

namespace {

constexpr std::array<std::pair<Suite, std::string_view>, 7> kSuiteNames{{
    {Suite::frame_identities, "frame-identities"},
    {Suite::christoffel_xcheck, "christoffel-xcheck"},
    {Suite::curvature_xcheck, "curvature-xcheck"},
    {Suite::vacuum, "vacuum"},
    {Suite::schwarzschild_reductions, "schwarzschild-reductions"},
    {Suite::finsler_identities, "finsler-identities"},
    {Suite::finsler_curvature, "finsler-curvature"},
}};

std::string where(const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) return "";
  return " at line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1);
}

[[noreturn]] void parse_error(const YAML::Node& node, const std::string& what) {
  throw Error(ErrorCode::parse, what + where(node));
}

void require_map(const YAML::Node& node, const std::string& what) {
  if (!node.IsMap()) parse_error(node, what + " must be a mapping");
}

// Rejects keys outside `allowed`, reporting the key's own position.
void check_keys(const YAML::Node& map, std::initializer_list<std::string_view> allowed, const std::string& section) {
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    bool known = false;
    for (std::string_view a : allowed) known = known || a == key;
    if (!known) parse_error(kv.first, "unknown key '" + key + "' in " + section);
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) parse_error(node, "'" + key + "' must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::BadConversion&) {
    parse_error(node, "'" + key + "' has an invalid value '" + node.Scalar() + "'");
  }
}

std::vector<double> real_list(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) parse_error(node, "'" + key + "' must be a list of numbers");
  std::vector<double> out;
  for (const auto& item : node) out.push_back(scalar<double>(item, key));
  return out;
}

Tensor point_from(const YAML::Node& node, const std::string& key) {
  const std::vector<double> v = real_list(node, key);
  if (v.empty() || v.size() > static_cast<std::size_t>(kMaxDim)) parse_error(node, "'" + key + "' has a bad length");
  return Tensor::vector(std::span<const double>(v));
}

struct ProfileSpec {
  std::string kind = "schwarzschild";
  double xi = 1.0;
  std::optional<double> m_sign;
  double c0 = 1.0;
  std::optional<double> m0;
  RationalProfile rational;
};

ProfileSpec parse_profile(const YAML::Node& node) {
  require_map(node, "'profile'");
  ProfileSpec p;
  if (node["kind"]) p.kind = scalar<std::string>(node["kind"], "kind");
  if (p.kind == "schwarzschild") {
    check_keys(node, {"kind", "xi", "m_sign"}, "profile (schwarzschild)");
    if (node["xi"]) p.xi = scalar<double>(node["xi"], "xi");
    if (node["m_sign"]) p.m_sign = scalar<double>(node["m_sign"], "m_sign");
  } else if (p.kind == "constant") {
    check_keys(node, {"kind", "c0", "m0"}, "profile (constant)");
    if (node["c0"]) p.c0 = scalar<double>(node["c0"], "c0");
    if (node["m0"]) p.m0 = scalar<double>(node["m0"], "m0");
  } else if (p.kind == "rational") {
    check_keys(node, {"kind", "c_num", "c_den", "m_num", "m_den", "r_min", "r_max"}, "profile (rational)");
    if (node["c_num"]) p.rational.c_num = real_list(node["c_num"], "c_num");
    if (node["c_den"]) p.rational.c_den = real_list(node["c_den"], "c_den");
    if (node["m_num"]) p.rational.m_num = real_list(node["m_num"], "m_num");
    if (node["m_den"]) p.rational.m_den = real_list(node["m_den"], "m_den");
    if (node["r_min"]) p.rational.r_min = scalar<double>(node["r_min"], "r_min");
    if (node["r_max"]) p.rational.r_max = scalar<double>(node["r_max"], "r_max");
  } else {
    parse_error(node["kind"], "unknown profile kind '" + p.kind + "' (expected schwarzschild, constant or rational)");
  }
  return p;
}

ProfileKind build_profile(const ProfileSpec& p, int signature) {
  const double sig = static_cast<double>(signature);
  if (p.kind == "constant") return ConstantProfile{p.c0, p.m0.value_or(sig)};
  if (p.kind == "rational") return p.rational;
  return SchwarzschildIsotropic{p.xi, p.m_sign.value_or(sig)};
}

void require(bool ok, const std::string& constraint) {
  if (!ok) throw Error(ErrorCode::validation, constraint);
}

nlohmann::ordered_json tensor_list(const std::vector<Tensor>& ts) {
  auto out = nlohmann::ordered_json::array();
  for (const Tensor& t : ts) out.push_back(std::vector<double>(t.components().begin(), t.components().end()));
  return out;
}

nlohmann::ordered_json profile_echo(const ProfileKind& kind) {
  nlohmann::ordered_json j;
  j["kind"] = profile_name(kind);
  if (const auto* c = std::get_if<ConstantProfile>(&kind)) {
    j["c0"] = c->c0;
    j["m0"] = c->m0;
  } else if (const auto* s = std::get_if<SchwarzschildIsotropic>(&kind)) {
    j["xi"] = s->xi;
    j["m_sign"] = s->m_sign;
  } else if (const auto* r = std::get_if<RationalProfile>(&kind)) {
    j["c_num"] = r->c_num;
    j["c_den"] = r->c_den;
    j["m_num"] = r->m_num;
    j["m_den"] = r->m_den;
    j["r_min"] = r->r_min;
    // JSON has no infinity; an unbounded interval is echoed as null.
    if (std::isfinite(r->r_max)) j["r_max"] = r->r_max;
    else j["r_max"] = nullptr;
  }
  return j;
}

}  // namespace

std::string_view suite_name(Suite suite) {
  for (const auto& [s, name] : kSuiteNames)
    if (s == suite) return name;
  return "unknown";
}

std::optional<Suite> suite_from_name(std::string_view name) {
  for (const auto& [s, n] : kSuiteNames)
    if (n == name) return s;
  return std::nullopt;
}

void validate_scenario(const Scenario& s) {
  require(s.dim >= 2 && s.dim <= 8, "N must be in [2,8]");
  require(s.signature == 1 || s.signature == -1, "signature must be +1 or -1");
  validate_profile(s.profile);
  require(std::isfinite(s.charge), "charge g must be finite");
  require(!s.radii.empty(), "radii must not be empty");
  for (double r : s.radii) require(r > 0.0 && std::isfinite(r), "radii must be positive and finite");
  require(s.point_count >= 1, "point_count must be >= 1");
  require(s.sample_count >= 1, "sample_count must be >= 1");
  require(s.radius_lo > 0.0 && s.radius_hi > s.radius_lo && std::isfinite(s.radius_hi),
          "radius_range must satisfy 0 < lo < hi");
  for (const Tensor& p : s.points) require(p.dim() == s.dim, "points must have N components");
  for (const FiberSample& f : s.samples)
    require(f.x.dim() == s.dim && f.y.dim() == s.dim, "samples must have N components in x and y");
  s.diff.validate();
}

Scenario parse_scenario(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw Error(ErrorCode::parse, e.msg + " at line " + std::to_string(e.mark.line + 1) + ", column " +
                                      std::to_string(e.mark.column + 1));
  }
  Scenario s;
  if (root.IsNull()) {
    validate_scenario(s);
    return s;
  }
  require_map(root, "the scenario");
  check_keys(root,
             {"dimension", "signature", "profile", "charge", "allow_indefinite_finsler", "seed", "radii",
              "point_count", "sample_count", "radius_range", "points", "samples", "differentiation", "tolerances",
              "suites", "output", "parallel"},
             "the scenario");

  if (root["dimension"]) s.dim = scalar<int>(root["dimension"], "dimension");
  if (root["signature"]) s.signature = scalar<int>(root["signature"], "signature");
  ProfileSpec profile;
  if (root["profile"]) profile = parse_profile(root["profile"]);
  s.profile = build_profile(profile, s.signature);
  if (root["charge"]) s.charge = scalar<double>(root["charge"], "charge");
  if (root["allow_indefinite_finsler"])
    s.allow_indefinite_finsler = scalar<bool>(root["allow_indefinite_finsler"], "allow_indefinite_finsler");
  if (root["seed"]) s.seed = scalar<std::uint64_t>(root["seed"], "seed");
  if (root["radii"]) s.radii = real_list(root["radii"], "radii");
  if (root["point_count"]) s.point_count = scalar<int>(root["point_count"], "point_count");
  if (root["sample_count"]) s.sample_count = scalar<int>(root["sample_count"], "sample_count");
  if (root["radius_range"]) {
    const std::vector<double> range = real_list(root["radius_range"], "radius_range");
    if (range.size() != 2) parse_error(root["radius_range"], "'radius_range' must be [lo, hi]");
    s.radius_lo = range[0];
    s.radius_hi = range[1];
  }
  if (const YAML::Node pts = root["points"]) {
    if (!pts.IsSequence()) parse_error(pts, "'points' must be a list of coordinate lists");
    for (const auto& p : pts) s.points.push_back(point_from(p, "points"));
  }
  if (const YAML::Node smp = root["samples"]) {
    if (!smp.IsSequence()) parse_error(smp, "'samples' must be a list of {x, y} mappings");
    for (const auto& item : smp) {
      require_map(item, "each sample");
      check_keys(item, {"x", "y"}, "a sample");
      if (!item["x"] || !item["y"]) parse_error(item, "each sample needs both 'x' and 'y'");
      s.samples.push_back({point_from(item["x"], "x"), point_from(item["y"], "y")});
    }
  }
  if (const YAML::Node d = root["differentiation"]) {
    require_map(d, "'differentiation'");
    check_keys(d, {"fd_step", "nested_step", "fd_order"}, "differentiation");
    if (d["fd_step"]) s.diff.fd_step = scalar<double>(d["fd_step"], "fd_step");
    if (d["nested_step"]) s.diff.nested_step = scalar<double>(d["nested_step"], "nested_step");
    if (d["fd_order"]) s.diff.fd_order = scalar<int>(d["fd_order"], "fd_order");
  }
  if (const YAML::Node t = root["tolerances"]) {
    require_map(t, "'tolerances'");
    for (const auto& kv : t) {
      const std::string name = kv.first.as<std::string>();
      if (!s.diff.tolerances.contains(name)) parse_error(kv.first, "unknown tolerance class '" + name + "'");
      s.diff.tolerances.set(name, scalar<double>(kv.second, name));
    }
  }
  if (const YAML::Node list = root["suites"]) {
    if (!list.IsSequence()) parse_error(list, "'suites' must be a list");
    for (const auto& item : list) {
      const std::string name = scalar<std::string>(item, "suites");
      const std::optional<Suite> suite = suite_from_name(name);
      if (!suite) parse_error(item, "unknown suite '" + name + "'");
      s.suites.push_back(*suite);
    }
  }
  if (const YAML::Node out = root["output"]) {
    require_map(out, "'output'");
    check_keys(out, {"report", "summary", "dump_tensors"}, "output");
    if (out["report"]) s.report_path = scalar<std::string>(out["report"], "report");
    if (out["summary"]) s.summary_path = scalar<std::string>(out["summary"], "summary");
    if (out["dump_tensors"]) s.dump_dir = scalar<std::string>(out["dump_tensors"], "dump_tensors");
  }
  if (root["parallel"]) s.parallel = scalar<bool>(root["parallel"], "parallel");

  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse, "cannot read scenario file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

nlohmann::ordered_json scenario_echo(const Scenario& s) {
  nlohmann::ordered_json j;
  j["dimension"] = s.dim;
  j["signature"] = s.signature;
  j["profile"] = profile_echo(s.profile);
  j["charge"] = s.charge;
  j["allow_indefinite_finsler"] = s.allow_indefinite_finsler;
  j["seed"] = s.seed;
  j["radii"] = s.radii;
  j["point_count"] = s.point_count;
  j["sample_count"] = s.sample_count;
  j["radius_range"] = {s.radius_lo, s.radius_hi};
  j["points"] = tensor_list(s.points);
  auto samples = nlohmann::ordered_json::array();
  for (const FiberSample& f : s.samples)
    samples.push_back({{"x", std::vector<double>(f.x.components().begin(), f.x.components().end())},
                       {"y", std::vector<double>(f.y.components().begin(), f.y.components().end())}});
  j["samples"] = samples;
  j["differentiation"] = {{"fd_step", s.diff.fd_step}, {"nested_step", s.diff.nested_step},
                          {"fd_order", s.diff.fd_order}};
  nlohmann::ordered_json tol;
  for (const auto& [name, value] : s.diff.tolerances.values()) tol[name] = value;
  j["tolerances"] = tol;
  auto suites = nlohmann::ordered_json::array();
  for (Suite suite : s.suites) suites.push_back(std::string(suite_name(suite)));
  j["suites"] = suites;
  return j;
}

std::string config_hash(const Scenario& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : scenario_echo(s).dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fgeo
