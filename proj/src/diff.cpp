#include "fgeo/diff.hpp"

#include <string>

namespace fgeo {

ToleranceProfile::ToleranceProfile()
    : values_{
          {"algebraic", 1e-10},
          {"jet", 1e-8},
          {"finite_difference", 1e-6},
          {"christoffel", 1e-8},
          {"nabla_b", 1e-9},
          {"nabla_c", 1e-8},
          {"vacuum_ricci", 1e-9},
          {"ricci_consistency", 1e-9},
          {"curvature", 1e-6},
          {"contraction", 1e-9},
          {"finsler_identity", 1e-10},
          {"spray_homogeneity", 1e-9},
          {"spray_scaling", 1e-12},
          {"spray_closed_form", 1e-7},
          {"riemannian_collapse", 1e-12},
          {"bundle_riemannian_limit", 1e-5},
          {"bundle_routes", 1e-5},
          {"bundle_fiber_contraction", 1e-6},
          {"horizontal_derivative", 1e-8},
      } {}

double ToleranceProfile::get(const std::string& name) const {
  const auto it = values_.find(name);
  if (it == values_.end()) throw Error(ErrorCode::validation, "unknown tolerance class '" + name + "'");
  return it->second;
}

void ToleranceProfile::set(const std::string& name, double value) {
  if (!values_.contains(name)) throw Error(ErrorCode::validation, "unknown tolerance class '" + name + "'");
  if (!(value > 0.0)) throw Error(ErrorCode::validation, "tolerance '" + name + "' must be > 0");
  values_[name] = value;
}

void DiffConfig::validate() const {
  if (!(fd_step > 0.0)) throw Error(ErrorCode::validation, "fd_step must be > 0");
  if (!(nested_step > 0.0)) throw Error(ErrorCode::validation, "nested_step must be > 0");
  if (fd_order != 2 && fd_order != 4) throw Error(ErrorCode::validation, "fd_order must be 2 or 4");
}

}  // namespace fgeo
