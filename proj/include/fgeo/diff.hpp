#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "fgeo/error.hpp"
#include "fgeo/tensor.hpp"

namespace fgeo {

/// Named tolerances. The three generic classes follow the error budget of the
/// route that produced a number: pure algebra, analytic jets, or anything that
/// passed through a finite-difference stencil. The remaining entries pin the
/// thresholds of individual cross-checks.
class ToleranceProfile {
 public:
  ToleranceProfile();

  double get(const std::string& name) const;
  void set(const std::string& name, double value);
  bool contains(const std::string& name) const { return values_.contains(name); }
  const std::map<std::string, double>& values() const noexcept { return values_; }

 private:
  std::map<std::string, double> values_;
};

struct DiffConfig {
  // Relative step of first-derivative stencils.
  double fd_step = 1e-5;
  // Relative step for stencils that produce second derivatives on their own
  // (no jet available); kept larger since rounding scales as 1/h^2.
  double nested_step = 1e-3;
  int fd_order = 4;
  ToleranceProfile tolerances;

  void validate() const;
};

namespace detail {

inline void require_finite(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::stencil_evaluation, "non-finite value at stencil point");
}

inline void require_finite(const Tensor& t) {
  for (double v : t.components()) require_finite(v);
}

template <class V>
V combine(int order, const V& fm2, const V& fm1, const V& fp1, const V& fp2, double h) {
  if (order == 2) return (fp1 - fm1) / (2.0 * h);
  return (fm2 - fp2 + 8.0 * (fp1 - fm1)) / (12.0 * h);
}

}  // namespace detail

/// Central difference of a scalar function of one variable.
template <class F>
double fd_derivative(F&& f, double x, double h, int order = 4) {
  auto eval = [&](double t) {
    const double v = f(t);
    detail::require_finite(v);
    return v;
  };
  const double fm1 = eval(x - h), fp1 = eval(x + h);
  double fm2 = 0.0, fp2 = 0.0;
  if (order == 4) {
    fm2 = eval(x - 2.0 * h);
    fp2 = eval(x + 2.0 * h);
  }
  return detail::combine(order, fm2, fm1, fp1, fp2, h);
}

template <class F>
double fd_second_derivative(F&& f, double x, double h, int order = 4) {
  auto eval = [&](double t) {
    const double v = f(t);
    detail::require_finite(v);
    return v;
  };
  const double f0 = eval(x), fm1 = eval(x - h), fp1 = eval(x + h);
  if (order == 2) return (fp1 - 2.0 * f0 + fm1) / (h * h);
  const double fm2 = eval(x - 2.0 * h), fp2 = eval(x + 2.0 * h);
  return (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
}

/// Directional derivative d/dt f(x + t d) at t = 0; f maps a point to a
/// double or a Tensor.
template <class F>
auto fd_directional(F&& f, const Tensor& x, const Tensor& direction, double h, int order = 4) {
  auto eval = [&](double t) {
    Tensor p = x;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += t * direction[i];
    auto v = f(p);
    detail::require_finite(v);
    return v;
  };
  auto fm1 = eval(-h);
  auto fp1 = eval(h);
  if (order == 2) return detail::combine(2, fm1, fm1, fp1, fp1, h);
  auto fm2 = eval(-2.0 * h);
  auto fp2 = eval(2.0 * h);
  return detail::combine(4, fm2, fm1, fp1, fp2, h);
}

inline double default_step_scale(const Tensor& x) { return std::max(1.0, max_abs(x)); }

/// Central-difference gradient of a scalar field; returns a covector.
/// The step is cfg.fd_step * scale (scale <= 0 selects max(1, |x|_inf)).
template <class F>
Tensor fd_gradient(F&& f, const Tensor& x, const DiffConfig& cfg, double scale = 0.0) {
  const double h = cfg.fd_step * (scale > 0.0 ? scale : default_step_scale(x));
  Tensor grad(x.dim(), {Variance::lower});
  for (int k = 0; k < x.dim(); ++k) {
    Tensor e(x.dim(), {Variance::upper});
    e[static_cast<std::size_t>(k)] = 1.0;
    grad[static_cast<std::size_t>(k)] = fd_directional(f, x, e, h, cfg.fd_order);
  }
  return grad;
}

/// Gradient of a tensor field T(x); the derivative index is prepended as a
/// covariant axis: result(k, ...) = dT(...)/dx^k.
template <class F>
Tensor fd_field_gradient(F&& f, const Tensor& x, const DiffConfig& cfg, double scale = 0.0) {
  const double h = cfg.fd_step * (scale > 0.0 ? scale : default_step_scale(x));
  Tensor result;
  for (int k = 0; k < x.dim(); ++k) {
    Tensor e(x.dim(), {Variance::upper});
    e[static_cast<std::size_t>(k)] = 1.0;
    const Tensor dk = fd_directional(f, x, e, h, cfg.fd_order);
    if (k == 0) {
      std::vector<Variance> v{Variance::lower};
      v.insert(v.end(), dk.variances().begin(), dk.variances().end());
      result = Tensor(x.dim(), std::span<const Variance>(v));
    }
    const std::size_t block = dk.size();
    for (std::size_t j = 0; j < block; ++j) result[static_cast<std::size_t>(k) * block + j] = dk[j];
  }
  return result;
}

}  // namespace fgeo
