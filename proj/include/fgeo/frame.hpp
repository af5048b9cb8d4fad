#pragma once

#include "fgeo/tensor.hpp"

namespace fgeo {

/// Background split e_ij = e_i e_j + signature * u_ij of a (pseudo-)Euclidean
/// metric into a unit axis covector e_i and a rank-(N-1) transverse part u_ij.
///
/// The frame also fixes the chart: r = sqrt(u_ij x^i x^j) is evaluated on the
/// chart coordinates directly.
class Frame {
 public:
  // e_i = (1, 0, ..., 0), u_ij = diag(0, 1, ..., 1).
  static Frame standard(int dim, int signature);

  // Validates the split: e_ij invertible, e_i e^i = 1, e^i u_ij = 0,
  // u_ij symmetric and positive semi-definite of rank N-1.
  static Frame from_components(const Tensor& axis_lower, const Tensor& transverse_lower, int signature);

  // The same background in the chart x = J x', with J^i_j = dx^i/dx'^j.
  Frame transformed(const Tensor& jacobian) const;

  int dim() const noexcept { return axis_lower_.dim(); }
  int signature() const noexcept { return signature_; }

  const Tensor& axis_lower() const noexcept { return axis_lower_; }              // e_i
  const Tensor& axis_upper() const noexcept { return axis_upper_; }              // e^i
  const Tensor& transverse_lower() const noexcept { return transverse_lower_; }  // u_ij
  const Tensor& transverse_upper() const noexcept { return transverse_upper_; }  // u^ij
  const Tensor& transverse_mixed() const noexcept { return transverse_mixed_; }  // u_i^j
  const Tensor& background() const noexcept { return background_; }              // e_ij
  const Tensor& background_inverse() const noexcept { return background_inverse_; }

  double radius(const Tensor& x) const;

 private:
  Frame() = default;

  int signature_ = 1;
  Tensor axis_lower_;
  Tensor axis_upper_;
  Tensor transverse_lower_;
  Tensor transverse_upper_;
  Tensor transverse_mixed_;
  Tensor background_;
  Tensor background_inverse_;
};

// Components of `t` in the chart x = J x': lower axes pick up J, upper axes
// J^-1.
Tensor change_chart(const Tensor& t, const Tensor& jacobian);

// x' = J^-1 x.
Tensor point_in_chart(const Tensor& x, const Tensor& jacobian);

}  // namespace fgeo
