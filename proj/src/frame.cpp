#include "fgeo/frame.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace fgeo {

namespace {

constexpr double kFrameTolerance = 1e-12;

Tensor move_last_axis(const Tensor& t, int axis) {
  std::array<int, kMaxRank> order{};
  const int last = t.rank() - 1;
  for (int j = 0; j < t.rank(); ++j) {
    if (j < axis) order[static_cast<std::size_t>(j)] = j;
    else if (j == axis) order[static_cast<std::size_t>(j)] = last;
    else order[static_cast<std::size_t>(j)] = j - 1;
  }
  return permute(t, std::span<const int>(order.data(), static_cast<std::size_t>(t.rank())));
}

void check_jacobian(const Tensor& j, int dim) {
  if (j.rank() != 2 || j.dim() != dim || j.variance(0) != Variance::upper || j.variance(1) != Variance::lower) {
    throw Error(ErrorCode::shape, "chart jacobian must be a mixed (upper, lower) rank-2 tensor of the frame dimension");
  }
}

}  // namespace

Frame Frame::standard(int dim, int signature) {
  if (dim < 2 || dim > kMaxDim) throw Error(ErrorCode::invalid_frame, "N must be in [2,8]");
  Tensor e(dim, {Variance::lower});
  e[0] = 1.0;
  Tensor u(dim, {Variance::lower, Variance::lower});
  for (int i = 1; i < dim; ++i) u(i, i) = 1.0;
  return from_components(e, u, signature);
}

Frame Frame::from_components(const Tensor& axis_lower, const Tensor& transverse_lower, int signature) {
  if (signature != 1 && signature != -1) throw Error(ErrorCode::invalid_frame, "signature must be +1 or -1");
  if (axis_lower.rank() != 1 || axis_lower.variance(0) != Variance::lower) {
    throw Error(ErrorCode::invalid_frame, "axis must be a covector");
  }
  const int n = axis_lower.dim();
  if (n < 2 || n > kMaxDim) throw Error(ErrorCode::invalid_frame, "N must be in [2,8]");
  if (transverse_lower.rank() != 2 || transverse_lower.dim() != n || transverse_lower.variance(0) != Variance::lower ||
      transverse_lower.variance(1) != Variance::lower) {
    throw Error(ErrorCode::invalid_frame, "transverse part must be a covariant rank-2 tensor of dimension N");
  }
  const double scale = std::max(1.0, max_abs(transverse_lower));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(transverse_lower(i, j) - transverse_lower(j, i)) > kFrameTolerance * scale) {
        throw Error(ErrorCode::invalid_frame, "transverse part is not symmetric");
      }

  Frame f;
  f.signature_ = signature;
  f.axis_lower_ = axis_lower;
  f.transverse_lower_ = transverse_lower;
  f.background_ = outer(axis_lower, axis_lower) + static_cast<double>(signature) * transverse_lower;
  try {
    f.background_inverse_ = inverse(f.background_);
  } catch (const Error&) {
    throw Error(ErrorCode::invalid_frame, "background e_ij is singular");
  }
  f.axis_upper_ = contract(f.background_inverse_, 1, axis_lower, 0);
  const double norm = contract(axis_lower, 0, f.axis_upper_, 0).value();
  if (std::abs(norm - 1.0) > kFrameTolerance * scale) throw Error(ErrorCode::invalid_frame, "axis is not a unit vector");
  if (max_abs(contract(f.axis_upper_, 0, transverse_lower, 0)) > kFrameTolerance * scale) {
    throw Error(ErrorCode::invalid_frame, "axis is not orthogonal to the transverse part");
  }
  // u + e e positive definite <=> u positive semi-definite of rank N-1 given e^i u_ij = 0.
  Eigen::MatrixXd probe(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) probe(i, j) = transverse_lower(i, j) + axis_lower[i] * axis_lower[j];
  Eigen::LLT<Eigen::MatrixXd> llt(probe);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::invalid_frame, "transverse part must be positive semi-definite of rank N-1");
  }

  // u^ij = e^im e^jn u_mn, u_i^j = u^jm u_im.
  f.transverse_upper_ = contract(contract(f.background_inverse_, 1, transverse_lower, 0), 1, f.background_inverse_, 1);
  f.transverse_mixed_ = contract(transverse_lower, 1, f.transverse_upper_, 1);
  return f;
}

Frame Frame::transformed(const Tensor& jacobian) const {
  check_jacobian(jacobian, dim());
  return from_components(change_chart(axis_lower_, jacobian), change_chart(transverse_lower_, jacobian), signature_);
}

double Frame::radius(const Tensor& x) const {
  if (x.rank() != 1 || x.dim() != dim()) throw Error(ErrorCode::shape, "point dimension differs from frame dimension");
  double s = 0.0;
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) s += transverse_lower_(i, j) * x[i] * x[j];
  return std::sqrt(std::max(0.0, s));
}

Tensor change_chart(const Tensor& t, const Tensor& jacobian) {
  check_jacobian(jacobian, t.rank() > 0 ? t.dim() : jacobian.dim());
  // inverse() flips both tags; (J^-1)^a_i is mixed (upper a, lower i) again.
  const Tensor jinv = inverse(jacobian);
  Tensor jinv_mixed(jacobian.dim(), {Variance::upper, Variance::lower});
  for (std::size_t k = 0; k < jinv.size(); ++k) jinv_mixed[k] = jinv[k];

  Tensor r = t;
  for (int axis = 0; axis < t.rank(); ++axis) {
    if (r.variance(axis) == Variance::lower) {
      r = move_last_axis(contract(r, axis, jacobian, 0), axis);  // T'_a = T_i J^i_a
    } else {
      r = move_last_axis(contract(r, axis, jinv_mixed, 1), axis);  // T'^a = (J^-1)^a_i T^i
    }
  }
  return r;
}

Tensor point_in_chart(const Tensor& x, const Tensor& jacobian) {
  check_jacobian(jacobian, x.dim());
  const Tensor jinv = inverse(jacobian);
  Tensor r(x.dim(), {Variance::upper});
  for (int a = 0; a < x.dim(); ++a) {
    double s = 0.0;
    for (int i = 0; i < x.dim(); ++i) s += jinv(a, i) * x[i];
    r[a] = s;
  }
  return r;
}

}  // namespace fgeo
