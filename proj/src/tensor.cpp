#include "fgeo/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace fgeo {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw Error(ErrorCode::shape, "dimension " + std::to_string(dim) + " outside [1, 8]");
  }
}

void check_axis(const Tensor& t, int axis) {
  if (axis < 0 || axis >= t.rank()) {
    throw Error(ErrorCode::shape, "axis " + std::to_string(axis) + " out of range for rank " +
                                      std::to_string(t.rank()));
  }
}

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

}  // namespace

Tensor::Tensor(int dim, std::initializer_list<Variance> variance)
    : Tensor(dim, std::span<const Variance>(variance.begin(), variance.size())) {}

Tensor::Tensor(int dim, std::span<const Variance> variance) {
  if (variance.size() > static_cast<std::size_t>(kMaxRank)) {
    throw Error(ErrorCode::shape, "rank " + std::to_string(variance.size()) + " exceeds 4");
  }
  if (!variance.empty()) check_dim(dim);
  dim_ = dim;
  rank_ = static_cast<int>(variance.size());
  std::copy(variance.begin(), variance.end(), variance_.begin());
  data_.assign(ipow(dim_, rank_), 0.0);
}

Tensor Tensor::scalar(double value) {
  Tensor t;
  t.data_[0] = value;
  return t;
}

Tensor Tensor::vector(std::initializer_list<double> components) {
  return vector(std::span<const double>(components.begin(), components.size()));
}

Tensor Tensor::covector(std::initializer_list<double> components) {
  return covector(std::span<const double>(components.begin(), components.size()));
}

Tensor Tensor::vector(std::span<const double> components) {
  Tensor t(static_cast<int>(components.size()), {Variance::upper});
  std::copy(components.begin(), components.end(), t.data_.begin());
  return t;
}

Tensor Tensor::covector(std::span<const double> components) {
  Tensor t(static_cast<int>(components.size()), {Variance::lower});
  std::copy(components.begin(), components.end(), t.data_.begin());
  return t;
}

Tensor Tensor::delta(int dim, Variance first) {
  const Variance second = first == Variance::upper ? Variance::lower : Variance::upper;
  Tensor t(dim, {first, second});
  for (int i = 0; i < dim; ++i) t(i, i) = 1.0;
  return t;
}

Variance Tensor::variance(int axis) const {
  check_axis(*this, axis);
  return variance_[static_cast<std::size_t>(axis)];
}

double Tensor::value() const {
  if (rank_ != 0) throw Error(ErrorCode::shape, "value() on a tensor of rank " + std::to_string(rank_));
  return data_[0];
}

MultiIndex Tensor::index_of(std::size_t flat) const {
  MultiIndex idx{};
  for (int a = rank_ - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = static_cast<int>(flat % static_cast<std::size_t>(dim_));
    flat /= static_cast<std::size_t>(dim_);
  }
  return idx;
}

std::size_t Tensor::offset(const MultiIndex& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < rank_; ++a) {
    flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]);
  }
  return flat;
}

bool Tensor::same_shape(const Tensor& other) const noexcept {
  if (rank_ != other.rank_) return false;
  if (rank_ == 0) return true;
  if (dim_ != other.dim_) return false;
  return std::equal(variance_.begin(), variance_.begin() + rank_, other.variance_.begin());
}

void Tensor::require_same_shape(const Tensor& other, const char* op) const {
  if (!same_shape(other)) {
    throw Error(ErrorCode::shape, std::string(op) + " of tensors with different rank, dimension or variance");
  }
}

Tensor& Tensor::operator+=(const Tensor& other) {
  require_same_shape(other, "sum");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& other) {
  require_same_shape(other, "difference");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Tensor& Tensor::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Tensor& Tensor::operator/=(double s) {
  for (double& x : data_) x /= s;
  return *this;
}

Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
Tensor operator-(Tensor a) { return a *= -1.0; }
Tensor operator*(Tensor a, double s) { return a *= s; }
Tensor operator*(double s, Tensor a) { return a *= s; }
Tensor operator/(Tensor a, double s) { return a /= s; }

Tensor outer(const Tensor& a, const Tensor& b) {
  if (a.rank() + b.rank() > kMaxRank) throw Error(ErrorCode::shape, "outer product rank exceeds 4");
  if (a.rank() > 0 && b.rank() > 0 && a.dim() != b.dim()) {
    throw Error(ErrorCode::shape, "outer product of tensors with different dimension");
  }
  std::vector<Variance> v(a.variances().begin(), a.variances().end());
  v.insert(v.end(), b.variances().begin(), b.variances().end());
  const int dim = a.rank() > 0 ? a.dim() : b.dim();
  Tensor t(dim, std::span<const Variance>(v));
  std::size_t flat = 0;
  for (double x : a.components()) {
    for (double y : b.components()) t[flat++] = x * y;
  }
  return t;
}

Tensor contract(const Tensor& t, int axis_a, int axis_b) {
  check_axis(t, axis_a);
  check_axis(t, axis_b);
  if (axis_a == axis_b) throw Error(ErrorCode::shape, "contraction of an axis with itself");
  if (t.variance(axis_a) == t.variance(axis_b)) {
    throw Error(ErrorCode::contract_variance, "contracted axes must have opposite variance");
  }
  std::vector<Variance> v;
  std::vector<int> kept;
  for (int a = 0; a < t.rank(); ++a) {
    if (a == axis_a || a == axis_b) continue;
    v.push_back(t.variance(a));
    kept.push_back(a);
  }
  Tensor r(t.dim(), std::span<const Variance>(v));
  for (std::size_t flat = 0; flat < r.size(); ++flat) {
    const MultiIndex out = r.index_of(flat);
    MultiIndex in{};
    for (std::size_t j = 0; j < kept.size(); ++j) in[static_cast<std::size_t>(kept[j])] = out[j];
    double sum = 0.0;
    for (int s = 0; s < t.dim(); ++s) {
      in[static_cast<std::size_t>(axis_a)] = s;
      in[static_cast<std::size_t>(axis_b)] = s;
      sum += t.at(in);
    }
    r[flat] = sum;
  }
  return r;
}

Tensor contract(const Tensor& a, int axis_a, const Tensor& b, int axis_b) {
  check_axis(a, axis_a);
  check_axis(b, axis_b);
  if (a.dim() != b.dim()) throw Error(ErrorCode::shape, "contraction of tensors with different dimension");
  if (a.variance(axis_a) == b.variance(axis_b)) {
    throw Error(ErrorCode::contract_variance, "contracted axes must have opposite variance");
  }
  if (a.rank() + b.rank() - 2 > kMaxRank) throw Error(ErrorCode::shape, "contraction result rank exceeds 4");
  std::vector<Variance> v;
  std::vector<int> kept_a, kept_b;
  for (int i = 0; i < a.rank(); ++i) {
    if (i == axis_a) continue;
    v.push_back(a.variance(i));
    kept_a.push_back(i);
  }
  for (int i = 0; i < b.rank(); ++i) {
    if (i == axis_b) continue;
    v.push_back(b.variance(i));
    kept_b.push_back(i);
  }
  Tensor r(a.dim(), std::span<const Variance>(v));
  for (std::size_t flat = 0; flat < r.size(); ++flat) {
    const MultiIndex out = r.index_of(flat);
    MultiIndex ia{}, ib{};
    std::size_t j = 0;
    for (int k : kept_a) ia[static_cast<std::size_t>(k)] = out[j++];
    for (int k : kept_b) ib[static_cast<std::size_t>(k)] = out[j++];
    double sum = 0.0;
    for (int s = 0; s < a.dim(); ++s) {
      ia[static_cast<std::size_t>(axis_a)] = s;
      ib[static_cast<std::size_t>(axis_b)] = s;
      sum += a.at(ia) * b.at(ib);
    }
    r[flat] = sum;
  }
  return r;
}

namespace {

// Moves axis 0 of `t` to position `axis`.
Tensor move_front_axis(const Tensor& t, int axis) {
  std::array<int, kMaxRank> order{};
  for (int j = 0; j < t.rank(); ++j) {
    if (j < axis) order[static_cast<std::size_t>(j)] = j + 1;
    else if (j == axis) order[static_cast<std::size_t>(j)] = 0;
    else order[static_cast<std::size_t>(j)] = j;
  }
  return permute(t, std::span<const int>(order.data(), static_cast<std::size_t>(t.rank())));
}

void check_metric(const Tensor& g, Variance expected, const char* what) {
  if (g.rank() != 2 || g.variance(0) != expected || g.variance(1) != expected) {
    throw Error(ErrorCode::contract_variance, std::string(what) + " must be a rank-2 tensor with matching variance");
  }
}

}  // namespace

Tensor lower(const Tensor& t, int axis, const Tensor& metric) {
  check_axis(t, axis);
  check_metric(metric, Variance::lower, "metric");
  return move_front_axis(contract(metric, 1, t, axis), axis);
}

Tensor raise(const Tensor& t, int axis, const Tensor& inverse_metric) {
  check_axis(t, axis);
  check_metric(inverse_metric, Variance::upper, "inverse metric");
  return move_front_axis(contract(inverse_metric, 1, t, axis), axis);
}

Tensor permute(const Tensor& t, std::span<const int> order) {
  if (static_cast<int>(order.size()) != t.rank()) throw Error(ErrorCode::shape, "permutation length differs from rank");
  std::array<bool, kMaxRank> seen{};
  std::vector<Variance> v;
  for (int o : order) {
    check_axis(t, o);
    if (seen[static_cast<std::size_t>(o)]) throw Error(ErrorCode::shape, "permutation repeats an axis");
    seen[static_cast<std::size_t>(o)] = true;
    v.push_back(t.variance(o));
  }
  Tensor r(t.dim(), std::span<const Variance>(v));
  for (std::size_t flat = 0; flat < r.size(); ++flat) {
    const MultiIndex out = r.index_of(flat);
    MultiIndex in{};
    for (std::size_t j = 0; j < order.size(); ++j) in[static_cast<std::size_t>(order[j])] = out[j];
    r[flat] = t.at(in);
  }
  return r;
}

Tensor permute(const Tensor& t, std::initializer_list<int> order) {
  return permute(t, std::span<const int>(order.begin(), order.size()));
}

Tensor inverse(const Tensor& t) {
  if (t.rank() != 2) throw Error(ErrorCode::shape, "inverse requires a rank-2 tensor");
  const int n = t.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = t(i, j);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible()) throw Error(ErrorCode::shape, "singular rank-2 tensor has no inverse");
  const Eigen::MatrixXd inv = lu.inverse();
  auto flip = [](Variance v) { return v == Variance::upper ? Variance::lower : Variance::upper; };
  Tensor r(n, {flip(t.variance(0)), flip(t.variance(1))});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = inv(i, j);
  return r;
}

double max_abs(const Tensor& t) {
  double m = 0.0;
  for (double x : t.components()) m = std::max(m, std::abs(x));
  return m;
}

double frobenius(const Tensor& t) {
  double s = 0.0;
  for (double x : t.components()) s += x * x;
  return std::sqrt(s);
}

double max_abs_diff(const Tensor& a, const Tensor& b) { return max_abs(a - b); }

double relative_frobenius(const Tensor& a, const Tensor& b) {
  const double scale = std::max(frobenius(a), frobenius(b));
  if (scale == 0.0) return 0.0;
  return frobenius(a - b) / scale;
}

}  // namespace fgeo
