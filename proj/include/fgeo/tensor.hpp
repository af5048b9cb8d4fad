#pragma once

#include <array>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "fgeo/error.hpp"

namespace fgeo {

inline constexpr int kMaxRank = 4;
inline constexpr int kMaxDim = 8;

// Index position. Every tensor axis carries one; contraction and arithmetic
// refuse to mix them silently.
enum class Variance : std::uint8_t { lower, upper };

using MultiIndex = std::array<int, kMaxRank>;

/// Dense tensor of rank 0..4 over an N-dimensional chart (N <= 8).
///
/// Components are stored row-major in axis order, so `t(i, j, k)` of a
/// rank-3 tensor lives at `(i * N + j) * N + k`. The axis order follows the
/// written index order: the curvature a_n^i_km is stored as (n, i, k, m)
/// with variances (lower, upper, lower, lower).
class Tensor {
 public:
  Tensor() : data_(1, 0.0) {}
  Tensor(int dim, std::initializer_list<Variance> variance);
  Tensor(int dim, std::span<const Variance> variance);

  static Tensor scalar(double value);
  static Tensor vector(std::initializer_list<double> components);
  static Tensor covector(std::initializer_list<double> components);
  static Tensor vector(std::span<const double> components);
  static Tensor covector(std::span<const double> components);
  // Kronecker delta with the given variance on its first axis.
  static Tensor delta(int dim, Variance first = Variance::upper);

  // Fills every component from f(const MultiIndex&).
  template <class F>
  static Tensor generate(int dim, std::initializer_list<Variance> variance, F&& f);

  int dim() const noexcept { return dim_; }
  int rank() const noexcept { return rank_; }
  std::size_t size() const noexcept { return data_.size(); }
  Variance variance(int axis) const;
  std::span<const Variance> variances() const noexcept { return {variance_.data(), static_cast<std::size_t>(rank_)}; }

  std::span<double> components() noexcept { return data_; }
  std::span<const double> components() const noexcept { return data_; }

  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }

  template <class... I>
  double& operator()(I... idx) {
    return data_[offset_of(static_cast<int>(idx)...)];
  }
  template <class... I>
  double operator()(I... idx) const {
    return data_[offset_of(static_cast<int>(idx)...)];
  }

  double& at(const MultiIndex& idx) { return data_[offset(idx)]; }
  double at(const MultiIndex& idx) const { return data_[offset(idx)]; }

  // Component value of a rank-0 tensor.
  double value() const;

  MultiIndex index_of(std::size_t flat) const;
  std::size_t offset(const MultiIndex& idx) const;

  bool same_shape(const Tensor& other) const noexcept;

  Tensor& operator+=(const Tensor& other);
  Tensor& operator-=(const Tensor& other);
  Tensor& operator*=(double s);
  Tensor& operator/=(double s);

 private:
  template <class... I>
  std::size_t offset_of(I... idx) const {
    static_assert(sizeof...(I) <= kMaxRank);
    assert(static_cast<int>(sizeof...(I)) == rank_);
    std::size_t flat = 0;
    ((flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx)), ...);
    return flat;
  }

  void require_same_shape(const Tensor& other, const char* op) const;

  int dim_ = 0;
  int rank_ = 0;
  std::array<Variance, kMaxRank> variance_{};
  std::vector<double> data_;
};

template <class F>
Tensor Tensor::generate(int dim, std::initializer_list<Variance> variance, F&& f) {
  Tensor t(dim, variance);
  for (std::size_t flat = 0; flat < t.size(); ++flat) t.data_[flat] = f(t.index_of(flat));
  return t;
}

Tensor operator+(Tensor a, const Tensor& b);
Tensor operator-(Tensor a, const Tensor& b);
Tensor operator-(Tensor a);
Tensor operator*(Tensor a, double s);
Tensor operator*(double s, Tensor a);
Tensor operator/(Tensor a, double s);

Tensor outer(const Tensor& a, const Tensor& b);

// Trace over two axes of one tensor. Requires opposite variance.
Tensor contract(const Tensor& t, int axis_a, int axis_b);

// Contraction of axis_a of `a` with axis_b of `b`, without forming the outer
// product (whose rank may exceed the cap).
Tensor contract(const Tensor& a, int axis_a, const Tensor& b, int axis_b);

// Lowers `axis` with a covariant metric g_ij, or raises it with g^ij.
Tensor lower(const Tensor& t, int axis, const Tensor& metric);
Tensor raise(const Tensor& t, int axis, const Tensor& inverse_metric);

// Axis permutation: result axis j is input axis order[j].
Tensor permute(const Tensor& t, std::span<const int> order);
Tensor permute(const Tensor& t, std::initializer_list<int> order);

// Inverse of a rank-2 tensor; variances flip on both axes.
Tensor inverse(const Tensor& t);

double max_abs(const Tensor& t);
double frobenius(const Tensor& t);
double max_abs_diff(const Tensor& a, const Tensor& b);
// ||a - b||_F / max(||a||_F, ||b||_F); zero when both vanish.
double relative_frobenius(const Tensor& a, const Tensor& b);

}  // namespace fgeo
