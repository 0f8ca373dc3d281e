// Copyright 2026 The delsarte-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <compare>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace delsarte {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr cplx imag_unit{0.0, 1.0};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape mismatches between grids, channels, dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Stencil does not fit on the grid.
class StencilError : public Error {
 public:
  using Error::Error;
};

class DerivativeUnavailable : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Null-function data violating its residual or closedness contract.
class InvalidSpectralData : public Error {
 public:
  using Error::Error;
};

// Kernel matrix above the condition cap.
class DegenerateKernel : public Error {
 public:
  DegenerateKernel(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

// Kernel singular at a set of grid points (the poles of the transform).
class SingularKernel : public Error {
 public:
  SingularKernel(const std::string& what, std::vector<int> points)
      : Error(what), points_(std::move(points)) {}
  const std::vector<int>& points() const { return points_; }

 private:
  std::vector<int> points_;
};

/// Multi-index alpha in Z_+^m. Ordered lexicographically so that maps keyed by
/// it iterate in a reproducible order.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {
    for (int v : e_)
      if (v < 0) throw Error("multi-index entries must be non-negative");
  }
  MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}

  static MultiIndex zero(int m) { return MultiIndex(std::vector<int>(m, 0)); }
  static MultiIndex unit(int m, int axis) {
    std::vector<int> e(m, 0);
    e.at(axis) = 1;
    return MultiIndex(std::move(e));
  }

  int dim() const { return static_cast<int>(e_.size()); }
  int order() const { return std::accumulate(e_.begin(), e_.end(), 0); }
  int operator[](int i) const { return e_[i]; }
  const std::vector<int>& entries() const { return e_; }

  MultiIndex operator+(const MultiIndex& o) const {
    check_dim(o);
    std::vector<int> e(e_);
    for (int i = 0; i < dim(); ++i) e[i] += o.e_[i];
    return MultiIndex(std::move(e));
  }
  MultiIndex operator-(const MultiIndex& o) const {
    check_dim(o);
    std::vector<int> e(e_);
    for (int i = 0; i < dim(); ++i) e[i] -= o.e_[i];
    return MultiIndex(std::move(e));
  }
  // Componentwise <=.
  bool leq(const MultiIndex& o) const {
    check_dim(o);
    for (int i = 0; i < dim(); ++i)
      if (e_[i] > o.e_[i]) return false;
    return true;
  }
  bool is_zero() const { return order() == 0; }

  auto operator<=>(const MultiIndex&) const = default;

  std::string str() const {
    std::string s = "[";
    for (int i = 0; i < dim(); ++i) s += (i ? "," : "") + std::to_string(e_[i]);
    return s + "]";
  }

 private:
  void check_dim(const MultiIndex& o) const {
    if (o.dim() != dim()) throw DimensionError("multi-index dimension mismatch");
  }
  std::vector<int> e_;
};

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// prod_i C(alpha_i, gamma_i)
inline double binomial(const MultiIndex& alpha, const MultiIndex& gamma) {
  double r = 1.0;
  for (int i = 0; i < alpha.dim(); ++i) r *= binomial(alpha[i], gamma[i]);
  return r;
}

/// All gamma with gamma <= alpha componentwise, lexicographic order.
inline std::vector<MultiIndex> sub_indices(const MultiIndex& alpha) {
  std::vector<MultiIndex> out;
  std::vector<int> cur(alpha.dim(), 0);
  while (true) {
    out.emplace_back(cur);
    int i = alpha.dim() - 1;
    while (i >= 0 && cur[i] == alpha[i]) cur[i--] = 0;
    if (i < 0) break;
    ++cur[i];
  }
  return out;
}

/// All multi-indices of dimension m with |alpha| <= order.
inline std::vector<MultiIndex> indices_up_to(int m, int order) {
  std::vector<int> top(m, order);
  std::vector<MultiIndex> out;
  for (const auto& a : sub_indices(MultiIndex(top)))
    if (a.order() <= order) out.push_back(a);
  return out;
}

}  // namespace delsarte
