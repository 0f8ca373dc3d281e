// Copyright 2026 The delsarte-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "delsarte/grid.hpp"

#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>

namespace delsarte {

using SpMat = Eigen::SparseMatrix<double>;
using SpMatC = Eigen::SparseMatrix<cplx>;

/// Finite-difference scheme. Centered stencils have accuracy `order`
/// (2, 4 or 6); forward stencils are first order and are used by the
/// discrete form complex, whose periodic kernels must not pick up the
/// odd-even mode that centered first differences annihilate.
struct Scheme {
  enum class Kind { centered, forward };
  Kind kind = Kind::centered;
  int order = 4;

  static Scheme centered(int p = 4) { return {Kind::centered, p}; }
  static Scheme forward() { return {Kind::forward, 1}; }

  void validate() const {
    if (kind == Kind::centered && order != 2 && order != 4 && order != 6)
      throw StencilError("centered stencil order must be 2, 4 or 6");
  }
  // Half-width of the stencil for a derivative of order d.
  int radius(int d) const {
    if (d == 0) return 0;
    if (kind == Kind::forward) return d;
    return (d + 1) / 2 - 1 + order / 2;
  }
  bool operator==(const Scheme&) const = default;
};

/// Fornberg's recursion: weights of derivatives 0..max_deriv at z for the
/// given nodes. Returns (nodes x (max_deriv+1)).
inline Eigen::MatrixXd fornberg_weights(double z, const std::vector<double>& x, int max_deriv) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, max_deriv + 1);
  double c1 = 1.0, c4 = x[0] - z;
  c(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_deriv);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c;
}

/// n x n matrix of the d-th derivative along one axis. Open axes shift the
/// stencil window inward near the ends so every row keeps the same node count.
inline SpMat axis_derivative(const Axis& axis, int d, const Scheme& scheme, Topology topo) {
  scheme.validate();
  const int n = axis.n;
  SpMat D(n, n);
  if (d == 0) {
    D.setIdentity();
    return D;
  }
  const int r = scheme.radius(d);
  const bool fwd = scheme.kind == Scheme::Kind::forward;
  const int width = fwd ? d + 1 : 2 * r + 1;
  if (width > n) throw StencilError("stencil wider than grid axis");
  const double scale = std::pow(axis.h(), -d);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(n) * width);
  std::vector<double> nodes(width);
  Eigen::VectorXd interior_w;
  for (int i = 0; i < n; ++i) {
    int start = fwd ? i : i - r;
    if (topo == Topology::open) start = std::clamp(start, 0, n - width);
    const bool shifted = topo == Topology::open && start != (fwd ? i : i - r);
    Eigen::VectorXd w;
    if (!shifted && interior_w.size() == width) {
      w = interior_w;
    } else {
      for (int k = 0; k < width; ++k) nodes[k] = start + k - i;
      w = fornberg_weights(0.0, nodes, d).col(d);
      if (!shifted) interior_w = w;
    }
    for (int k = 0; k < width; ++k) {
      int col = start + k;
      if (topo == Topology::periodic) col = ((col % n) + n) % n;
      trip.emplace_back(i, col, w[k] * scale);
    }
  }
  D.setFromTriplets(trip.begin(), trip.end());
  return D;
}

/// Full-grid matrix of D^alpha (points x points), x index fastest.
inline SpMat grid_derivative(const Grid& g, const MultiIndex& alpha, const Scheme& scheme) {
  if (alpha.dim() != g.dim()) throw DimensionError("multi-index dimension does not match grid");
  SpMat Dx = axis_derivative(g.axis(0), alpha[0], scheme, g.topology());
  if (g.dim() == 1) return Dx;
  SpMat Dy = axis_derivative(g.axis(1), alpha[1], scheme, g.topology());
  return Eigen::kroneckerProduct(Dy, Dx).eval();
}

/// D^alpha applied to every channel of f.
inline GridFunction derivative(const GridFunction& f, const MultiIndex& alpha, const Scheme& scheme) {
  if (alpha.is_zero()) return f;
  SpMat D = grid_derivative(f.grid(), alpha, scheme);
  Mat out = f.values() * D.transpose().cast<cplx>();
  return GridFunction(f.grid(), std::move(out));
}

/// Derivative of each entry of a matrix field.
inline MatField derivative(const Grid& g, const MatField& m, const MultiIndex& alpha, const Scheme& scheme) {
  if (alpha.is_zero()) return m;
  SpMat D = grid_derivative(g, alpha, scheme);
  MatField out;
  out.N = m.N;
  out.data = m.data * D.transpose().cast<cplx>();
  return out;
}

}  // namespace delsarte
