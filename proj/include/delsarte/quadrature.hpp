// Copyright 2026 The delsarte-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "delsarte/grid.hpp"

#include <unsupported/Eigen/FFT>

namespace delsarte {

/// Cumulative integration rules along one grid axis.
///  - trapezoid: second order, any topology.
///  - cubic, quintic: fourth / sixth order, each cell integrated against the
///    interpolating polynomial on a 4 / 6 point window (shifted near open ends).
///  - spectral: trigonometric antiderivative, periodic axes only.
///  - automatic: spectral on periodic axes, quintic on open ones.
enum class Quadrature { automatic, trapezoid, cubic, quintic, spectral };

namespace detail {

inline cplx at_wrapped(const Vec& f, int i) {
  const int n = static_cast<int>(f.size());
  return f[((i % n) + n) % n];
}

// Weights w_k with sum_k w_k f(start + k) = integral of the interpolant over
// [0, 1], window nodes start, ..., start + width - 1 (in units of h).
inline Eigen::VectorXd cell_weights(int start, int width) {
  Eigen::MatrixXd V(width, width);
  Eigen::VectorXd m(width);
  for (int j = 0; j < width; ++j) {
    for (int k = 0; k < width; ++k) V(j, k) = std::pow(static_cast<double>(start + k), j);
    m[j] = 1.0 / (j + 1);
  }
  return V.fullPivLu().solve(m);
}

// Integral over [x_j, x_{j+1}] for j = 0..n-2 (open) or 0..n-1 (periodic).
inline Vec cell_integrals(const Vec& f, double h, bool periodic, Quadrature rule) {
  const int n = static_cast<int>(f.size());
  const int cells = periodic ? n : n - 1;
  Vec c(cells);
  if (rule == Quadrature::trapezoid) {
    for (int j = 0; j < cells; ++j) c[j] = 0.5 * h * (f[j] + at_wrapped(f, j + 1));
    return c;
  }
  const int width = rule == Quadrature::cubic ? 4 : 6;
  if (!periodic && n < width) throw StencilError("grid axis too short for the quadrature window");
  const int lead = width / 2 - 1;  // nodes to the left of the cell
  // Window offsets run from -(width - 1) to 0.
  std::vector<Eigen::VectorXd> weights(width);
  for (int j = 0; j < cells; ++j) {
    int start = j - lead;
    if (!periodic) start = std::clamp(start, 0, n - width);
    Eigen::VectorXd& wk = weights[j - start];
    if (wk.size() == 0) wk = cell_weights(start - j, width);
    cplx acc = 0.0;
    for (int k = 0; k < width; ++k) acc += wk[k] * at_wrapped(f, start + k);
    c[j] = h * acc;
  }
  return c;
}

inline Vec spectral_antiderivative(const Vec& f, double h) {
  const int n = static_cast<int>(f.size());
  Eigen::FFT<double> fft;
  std::vector<cplx> in(f.data(), f.data() + n), hat;
  fft.fwd(hat, in);
  const double L = n * h;
  const cplx mean = hat[0] / static_cast<double>(n);
  hat[0] = 0.0;
  for (int k = 1; k < n; ++k) {
    const int kk = k <= n / 2 ? k : k - n;
    if (2 * k == n) {
      hat[k] = 0.0;
      continue;
    }
    hat[k] /= cplx(0.0, 2.0 * M_PI * kk / L);
  }
  std::vector<cplx> out;
  fft.inv(out, hat);
  Vec F(n);
  for (int i = 0; i < n; ++i) F[i] = out[i] + mean * (i * h);
  return F;
}

}  // namespace detail

/// F[i] = integral of f from x_{anchor} to x_i along a single axis.
inline Vec cumulative(const Vec& f, double h, int anchor, Topology topo, Quadrature rule = Quadrature::automatic) {
  const int n = static_cast<int>(f.size());
  const bool periodic = topo == Topology::periodic;
  if (rule == Quadrature::automatic) rule = periodic ? Quadrature::spectral : Quadrature::quintic;
  if (rule == Quadrature::spectral && !periodic) throw Error("spectral quadrature needs a periodic axis");
  if (anchor < 0 || anchor >= n) throw DimensionError("quadrature anchor outside the axis");
  Vec F(n);
  if (rule == Quadrature::spectral) {
    F = detail::spectral_antiderivative(f, h);
    F.array() -= F[anchor];
    return F;
  }
  const Vec c = detail::cell_integrals(f, h, periodic, rule);
  F[anchor] = 0.0;
  for (int i = anchor + 1; i < n; ++i) F[i] = F[i - 1] + c[i - 1];
  for (int i = anchor - 1; i >= 0; --i) F[i] = F[i + 1] - c[i];
  return F;
}

/// Cumulative integral of a scalar field along `axis`, anchored on every grid
/// line at axis index `anchor`.
inline Vec cumulative_axis(const Grid& g, const Vec& values, int axis, int anchor,
                           Quadrature rule = Quadrature::automatic) {
  if (values.size() != g.size()) throw DimensionError("field does not match grid");
  const Axis& ax = g.axis(axis);
  const int n = ax.n, stride = g.stride(axis);
  const int lines = g.size() / n;
  Vec out(g.size());
  Vec line(n);
  for (int l = 0; l < lines; ++l) {
    // Base index of line l: lines run along `axis`, enumerated by the other index.
    const int base = g.dim() == 1 ? 0 : (axis == 0 ? l * g.extent(0) : l);
    for (int i = 0; i < n; ++i) line[i] = values[base + i * stride];
    Vec F = cumulative(line, ax.h(), anchor, g.topology(), rule);
    for (int i = 0; i < n; ++i) out[base + i * stride] = F[i];
  }
  return out;
}

/// Integral over the whole axis (periodic: full period; open: first to last point).
inline cplx integrate(const Vec& f, double h, Topology topo, Quadrature rule = Quadrature::automatic) {
  const int n = static_cast<int>(f.size());
  if (topo == Topology::periodic) return f.sum() * h;
  return cumulative(f, h, 0, topo, rule)[n - 1];
}

}  // namespace delsarte
