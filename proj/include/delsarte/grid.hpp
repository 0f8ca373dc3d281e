// Copyright 2026 The delsarte-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "delsarte/core.hpp"

#include <array>
#include <cmath>
#include <functional>

namespace delsarte {

enum class Topology { periodic, open };

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int n = 8;

  double h() const { return (hi - lo) / n; }
  double coord(int i) const { return lo + i * h(); }
  bool operator==(const Axis&) const = default;
};

using Point = std::array<double, 2>;

/// Uniform rectangular grid in one or two dimensions. Points sit at
/// lo + i*h for i in [0, n); on periodic grids index n is identified with 0.
class Grid {
 public:
  Grid(std::vector<Axis> axes, Topology topology) : axes_(std::move(axes)), topo_(topology) {
    if (axes_.empty() || axes_.size() > 2) throw DimensionError("grid dimension must be 1 or 2");
    for (const auto& a : axes_) {
      if (a.n < 8) throw DimensionError("grid axes need at least 8 points");
      if (!(a.hi > a.lo)) throw DimensionError("grid extent must be positive");
    }
  }

  static Grid line(double lo, double hi, int n, Topology t) { return Grid({Axis{lo, hi, n}}, t); }
  static Grid plane(double xlo, double xhi, int nx, double ylo, double yhi, int ny, Topology t) {
    return Grid({Axis{xlo, xhi, nx}, Axis{ylo, yhi, ny}}, t);
  }

  int dim() const { return static_cast<int>(axes_.size()); }
  const Axis& axis(int j) const { return axes_.at(j); }
  Topology topology() const { return topo_; }
  bool periodic() const { return topo_ == Topology::periodic; }

  int size() const {
    int s = 1;
    for (const auto& a : axes_) s *= a.n;
    return s;
  }
  int extent(int j) const { return axes_.at(j).n; }
  // Stride of axis j in the flat index (x fastest).
  int stride(int j) const { return j == 0 ? 1 : axes_[0].n; }

  int index(int i, int j = 0) const { return i + (dim() == 2 ? j * axes_[0].n : 0); }
  std::array<int, 2> multi(int idx) const {
    if (dim() == 1) return {idx, 0};
    return {idx % axes_[0].n, idx / axes_[0].n};
  }
  Point coords(int idx) const {
    auto [i, j] = multi(idx);
    return {axes_[0].coord(i), dim() == 2 ? axes_[1].coord(j) : 0.0};
  }
  double cell_volume() const {
    double v = 1.0;
    for (const auto& a : axes_) v *= a.h();
    return v;
  }
  double diameter() const {
    double d = 0.0;
    for (const auto& a : axes_) d += (a.hi - a.lo) * (a.hi - a.lo);
    return std::sqrt(d);
  }
  // Nearest grid index to a coordinate along axis j.
  int nearest(int j, double x) const {
    const auto& a = axes_.at(j);
    int i = static_cast<int>(std::lround((x - a.lo) / a.h()));
    return std::clamp(i, 0, a.n - 1);
  }
  int nearest(const Point& p) const {
    return index(nearest(0, p[0]), dim() == 2 ? nearest(1, p[1]) : 0);
  }

  // True when the point lies at least `band` points away from every open
  // boundary. Periodic grids have no boundary.
  bool interior(int idx, int band) const {
    if (periodic() || band <= 0) return true;
    auto mi = multi(idx);
    for (int j = 0; j < dim(); ++j)
      if (mi[j] < band || mi[j] >= axes_[j].n - band) return false;
    return true;
  }

  bool operator==(const Grid&) const = default;

 private:
  std::vector<Axis> axes_;
  Topology topo_;
};

/// Sampled C^N-valued function. Values are stored channels x points.
class GridFunction {
 public:
  GridFunction(Grid grid, int channels)
      : grid_(std::move(grid)), values_(Mat::Zero(channels, grid_.size())) {
    if (channels < 1) throw DimensionError("channel count must be positive");
  }
  GridFunction(Grid grid, Mat values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.cols() != grid_.size() || values_.rows() < 1)
      throw DimensionError("value array does not match grid");
  }

  static GridFunction scalar(const Grid& g, const std::function<cplx(const Point&)>& f) {
    GridFunction out(g, 1);
    for (int p = 0; p < g.size(); ++p) out.values_(0, p) = f(g.coords(p));
    return out;
  }
  static GridFunction vector(const Grid& g, int channels, const std::function<Vec(const Point&)>& f) {
    GridFunction out(g, channels);
    for (int p = 0; p < g.size(); ++p) out.values_.col(p) = f(g.coords(p));
    return out;
  }

  const Grid& grid() const { return grid_; }
  int channels() const { return static_cast<int>(values_.rows()); }
  int size() const { return grid_.size(); }
  const Mat& values() const { return values_; }
  Mat& values() { return values_; }
  cplx operator()(int c, int p) const { return values_(c, p); }
  cplx& operator()(int c, int p) { return values_(c, p); }

  // Flat vector, index c + N*p.
  Vec flat() const { return Eigen::Map<const Vec>(values_.data(), values_.size()); }
  static GridFunction from_flat(const Grid& g, int channels, const Vec& v) {
    if (v.size() != static_cast<Eigen::Index>(channels) * g.size())
      throw DimensionError("flat vector length does not match grid");
    return GridFunction(g, Mat(Eigen::Map<const Mat>(v.data(), channels, g.size())));
  }

  GridFunction channel(int c) const { return GridFunction(grid_, Mat(values_.row(c))); }

  GridFunction& operator+=(const GridFunction& o) {
    check(o);
    values_ += o.values_;
    return *this;
  }
  GridFunction& operator-=(const GridFunction& o) {
    check(o);
    values_ -= o.values_;
    return *this;
  }
  GridFunction& operator*=(cplx s) {
    values_ *= s;
    return *this;
  }
  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(cplx s, GridFunction a) { return a *= s; }

  void check(const GridFunction& o) const {
    if (!(o.grid_ == grid_)) throw DimensionError("grid mismatch");
    if (o.channels() != channels()) throw DimensionError("channel mismatch");
  }

 private:
  Grid grid_;
  Mat values_;
};

/// Discrete L2 norm (cell-volume weighted) restricted to interior points.
inline double norm2(const GridFunction& f, int band = 0) {
  double s = 0.0;
  for (int p = 0; p < f.size(); ++p)
    if (f.grid().interior(p, band)) s += f.values().col(p).squaredNorm();
  return std::sqrt(s * f.grid().cell_volume());
}

inline double max_abs(const GridFunction& f, int band = 0) {
  double m = 0.0;
  for (int p = 0; p < f.size(); ++p)
    if (f.grid().interior(p, band)) m = std::max(m, f.values().col(p).cwiseAbs().maxCoeff());
  return m;
}

// Semilinear pairing, first argument conjugated.
inline cplx inner(const GridFunction& f, const GridFunction& g, int band = 0) {
  f.check(g);
  cplx s = 0.0;
  for (int p = 0; p < f.size(); ++p)
    if (f.grid().interior(p, band)) s += f.values().col(p).dot(g.values().col(p));
  return s * f.grid().cell_volume();
}

/// Field of N x N matrices on a grid, stored (N*N) x points, each column a
/// column-major N x N block.
struct MatField {
  int N = 1;
  Mat data;

  MatField() = default;
  MatField(int n, int points) : N(n), data(Mat::Zero(n * n, points)) {}

  int points() const { return static_cast<int>(data.cols()); }
  Eigen::Map<const Mat> at(int p) const { return {data.col(p).data(), N, N}; }
  Eigen::Map<Mat> at(int p) { return {data.col(p).data(), N, N}; }

  static MatField broadcast(const Mat& m, int points) {
    MatField f(static_cast<int>(m.rows()), points);
    Eigen::Map<const Vec> flat(m.data(), m.size());
    for (int p = 0; p < points; ++p) f.data.col(p) = flat;
    return f;
  }
};

}  // namespace delsarte
