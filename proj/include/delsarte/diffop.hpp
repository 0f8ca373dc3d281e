// Copyright 2026 The delsarte-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "delsarte/coeff.hpp"

#include <map>

namespace delsarte {

/// L = sum_alpha a_alpha(x) D^alpha acting on C^N-valued functions of m
/// variables. The term map is ordered, so iteration is reproducible.
class DifferentialOperator {
 public:
  DifferentialOperator(int m, int N) : m_(m), N_(N) {
    if (m < 1 || m > 2) throw DimensionError("operators are defined for m = 1 or 2");
    if (N < 1) throw DimensionError("channel count must be positive");
  }

  static DifferentialOperator identity(int m, int N) {
    DifferentialOperator op(m, N);
    op.add_term(MultiIndex::zero(m), CoeffField::identity(N));
    return op;
  }
  // D^alpha times the N x N identity.
  static DifferentialOperator partial(int m, int N, const MultiIndex& alpha) {
    DifferentialOperator op(m, N);
    op.add_term(alpha, CoeffField::identity(N));
    return op;
  }
  static DifferentialOperator multiplication(int m, const CoeffField& a) {
    DifferentialOperator op(m, a.N());
    op.add_term(MultiIndex::zero(m), a);
    return op;
  }

  // Adds a to the coefficient of D^alpha; zero coefficients are dropped.
  DifferentialOperator& add_term(const MultiIndex& alpha, const CoeffField& a) {
    if (alpha.dim() != m_) throw DimensionError("multi-index " + alpha.str() + " has wrong dimension");
    if (a.N() != N_) throw DimensionError("coefficient size does not match channel count");
    auto it = terms_.find(alpha);
    CoeffField sum = it == terms_.end() ? a : it->second + a;
    if (sum.is_zero()) {
      if (it != terms_.end()) terms_.erase(it);
    } else {
      terms_[alpha] = sum;
    }
    return *this;
  }

  int m() const { return m_; }
  int N() const { return N_; }
  int order() const {
    int n = 0;
    for (const auto& [alpha, a] : terms_) n = std::max(n, alpha.order());
    return n;
  }
  bool empty() const { return terms_.empty(); }
  const std::map<MultiIndex, CoeffField>& terms() const { return terms_; }
  CoeffField coeff(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? CoeffField::zero(N_) : it->second;
  }

  DifferentialOperator shifted(cplx lambda) const {
    DifferentialOperator op = *this;
    return op.add_term(MultiIndex::zero(m_), (-lambda) * CoeffField::identity(N_));
  }

  friend DifferentialOperator operator+(DifferentialOperator a, const DifferentialOperator& b) {
    a.check(b);
    for (const auto& [alpha, c] : b.terms_) a.add_term(alpha, c);
    return a;
  }
  friend DifferentialOperator operator*(cplx s, const DifferentialOperator& a) {
    DifferentialOperator out(a.m_, a.N_);
    for (const auto& [alpha, c] : a.terms_) out.add_term(alpha, s * c);
    return out;
  }
  friend DifferentialOperator operator-(const DifferentialOperator& a, const DifferentialOperator& b) {
    return a + (-1.0) * b;
  }

  void check(const DifferentialOperator& o) const {
    if (o.m_ != m_ || o.N_ != N_) throw DimensionError("operator shapes differ");
  }

 private:
  int m_, N_;
  std::map<MultiIndex, CoeffField> terms_;
};

/// Opaque linear map on grid functions.
using OperatorAction = std::function<GridFunction(const GridFunction&)>;

/// Sparse matrix of op on g in the flat (c + N*p) layout.
inline SpMatC assemble(const DifferentialOperator& op, const Grid& g, const Scheme& scheme = Scheme::centered()) {
  if (g.dim() != op.m()) throw DimensionError("operator dimension does not match grid");
  const int N = op.N(), P = g.size();
  std::vector<Eigen::Triplet<cplx>> trip;
  for (const auto& [alpha, a] : op.terms()) {
    const SpMat D = grid_derivative(g, alpha, scheme);
    const MatField A = a.sample(g, scheme);
    for (int k = 0; k < D.outerSize(); ++k)
      for (SpMat::InnerIterator it(D, k); it; ++it) {
        const int p = static_cast<int>(it.row()), q = static_cast<int>(it.col());
        const auto Ap = A.at(p);
        for (int r = 0; r < N; ++r)
          for (int c = 0; c < N; ++c)
            if (Ap(r, c) != 0.0) trip.emplace_back(r + N * p, c + N * q, Ap(r, c) * it.value());
      }
  }
  SpMatC M(static_cast<Eigen::Index>(N) * P, static_cast<Eigen::Index>(N) * P);
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

inline GridFunction apply(const SpMatC& M, const GridFunction& f) {
  if (M.cols() != static_cast<Eigen::Index>(f.channels()) * f.size())
    throw DimensionError("assembled operator does not match function");
  return GridFunction::from_flat(f.grid(), f.channels(), M * f.flat());
}

inline GridFunction apply(const DifferentialOperator& op, const GridFunction& f,
                          const Scheme& scheme = Scheme::centered()) {
  if (f.grid().dim() != op.m()) throw DimensionError("operator dimension does not match grid");
  if (f.channels() != op.N()) throw DimensionError("operator channel count does not match function");
  if (op.empty()) return GridFunction(f.grid(), f.channels());
  return delsarte::apply(assemble(op, f.grid(), scheme), f);
}

inline OperatorAction action(const DifferentialOperator& op, const Grid& g, const Scheme& scheme = Scheme::centered()) {
  auto M = std::make_shared<SpMatC>(assemble(op, g, scheme));
  return [M](const GridFunction& f) { return delsarte::apply(*M, f); };
}

/// Residual-norm band for open grids: n(L)*p/2 points.
inline int boundary_band(const Grid& g, int order, const Scheme& scheme = Scheme::centered()) {
  return g.periodic() ? 0 : order * scheme.order / 2;
}

/// L* = sum_alpha (-1)^|alpha| D^alpha (a_alpha^H .), Leibniz-expanded.
inline DifferentialOperator formal_adjoint(const DifferentialOperator& op) {
  DifferentialOperator out(op.m(), op.N());
  for (const auto& [alpha, a] : op.terms()) {
    const double sign = alpha.order() % 2 ? -1.0 : 1.0;
    const CoeffField ah = a.adjoint();
    for (const auto& gam : sub_indices(alpha))
      out.add_term(gam, (sign * binomial(alpha, gam)) * ah.derivative(alpha - gam));
  }
  return out;
}

/// a o b with the coefficients of b differentiated by Leibniz' rule.
inline DifferentialOperator compose(const DifferentialOperator& a, const DifferentialOperator& b) {
  a.check(b);
  DifferentialOperator out(a.m(), a.N());
  for (const auto& [alpha, ca] : a.terms())
    for (const auto& [beta, cb] : b.terms())
      for (const auto& gam : sub_indices(alpha))
        out.add_term(gam + beta, binomial(alpha, gam) * (ca * cb.derivative(alpha - gam)));
  return out;
}

inline DifferentialOperator commutator(const DifferentialOperator& a, const DifferentialOperator& b) {
  return compose(a, b) - compose(b, a);
}

/// max over probes of ||a(b f) - b(a f)|| / ||f||, interior norm on open grids.
inline double commutator_residual(const DifferentialOperator& a, const DifferentialOperator& b,
                                  const std::vector<GridFunction>& probes,
                                  const Scheme& scheme = Scheme::centered()) {
  a.check(b);
  double worst = 0.0;
  for (const auto& f : probes) {
    const int band = boundary_band(f.grid(), a.order() + b.order(), scheme);
    GridFunction r = apply(a, apply(b, f, scheme), scheme) - apply(b, apply(a, f, scheme), scheme);
    const double nf = norm2(f, band);
    if (nf == 0.0) continue;
    worst = std::max(worst, norm2(r, band) / nf);
  }
  return worst;
}

/// Axis-aligned box [lo, hi] in coordinates (the second axis is ignored on lines).
struct Box {
  Point lo{0.0, 0.0};
  Point hi{0.0, 0.0};
};

/// ||action(bump) outside support (+) halo|| / ||action(bump)||. The halo is
/// counted in grid points along every axis.
inline double locality_score(const OperatorAction& act, const GridFunction& bump, const Box& support, int halo) {
  const Grid& g = bump.grid();
  std::array<int, 2> lo{}, hi{};
  for (int j = 0; j < g.dim(); ++j) {
    const auto& ax = g.axis(j);
    lo[j] = static_cast<int>(std::floor((support.lo[j] - ax.lo) / ax.h())) - halo;
    hi[j] = static_cast<int>(std::ceil((support.hi[j] - ax.lo) / ax.h())) + halo;
    if (lo[j] <= 0 || hi[j] >= ax.n - 1)
      throw Error("support plus halo reaches the grid boundary");
  }
  GridFunction out = act(bump);
  double inside = 0.0, outside = 0.0;
  for (int p = 0; p < g.size(); ++p) {
    auto mi = g.multi(p);
    bool in = true;
    for (int j = 0; j < g.dim(); ++j) in = in && mi[j] >= lo[j] && mi[j] <= hi[j];
    (in ? inside : outside) += out.values().col(p).squaredNorm();
  }
  const double total = inside + outside;
  return total == 0.0 ? 0.0 : std::sqrt(outside / total);
}

/// C-infinity bump exp(-1/(1-r^2)) on the box, r the scaled distance from its centre.
inline GridFunction smooth_bump(const Grid& g, const Box& support, int channels = 1) {
  return GridFunction::vector(g, channels, [&](const Point& x) {
    double r2 = 0.0;
    for (int j = 0; j < g.dim(); ++j) {
      const double c = 0.5 * (support.lo[j] + support.hi[j]);
      const double w = 0.5 * (support.hi[j] - support.lo[j]);
      r2 += std::pow((x[j] - c) / w, 2);
    }
    const double v = r2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r2)) : 0.0;
    return Vec::Constant(channels, v);
  });
}

}  // namespace delsarte
