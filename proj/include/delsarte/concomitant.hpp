// Copyright 2026 The delsarte-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "delsarte/diffop.hpp"
#include "delsarte/quadrature.hpp"

namespace delsarte {

/// sign * (D^beta phi)^H c(x) (D^gamma psi), contributing to direction `direction` (0-based).
struct ConcomitantTerm {
  int direction = 0;
  MultiIndex beta, gamma;
  CoeffField coeff;
  int sign = 1;
};

/// Bilinear forms Z_i[phi, psi] of the Lagrangian identity
///   (L* phi)^H psi - phi^H (L psi) = sum_i (-1)^i d_i Z_i     (i counted from 0 here)
/// Terms are kept sorted by (direction, beta, gamma).
class ConcomitantSpec {
 public:
  ConcomitantSpec(int m, int N) : m_(m), N_(N) {}

  int m() const { return m_; }
  int N() const { return N_; }
  const std::vector<ConcomitantTerm>& terms() const { return terms_; }
  std::vector<ConcomitantTerm> terms(int direction) const {
    std::vector<ConcomitantTerm> out;
    for (const auto& t : terms_)
      if (t.direction == direction) out.push_back(t);
    return out;
  }
  // Highest |beta| + |gamma| over all terms; evaluation needs derivatives up to this order.
  int order() const {
    int k = 0;
    for (const auto& t : terms_) k = std::max(k, t.beta.order() + t.gamma.order());
    return k;
  }

  // Collects like keys; merged terms carry sign +1 and the signed coefficient sum.
  void add(ConcomitantTerm t) {
    if (t.coeff.is_zero()) return;
    auto key = [](const ConcomitantTerm& a) { return std::tie(a.direction, a.beta, a.gamma); };
    auto it = std::lower_bound(terms_.begin(), terms_.end(), t,
                               [&](const ConcomitantTerm& a, const ConcomitantTerm& b) { return key(a) < key(b); });
    if (it != terms_.end() && key(*it) == key(t)) {
      CoeffField merged = static_cast<double>(it->sign) * it->coeff + static_cast<double>(t.sign) * t.coeff;
      if (merged.is_zero()) {
        terms_.erase(it);
      } else {
        it->coeff = merged;
        it->sign = 1;
      }
      return;
    }
    terms_.insert(it, std::move(t));
  }

  /// Conjugate-transposed term list: beta and gamma swapped, coefficients
  /// replaced by their adjoints. Evaluating it on (a, b) gives conj(Z[b, a]).
  ConcomitantSpec starred() const {
    ConcomitantSpec out(m_, N_);
    for (const auto& t : terms_) out.add({t.direction, t.gamma, t.beta, t.coeff.adjoint(), t.sign});
    return out;
  }

 private:
  int m_, N_;
  std::vector<ConcomitantTerm> terms_;
};

/// (-1)^i for 0-based direction i, the alternating factor of the divergence.
inline double direction_sign(int i) { return i % 2 ? -1.0 : 1.0; }

/// Integration by parts, one derivative at a time. For a_alpha D^alpha with
/// derivative axes i_0 <= ... <= i_{k-1}, step k moves D_{i_k} from psi to
/// the (phi^H a) factor, leaving a boundary term in direction i_k.
inline ConcomitantSpec build_concomitant(const DifferentialOperator& op) {
  ConcomitantSpec spec(op.m(), op.N());
  for (const auto& [alpha, a] : op.terms()) {
    std::vector<int> axes;
    for (int i = 0; i < op.m(); ++i)
      for (int r = 0; r < alpha[i]; ++r) axes.push_back(i);
    MultiIndex moved = MultiIndex::zero(op.m());
    for (int k = 0; k < static_cast<int>(axes.size()); ++k) {
      const int i = axes[k];
      const MultiIndex rest = alpha - moved - MultiIndex::unit(op.m(), i);
      const int sign = -(k % 2 ? -1 : 1) * static_cast<int>(direction_sign(i));
      for (const auto& delta : sub_indices(moved)) {
        CoeffField c = binomial(moved, delta) * a.derivative(moved - delta);
        spec.add({i, delta, rest, c, sign});
      }
      moved = moved + MultiIndex::unit(op.m(), i);
    }
  }
  return spec;
}

namespace detail {

// Caches D^alpha of one function.
class DerivativeCache {
 public:
  DerivativeCache(const GridFunction& f, const Scheme& s) : f_(f), s_(s) {}
  const GridFunction& get(const MultiIndex& a) {
    auto it = cache_.find(a);
    if (it == cache_.end()) it = cache_.emplace(a, derivative(f_, a, s_)).first;
    return it->second;
  }

 private:
  const GridFunction& f_;
  Scheme s_;
  std::map<MultiIndex, GridFunction> cache_;
};

// sum_p-pointwise u(p)^H c(p) v(p)
inline Vec pointwise_form(const GridFunction& u, const MatField& c, const GridFunction& v) {
  const int P = u.size();
  Vec out(P);
  if (c.N == 1) {
    out = (u.values().row(0).conjugate().cwiseProduct(c.data.row(0)).cwiseProduct(v.values().row(0))).transpose();
    return out;
  }
  for (int p = 0; p < P; ++p) out[p] = u.values().col(p).dot(c.at(p) * v.values().col(p));
  return out;
}

}  // namespace detail

/// Z_i[phi, psi] on the grid for every direction, as rows of an (m x points) matrix.
inline Mat evaluate_Z(const ConcomitantSpec& spec, const GridFunction& phi, const GridFunction& psi,
                      const Scheme& scheme = Scheme::centered()) {
  phi.check(psi);
  if (phi.channels() != spec.N()) throw DimensionError("channel count does not match concomitant");
  if (phi.grid().dim() != spec.m()) throw DimensionError("grid dimension does not match concomitant");
  detail::DerivativeCache dphi(phi, scheme), dpsi(psi, scheme);
  Mat Z = Mat::Zero(spec.m(), phi.size());
  for (const auto& t : spec.terms()) {
    MatField c = t.coeff.sample(phi.grid(), scheme);
    Z.row(t.direction) += static_cast<double>(t.sign) *
                          detail::pointwise_form(dphi.get(t.beta), c, dpsi.get(t.gamma)).transpose();
  }
  return Z;
}

/// Interior max of |(L* phi)^H psi - phi^H L psi - sum_i (-1)^i d_i Z_i|.
inline double verify_lagrangian_identity(const DifferentialOperator& op, const ConcomitantSpec& spec,
                                         const GridFunction& phi, const GridFunction& psi,
                                         const Scheme& scheme = Scheme::centered()) {
  const Grid& g = phi.grid();
  const GridFunction Lsphi = apply(formal_adjoint(op), phi, scheme);
  const GridFunction Lpsi = apply(op, psi, scheme);
  Vec lhs(g.size());
  for (int p = 0; p < g.size(); ++p)
    lhs[p] = Lsphi.values().col(p).dot(psi.values().col(p)) - phi.values().col(p).dot(Lpsi.values().col(p));
  const Mat Z = evaluate_Z(spec, phi, psi, scheme);
  Vec div = Vec::Zero(g.size());
  for (int i = 0; i < spec.m(); ++i) {
    GridFunction zi(g, Mat(Z.row(i)));
    div += direction_sign(i) * derivative(zi, MultiIndex::unit(spec.m(), i), scheme).values().row(0).transpose();
  }
  const int band = boundary_band(g, op.order(), scheme);
  double worst = 0.0;
  for (int p = 0; p < g.size(); ++p)
    if (g.interior(p, band)) worst = std::max(worst, std::abs(lhs[p] - div[p]));
  return worst;
}

struct PotentialOptions {
  Quadrature rule = Quadrature::automatic;
  bool enforce_closed = true;
  // Loop-residual tolerance as a multiple of the grid diameter.
  double closed_tolerance = 1e-6;
  Scheme scheme = Scheme::centered();
};

struct PotentialForm {
  GridFunction omega;      // scalar potential (m = 2) or Z_1 itself (m = 1)
  double loop_residual;    // max |x-then-y path - y-then-x path|; zero for m = 1
};

/// Potential of the closed form Z^(m-1)[phi, psi]. For m = 2 the 1-form is
/// Z_2 dx + Z_1 dy (directions counted from 1) and the potential is its
/// integral along the staircase x0 -> (x, y0) -> (x, y).
inline PotentialForm potential_form(const ConcomitantSpec& spec, const GridFunction& phi, const GridFunction& psi,
                                    const Point& x0, const PotentialOptions& opt = {}) {
  const Grid& g = phi.grid();
  const Mat Z = evaluate_Z(spec, phi, psi, opt.scheme);
  if (spec.m() == 1) return {GridFunction(g, Mat(Z.row(0))), 0.0};

  const int i0 = g.nearest(0, x0[0]), j0 = g.nearest(1, x0[1]);
  const int nx = g.extent(0), ny = g.extent(1);
  const Vec zx = Z.row(1).transpose();  // dx component
  const Vec zy = Z.row(0).transpose();  // dy component
  const Vec Ix = cumulative_axis(g, zx, 0, i0, opt.rule);
  const Vec Iy = cumulative_axis(g, zy, 1, j0, opt.rule);

  Mat xy(1, g.size()), yx(1, g.size());
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int p = g.index(i, j);
      xy(0, p) = Ix[g.index(i, j0)] + Iy[p] - Iy[g.index(i, j0)];
      yx(0, p) = Iy[g.index(i0, j)] + Ix[p] - Ix[g.index(i0, j)];
    }
  double loop = 0.0;
  const int band = boundary_band(g, spec.order() + 1, opt.scheme);
  for (int p = 0; p < g.size(); ++p)
    if (g.interior(p, band)) loop = std::max(loop, std::abs(xy(0, p) - yx(0, p)));
  if (opt.enforce_closed && loop > opt.closed_tolerance * g.diameter())
    throw InvalidSpectralData("concomitant 1-form is not closed: loop residual " + std::to_string(loop));
  return {GridFunction(g, std::move(xy)), loop};
}

}  // namespace delsarte
