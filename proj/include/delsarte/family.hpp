// Copyright 2026 The delsarte-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "delsarte/diffop.hpp"

namespace delsarte {

/// A spectral label: parameters, the eigenvalue shift (null functions solve
/// (L - shift) psi = 0), and a display name.
struct SpectralLabel {
  std::vector<cplx> params;
  cplx shift = 0.0;
  std::string name;
};

/// Finite spectral set with positive weights and the psi / phi null-function grids.
class SpectralFamily {
 public:
  // No residual check; used for transformed families and negative controls.
  static SpectralFamily unchecked(std::vector<SpectralLabel> labels, std::vector<GridFunction> psi,
                                  std::vector<GridFunction> phi, std::vector<double> weights = {},
                                  std::string boundary = "unchecked") {
    SpectralFamily f;
    const size_t K = labels.size();
    if (K == 0) throw InvalidSpectralData("spectral family must have at least one label");
    if (psi.size() != K || phi.size() != K) throw DimensionError("one psi and one phi grid per label");
    if (weights.empty()) weights.assign(K, 1.0);
    if (weights.size() != K) throw DimensionError("one weight per label");
    for (double w : weights)
      if (!(w > 0.0)) throw InvalidSpectralData("spectral weights must be positive");
    for (size_t k = 0; k < K; ++k) {
      psi[0].check(psi[k]);
      psi[0].check(phi[k]);
    }
    f.labels_ = std::move(labels);
    f.psi_ = std::move(psi);
    f.phi_ = std::move(phi);
    f.weights_ = std::move(weights);
    f.boundary_ = std::move(boundary);
    f.psi_res_.assign(K, 0.0);
    f.phi_res_.assign(K, 0.0);
    return f;
  }

  int size() const { return static_cast<int>(labels_.size()); }
  int channels() const { return psi_[0].channels(); }
  const Grid& grid() const { return psi_[0].grid(); }
  const std::vector<SpectralLabel>& labels() const { return labels_; }
  const std::vector<double>& weights() const { return weights_; }
  Eigen::VectorXd weight_vector() const { return Eigen::Map<const Eigen::VectorXd>(weights_.data(), size()); }
  const GridFunction& psi(int k) const { return psi_.at(k); }
  const GridFunction& phi(int k) const { return phi_.at(k); }
  const std::vector<GridFunction>& psi() const { return psi_; }
  const std::vector<GridFunction>& phi() const { return phi_; }
  const std::string& boundary() const { return boundary_; }
  double psi_residual(int k) const { return psi_res_.at(k); }
  double phi_residual(int k) const { return phi_res_.at(k); }

  // N x K matrix [psi(1)(x_p) ... psi(K)(x_p)].
  Mat psi_at(int p) const { return gather(psi_, p); }
  Mat phi_at(int p) const { return gather(phi_, p); }

  void set_residuals(std::vector<double> psi_res, std::vector<double> phi_res) {
    psi_res_ = std::move(psi_res);
    phi_res_ = std::move(phi_res);
  }

 private:
  static Mat gather(const std::vector<GridFunction>& fs, int p) {
    Mat m(fs[0].channels(), static_cast<Eigen::Index>(fs.size()));
    for (size_t k = 0; k < fs.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = fs[k].values().col(p);
    return m;
  }

  std::vector<SpectralLabel> labels_;
  std::vector<GridFunction> psi_, phi_;
  std::vector<double> weights_;
  std::string boundary_;
  std::vector<double> psi_res_, phi_res_;
};

/// How to generate the null functions of one family.
struct FamilyRecipe {
  using Builder = std::function<void(const DifferentialOperator&, const Grid&, const std::vector<SpectralLabel>&,
                                     std::vector<GridFunction>&, std::vector<GridFunction>&)>;
  std::string kind;
  std::vector<SpectralLabel> labels;
  Builder build;
  std::vector<double> weights;
  std::string boundary = "none";
  // Relative interior residual accepted for (L - shift) psi and (L* - conj shift) phi.
  double tolerance = 1e-6;
};

/// Relative interior sup residual max|(L - s) f| / max|f|.
inline double null_residual(const DifferentialOperator& op, cplx shift, const GridFunction& f,
                            const Scheme& scheme = Scheme::centered()) {
  const int band = boundary_band(f.grid(), op.order(), scheme);
  const double scale = max_abs(f, band);
  if (scale == 0.0) return 0.0;
  return max_abs(apply(op.shifted(shift), f, scheme), band) / scale;
}

inline SpectralFamily make_family(const DifferentialOperator& op, const Grid& grid, const FamilyRecipe& recipe,
                                  const Scheme& scheme = Scheme::centered()) {
  std::vector<GridFunction> psi, phi;
  recipe.build(op, grid, recipe.labels, psi, phi);
  SpectralFamily fam = SpectralFamily::unchecked(recipe.labels, psi, phi, recipe.weights, recipe.boundary);
  const DifferentialOperator adj = formal_adjoint(op);
  std::vector<double> rp, rf;
  for (int k = 0; k < fam.size(); ++k) {
    const cplx s = recipe.labels[k].shift;
    rp.push_back(null_residual(op, s, fam.psi(k), scheme));
    rf.push_back(null_residual(adj, std::conj(s), fam.phi(k), scheme));
    if (rp.back() > recipe.tolerance || rf.back() > recipe.tolerance)
      throw InvalidSpectralData("label '" + recipe.labels[k].name + "' is not a null function of the " +
                                (rp.back() > recipe.tolerance ? "operator" : "adjoint") + " (relative residual " +
                                std::to_string(std::max(rp.back(), rf.back())) + ")");
  }
  fam.set_residuals(rp, rf);
  return fam;
}

namespace recipes {

namespace detail {
inline std::string num(cplx v) {
  std::ostringstream os;
  os << v.real();
  if (v.imag() != 0.0) os << (v.imag() < 0 ? "" : "+") << v.imag() << "i";
  return os.str();
}
inline void require_scalar_line(const DifferentialOperator& op, const std::string& kind) {
  if (op.m() != 1 || op.N() != 1) throw DimensionError(kind + " recipe needs a scalar operator in one variable");
}
}  // namespace detail

/// psi = exp(r x), phi = exp(q x) per label (scalar, m = 1). Missing phi rates default to conj(r).
inline FamilyRecipe exponential(const std::vector<cplx>& psi_rates, std::vector<cplx> phi_rates = {},
                                cplx shift = 0.0) {
  if (phi_rates.empty())
    for (cplx r : psi_rates) phi_rates.push_back(std::conj(r));
  if (phi_rates.size() != psi_rates.size()) throw DimensionError("one phi rate per psi rate");
  FamilyRecipe r;
  r.kind = "exponential";
  for (size_t k = 0; k < psi_rates.size(); ++k)
    r.labels.push_back({{psi_rates[k], phi_rates[k]}, shift, "exp(" + detail::num(psi_rates[k]) + "x)"});
  r.build = [](const DifferentialOperator& op, const Grid& g, const std::vector<SpectralLabel>& labels,
               std::vector<GridFunction>& psi, std::vector<GridFunction>& phi) {
    detail::require_scalar_line(op, "exponential");
    for (const auto& l : labels) {
      psi.push_back(GridFunction::scalar(g, [&](const Point& x) { return std::exp(l.params[0] * x[0]); }));
      phi.push_back(GridFunction::scalar(g, [&](const Point& x) { return std::exp(l.params[1] * x[0]); }));
    }
  };
  r.boundary = "exponential growth";
  return r;
}

/// cosh(kappa x) or sinh(kappa x) on both sides (scalar, m = 1).
inline FamilyRecipe hyperbolic(const std::vector<double>& kappas, const std::vector<std::string>& kinds,
                               cplx shift = 0.0) {
  if (kinds.size() != kappas.size()) throw DimensionError("one kind per rate");
  FamilyRecipe r;
  r.kind = "hyperbolic";
  for (size_t k = 0; k < kappas.size(); ++k) {
    if (kinds[k] != "cosh" && kinds[k] != "sinh") throw Error("hyperbolic kind must be cosh or sinh");
    r.labels.push_back({{kappas[k], kinds[k] == "cosh" ? 1.0 : -1.0}, shift,
                        kinds[k] + "(" + detail::num(kappas[k]) + "x)"});
  }
  r.build = [](const DifferentialOperator& op, const Grid& g, const std::vector<SpectralLabel>& labels,
               std::vector<GridFunction>& psi, std::vector<GridFunction>& phi) {
    detail::require_scalar_line(op, "hyperbolic");
    for (const auto& l : labels) {
      const double kap = l.params[0].real();
      const bool even = l.params[1].real() > 0;
      auto f = GridFunction::scalar(g, [&](const Point& x) {
        return cplx(even ? std::cosh(kap * x[0]) : std::sinh(kap * x[0]));
      });
      psi.push_back(f);
      phi.push_back(f);
    }
  };
  r.boundary = "even/odd at x = 0";
  return r;
}

/// psi = phi = exp(i k x) (scalar, m = 1).
inline FamilyRecipe plane_wave(const std::vector<double>& ks, cplx shift = 0.0) {
  FamilyRecipe r;
  r.kind = "plane_wave";
  for (double k : ks) r.labels.push_back({{k}, shift, "exp(" + detail::num(k) + "ix)"});
  r.build = [](const DifferentialOperator& op, const Grid& g, const std::vector<SpectralLabel>& labels,
               std::vector<GridFunction>& psi, std::vector<GridFunction>& phi) {
    detail::require_scalar_line(op, "plane_wave");
    for (const auto& l : labels) {
      auto f = GridFunction::scalar(g, [&](const Point& x) { return std::exp(imag_unit * l.params[0].real() * x[0]); });
      psi.push_back(f);
      phi.push_back(f);
    }
  };
  r.boundary = "oscillatory";
  return r;
}

/// For L = A d_x + B d_y with constant A, B: psi = w exp(i(a x + b y)) with
/// (a A + b B) w = 0, and phi = u exp(i(conj(a) x + conj(b) y)) with (a A + b B)^H u = 0.
inline FamilyRecipe dirac_2d(const std::vector<std::pair<cplx, cplx>>& waves) {
  FamilyRecipe r;
  r.kind = "dirac_2d";
  for (auto [a, b] : waves) r.labels.push_back({{a, b}, 0.0, "(" + detail::num(a) + "," + detail::num(b) + ")"});
  r.build = [](const DifferentialOperator& op, const Grid& g, const std::vector<SpectralLabel>& labels,
               std::vector<GridFunction>& psi, std::vector<GridFunction>& phi) {
    if (op.m() != 2) throw DimensionError("dirac_2d recipe needs m = 2");
    for (const auto& [alpha, c] : op.terms())
      if (alpha.order() != 1 || !c.is_constant())
        throw InvalidSpectralData("dirac_2d recipe needs a constant-coefficient first-order operator");
    const Mat A = op.coeff(MultiIndex{1, 0}).constant_value();
    const Mat B = op.coeff(MultiIndex{0, 1}).constant_value();
    for (const auto& l : labels) {
      const cplx a = l.params[0], b = l.params[1];
      Eigen::JacobiSVD<Mat> svd(a * A + b * B, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      if (sv[sv.size() - 1] > 1e-12 * std::max(1.0, sv[0]))
        throw InvalidSpectralData("label " + l.name + " has no null vector");
      const Vec w = svd.matrixV().col(sv.size() - 1);
      const Vec u = svd.matrixU().col(sv.size() - 1);
      psi.push_back(GridFunction::vector(g, op.N(), [&](const Point& x) -> Vec {
        return w * std::exp(imag_unit * (a * x[0] + b * x[1]));
      }));
      phi.push_back(GridFunction::vector(g, op.N(), [&](const Point& x) -> Vec {
        return u * std::exp(imag_unit * (std::conj(a) * x[0] + std::conj(b) * x[1]));
      }));
    }
  };
  r.boundary = "plane waves on the torus";
  return r;
}

/// Caller-supplied closures; label k is passed to both.
inline FamilyRecipe custom(std::vector<SpectralLabel> labels, std::function<Vec(const Point&, int)> psi_fn,
                           std::function<Vec(const Point&, int)> phi_fn, std::string boundary = "custom") {
  FamilyRecipe r;
  r.kind = "custom";
  r.labels = std::move(labels);
  r.build = [psi_fn, phi_fn](const DifferentialOperator& op, const Grid& g, const std::vector<SpectralLabel>& labels,
                             std::vector<GridFunction>& psi, std::vector<GridFunction>& phi) {
    for (int k = 0; k < static_cast<int>(labels.size()); ++k) {
      psi.push_back(GridFunction::vector(g, op.N(), [&](const Point& x) { return psi_fn(x, k); }));
      phi.push_back(GridFunction::vector(g, op.N(), [&](const Point& x) { return phi_fn(x, k); }));
    }
  };
  r.boundary = std::move(boundary);
  return r;
}

namespace detail {

// Solves (L - s) y = 0 on an open line by classical RK4 from grid index `start`,
// with initial data (y, y', ..., y^(n-1)) stacked as an (N*n) vector.
inline GridFunction solve_null_ode(const DifferentialOperator& op, cplx shift, const Grid& g, int start,
                                   const Vec& init, const Scheme& scheme) {
  const int n = op.order(), N = op.N();
  if (n < 1) throw Error("ode recipe needs an operator of order at least one");
  if (init.size() != N * n) throw DimensionError("initial data must hold N * order values");
  const Axis& ax = g.axis(0);
  // Coefficients at grid points and half steps.
  Grid fine = Grid::line(ax.lo, ax.hi, 2 * ax.n, Topology::open);
  std::vector<MatField> a(n + 1);
  DifferentialOperator L = op.shifted(shift);
  for (int k = 0; k <= n; ++k) a[k] = L.coeff(MultiIndex{k}).sample(fine, scheme);
  auto rhs = [&](int fi, const Vec& y) {
    Vec dy(N * n);
    dy.head(N * (n - 1)) = y.tail(N * (n - 1));
    Vec acc = Vec::Zero(N);
    for (int k = 0; k < n; ++k) acc += a[k].at(fi) * y.segment(N * k, N);
    dy.tail(N) = -a[n].at(fi).fullPivLu().solve(acc);
    return dy;
  };
  GridFunction out(g, N);
  auto sweep = [&](int dir) {
    Vec y = init;
    out.values().col(start) = y.head(N);
    const double h = dir * ax.h();
    for (int i = start; dir > 0 ? i < ax.n - 1 : i > 0; i += dir) {
      const int f0 = 2 * i, fm = 2 * i + dir, f1 = 2 * (i + dir);
      Vec k1 = rhs(f0, y);
      Vec k2 = rhs(fm, y + 0.5 * h * k1);
      Vec k3 = rhs(fm, y + 0.5 * h * k2);
      Vec k4 = rhs(f1, y + h * k3);
      y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      out.values().col(i + dir) = y.head(N);
    }
  };
  sweep(+1);
  sweep(-1);
  return out;
}

}  // namespace detail

/// Null functions from initial data at x_start (m = 1, open grid). Each label
/// carries its psi and phi initial vectors; phi solves the adjoint equation.
inline FamilyRecipe ode(double x_start, const std::vector<Vec>& psi_init, const std::vector<Vec>& phi_init,
                        const std::vector<cplx>& shifts = {}) {
  if (psi_init.size() != phi_init.size()) throw DimensionError("one phi initial vector per psi initial vector");
  auto data = std::make_shared<std::pair<std::vector<Vec>, std::vector<Vec>>>(psi_init, phi_init);
  FamilyRecipe r;
  r.kind = "ode";
  for (size_t k = 0; k < psi_init.size(); ++k)
    r.labels.push_back({{x_start}, shifts.empty() ? cplx(0.0) : shifts.at(k), "ode#" + std::to_string(k)});
  r.build = [data](const DifferentialOperator& op, const Grid& g, const std::vector<SpectralLabel>& labels,
                   std::vector<GridFunction>& psi, std::vector<GridFunction>& phi) {
    if (op.m() != 1 || g.periodic()) throw DimensionError("ode recipe needs m = 1 on an open grid");
    const DifferentialOperator adj = formal_adjoint(op);
    for (size_t k = 0; k < labels.size(); ++k) {
      const int start = g.nearest(0, labels[k].params[0].real());
      psi.push_back(detail::solve_null_ode(op, labels[k].shift, g, start, data->first[k], Scheme::centered()));
      phi.push_back(detail::solve_null_ode(adj, std::conj(labels[k].shift), g, start, data->second[k],
                                           Scheme::centered()));
    }
  };
  r.boundary = "initial value at x_start";
  return r;
}

}  // namespace recipes

}  // namespace delsarte
