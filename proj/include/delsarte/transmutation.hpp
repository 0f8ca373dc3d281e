// Copyright 2026 The delsarte-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "delsarte/concomitant.hpp"
#include "delsarte/family.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace delsarte {

inline double condition_number(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  const double lo = s[s.size() - 1];
  return lo == 0.0 ? std::numeric_limits<double>::infinity() : s[0] / lo;
}

/// |Sigma| x |Sigma| kernel values at one anchor point.
struct KernelMatrix {
  Mat values;
  Point anchor{0.0, 0.0};
  bool starred = false;
  double condition = 1.0;

  static KernelMatrix make(Mat values, const Point& anchor, bool starred, double cap = 1e12) {
    const double c = condition_number(values);
    if (!(c <= cap))
      throw DegenerateKernel("kernel matrix is degenerate (condition " + std::to_string(c) + ")", c);
    return {std::move(values), anchor, starred, c};
  }
};

/// How kernel values are obtained from the concomitant.
///  - evolution (m = 1): L is embedded in d_t + L; on t-independent null
///    functions the dx-component of that operator's 1-form is integrated from
///    x0, so Omega_x = Omega_x0 + int_x0^x Z dx with Omega_x0 = `base`.
///  - pointwise (m = 1): Omega_x = Z_1[phi, psi](x).
///  - potential (m = 2): Omega_x = base + potential of Z^(1) along the staircase from x0.
enum class KernelRule { evolution, pointwise, potential };

struct KernelOptions {
  KernelRule rule = KernelRule::evolution;
  Point x0{0.0, 0.0};
  Mat base;  // integration constant Omega_x0, |Sigma| x |Sigma|; defaults to the identity
  Quadrature quadrature = Quadrature::automatic;
  Scheme scheme = Scheme::centered();
  double condition_cap = 1e12;
};

/// dx-component of the concomitant of d_t + L restricted to t-independent
/// functions. Only the d_t term contributes to that component.
inline ConcomitantSpec evolution_flux(const DifferentialOperator& op) {
  if (op.m() != 1) throw DimensionError("the evolution kernel is defined for m = 1");
  const ConcomitantSpec ext = build_concomitant(DifferentialOperator::partial(2, op.N(), MultiIndex{0, 1}));
  ConcomitantSpec flux(1, op.N());
  for (const auto& t : ext.terms(1))
    flux.add({0, MultiIndex{t.beta[0]}, MultiIndex{t.gamma[0]}, t.coeff, t.sign});
  return flux;
}

/// Kernel values at every grid point.
class KernelField {
 public:
  KernelField(const Grid& g, int labels) : grid_(g), K_(labels), data_(Mat::Zero(labels * labels, g.size())) {}

  int labels() const { return K_; }
  const Grid& grid() const { return grid_; }
  Mat at(int p) const { return Eigen::Map<const Mat>(data_.col(p).data(), K_, K_); }
  void set(int row, int col, const Vec& values) { data_.row(row + K_ * col) = values.transpose(); }
  // Entry (row, col) over the grid.
  Vec entry(int row, int col) const { return data_.row(row + K_ * col).transpose(); }

 private:
  Grid grid_;
  int K_;
  Mat data_;
};

namespace detail {

inline Mat default_base(const KernelOptions& opt, int K) {
  if (opt.base.size() == 0) return Mat::Identity(K, K);
  if (opt.base.rows() != K || opt.base.cols() != K) throw DimensionError("base kernel must be |Sigma| x |Sigma|");
  return opt.base;
}

inline int anchor_index(const Grid& g, const Point& x0) { return g.nearest(x0); }

}  // namespace detail

/// Omega_x (or its starred counterpart) on the whole grid. Entry (l, m) pairs
/// phi(l) with psi(m); the starred kernel pairs psi(l) with phi(m) through
/// the conjugate-transposed term list and uses base^H.
inline KernelField kernel_field(const DifferentialOperator& op, const SpectralFamily& fam, const KernelOptions& opt,
                                bool starred = false) {
  const Grid& g = fam.grid();
  const int K = fam.size();
  if (op.m() == 1 && opt.rule == KernelRule::potential) throw Error("potential kernels need m = 2");
  if (op.m() == 2 && opt.rule != KernelRule::potential) throw Error("m = 2 kernels use the potential rule");
  ConcomitantSpec spec = opt.rule == KernelRule::evolution ? evolution_flux(op) : build_concomitant(op);
  if (starred) spec = spec.starred();
  const auto& left = starred ? fam.psi() : fam.phi();
  const auto& right = starred ? fam.phi() : fam.psi();
  Mat base = detail::default_base(opt, K);
  if (starred) base = base.adjoint().eval();
  const int anchor = detail::anchor_index(g, opt.x0);

  KernelField field(g, K);
  for (int l = 0; l < K; ++l)
    for (int m = 0; m < K; ++m) {
      Vec v;
      switch (opt.rule) {
        case KernelRule::pointwise: v = evaluate_Z(spec, left[l], right[m], opt.scheme).row(0).transpose(); break;
        case KernelRule::evolution: {
          const Vec z = evaluate_Z(spec, left[l], right[m], opt.scheme).row(0).transpose();
          v = cumulative(z, g.axis(0).h(), anchor, g.topology(), opt.quadrature);
          v.array() += base(l, m);
          break;
        }
        case KernelRule::potential: {
          PotentialOptions po;
          po.rule = opt.quadrature;
          po.scheme = opt.scheme;
          v = potential_form(spec, left[l], right[m], g.coords(anchor), po).omega.values().row(0).transpose();
          v.array() += base(l, m);
          break;
        }
      }
      field.set(l, m, v);
    }
  return field;
}

inline KernelMatrix kernel_matrix(const DifferentialOperator& op, const SpectralFamily& fam, const Point& x,
                                  const KernelOptions& opt, bool starred = false) {
  const KernelField f = kernel_field(op, fam, opt, starred);
  const int p = fam.grid().nearest(x);
  return KernelMatrix::make(f.at(p), fam.grid().coords(p), starred, opt.condition_cap);
}

/// Weighted inverse of a kernel: the inverse of Omega as an integral operator
/// against the spectral measure, R^-1 Omega^-1 R^-1.
inline Mat rho_inverse(const Mat& K, const Eigen::VectorXd& rho) {
  const Eigen::VectorXcd r = rho.cast<cplx>().cwiseInverse();
  return r.asDiagonal() * K.partialPivLu().inverse() * r.asDiagonal();
}

/// Delsarte transmutation operator built from one spectral family.
class DelsarteOperator {
 public:
  DelsarteOperator(DifferentialOperator L, SpectralFamily fam, KernelOptions opt)
      : L_(std::move(L)), fam_(std::move(fam)), opt_(std::move(opt)),
        K_(kernel_field(L_, fam_, opt_)), Ks_(kernel_field(L_, fam_, opt_, true)),
        anchor_(detail::anchor_index(fam_.grid(), opt_.x0)) {
    if (L_.m() != fam_.grid().dim() || L_.N() != fam_.channels())
      throw DimensionError("family does not match operator");
    K0_ = KernelMatrix::make(K_.at(anchor_), fam_.grid().coords(anchor_), false, opt_.condition_cap).values;
    K0s_ = Ks_.at(anchor_);
    if (opt_.rule == KernelRule::evolution) flux_ = evolution_flux(L_);
    check_nonsingular();
    transform_family();
  }

  const DifferentialOperator& op() const { return L_; }
  const SpectralFamily& family() const { return fam_; }
  const SpectralFamily& transformed() const { return *tfam_; }
  const KernelOptions& options() const { return opt_; }
  const KernelField& kernel() const { return K_; }
  const KernelField& starred_kernel() const { return Ks_; }
  const Mat& base_kernel() const { return K0_; }
  int anchor() const { return anchor_; }
  const Grid& grid() const { return fam_.grid(); }

  /// Omega f = f - sum rho rho psi~ [Omega_x0^-1] I[phi, f], with I the
  /// concomitant integrated from x0 (evolution), its increment Z(x) - Z(x0)
  /// (pointwise), or its staircase potential (m = 2).
  GridFunction apply(const GridFunction& f) const {
    check_input(f);
    const Mat I = surface_term(fam_.phi(), f, opt_.rule == KernelRule::evolution ? flux_ : spec());
    const Mat W = rho() * rho_inverse(K0_, fam_.weight_vector()) * rho();
    GridFunction out = f;
    for (int p = 0; p < f.size(); ++p) out.values().col(p) -= tfam_->psi_at(p) * (W * I.col(p));
    return out;
  }

  /// Omega^-1 g = g - sum rho rho psi [Omega~_x0^-1] I[phi~, g] with
  /// Omega~_x0 = -Omega_x0. Implemented for the evolution rule.
  GridFunction inverse_apply(const GridFunction& g) const {
    check_input(g);
    if (opt_.rule != KernelRule::evolution) throw Error("inverse transmutation needs the evolution kernel rule");
    const Mat I = surface_term(tfam_->phi(), g, flux_);
    const Mat Wt = rho() * rho_inverse(transformed_base(), fam_.weight_vector()) * rho();
    GridFunction out = g;
    for (int p = 0; p < g.size(); ++p) out.values().col(p) -= fam_.psi_at(p) * (Wt * I.col(p));
    return out;
  }

  // Omega~_x0 from the sign relation.
  Mat transformed_base() const { return -K0_; }

  OperatorAction forward() const {
    return [this](const GridFunction& f) { return apply(f); };
  }
  OperatorAction inverse() const {
    return [this](const GridFunction& g) { return inverse_apply(g); };
  }

 private:
  Eigen::MatrixXcd rho() const { return fam_.weight_vector().cast<cplx>().asDiagonal(); }
  const ConcomitantSpec& spec() const {
    if (!spec_) spec_ = std::make_shared<ConcomitantSpec>(build_concomitant(L_));
    return *spec_;
  }

  void check_input(const GridFunction& f) const {
    if (!(f.grid() == grid()) || f.channels() != L_.N()) throw DimensionError("function does not match operator");
  }

  // Flags points whose kernel exceeds the condition cap, plus the points on
  // either side of a zero of det Omega_x between grid nodes.
  void check_nonsingular() const {
    const int P = grid().size();
    std::vector<cplx> det(P);
    std::vector<char> bad(P, 0);
    for (int p = 0; p < P; ++p) {
      const Mat k = K_.at(p);
      det[p] = k.determinant();
      if (!(condition_number(k) <= opt_.condition_cap)) bad[p] = 1;
    }
    if (grid().dim() == 1)
      for (int p = 0; p + 1 < P; ++p) {
        const cplx d = det[p + 1] - det[p];
        const double dd = std::norm(d);
        const double t = dd == 0.0 ? 0.0 : std::clamp(-std::real(std::conj(det[p]) * d) / dd, 0.0, 1.0);
        if (std::abs(det[p] + t * d) <= 1e-6 * (std::abs(det[p]) + std::abs(det[p + 1]))) bad[p] = bad[p + 1] = 1;
      }
    std::vector<int> where;
    for (int p = 0; p < P; ++p)
      if (bad[p]) where.push_back(p);
    if (!where.empty())
      throw SingularKernel("kernel singular at " + std::to_string(where.size()) + " grid points", std::move(where));
  }

  // (|Sigma| x points) matrix of I_mu(x) for the given left family.
  Mat surface_term(const std::vector<GridFunction>& left, const GridFunction& f, const ConcomitantSpec& s) const {
    const Grid& g = grid();
    Mat I(static_cast<Eigen::Index>(left.size()), g.size());
    for (size_t mu = 0; mu < left.size(); ++mu) {
      const auto row = static_cast<Eigen::Index>(mu);
      switch (opt_.rule) {
        case KernelRule::evolution: {
          const Vec z = evaluate_Z(s, left[mu], f, opt_.scheme).row(0).transpose();
          I.row(row) = cumulative(z, g.axis(0).h(), anchor_, g.topology(), opt_.quadrature).transpose();
          break;
        }
        case KernelRule::pointwise: {
          const Mat z = evaluate_Z(s, left[mu], f, opt_.scheme);
          I.row(row) = z.row(0).array() - z(0, anchor_);
          break;
        }
        case KernelRule::potential: {
          PotentialOptions po;
          po.rule = opt_.quadrature;
          po.scheme = opt_.scheme;
          po.enforce_closed = false;
          I.row(row) = potential_form(s, left[mu], f, g.coords(anchor_), po).omega.values().row(0);
          break;
        }
      }
    }
    return I;
  }

  // psi~ = Psi R Omega_x^-1 R Omega_x0, phi~ = Phi R Omega*_x^-1 R Omega*_x0.
  void transform_family() {
    const Grid& g = grid();
    const int K = fam_.size();
    const Eigen::VectorXd w = fam_.weight_vector();
    std::vector<GridFunction> psi(K, GridFunction(g, L_.N())), phi(K, GridFunction(g, L_.N()));
    for (int p = 0; p < g.size(); ++p) {
      const Mat a = fam_.psi_at(p) * rho() * rho_inverse(K_.at(p), w) * rho() * K0_;
      const Mat b = fam_.phi_at(p) * rho() * rho_inverse(Ks_.at(p), w) * rho() * K0s_;
      for (int k = 0; k < K; ++k) {
        psi[k].values().col(p) = a.col(k);
        phi[k].values().col(p) = b.col(k);
      }
    }
    tfam_ = std::make_shared<SpectralFamily>(
        SpectralFamily::unchecked(fam_.labels(), std::move(psi), std::move(phi), fam_.weights(), "transformed"));
  }

  DifferentialOperator L_;
  SpectralFamily fam_;
  KernelOptions opt_;
  KernelField K_, Ks_;
  int anchor_;
  Mat K0_, K0s_;
  ConcomitantSpec flux_{1, 1};
  mutable std::shared_ptr<ConcomitantSpec> spec_;
  std::shared_ptr<SpectralFamily> tfam_;
};

/// Transformed null functions psi~(l), phi~(l) evaluated pointwise.
inline SpectralFamily delsarte_apply_spectral(const DelsarteOperator& omega) { return omega.transformed(); }

/// L~ = Omega L Omega^-1 as an opaque action.
inline OperatorAction conjugate_operator(const DifferentialOperator& L, const DelsarteOperator& omega,
                                         const Scheme& scheme = Scheme::centered()) {
  auto M = std::make_shared<SpMatC>(assemble(L, omega.grid(), scheme));
  return [M, &omega](const GridFunction& f) { return omega.apply(delsarte::apply(*M, omega.inverse_apply(f))); };
}

/// Smooth plateau window: 1 on [c - a, c + a], 0 outside [c - a - r, c + a + r].
inline double plateau(double x, double c, double a, double r) {
  const double d = std::abs(x - c) - a;
  if (d <= 0.0) return 1.0;
  if (d >= r) return 0.0;
  auto e = [](double t) { return t <= 0.0 ? 0.0 : std::exp(-1.0 / t); };
  const double u = d / r;
  return e(1.0 - u) / (e(1.0 - u) + e(u));
}

struct ProbeWindow {
  double plateau = 1.0;  // half-width of the region where coefficients are read off
  double ramp = 1.0;     // width of the smooth cut-off on each side
  double edge = 0.5;     // distance kept between a window's support and the grid ends
};

struct ProbeFit {
  std::vector<MatField> b;    // b[k](x): coefficient of d^k
  std::vector<char> covered;  // points lying on some window plateau
};

/// Local coefficients b_k(x), k = 0..order, of an action assumed to be a
/// differential operator (m = 1). The line is tiled by plateau windows; in
/// each, the action is applied to ((x - c)/a)^j times the window, j = 0..order+1,
/// and b_k is fitted per plateau point by least squares against the exact
/// monomial derivatives.
inline ProbeFit probe_coefficients(const OperatorAction& act, const Grid& g, int N, int order,
                                   const ProbeWindow& win = {}) {
  if (g.dim() != 1) throw DimensionError("coefficient probing is implemented for m = 1");
  const Axis& ax = g.axis(0);
  const double a = win.plateau, r = win.ramp;
  const double first = ax.lo + win.edge + r + a, last = ax.coord(ax.n - 1) - win.edge - r - a;
  if (last < first) throw DimensionError("grid too short for the probe window");
  const int J = order + 2, P = g.size();
  ProbeFit fit{std::vector<MatField>(order + 1, MatField(N, P)), std::vector<char>(P, 0)};
  const int windows = static_cast<int>(std::ceil((last - first) / (2 * a))) + 1;
  for (int w = 0; w < windows; ++w) {
    const double c = windows == 1 ? first : first + (last - first) * w / (windows - 1);
    std::vector<std::vector<GridFunction>> resp(J);
    for (int j = 0; j < J; ++j)
      for (int ch = 0; ch < N; ++ch) {
        GridFunction q(g, N);
        for (int p = 0; p < P; ++p) {
          const double x = g.coords(p)[0];
          q(ch, p) = std::pow((x - c) / a, j) * plateau(x, c, a, r);
        }
        resp[j].push_back(act(q));
      }
    Mat A(J, order + 1), rhs(J, N);
    for (int p = 0; p < P; ++p) {
      const double x = g.coords(p)[0];
      if (fit.covered[p] || std::abs(x - c) > a) continue;
      fit.covered[p] = 1;
      const double t = (x - c) / a;
      for (int j = 0; j < J; ++j)
        for (int k = 0; k <= order; ++k) {
          double v = 0.0;
          if (k <= j) {
            v = std::pow(t, j - k) / std::pow(a, k);
            for (int s = 0; s < k; ++s) v *= (j - s);
          }
          A(j, k) = v;
        }
      const auto qr = A.colPivHouseholderQr();
      for (int ch = 0; ch < N; ++ch) {
        for (int j = 0; j < J; ++j) rhs.row(j) = resp[j][ch].values().col(p).transpose();
        const Mat sol = qr.solve(rhs);  // row k holds column ch of b_k
        for (int k = 0; k <= order; ++k) fit.b[k].at(p).col(ch) = sol.row(k).transpose();
      }
    }
  }
  return fit;
}

/// The differential operator whose coefficients were fitted by probe_coefficients.
inline DifferentialOperator fitted_operator(const Grid& g, const std::vector<MatField>& b) {
  DifferentialOperator op(1, b[0].N);
  for (int k = 0; k < static_cast<int>(b.size()); ++k) op.add_term(MultiIndex{k}, CoeffField::sampled(g, b[k]));
  return op;
}

/// max over probes of ||L~(Omega f) - Omega(L f)|| / ||f|| in the interior norm.
inline double intertwining_residual(const DifferentialOperator& L, const OperatorAction& Lt,
                                    const DelsarteOperator& omega, const std::vector<GridFunction>& probes,
                                    int band = -1, const Scheme& scheme = Scheme::centered()) {
  if (band < 0) band = boundary_band(omega.grid(), L.order(), scheme);
  const auto M = assemble(L, omega.grid(), scheme);
  double worst = 0.0;
  for (const auto& f : probes) {
    GridFunction r = Lt(omega.apply(f)) - omega.apply(delsarte::apply(M, f));
    worst = std::max(worst, norm2(r, band) / norm2(f, band));
  }
  return worst;
}

/// v~ = v - 2 (log W)'' with W the Wronskian of the seeds, via W''/W - (W'/W)^2.
inline GridFunction crum_transform(const GridFunction& v, const std::vector<GridFunction>& seeds,
                                   const Scheme& scheme = Scheme::centered()) {
  const Grid& g = v.grid();
  const int K = static_cast<int>(seeds.size());
  if (K == 0) return v;
  if (g.dim() != 1) throw DimensionError("Crum transform is one-dimensional");
  std::vector<std::vector<GridFunction>> d(K);
  for (int j = 0; j < K; ++j) {
    v.check(seeds[j]);
    for (int i = 0; i < K; ++i) d[j].push_back(derivative(seeds[j], MultiIndex{i}, scheme));
  }
  GridFunction W(g, 1);
  Mat M(K, K);
  for (int p = 0; p < g.size(); ++p) {
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j) M(i, j) = d[j][i](0, p);
    W(0, p) = M.determinant();
  }
  std::vector<int> zeros;
  const double scale = W.values().cwiseAbs().maxCoeff();
  for (int p = 0; p < g.size(); ++p) {
    const bool tiny = std::abs(W(0, p)) <= 1e-14 * scale;
    const bool crossing = p > 0 && W(0, p).real() * W(0, p - 1).real() < 0.0;
    if (tiny || crossing) zeros.push_back(p);
  }
  if (!zeros.empty()) throw SingularKernel("Wronskian of the seeds vanishes", std::move(zeros));
  const GridFunction W1 = derivative(W, MultiIndex{1}, scheme);
  const GridFunction W2 = derivative(W, MultiIndex{2}, scheme);
  GridFunction out = v;
  for (int p = 0; p < g.size(); ++p) {
    const cplx r1 = W1(0, p) / W(0, p), r2 = W2(0, p) / W(0, p);
    out(0, p) -= 2.0 * (r2 - r1 * r1);
  }
  return out;
}

struct InvarianceReport {
  double sign_relation = 0.0;  // ||X + Omega_x0||_F / ||Omega_x0||_F, X recovered from transformed data
  double invariance = 0.0;     // max over sample points of ||Omega~_x + Omega_x0 Omega_x^-1 Omega_x0||_F / ||Omega_x0||_F
  std::vector<double> per_point;
  Mat recovered_base;
};

/// Recovers Omega~_x0 from the transformed family alone, through
/// psi~ - psi = psi Y J(x) with Y = Omega~_x0^-1 and J = int_x0^x phi~^H psi~,
/// then compares Omega~_x = Omega~_x0 + J(x) against -Omega_x0 Omega_x^-1 Omega_x0.
inline InvarianceReport kernel_invariance_check(const DelsarteOperator& omega, const std::vector<int>& sample_points,
                                                int band = -1) {
  if (omega.options().rule != KernelRule::evolution) throw Error("invariance check needs the evolution kernel rule");
  const Grid& g = omega.grid();
  const SpectralFamily& fam = omega.family();
  const SpectralFamily& tf = omega.transformed();
  const int K = fam.size(), N = fam.channels();
  if (band < 0) band = boundary_band(g, omega.op().order());

  const KernelOptions& opt = omega.options();
  KernelOptions topt = opt;
  topt.base = Mat::Zero(K, K);
  const ConcomitantSpec flux = evolution_flux(omega.op());
  std::vector<Mat> J(g.size(), Mat::Zero(K, K));
  for (int l = 0; l < K; ++l)
    for (int m = 0; m < K; ++m) {
      const Vec z = evaluate_Z(flux, tf.phi(l), tf.psi(m), opt.scheme).row(0).transpose();
      const Vec c = cumulative(z, g.axis(0).h(), omega.anchor(), g.topology(), opt.quadrature);
      for (int p = 0; p < g.size(); ++p) J[p](l, m) = c[p];
    }

  // Least squares for vec(Y): psi(p) Y J(p) = psi~(p) - psi(p), all interior points.
  std::vector<int> rows;
  for (int p = 0; p < g.size(); ++p)
    if (g.interior(p, band) && p != omega.anchor()) rows.push_back(p);
  Mat A(static_cast<Eigen::Index>(rows.size()) * N * K, K * K);
  Vec rhs(A.rows());
  for (size_t r = 0; r < rows.size(); ++r) {
    const int p = rows[r];
    const Mat psi = fam.psi_at(p), diff = tf.psi_at(p) - psi;
    const Mat kron = Eigen::kroneckerProduct(J[p].transpose(), psi);
    A.middleRows(static_cast<Eigen::Index>(r) * N * K, N * K) = kron;
    rhs.segment(static_cast<Eigen::Index>(r) * N * K, N * K) = Eigen::Map<const Vec>(diff.data(), N * K);
  }
  const Vec y = A.colPivHouseholderQr().solve(rhs);
  const Mat Y = Eigen::Map<const Mat>(y.data(), K, K);
  const Mat X = Y.inverse();
  const Mat& K0 = omega.base_kernel();

  InvarianceReport rep;
  rep.recovered_base = X;
  rep.sign_relation = (X + K0).norm() / K0.norm();
  for (int p : sample_points) {
    const Mat tilde = X + J[p];
    const Mat rhs_k = -K0 * omega.kernel().at(p).partialPivLu().solve(K0);
    rep.per_point.push_back((tilde - rhs_k).norm() / K0.norm());
    rep.invariance = std::max(rep.invariance, rep.per_point.back());
  }
  return rep;
}

}  // namespace delsarte
