// Copyright 2026 The delsarte-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "delsarte/diffop.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace delsarte {

/// Increasing index subsets of {0..m-1} with k elements, as bit masks in
/// lexicographic order ({0,1} before {0,2} before {1,2}).
inline std::vector<unsigned> subsets(int m, int k) {
  std::vector<unsigned> out;
  for (unsigned s = 0; s < (1u << m); ++s)
    if (std::popcount(s) == k) out.push_back(s);
  std::sort(out.begin(), out.end(), [](unsigned a, unsigned b) {
    for (int i = 0; i < 32; ++i) {
      const bool x = a & (1u << i), y = b & (1u << i);
      if (x != y) return x;
    }
    return false;
  });
  return out;
}

inline int subset_index(int m, unsigned s) {
  const auto all = subsets(m, std::popcount(s));
  return static_cast<int>(std::find(all.begin(), all.end(), s) - all.begin());
}

/// Sign of dx_j ^ dx_I relative to dx_{I + j}: (-1)^{#{i in I : i < j}}.
inline int wedge_sign(int j, unsigned I) { return std::popcount(I & ((1u << j) - 1)) % 2 ? -1 : 1; }

/// Sign s with dx_I ^ dx_{complement} = s dx_0 ^ ... ^ dx_{m-1}.
inline int volume_sign(int m, unsigned I) {
  int inversions = 0;
  for (int a = 0; a < m; ++a)
    if (I & (1u << a))
      for (int b = 0; b < a; ++b)
        if (!(I & (1u << b))) ++inversions;
  return inversions % 2 ? -1 : 1;
}

inline std::string subset_name(unsigned I) {
  if (I == 0) return "1";
  std::string s;
  for (int i = 0; i < 32; ++i)
    if (I & (1u << i)) s += (s.empty() ? "dx" : "^dx") + std::to_string(i + 1);
  return s;
}

/// Degree-k form: one GridFunction per increasing index subset.
class DiscreteForm {
 public:
  DiscreteForm(const Grid& g, int channels, int degree) : degree_(degree) {
    if (degree < 0 || degree > g.dim()) throw DimensionError("form degree out of range");
    comps_.assign(subsets(g.dim(), degree).size(), GridFunction(g, channels));
  }
  DiscreteForm(int degree, std::vector<GridFunction> components) : degree_(degree), comps_(std::move(components)) {
    if (comps_.empty()) throw DimensionError("a form needs at least one component");
    const int m = comps_[0].grid().dim();
    if (degree < 0 || degree > m) throw DimensionError("form degree out of range");
    if (comps_.size() != subsets(m, degree).size()) throw DimensionError("component count must be C(m, k)");
    for (const auto& c : comps_) comps_[0].check(c);
  }

  static DiscreteForm from_flat(const Grid& g, int channels, int degree, const Vec& v) {
    DiscreteForm f(g, channels, degree);
    const Eigen::Index block = static_cast<Eigen::Index>(channels) * g.size();
    if (v.size() != block * f.components()) throw DimensionError("flat vector has the wrong length");
    for (int c = 0; c < f.components(); ++c)
      f.comps_[c] = GridFunction::from_flat(g, channels, v.segment(c * block, block));
    return f;
  }

  int degree() const { return degree_; }
  int m() const { return grid().dim(); }
  int channels() const { return comps_[0].channels(); }
  int components() const { return static_cast<int>(comps_.size()); }
  const Grid& grid() const { return comps_[0].grid(); }
  const GridFunction& operator[](int c) const { return comps_.at(c); }
  GridFunction& operator[](int c) { return comps_.at(c); }
  const GridFunction& component(unsigned I) const { return comps_.at(subset_index(m(), I)); }

  Vec flat() const {
    const Eigen::Index block = static_cast<Eigen::Index>(channels()) * grid().size();
    Vec v(block * components());
    for (int c = 0; c < components(); ++c) v.segment(c * block, block) = comps_[c].flat();
    return v;
  }

 private:
  int degree_;
  std::vector<GridFunction> comps_;
};

/// Commuting operator family L_1..L_m on a periodic grid, with the measured
/// pairwise commutator residuals.
class ComplexFamily {
 public:
  ComplexFamily(std::vector<DifferentialOperator> ops, Grid grid, Scheme scheme = Scheme::forward())
      : ops_(std::move(ops)), grid_(std::move(grid)), scheme_(scheme) {
    if (!grid_.periodic()) throw DimensionError("the form complex lives on a periodic grid");
    if (static_cast<int>(ops_.size()) != grid_.dim()) throw DimensionError("one operator per coordinate");
    for (const auto& op : ops_) {
      if (op.m() != grid_.dim()) throw DimensionError("operator dimension does not match grid");
      if (op.N() != ops_[0].N()) throw DimensionError("operators must share the channel count");
    }
    for (const auto& op : ops_) mats_.push_back(assemble(op, grid_, scheme_));
    const int m = dim();
    comm_ = Eigen::MatrixXd::Zero(m, m);
    const auto probes = default_probes();
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        double worst = 0.0;
        for (const auto& f : probes) {
          const GridFunction r = delsarte::apply(mats_[a], delsarte::apply(mats_[b], f)) -
                                 delsarte::apply(mats_[b], delsarte::apply(mats_[a], f));
          worst = std::max(worst, norm2(r) / norm2(f));
        }
        comm_(a, b) = comm_(b, a) = worst;
      }
  }

  /// L_j = d_j (times the identity on N channels).
  static ComplexFamily standard(const Grid& g, int N = 1) {
    std::vector<DifferentialOperator> ops;
    for (int j = 0; j < g.dim(); ++j) ops.push_back(DifferentialOperator::partial(g.dim(), N, MultiIndex::unit(g.dim(), j)));
    return ComplexFamily(std::move(ops), g);
  }

  int dim() const { return grid_.dim(); }
  int channels() const { return ops_[0].N(); }
  const Grid& grid() const { return grid_; }
  const Scheme& scheme() const { return scheme_; }
  const DifferentialOperator& op(int j) const { return ops_.at(j); }
  const SpMatC& matrix(int j) const { return mats_.at(j); }
  const Eigen::MatrixXd& commutators() const { return comm_; }
  double max_commutator() const { return comm_.size() ? comm_.maxCoeff() : 0.0; }
  bool commuting(double tol) const { return max_commutator() <= tol; }

  // Deterministic smooth probes: low Fourier modes with fixed phases.
  std::vector<GridFunction> default_probes() const {
    std::vector<GridFunction> out;
    for (int q = 1; q <= 3; ++q)
      out.push_back(GridFunction::vector(grid_, channels(), [&](const Point& x) {
        Vec v(channels());
        for (int c = 0; c < channels(); ++c) {
          const Axis& ax = grid_.axis(0);
          const double t = 2 * M_PI * (x[0] - ax.lo) / (ax.hi - ax.lo);
          double s = dim() == 2 ? 2 * M_PI * (x[1] - grid_.axis(1).lo) / (grid_.axis(1).hi - grid_.axis(1).lo) : 0.0;
          v[c] = std::exp(imag_unit * (q * t + (q + c) * s + 0.3 * c)) + 0.5 * std::cos(t - 2 * s + q);
        }
        return v;
      }));
    return out;
  }

 private:
  std::vector<DifferentialOperator> ops_;
  Grid grid_;
  Scheme scheme_;
  std::vector<SpMatC> mats_;
  Eigen::MatrixXd comm_;
};

/// d_L beta = sum_j dx_j ^ L_j beta.
inline DiscreteForm d_L(const ComplexFamily& fam, const DiscreteForm& beta) {
  const int m = fam.dim(), k = beta.degree();
  if (k >= m) throw DimensionError("d_L is not defined on top-degree forms");
  if (!(beta.grid() == fam.grid()) || beta.channels() != fam.channels())
    throw DimensionError("form does not match the family");
  DiscreteForm out(fam.grid(), fam.channels(), k + 1);
  const auto src = subsets(m, k), dst = subsets(m, k + 1);
  for (size_t a = 0; a < src.size(); ++a)
    for (int j = 0; j < m; ++j) {
      if (src[a] & (1u << j)) continue;
      const unsigned J = src[a] | (1u << j);
      const int c = subset_index(m, J);
      const GridFunction t = delsarte::apply(fam.matrix(j), beta[static_cast<int>(a)]);
      out[c] = wedge_sign(j, src[a]) > 0 ? out[c] + t : out[c] - t;
    }
  return out;
}

/// Standard Euclidean star: dx_I -> s dx_{complement}, s the volume sign.
inline DiscreteForm hodge_star(const DiscreteForm& beta) {
  const int m = beta.m(), k = beta.degree();
  const unsigned all = (1u << m) - 1;
  DiscreteForm out(beta.grid(), beta.channels(), m - k);
  const auto src = subsets(m, k);
  for (size_t a = 0; a < src.size(); ++a) {
    const int c = subset_index(m, all & ~src[a]);
    out[c] = volume_sign(m, src[a]) > 0 ? beta[static_cast<int>(a)] : -1.0 * beta[static_cast<int>(a)];
  }
  return out;
}

/// Inverse star: (-1)^{k(m-k)} star.
inline DiscreteForm hodge_star_inverse(const DiscreteForm& beta) {
  const int m = beta.m(), k = beta.degree();
  DiscreteForm s = hodge_star(beta);
  if ((k * (m - k)) % 2)
    for (int c = 0; c < s.components(); ++c) s[c] = -1.0 * s[c];
  return s;
}

/// <beta, gamma> = sum over components and points of cell volume * beta^H gamma.
inline cplx inner_product(const DiscreteForm& beta, const DiscreteForm& gamma) {
  if (beta.degree() != gamma.degree()) throw DimensionError("inner product of forms of different degree");
  beta[0].check(gamma[0]);
  return beta.grid().cell_volume() * beta.flat().dot(gamma.flat());
}

/// Assembled matrices of the complex. Bases are the flattened forms; the
/// inner product is cell_volume times the Euclidean one, so adjoints are
/// conjugate transposes.
class AssembledComplex {
 public:
  static constexpr int max_points = 32 * 32;

  explicit AssembledComplex(ComplexFamily family) : fam_(std::move(family)) {
    const ComplexFamily& fam = fam_;
    const Grid& g = fam.grid();
    if (g.size() > max_points) throw DimensionError("assembled complex is limited to 32^2 grids");
    const int m = fam.dim(), N = fam.channels();
    const Eigen::Index block = static_cast<Eigen::Index>(N) * g.size();
    for (int k = 0; k < m; ++k) {
      const auto src = subsets(m, k);
      const auto dst_count = static_cast<Eigen::Index>(subsets(m, k + 1).size());
      std::vector<Eigen::Triplet<cplx>> trip;
      for (size_t a = 0; a < src.size(); ++a)
        for (int j = 0; j < m; ++j) {
          if (src[a] & (1u << j)) continue;
          const int c = subset_index(m, src[a] | (1u << j));
          const double s = wedge_sign(j, src[a]);
          const SpMatC& M = fam.matrix(j);
          for (int o = 0; o < M.outerSize(); ++o)
            for (SpMatC::InnerIterator it(M, o); it; ++it)
              trip.emplace_back(c * block + it.row(), static_cast<Eigen::Index>(a) * block + it.col(), s * it.value());
        }
      SpMatC D(dst_count * block, static_cast<Eigen::Index>(src.size()) * block);
      D.setFromTriplets(trip.begin(), trip.end());
      d_.push_back(D);
    }
    for (int k = 0; k <= m; ++k) star_.push_back(star_matrix(k));
  }

  const ComplexFamily& family() const { return fam_; }
  int dim() const { return fam_.dim(); }
  Eigen::Index size(int k) const {
    return static_cast<Eigen::Index>(subsets(dim(), k).size()) * fam_.channels() * fam_.grid().size();
  }

  // degree k -> k + 1
  const SpMatC& d(int k) const { return d_.at(k); }
  // degree k + 1 -> k
  SpMatC d_adjoint(int k) const { return SpMatC(d_.at(k).adjoint()); }
  // degree k -> m - k
  const SpMatC& star(int k) const { return star_.at(k); }
  // degree k -> k + 1: star d' star^-1
  SpMatC d_star(int k) const {
    const int m = dim();
    const double sign = (k * (m - k)) % 2 ? -1.0 : 1.0;  // star^-1 = (-1)^{k(m-k)} star on degree k
    return star_.at(m - k - 1) * d_adjoint(m - k - 1) * (sign * star_.at(k));
  }

  /// Delta_k = d' d + d d' on degree k, dense.
  Mat laplacian(int k) const {
    const int m = dim();
    Mat L = Mat::Zero(size(k), size(k));
    if (k < m) L += Mat(d_adjoint(k) * d(k));
    if (k > 0) L += Mat(d(k - 1) * d_adjoint(k - 1));
    return L;
  }

 private:
  SpMatC star_matrix(int k) const {
    const int m = dim();
    const unsigned all = (1u << m) - 1;
    const Eigen::Index block = static_cast<Eigen::Index>(fam_.channels()) * fam_.grid().size();
    const auto src = subsets(m, k);
    std::vector<Eigen::Triplet<cplx>> trip;
    for (size_t a = 0; a < src.size(); ++a) {
      const int c = subset_index(m, all & ~src[a]);
      for (Eigen::Index i = 0; i < block; ++i)
        trip.emplace_back(c * block + i, static_cast<Eigen::Index>(a) * block + i, double(volume_sign(m, src[a])));
    }
    SpMatC S(size(m - k), size(k));
    S.setFromTriplets(trip.begin(), trip.end());
    return S;
  }

  ComplexFamily fam_;
  std::vector<SpMatC> d_, star_;
};

/// d'_L gamma for a degree k + 1 form, as the exact discrete adjoint.
inline DiscreteForm d_L_adjoint(const AssembledComplex& cx, const DiscreteForm& gamma) {
  const int k = gamma.degree() - 1;
  if (k < 0) throw DimensionError("d'_L is not defined on 0-forms");
  const Vec v = cx.d_adjoint(k) * gamma.flat();
  return DiscreteForm::from_flat(gamma.grid(), gamma.channels(), k, v);
}

/// max over probe forms of degree k <= m - 2 of ||d_L d_L beta|| / ||beta||.
inline double d_L_squared_residual(const ComplexFamily& fam, const std::vector<DiscreteForm>& probes) {
  double worst = 0.0;
  for (const auto& b : probes) {
    if (b.degree() > fam.dim() - 2) continue;
    const DiscreteForm dd = d_L(fam, d_L(fam, b));
    worst = std::max(worst, std::sqrt(std::abs(inner_product(dd, dd)) / std::abs(inner_product(b, b))));
  }
  return worst;
}

struct HarmonicDegree {
  int degree = 0;
  int dim = 0;
  double sigma_below = 0.0;  // largest singular value counted as zero
  double sigma_above = 0.0;  // smallest singular value above the threshold
  double sigma_max = 0.0;
  double sigma_gap = 0.0;    // sigma_above / sigma_below (infinite when the null values are exact zeros)
  double min_eigenvalue = 0.0;
  Mat basis;                 // orthonormal null vectors, columns
};

struct HarmonicReport {
  std::vector<HarmonicDegree> degrees;
  std::vector<int> dims() const {
    std::vector<int> d;
    for (const auto& h : degrees) d.push_back(h.dim);
    return d;
  }
};

/// Numerical null space of Delta_k: eigenvalues of the Hermitian Laplacian
/// below gap * sigma_max.
inline HarmonicDegree harmonic_degree(const AssembledComplex& cx, int k, double gap = 1e-8) {
  const Mat L = cx.laplacian(k);
  Eigen::SelfAdjointEigenSolver<Mat> es(L);
  const Eigen::VectorXd ev = es.eigenvalues();
  HarmonicDegree h;
  h.degree = k;
  h.min_eigenvalue = ev.minCoeff();
  h.sigma_max = ev.cwiseAbs().maxCoeff();
  const double thr = gap * h.sigma_max;
  std::vector<Eigen::Index> null;
  h.sigma_above = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double s = std::abs(ev[i]);
    if (s <= thr) {
      null.push_back(i);
      h.sigma_below = std::max(h.sigma_below, s);
    } else {
      h.sigma_above = std::min(h.sigma_above, s);
    }
  }
  h.dim = static_cast<int>(null.size());
  h.sigma_gap = h.sigma_below > 0.0 ? h.sigma_above / h.sigma_below : std::numeric_limits<double>::infinity();
  h.basis = Mat(L.rows(), h.dim);
  for (int c = 0; c < h.dim; ++c) h.basis.col(c) = es.eigenvectors().col(null[c]);
  return h;
}

inline HarmonicReport harmonic_report(const AssembledComplex& cx, double gap = 1e-8) {
  HarmonicReport r;
  for (int k = 0; k <= cx.dim(); ++k) r.degrees.push_back(harmonic_degree(cx, k, gap));
  return r;
}

struct DecompositionResidual {
  double reconstruction = 0.0;  // ||beta - (h + d a + d' c)|| / ||beta||
  double orthogonality = 0.0;   // max pairwise |<., .>| / ||beta||^2
  double harmonic = 0.0;        // component norms relative to ||beta||
  double exact = 0.0;
  double coexact = 0.0;
};

namespace detail {

// Orthogonal projector data: orthonormal basis of the range of A.
inline Mat range_basis(const Mat& A, double rel = 1e-8) {
  if (A.cols() == 0) return Mat(A.rows(), 0);
  Eigen::BDCSVD<Mat> svd(A, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double thr = rel * (s.size() ? s[0] : 0.0);
  Eigen::Index r = 0;
  while (r < s.size() && s[r] > thr) ++r;
  return svd.matrixU().leftCols(r);
}

}  // namespace detail

/// Orthonormal bases of the harmonic space and of the ranges of d_L and d'_L in degree k.
struct HodgeBases {
  int degree = 0;
  Mat harmonic, exact, coexact;
};

inline HodgeBases hodge_bases(const AssembledComplex& cx, int k, double gap = 1e-8) {
  const int m = cx.dim();
  const Eigen::Index n = cx.size(k);
  HodgeBases b;
  b.degree = k;
  b.harmonic = harmonic_degree(cx, k, gap).basis;
  b.exact = k > 0 ? detail::range_basis(Mat(cx.d(k - 1))) : Mat(n, 0);
  b.coexact = k < m ? detail::range_basis(Mat(cx.d_adjoint(k))) : Mat(n, 0);
  return b;
}

/// Splits beta into harmonic, d_L-exact and d'_L-coexact parts by
/// orthogonal projection onto the three ranges.
inline DecompositionResidual hodge_decomposition_check(const HodgeBases& bases, const DiscreteForm& beta) {
  if (beta.degree() != bases.degree) throw DimensionError("form degree does not match the bases");
  const Vec b = beta.flat();
  const Mat &H = bases.harmonic, &E = bases.exact, &C = bases.coexact;
  const Vec h = H * (H.adjoint() * b), e = E * (E.adjoint() * b), c = C * (C.adjoint() * b);
  const double nb = b.norm();
  DecompositionResidual r;
  r.reconstruction = (b - h - e - c).norm() / nb;
  const double n2 = nb * nb;
  r.orthogonality = std::max({std::abs(h.dot(e)), std::abs(h.dot(c)), std::abs(e.dot(c))}) / n2;
  r.harmonic = h.norm() / nb;
  r.exact = e.norm() / nb;
  r.coexact = c.norm() / nb;
  return r;
}

inline DecompositionResidual hodge_decomposition_check(const AssembledComplex& cx, const DiscreteForm& beta,
                                                       double gap = 1e-8) {
  return hodge_decomposition_check(hodge_bases(cx, beta.degree(), gap), beta);
}

/// Lattice chain: a point (k = 0) or a path of grid points (k = 1) whose
/// consecutive points differ by one step along one axis (periodic wrap allowed).
struct Chain {
  int degree = 0;
  std::vector<std::array<int, 2>> points;  // (i, j) lattice indices
};

inline Chain loop_rectangle(int i0, int j0, int i1, int j1) {
  Chain c{1, {}};
  for (int i = i0; i < i1; ++i) c.points.push_back({i, j0});
  for (int j = j0; j < j1; ++j) c.points.push_back({i1, j});
  for (int i = i1; i > i0; --i) c.points.push_back({i, j1});
  for (int j = j1; j > j0; --j) c.points.push_back({i0, j});
  c.points.push_back({i0, j0});
  return c;
}

/// Z^(k)[phi, psi] = phi^H A psi per component, with A the common leading
/// coefficient of the family (L_j = A d_j + lower order terms). For
/// L_j^* phi = 0 this satisfies Z^(k+1)[phi, d_L psi] = d Z^(k)[phi, psi].
inline DiscreteForm pairing_form(const ComplexFamily& fam, const GridFunction& phi, const DiscreteForm& psi) {
  const int m = fam.dim();
  Mat A;
  for (int j = 0; j < m; ++j) {
    const auto& terms = fam.op(j).terms();
    for (const auto& [alpha, c] : terms) {
      if (alpha.order() > 1 || (alpha.order() == 1 && alpha != MultiIndex::unit(m, j)))
        throw Error("chain pairing needs first-order operators L_j = A d_j + B_j");
      if (alpha.order() == 1) {
        if (!c.is_constant()) throw Error("chain pairing needs a constant leading coefficient");
        if (A.size() == 0) A = c.constant_value();
        else if ((A - c.constant_value()).norm() > 1e-14 * A.norm())
          throw Error("chain pairing needs a common leading coefficient");
      }
    }
  }
  if (A.size() == 0) throw Error("family has no derivative terms");
  DiscreteForm out(psi.grid(), 1, psi.degree());
  for (int c = 0; c < psi.components(); ++c)
    for (int p = 0; p < psi.grid().size(); ++p)
      out[c](0, p) = phi.values().col(p).dot(A * psi[c].values().col(p));
  return out;
}

/// B^(k)(psi) over a chain, k in {0, 1}. A 1-form component sampled at
/// node a is the value on the edge (a, a + e_j), matching the forward
/// differences of the complex, so the edge from a to a + e_j contributes
/// h Z_j(a) and its reverse -h Z_j(a).
inline cplx chain_pairing(const ComplexFamily& fam, const GridFunction& phi, const DiscreteForm& psi,
                          const Chain& chain) {
  const Grid& g = fam.grid();
  if (psi.degree() != chain.degree) throw DimensionError("chain and form degree differ");
  if (chain.degree > 1) throw DimensionError("chain pairings are implemented for k <= 1");
  if (chain.points.empty()) throw DimensionError("empty chain");
  auto inside = [&](const std::array<int, 2>& q) {
    for (int j = 0; j < g.dim(); ++j)
      if (q[j] < 0 || q[j] > g.extent(j)) return false;
    return g.dim() == 2 || q[1] == 0;
  };
  auto node = [&](const std::array<int, 2>& q) {
    return g.index(q[0] % g.extent(0), g.dim() == 2 ? q[1] % g.extent(1) : 0);
  };
  for (const auto& q : chain.points)
    if (!inside(q)) throw DimensionError("chain leaves the grid");
  const DiscreteForm Z = pairing_form(fam, phi, psi);
  if (chain.degree == 0) return Z[0](0, node(chain.points[0]));
  cplx sum = 0.0;
  for (size_t s = 0; s + 1 < chain.points.size(); ++s) {
    const auto a = chain.points[s], b = chain.points[s + 1];
    int axis = -1, step = 0;
    for (int j = 0; j < g.dim(); ++j)
      if (a[j] != b[j]) {
        if (axis >= 0 || std::abs(a[j] - b[j]) != 1) throw DimensionError("chain steps must be unit lattice edges");
        axis = j;
        step = b[j] - a[j];
      }
    if (axis < 0) continue;
    const GridFunction& comp = Z.component(1u << axis);
    sum += double(step) * g.axis(axis).h() * comp(0, node(step > 0 ? a : b));
  }
  return sum;
}

/// max |d Z^(k)[phi, psi] - Z^(k+1)[phi, d_L psi]| for a degree-k form psi,
/// with d the exterior derivative under the family's scheme.
inline double pairing_closedness(const ComplexFamily& fam, const GridFunction& phi, const DiscreteForm& psi) {
  const ComplexFamily flat = ComplexFamily::standard(fam.grid(), 1);
  const DiscreteForm lhs = d_L(flat, pairing_form(fam, phi, psi));
  const DiscreteForm rhs = pairing_form(fam, phi, d_L(fam, psi));
  double worst = 0.0;
  for (int c = 0; c < lhs.components(); ++c) worst = std::max(worst, max_abs(lhs[c] - rhs[c]));
  return worst;
}

}  // namespace delsarte
