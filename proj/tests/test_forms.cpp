// Copyright 2026 The delsarte-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "delsarte/forms.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace delsarte;

namespace {

Grid torus(int n, int m = 2) {
  return m == 1 ? Grid::line(0, 2 * M_PI, n, Topology::periodic)
                : Grid::plane(0, 2 * M_PI, n, 0, 2 * M_PI, n, Topology::periodic);
}

DiscreteForm random_form(const Grid& g, int N, int k, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  DiscreteForm f(g, N, k);
  for (int c = 0; c < f.components(); ++c)
    for (int p = 0; p < g.size(); ++p)
      for (int ch = 0; ch < N; ++ch) f[c](ch, p) = cplx(d(rng), d(rng));
  return f;
}

DiscreteForm zero_form(const GridFunction& f) { return DiscreteForm(0, {f}); }

ComplexFamily separable_family(const Grid& g) {
  DifferentialOperator L1(2, 1), L2(2, 1);
  L1.add_term(MultiIndex{1, 0}, CoeffField::identity(1)).add_term(MultiIndex{0, 0}, CoeffField::expression("sin(x)"));
  L2.add_term(MultiIndex{0, 1}, CoeffField::identity(1)).add_term(MultiIndex{0, 0}, CoeffField::expression("cos(2*y) + i"));
  return ComplexFamily({L1, L2}, g);
}

ComplexFamily control_family(const Grid& g) {
  DifferentialOperator L1 = DifferentialOperator::partial(2, 1, MultiIndex{1, 0});
  DifferentialOperator L2(2, 1);
  L2.add_term(MultiIndex{0, 1}, CoeffField::expression("x"));
  return ComplexFamily({L1, L2}, g);
}

}  // namespace

TEST(Subsets, LexicographicOrder) {
  EXPECT_EQ(subsets(2, 1), (std::vector<unsigned>{1, 2}));
  EXPECT_EQ(subsets(3, 2), (std::vector<unsigned>{3, 5, 6}));
  EXPECT_EQ(subsets(2, 0), (std::vector<unsigned>{0}));
  EXPECT_EQ(subset_name(3), "dx1^dx2");
}

TEST(Star, TextbookPlaneValues) {
  Grid g = torus(8);
  auto one = GridFunction::scalar(g, [](const Point&) { return 1.0; });
  auto zero = GridFunction(g, 1);
  // *1 = dx^dy
  EXPECT_EQ(hodge_star(DiscreteForm(0, {one}))[0].values(), one.values());
  // *dx = dy, *dy = -dx
  DiscreteForm dx(1, {one, zero}), dy(1, {zero, one});
  EXPECT_EQ(hodge_star(dx)[1].values(), one.values());
  EXPECT_EQ(hodge_star(dx)[0].values(), zero.values());
  EXPECT_EQ(hodge_star(dy)[0].values(), (-1.0 * one).values());
  EXPECT_EQ(hodge_star(DiscreteForm(2, {one}))[0].values(), one.values());
}

TEST(Star, InvolutionIsometryAndPositivity) {
  std::mt19937_64 rng(1);
  Grid g = torus(8);
  for (int k = 0; k <= 2; ++k) {
    DiscreteForm b = random_form(g, 2, k, rng), c = random_form(g, 2, k, rng);
    DiscreteForm ss = hodge_star(hodge_star(b));
    const double sign = (k * (2 - k)) % 2 ? -1.0 : 1.0;
    EXPECT_EQ(ss.flat(), (sign * b.flat()).eval());
    EXPECT_LE(std::abs(inner_product(b, c) - inner_product(hodge_star(b), hodge_star(c))), 1e-12 * std::abs(inner_product(b, c)));
    EXPECT_GT(inner_product(b, b).real(), 0.0);
    EXPECT_EQ(hodge_star_inverse(hodge_star(b)).flat(), b.flat());
  }
}

TEST(InnerProduct, FourierModesAreOrthogonal) {
  Grid g = torus(16);
  double worst = 0.0;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b) {
      if (a == b) continue;
      auto f = zero_form(GridFunction::scalar(g, [&](const Point& x) { return std::exp(imag_unit * double(a) * (x[0] + 2 * x[1])); }));
      auto h = zero_form(GridFunction::scalar(g, [&](const Point& x) { return std::exp(imag_unit * double(b) * (x[0] + 2 * x[1])); }));
      worst = std::max(worst, std::abs(inner_product(f, h)));
    }
  EXPECT_LE(worst, 1e-12);
}

TEST(DL, StandardFamilyIsForwardDifference) {
  Grid g = torus(16);
  ComplexFamily fam = ComplexFamily::standard(g);
  auto f = GridFunction::scalar(g, [](const Point& x) { return std::sin(x[0]) * std::cos(2 * x[1]); });
  DiscreteForm df = d_L(fam, zero_form(f));
  const double h = g.axis(0).h();
  double worst = 0.0;
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 16; ++i) {
      const int p = g.index(i, j);
      worst = std::max(worst, std::abs(df[0](0, p) - (f(0, g.index((i + 1) % 16, j)) - f(0, p)) / h));
      worst = std::max(worst, std::abs(df[1](0, p) - (f(0, g.index(i, (j + 1) % 16)) - f(0, p)) / h));
    }
  EXPECT_LE(worst, 1e-12);
  EXPECT_THROW(d_L(fam, DiscreteForm(g, 1, 2)), DimensionError);
}

TEST(DL, ConstantMatrices) {
  Grid g = torus(8);
  Mat A(2, 2), B(2, 2), C(2, 2);
  A << 1, 2, 0, 3;
  B = A * A + Mat::Identity(2, 2);  // commutes with A
  C << 0, 1, 1, 0;
  auto mul = [](const Mat& M) { return DifferentialOperator::multiplication(2, CoeffField::constant(M)); };
  std::mt19937_64 rng(3);
  DiscreteForm f = random_form(g, 2, 0, rng);
  ComplexFamily good({mul(A), mul(B)}, g), bad({mul(A), mul(C)}, g);
  EXPECT_LE(d_L_squared_residual(good, {f}), 1e-12);
  EXPECT_GE(d_L_squared_residual(bad, {f}), 1e-2);
  // d(g dx + h dy) = (L1 h - L2 g) dx^dy, so (AC - CA) f
  DiscreteForm dd = d_L(bad, d_L(bad, f));
  double worst = 0.0;
  for (int p = 0; p < g.size(); ++p)
    worst = std::max(worst, (dd[0].values().col(p) - (A * C - C * A) * f[0].values().col(p)).norm());
  EXPECT_LE(worst, 1e-12);
}

TEST(DL, SquaresToZeroForCommutingFamilies) {
  Grid g = torus(64);
  std::mt19937_64 rng(5);
  std::vector<DiscreteForm> probes;
  for (int i = 0; i < 3; ++i) probes.push_back(random_form(g, 1, 0, rng));
  EXPECT_LE(d_L_squared_residual(ComplexFamily::standard(g), probes), 1e-10);
  ComplexFamily sep = separable_family(g);
  EXPECT_LE(sep.max_commutator(), 1e-10);
  EXPECT_LE(d_L_squared_residual(sep, probes), 1e-10);
  ComplexFamily ctl = control_family(g);
  EXPECT_GE(ctl.max_commutator(), 1e-2);
  EXPECT_GE(d_L_squared_residual(ctl, {zero_form(ctl.default_probes()[0])}), 1e-2);
}

TEST(Adjoint, ExactAgainstInnerProduct) {
  Grid g = torus(16);
  std::mt19937_64 rng(9);
  for (const ComplexFamily& fam : {ComplexFamily::standard(g), separable_family(g)}) {
    AssembledComplex cx(fam);
    for (int k = 0; k < 2; ++k) {
      DiscreteForm b = random_form(g, 1, k, rng), c = random_form(g, 1, k + 1, rng);
      const cplx lhs = inner_product(d_L(fam, b), c), rhs = inner_product(b, d_L_adjoint(cx, c));
      EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::abs(lhs)) << k;
    }
  }
}

TEST(Adjoint, CodifferentialSymbolOnFourierModes) {
  Grid g = torus(16);
  ComplexFamily fam = ComplexFamily::standard(g);
  AssembledComplex cx(fam);
  const double h = g.axis(0).h();
  const int kx = 2, ky = -3;
  auto mode = [&](cplx a) {
    return GridFunction::scalar(g, [=](const Point& x) { return a * std::exp(imag_unit * (kx * x[0] + ky * x[1])); });
  };
  const cplx ax = 0.7, ay = cplx(0.0, -1.3);
  DiscreteForm gamma(1, {mode(ax), mode(ay)});
  // adjoint of the forward difference has symbol (e^{-ikh} - 1)/h
  auto sym = [&](int k) { return (std::exp(-imag_unit * double(k) * h) - 1.0) / h; };
  GridFunction expect = mode(sym(kx) * ax + sym(ky) * ay);
  EXPECT_LE(max_abs(d_L_adjoint(cx, gamma)[0] - expect), 1e-12);
}

TEST(Adjoint, StarredDifferentialSquaresToZero) {
  Grid g = torus(16);
  ComplexFamily fam = separable_family(g);
  AssembledComplex cx(fam);
  std::mt19937_64 rng(13);
  const Vec b = random_form(g, 1, 0, rng).flat();
  EXPECT_LE((cx.d_star(1) * (cx.d_star(0) * b)).norm() / b.norm(), 1e-10);
}

TEST(Laplacian, ZeroFormSpectrumMatchesSymbol) {
  Grid g = torus(8);
  AssembledComplex cx(ComplexFamily::standard(g));
  Eigen::SelfAdjointEigenSolver<Mat> es(cx.laplacian(0));
  const double h = g.axis(0).h();
  std::vector<double> expect;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      expect.push_back(4 * (std::pow(std::sin(M_PI * a / 8), 2) + std::pow(std::sin(M_PI * b / 8), 2)) / (h * h));
  std::sort(expect.begin(), expect.end());
  for (int i = 0; i < 64; ++i) EXPECT_NEAR(es.eigenvalues()[i], expect[i], 1e-10 * expect.back());
}

TEST(Laplacian, PositiveSemidefiniteAndSelfAdjoint) {
  Grid g = torus(16);
  for (const ComplexFamily& fam : {ComplexFamily::standard(g), separable_family(g)}) {
    AssembledComplex cx(fam);
    for (int k = 0; k <= 2; ++k) {
      Mat L = cx.laplacian(k);
      EXPECT_LE((L - L.adjoint()).norm(), 1e-12 * L.norm());
      EXPECT_GE(harmonic_degree(cx, k).min_eigenvalue, -1e-10);
    }
  }
}

TEST(Harmonic, BettiNumbersOfTori) {
  auto dims = [](const ComplexFamily& f) { return harmonic_report(AssembledComplex(f)).dims(); };
  EXPECT_EQ(dims(ComplexFamily::standard(torus(8, 1))), (std::vector<int>{1, 1}));
  EXPECT_EQ(dims(ComplexFamily::standard(torus(8))), (std::vector<int>{1, 2, 1}));
  EXPECT_EQ(dims(ComplexFamily::standard(torus(8), 2)), (std::vector<int>{2, 4, 2}));
  for (const auto& d : harmonic_report(AssembledComplex(ComplexFamily::standard(torus(8), 2))).degrees)
    EXPECT_GE(d.sigma_gap, 1e6);
}

TEST(Harmonic, NullVectorsAreClosedAndCoclosed) {
  Grid g = torus(8);
  ComplexFamily fam = ComplexFamily::standard(g);
  AssembledComplex cx(fam);
  for (int k = 0; k <= 2; ++k) {
    Mat B = harmonic_degree(cx, k).basis;
    for (Eigen::Index c = 0; c < B.cols(); ++c) {
      if (k < 2) EXPECT_LE((cx.d(k) * B.col(c)).norm(), 1e-8);
      if (k > 0) EXPECT_LE((cx.d_adjoint(k - 1) * B.col(c)).norm(), 1e-8);
    }
  }
}

TEST(Decomposition, RandomHarmonicAndExactInputs) {
  Grid g = torus(16);
  ComplexFamily fam = ComplexFamily::standard(g);
  AssembledComplex cx(fam);
  std::mt19937_64 rng(21);
  for (int i = 0; i < 3; ++i) {
    auto r = hodge_decomposition_check(cx, random_form(g, 1, 1, rng));
    EXPECT_LE(r.reconstruction, 1e-8);
    EXPECT_LE(r.orthogonality, 1e-10);
  }
  auto one = GridFunction::scalar(g, [](const Point&) { return 1.0; });
  auto h = hodge_decomposition_check(cx, DiscreteForm(1, {one, GridFunction(g, 1)}));
  EXPECT_LE(h.exact, 1e-9);
  EXPECT_LE(h.coexact, 1e-9);
  auto ex = hodge_decomposition_check(cx, d_L(fam, random_form(g, 1, 0, rng)));
  EXPECT_LE(ex.harmonic, 1e-9);
  EXPECT_LE(ex.coexact, 1e-9);
}

TEST(ChainPairing, PointExactLoopAndHarmonicClass) {
  Grid g = torus(32);
  ComplexFamily fam = ComplexFamily::standard(g);
  auto phi = GridFunction::scalar(g, [](const Point&) { return 1.5; });
  auto f = GridFunction::scalar(g, [](const Point& x) { return std::exp(std::sin(x[0]) + std::cos(x[1])); });
  // point chain
  EXPECT_EQ(chain_pairing(fam, phi, zero_form(f), Chain{0, {{3, 4}}}), 1.5 * f(0, g.index(3, 4)));
  // exact form around a loop
  DiscreteForm df = d_L(fam, zero_form(f));
  EXPECT_LE(std::abs(chain_pairing(fam, phi, df, loop_rectangle(2, 3, 20, 27))), 1e-8);
  // dx around the x cycle
  auto one = GridFunction::scalar(g, [](const Point&) { return 1.0; });
  Chain cycle{1, {}};
  for (int i = 0; i <= 32; ++i) cycle.points.push_back({i, 5});
  const cplx v = chain_pairing(fam, phi, DiscreteForm(1, {one, GridFunction(g, 1)}), cycle);
  EXPECT_NEAR(v.real(), 1.5 * 2 * M_PI, 1e-12);
  EXPECT_THROW(chain_pairing(fam, phi, df, Chain{1, {{0, 0}, {2, 0}}}), DimensionError);
  EXPECT_THROW(chain_pairing(fam, phi, df, Chain{1, {{0, 0}, {40, 0}}}), DimensionError);
}

TEST(ChainPairing, LagrangeIdentityForNullPhi) {
  // L_j = d_j + a_j with a = (sin x, cos 2y + i); phi with L_j^* phi = 0 solves
  // d_j phi = conj(a_j) phi: phi = exp(-cos x + sin(2y)/2 - i y)
  Grid g = torus(128);
  ComplexFamily fam = separable_family(g);
  auto phi = GridFunction::scalar(g, [](const Point& x) {
    return std::exp(cplx(-std::cos(x[0]) + 0.5 * std::sin(2 * x[1]), -x[1]));
  });
  auto f = GridFunction::scalar(g, [](const Point& x) { return std::cos(x[0] - x[1]); });
  // forward differences: the defect is first order in h
  const double r = pairing_closedness(fam, phi, zero_form(f));
  EXPECT_LE(r, 2.0);
  Grid g2 = torus(256);
  ComplexFamily fam2 = separable_family(g2);
  auto phi2 = GridFunction::scalar(g2, [](const Point& x) {
    return std::exp(cplx(-std::cos(x[0]) + 0.5 * std::sin(2 * x[1]), -x[1]));
  });
  auto f2 = GridFunction::scalar(g2, [](const Point& x) { return std::cos(x[0] - x[1]); });
  EXPECT_NEAR(r / pairing_closedness(fam2, phi2, zero_form(f2)), 2.0, 0.2);
}
