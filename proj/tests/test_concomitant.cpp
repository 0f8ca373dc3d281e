// Copyright 2026 The delsarte-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "delsarte/concomitant.hpp"

#include <gtest/gtest.h>

using namespace delsarte;

namespace {

double order_fit(const std::vector<double>& h, const std::vector<double>& e) {
  // least-squares slope of log e against log h
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(h.size());
  for (size_t i = 0; i < h.size(); ++i) {
    double x = std::log(h[i]), y = std::log(e[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Mat pauli_x() {
  Mat a(2, 2);
  a << 0, 1, 1, 0;
  return a;
}
Mat pauli_y() {
  Mat b(2, 2);
  b << 0, cplx(0, -1), cplx(0, 1), 0;
  return b;
}

DifferentialOperator dirac(const Mat& A, const Mat& B) {
  DifferentialOperator L(2, 2);
  L.add_term(MultiIndex{1, 0}, CoeffField::constant(A));
  L.add_term(MultiIndex{0, 1}, CoeffField::constant(B));
  return L;
}

GridFunction smooth_pair_member(const Grid& g, double shift) {
  return GridFunction::vector(g, 2, [shift](const Point& x) {
    Vec v(2);
    v << std::exp(cplx(0, 1) * (x[0] + shift)) * std::cos(x[1]), cplx(std::sin(2 * x[1] - shift), std::cos(x[0] + x[1]));
    return v;
  });
}

// Generic smooth probes on the torus: every component pairs first harmonics along the same axis.
GridFunction torus_probe(const Grid& g, int which) {
  return GridFunction::vector(g, 2, [which](const Point& x) {
    Vec v(2);
    if (which == 0)
      v << std::exp(cplx(0, 1) * x[0]) * std::cos(x[1]), std::sin(x[0] + x[1]);
    else
      v << cplx(std::cos(x[0]), std::sin(x[1])), std::exp(cplx(0, -1) * x[1]);
    return v;
  });
}

}  // namespace

TEST(BuildConcomitant, FirstDerivative) {
  ConcomitantSpec s = build_concomitant(DifferentialOperator::partial(1, 1, MultiIndex{1}));
  ASSERT_EQ(s.terms().size(), 1u);
  const auto& t = s.terms()[0];
  EXPECT_EQ(t.direction, 0);
  EXPECT_EQ(t.beta, MultiIndex{0});
  EXPECT_EQ(t.gamma, MultiIndex{0});
  EXPECT_EQ(double(t.sign) * t.coeff.constant_value()(0, 0), cplx(-1.0));
}

TEST(BuildConcomitant, NegativeSecondDerivativeIsWronskian) {
  ConcomitantSpec s = build_concomitant((-1.0) * DifferentialOperator::partial(1, 1, MultiIndex{2}));
  ASSERT_EQ(s.terms().size(), 2u);
  // phi^H psi' - phi'^H psi
  EXPECT_EQ(s.terms()[0].beta, MultiIndex{0});
  EXPECT_EQ(s.terms()[0].gamma, MultiIndex{1});
  EXPECT_EQ(double(s.terms()[0].sign) * s.terms()[0].coeff.constant_value()(0, 0), cplx(1.0));
  EXPECT_EQ(s.terms()[1].beta, MultiIndex{1});
  EXPECT_EQ(s.terms()[1].gamma, MultiIndex{0});
  EXPECT_EQ(double(s.terms()[1].sign) * s.terms()[1].coeff.constant_value()(0, 0), cplx(-1.0));
}

TEST(BuildConcomitant, DiracPairSigns) {
  Mat A = pauli_x(), B = pauli_y();
  ConcomitantSpec s = build_concomitant(dirac(A, B));
  ASSERT_EQ(s.terms().size(), 2u);
  EXPECT_EQ(s.terms()[0].direction, 0);
  EXPECT_TRUE((double(s.terms()[0].sign) * s.terms()[0].coeff.constant_value()).isApprox(-A));
  EXPECT_EQ(s.terms()[1].direction, 1);
  EXPECT_TRUE((double(s.terms()[1].sign) * s.terms()[1].coeff.constant_value()).isApprox(B));
}

TEST(BuildConcomitant, OrderBoundHolds) {
  DifferentialOperator L(2, 1);
  L.add_term(MultiIndex{2, 1}, CoeffField::expression("1 + x*y"));
  L.add_term(MultiIndex{0, 2}, CoeffField::expression("exp(y)"));
  L.add_term(MultiIndex{1, 0}, CoeffField::expression("sin(x)"));
  ConcomitantSpec s = build_concomitant(L);
  for (const auto& t : s.terms()) EXPECT_LE(t.beta.order() + t.gamma.order(), L.order() - 1);
}

TEST(EvaluateZ, ConstantPairForFirstDerivative) {
  Grid g = Grid::line(0, 1, 16, Topology::open);
  ConcomitantSpec s = build_concomitant(DifferentialOperator::partial(1, 1, MultiIndex{1}));
  auto one = GridFunction::scalar(g, [](const Point&) { return cplx(1.0); });
  Mat Z = evaluate_Z(s, one, one);
  EXPECT_TRUE(Z.isApprox(Mat::Constant(1, g.size(), -1.0)));
}

TEST(EvaluateZ, ExponentialWronskian) {
  Grid g = Grid::line(-1, 1, 512, Topology::open);
  const double a = 0.7, b = -1.3;
  ConcomitantSpec s = build_concomitant((-1.0) * DifferentialOperator::partial(1, 1, MultiIndex{2}));
  auto phi = GridFunction::scalar(g, [&](const Point& x) { return cplx(std::exp(a * x[0])); });
  auto psi = GridFunction::scalar(g, [&](const Point& x) { return cplx(std::exp(b * x[0])); });
  Mat Z = evaluate_Z(s, phi, psi);
  double worst = 0;
  for (int p = 0; p < g.size(); ++p) {
    double x = g.coords(p)[0];
    worst = std::max(worst, std::abs(Z(0, p) - (b - a) * std::exp((a + b) * x)));
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(EvaluateZ, DiagonalIsImaginaryWronskian) {
  Grid g = Grid::line(0, 2 * M_PI, 128, Topology::periodic);
  ConcomitantSpec s = build_concomitant((-1.0) * DifferentialOperator::partial(1, 1, MultiIndex{2}));
  auto real = GridFunction::scalar(g, [](const Point& x) { return cplx(std::cos(x[0]) + 2.0); });
  EXPECT_LT(evaluate_Z(s, real, real).cwiseAbs().maxCoeff(), 1e-15);
  auto cpx = GridFunction::scalar(g, [](const Point& x) { return std::exp(cplx(0, 1) * x[0]) + 0.5; });
  Mat Z = evaluate_Z(s, cpx, cpx);
  EXPECT_LT(Z.real().cwiseAbs().maxCoeff(), 1e-15);
  // 2i Im(conj(f) f') with f = e^{ix} + 1/2 gives 2i(1 + cos(x)/2)
  double worst = 0;
  for (int p = 0; p < g.size(); ++p)
    worst = std::max(worst, std::abs(Z(0, p) - cplx(0, 2.0 + std::cos(g.coords(p)[0]))));
  EXPECT_LT(worst, 1e-6);
}

TEST(EvaluateZ, Semilinear) {
  Grid g = Grid::plane(0, 2 * M_PI, 32, 0, 2 * M_PI, 32, Topology::periodic);
  ConcomitantSpec s = build_concomitant(dirac(pauli_x(), pauli_y()));
  GridFunction phi = smooth_pair_member(g, 0.3), psi = smooth_pair_member(g, -1.1);
  const cplx c(0.4, 2.5);
  Mat base = evaluate_Z(s, phi, psi);
  EXPECT_LT((evaluate_Z(s, c * phi, psi) - std::conj(c) * base).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((evaluate_Z(s, phi, c * psi) - c * base).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(EvaluateZ, StarredSwapsArguments) {
  Grid g = Grid::line(-1, 1, 64, Topology::open);
  DifferentialOperator L(1, 1);
  L.add_term(MultiIndex{2}, CoeffField::expression("1 + x^2"));
  L.add_term(MultiIndex{1}, CoeffField::expression("i*x"));
  ConcomitantSpec s = build_concomitant(L);
  auto a = GridFunction::scalar(g, [](const Point& x) { return std::exp(cplx(0.3, 1) * x[0]); });
  auto b = GridFunction::scalar(g, [](const Point& x) { return cplx(std::sin(x[0]), x[0] * x[0]); });
  Mat lhs = evaluate_Z(s.starred(), a, b);
  Mat rhs = evaluate_Z(s, b, a).conjugate();
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(LagrangianIdentity, FirstDerivativeExactPair) {
  Grid g = Grid::line(0, 2 * M_PI, 256, Topology::periodic);
  auto L = DifferentialOperator::partial(1, 1, MultiIndex{1});
  auto phi = GridFunction::scalar(g, [](const Point& x) { return cplx(std::sin(x[0]), 0.5); });
  auto psi = GridFunction::scalar(g, [](const Point& x) { return std::exp(cplx(0, 1) * x[0]) + 2.0; });
  EXPECT_LE(verify_lagrangian_identity(L, build_concomitant(L), phi, psi, Scheme::centered(6)), 1e-8);
}

TEST(LagrangianIdentity, SturmLiouvilleFourthOrder) {
  DifferentialOperator L = (-1.0) * DifferentialOperator::partial(1, 1, MultiIndex{2}) +
                           DifferentialOperator::multiplication(1, CoeffField::expression("sech(x)^2"));
  ConcomitantSpec s = build_concomitant(L);
  std::vector<double> hs, es;
  for (int n : {256, 512, 1024}) {
    Grid g = Grid::line(-M_PI, M_PI, n, Topology::open);
    auto phi = GridFunction::scalar(g, [](const Point& x) { return cplx(std::sin(x[0])); });
    auto psi = GridFunction::scalar(g, [](const Point& x) { return cplx(std::cos(2 * x[0])); });
    hs.push_back(g.axis(0).h());
    es.push_back(verify_lagrangian_identity(L, s, phi, psi));
  }
  EXPECT_LE(es.back(), 1e-8);
  EXPECT_GE(order_fit(hs, es), 3.5);
}

TEST(LagrangianIdentity, SineCosinePairIsDegenerate) {
  // Z_1[sin, cos] = -1 and both sides of the identity vanish identically.
  DifferentialOperator L = (-1.0) * DifferentialOperator::partial(1, 1, MultiIndex{2}) +
                           DifferentialOperator::multiplication(1, CoeffField::expression("sech(x)^2"));
  Grid g = Grid::line(-M_PI, M_PI, 1024, Topology::open);
  auto phi = GridFunction::scalar(g, [](const Point& x) { return cplx(std::sin(x[0])); });
  auto psi = GridFunction::scalar(g, [](const Point& x) { return cplx(std::cos(x[0])); });
  EXPECT_LE(verify_lagrangian_identity(L, build_concomitant(L), phi, psi), 1e-10);
}

TEST(LagrangianIdentity, VariableCoefficientMixedDerivatives) {
  DifferentialOperator L(2, 1);
  L.add_term(MultiIndex{1, 1}, CoeffField::expression("2 + sin(x)*cos(y)"));
  L.add_term(MultiIndex{2, 0}, CoeffField::expression("i*exp(cos(y))"));
  L.add_term(MultiIndex{0, 1}, CoeffField::expression("sin(x+y)"));
  L.add_term(MultiIndex{0, 0}, CoeffField::expression("cos(x)"));
  ConcomitantSpec s = build_concomitant(L);
  std::vector<double> hs, es;
  for (int n : {32, 64, 128}) {
    Grid g = Grid::plane(0, 2 * M_PI, n, 0, 2 * M_PI, n, Topology::periodic);
    auto phi = GridFunction::scalar(g, [](const Point& x) { return std::exp(cplx(0, 1) * std::sin(x[0] - x[1])); });
    auto psi = GridFunction::scalar(g, [](const Point& x) { return cplx(std::cos(x[0]), std::sin(2 * x[1])); });
    hs.push_back(g.axis(0).h());
    es.push_back(verify_lagrangian_identity(L, s, phi, psi));
  }
  EXPECT_GE(order_fit(hs, es), 3.5);
}

TEST(LagrangianIdentity, DiracTorus) {
  DifferentialOperator L = dirac(pauli_x(), pauli_y());
  ConcomitantSpec s = build_concomitant(L);
  std::vector<double> hs, es;
  for (int n : {32, 64, 128}) {
    Grid g = Grid::plane(0, 2 * M_PI, n, 0, 2 * M_PI, n, Topology::periodic);
    GridFunction phi = torus_probe(g, 0), psi = torus_probe(g, 1);
    const double h = g.axis(0).h();
    hs.push_back(h);
    es.push_back(verify_lagrangian_identity(L, s, phi, psi, Scheme::centered(4)));
    EXPECT_LE(es.back(), 2.0 * std::pow(h, 4));
    EXPECT_LE(verify_lagrangian_identity(L, s, phi, psi, Scheme::centered(6)), 2.0 * std::pow(h, 6));
  }
  EXPECT_GE(order_fit(hs, es), 3.5);
}

TEST(PotentialForm, DegeneratesToZInOneDimension) {
  Grid g = Grid::line(-1, 1, 64, Topology::open);
  ConcomitantSpec s = build_concomitant((-1.0) * DifferentialOperator::partial(1, 1, MultiIndex{2}));
  auto a = GridFunction::scalar(g, [](const Point& x) { return cplx(std::exp(x[0])); });
  auto b = GridFunction::scalar(g, [](const Point& x) { return cplx(std::cosh(2 * x[0])); });
  PotentialForm pf = potential_form(s, a, b, {0, 0});
  EXPECT_EQ(pf.omega.values(), evaluate_Z(s, a, b));
  EXPECT_EQ(pf.loop_residual, 0.0);
}

TEST(PotentialForm, RecoversPlaneWaveAntiderivative) {
  const double k = 2.0;
  Grid g = Grid::plane(0, 2 * M_PI, 64, 0, 2 * M_PI, 64, Topology::periodic);
  DifferentialOperator L = DifferentialOperator::partial(2, 1, MultiIndex{1, 0}) +
                           DifferentialOperator::partial(2, 1, MultiIndex{0, 1});
  ConcomitantSpec s = build_concomitant(L);
  auto phi = GridFunction::scalar(g, [](const Point&) { return cplx(1.0); });
  auto psi = GridFunction::scalar(g, [&](const Point& x) { return std::exp(cplx(0, k) * (x[0] - x[1])); });
  const Point x0{g.axis(0).coord(5), g.axis(1).coord(9)};
  PotentialForm pf = potential_form(s, phi, psi, x0);
  EXPECT_LE(pf.loop_residual, 1e-8);
  const cplx c = std::exp(cplx(0, k) * (x0[0] - x0[1])) / cplx(0, k);
  double worst = 0;
  for (int p = 0; p < g.size(); ++p) worst = std::max(worst, std::abs(pf.omega(0, p) - (psi(0, p) / cplx(0, k) - c)));
  EXPECT_LE(worst, 1e-8);
}

TEST(PotentialForm, NonNullDataIsNotClosed) {
  Grid g = Grid::plane(0, 2 * M_PI, 64, 0, 2 * M_PI, 64, Topology::periodic);
  DifferentialOperator L = DifferentialOperator::partial(2, 1, MultiIndex{1, 0}) +
                           DifferentialOperator::partial(2, 1, MultiIndex{0, 1});
  ConcomitantSpec s = build_concomitant(L);
  auto phi = GridFunction::scalar(g, [](const Point&) { return cplx(1.0); });
  auto psi = GridFunction::scalar(g, [](const Point& x) { return std::exp(cplx(0, 1) * (x[0] + x[1])); });
  PotentialOptions opt;
  opt.enforce_closed = false;
  EXPECT_GE(potential_form(s, phi, psi, {0, 0}, opt).loop_residual, 1e-2);
  EXPECT_THROW(potential_form(s, phi, psi, {0, 0}), InvalidSpectralData);
}

TEST(PotentialForm, PathsAgreeOnOpenGridToQuadratureOrder) {
  Grid g = Grid::plane(-1, 1, 64, -1, 1, 64, Topology::open);
  DifferentialOperator L = DifferentialOperator::partial(2, 1, MultiIndex{1, 0}) +
                           DifferentialOperator::partial(2, 1, MultiIndex{0, 1});
  ConcomitantSpec s = build_concomitant(L);
  auto phi = GridFunction::scalar(g, [](const Point& x) { return std::exp(cplx(0.5, 0) * (x[0] - x[1])); });
  auto psi = GridFunction::scalar(g, [](const Point& x) { return std::cos(x[0] - x[1]) + cplx(0, 1); });
  PotentialForm pf = potential_form(s, phi, psi, {0, 0});
  EXPECT_LE(pf.loop_residual, 1e-6);
}

TEST(Quadrature, RulesReachTheirOrders) {
  for (auto [rule, order] : {std::pair{Quadrature::trapezoid, 2.0}, std::pair{Quadrature::cubic, 4.0},
                             std::pair{Quadrature::quintic, 6.0}}) {
    std::vector<double> hs, es;
    for (int n : {32, 64, 128}) {
      Axis ax{-1, 2, n};
      Vec f(n);
      for (int i = 0; i < n; ++i) f[i] = std::exp(ax.coord(i)) * std::sin(3 * ax.coord(i));
      Vec F = cumulative(f, ax.h(), n / 3, Topology::open, rule);
      auto prim = [](double x) { return std::exp(x) * (std::sin(3 * x) - 3 * std::cos(3 * x)) / 10.0; };
      double worst = 0;
      for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(F[i] - (prim(ax.coord(i)) - prim(ax.coord(n / 3)))));
      hs.push_back(ax.h());
      es.push_back(worst);
    }
    EXPECT_NEAR(order_fit(hs, es), order, 0.3);
  }
}

TEST(Quadrature, SpectralIsExactForTrigonometricData) {
  Axis ax{0, 2 * M_PI, 32};
  Vec f(32);
  for (int i = 0; i < 32; ++i) f[i] = 1.5 + std::cos(3 * ax.coord(i));
  Vec F = cumulative(f, ax.h(), 4, Topology::periodic);
  for (int i = 0; i < 32; ++i) {
    double x = ax.coord(i), x0 = ax.coord(4);
    EXPECT_NEAR(std::abs(F[i] - (1.5 * (x - x0) + (std::sin(3 * x) - std::sin(3 * x0)) / 3.0)), 0.0, 1e-13);
  }
}
