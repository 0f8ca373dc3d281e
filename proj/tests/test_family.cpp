// Copyright 2026 The delsarte-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "delsarte/family.hpp"

#include <gtest/gtest.h>

using namespace delsarte;

namespace {

DifferentialOperator minus_dxx() { return (-1.0) * DifferentialOperator::partial(1, 1, MultiIndex{2}); }

}  // namespace

TEST(Family, CoshIsNullWithNegativeShift) {
  Grid g = Grid::line(-5, 5, 1024, Topology::open);
  auto fam = make_family(minus_dxx(), g, recipes::hyperbolic({1.0}, {"cosh"}, -1.0));
  EXPECT_EQ(fam.size(), 1);
  // sixth-order stencils at h ~ 1e-2
  EXPECT_LE(fam.psi_residual(0), 1e-9);
  EXPECT_LE(fam.phi_residual(0), 1e-9);
}

TEST(Family, PlaneWaveNeedsItsShift) {
  Grid g = Grid::line(0, 2 * M_PI, 512, Topology::periodic);
  EXPECT_THROW(make_family(minus_dxx(), g, recipes::plane_wave({3.0})), InvalidSpectralData);
  auto fam = make_family(minus_dxx(), g, recipes::plane_wave({3.0}, 9.0));
  EXPECT_LE(fam.psi_residual(0), 1e-6);
}

TEST(Family, ExponentialPhiSolvesAdjoint) {
  // L = d/dx + 2: psi = exp(-2x); L* = -d/dx + 2: phi = exp(2x)
  DifferentialOperator L = DifferentialOperator::partial(1, 1, MultiIndex{1}) +
                           DifferentialOperator::multiplication(1, CoeffField::constant(2.0));
  Grid g = Grid::line(-1, 1, 256, Topology::open);
  auto fam = make_family(L, g, recipes::exponential({-2.0}, {2.0}));
  EXPECT_LE(fam.phi_residual(0), 1e-8);
  EXPECT_THROW(make_family(L, g, recipes::exponential({-2.0})), InvalidSpectralData);
}

TEST(Family, DiracNullVectors) {
  Mat A = Mat::Identity(2, 2), B(2, 2);
  B << 1, 0, 0, -1;
  DifferentialOperator L(2, 2);
  L.add_term(MultiIndex{1, 0}, CoeffField::constant(A)).add_term(MultiIndex{0, 1}, CoeffField::constant(B));
  Grid g = Grid::plane(0, 2 * M_PI, 64, 0, 2 * M_PI, 64, Topology::periodic);
  // (a + b) w1 = 0, (a - b) w2 = 0
  auto fam = make_family(L, g, recipes::dirac_2d({{1.0, -1.0}, {2.0, 2.0}}));
  EXPECT_EQ(fam.channels(), 2);
  EXPECT_LE(fam.psi_residual(0), 1e-6);
  EXPECT_LE(fam.phi_residual(1), 1e-6);
  EXPECT_THROW(make_family(L, g, recipes::dirac_2d({{1.0, 2.0}})), InvalidSpectralData);
}

TEST(Family, OdeRecipeMatchesClosedForm) {
  // -y'' + (1 - 2 sech^2) y = 0 has y = sech x
  DifferentialOperator L = minus_dxx() + DifferentialOperator::multiplication(1, CoeffField::expression("1 - 2*sech(x)^2"));
  Grid g = Grid::line(-6, 6, 1200, Topology::open);
  Vec init(2);
  init << 1.0, 0.0;
  auto fam = make_family(L, g, recipes::ode(0.0, {init}, {init}));
  auto exact = GridFunction::scalar(g, [](const Point& x) { return 1.0 / std::cosh(x[0]); });
  EXPECT_LE(max_abs(fam.psi(0) - exact), 1e-7);  // RK4 at h = 0.01
}

TEST(Family, RejectsBadWeights) {
  Grid g = Grid::line(0, 1, 16, Topology::open);
  auto f = GridFunction::scalar(g, [](const Point&) { return 1.0; });
  EXPECT_THROW(SpectralFamily::unchecked({{}}, {f}, {f}, {-1.0}), InvalidSpectralData);
  EXPECT_THROW(SpectralFamily::unchecked({{}}, {f}, {f, f}), DimensionError);
  EXPECT_THROW(SpectralFamily::unchecked({}, {}, {}), InvalidSpectralData);
}
