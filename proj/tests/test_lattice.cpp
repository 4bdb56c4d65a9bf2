#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace symtomo;

TEST(Grid, MakeGridArithmetic) {
  const Grid g = make_grid(256, 25.6);
  EXPECT_DOUBLE_EQ(g.dz(), 0.1);
  EXPECT_DOUBLE_EQ(g.z_min(), -12.8);
  EXPECT_TRUE(g.is_symmetric());
  EXPECT_NEAR(make_grid(8, 8.0).dk(), 0.7853981633974483, 1e-15);
  EXPECT_NEAR(g.dk() * g.dz() * static_cast<double>(g.size()), kTwoPi, 1e-12);
}

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(make_grid(100, 10.0), InvalidArgument);
  EXPECT_THROW(make_grid(4, 1.0), InvalidArgument);
  EXPECT_THROW(make_grid(64, -1.0), InvalidArgument);
  EXPECT_THROW(Grid(64, 0.0, 0.0), InvalidArgument);
}

TEST(Grid, Commensurate) {
  EXPECT_TRUE(make_grid(256, 25.6).commensurate_with(make_grid(4096, 409.6)));
  EXPECT_FALSE(make_grid(256, 25.6).commensurate_with(make_grid(256, 25.0)));
}

TEST(UnitSystem, Scales) {
  UnitSystem u{2.0, 0.5, 4.0, 1.0};
  u.validate();
  EXPECT_NEAR(u.length_unit(), 1.0, 1e-15);
  EXPECT_NEAR(u.time_to_internal(1.0), 4.0, 1e-15);
  UnitSystem bad{1.0, -1.0, 1.0, 0.0};
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(SpectralTransform, RoundTrip) {
  const Grid g = make_grid(128, 12.8);
  const SpectralTransform ft(g);
  CVector psi(g.size());
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = cplx(std::sin(0.3 * i), std::cos(0.11 * i * i));
  const CVector back = ft.inverse(ft.forward(psi));
  for (std::size_t i = 0; i < psi.size(); ++i) EXPECT_LT(std::abs(back[i] - psi[i]), 1e-12);
}

TEST(SpectralTransform, GaussianIsSelfDual) {
  const Grid g = fixtures::grid256();
  const SpectralTransform ft(g);
  const CVector phi = ho_orbital(g, 0);
  const CVector tilde = ft.forward(phi);
  for (std::size_t m = 0; m < g.size(); ++m) {
    const double k = g.k(m);
    EXPECT_NEAR(std::abs(tilde[m]), std::pow(kPi, -0.25) * std::exp(-0.5 * k * k), 1e-12);
  }
}

TEST(FractionalKernel, MomentumDirectionGivesGaussian) {
  const Grid g = fixtures::grid256();
  const SpectralTransform ft(g);
  const auto amp = fractional_kernel(ft, ho_orbital(g, 0), 0.0, 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = amp.x(i);
    EXPECT_NEAR(std::norm(amp.values[i]), std::exp(-x * x) / std::sqrt(kPi), 1e-12);
  }
}

TEST(FractionalKernel, IdentityDirection) {
  const Grid g = fixtures::grid256();
  const SpectralTransform ft(g);
  const CVector psi = ho_orbital(g, 3);
  const auto amp = fractional_kernel(ft, psi, 1.0, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(std::norm(amp.values[i]), std::norm(psi[i]), 1e-15);
}

TEST(FractionalKernel, DiagonalDirectionAtOrigin) {
  const Grid g = fixtures::grid256();
  const SpectralTransform ft(g);
  const auto amp = fractional_kernel(ft, ho_orbital(g, 0), 1.0, 1.0);
  // X = 0 is the centre of the scaled lattice.
  EXPECT_NEAR(std::norm(amp.values[g.size() / 2]), 1.0 / std::sqrt(kTwoPi), 1e-12);
}

TEST(FractionalKernel, Parseval) {
  const Grid g = fixtures::grid256();
  const SpectralTransform ft(g);
  const CVector psi = ho_orbital(g, 2);
  for (double th : {0.0, 0.2, 0.9, 1.5707963267948966, 2.4, 3.0, 4.0, 5.5}) {
    const auto amp = fractional_kernel(ft, psi, std::cos(th), std::sin(th));
    EXPECT_NEAR(norm_squared(amp.values, amp.dx), norm_squared(psi, g.dz()), 1e-10) << th;
  }
}

TEST(FractionalKernel, AgreesWithPlainFourierTransform) {
  const Grid g = fixtures::grid256();
  const SpectralTransform ft(g);
  CVector psi = ho_orbital(g, 1);
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= unit_phase(0.7 * g.z(i));
  const auto amp = fractional_kernel(ft, psi, 0.0, 1.0);
  // F_{0,1}(X) is the momentum amplitude at k = X up to a constant phase.
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = amp.x(i);
    cplx direct{};
    for (std::size_t j = 0; j < g.size(); ++j) direct += psi[j] * unit_phase(-x * g.z(j));
    direct *= g.dz() / std::sqrt(kTwoPi);
    EXPECT_NEAR(std::abs(amp.values[i]), std::abs(direct), 1e-10);
  }
}

TEST(FractionalKernel, SmallNuUsesPositionScaling) {
  const Grid g = fixtures::grid256();
  const SpectralTransform ft(g);
  const CVector psi = ho_orbital(g, 1);
  const auto a = fractional_kernel(ft, psi, 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(a.lambda, std::hypot(2.0, 1e-12));
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(std::norm(a.values[i]), std::norm(psi[i]) / 2.0, 1e-15);
  const auto b = fractional_kernel(ft, psi, -1.0, 0.0);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(std::norm(b.values[i]), std::norm(psi[g.size() - i]), 1e-15);
}

TEST(FractionalKernel, DegenerateDirection) {
  const Grid g = fixtures::grid256();
  const SpectralTransform ft(g);
  EXPECT_THROW(fractional_kernel(ft, ho_orbital(g, 0), 0.0, 0.0), DegenerateDirection);
}

TEST(Interpolation, BandlimitedReproducesGaussian) {
  const Grid g = fixtures::grid256();
  RVector v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(-g.z(i) * g.z(i));
  const BandlimitedInterpolant f(g.z_min(), g.dz(), v);
  for (double x : {-3.33, -0.05, 0.0, 0.123, 2.71}) EXPECT_NEAR(f(x), std::exp(-x * x), 1e-12);
  EXPECT_EQ(f(100.0), 0.0);
}

TEST(Parallel, ResultsIndependentOfThreadCount) {
  const Grid g = fixtures::grid256();
  const auto orbs = diagonalize(fixtures::mix73(g));
  const RVector ang = uniform_angles(16);
  set_max_threads(1);
  const auto a = tomogram_direct(orbs, ang);
  set_max_threads(4);
  const auto b = tomogram_direct(orbs, ang);
  set_max_threads(0);
  EXPECT_EQ((a.values - b.values).cwiseAbs().maxCoeff(), 0.0);
}
