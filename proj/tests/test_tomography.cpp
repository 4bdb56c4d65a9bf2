#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace symtomo;

namespace {
double gauss(double x) { return std::exp(-x * x) / std::sqrt(kPi); }
}  // namespace

TEST(Tomogram, GroundStateIsRotationInvariant) {
  const Grid g = fixtures::grid256();
  const auto tomo = tomogram_direct(ho_eigenstate(g, 0), uniform_angles(32));
  for (std::size_t k = 0; k < tomo.n_angles(); ++k)
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(tomo.values(k, i), gauss(g.z(i)), 1e-8);
  tomo.validate();
}

TEST(Tomogram, ZeroAngleIsDensity) {
  const Grid g = fixtures::grid256();
  const auto rho = fixtures::superposition02(g);
  const RVector th = {0.0};
  const auto tomo = tomogram_direct(rho, th);
  EXPECT_LT(fixtures::sup_diff(tomo.row(0), rho.density()), 1e-12);
}

TEST(Tomogram, HalfMixtureMomentumRow) {
  const Grid g = fixtures::grid256();
  const auto rho = mixture({{0.5, ho_eigenstate(g, 0)}, {0.5, ho_eigenstate(g, 1)}});
  const RVector th = {0.5 * kPi};
  const auto tomo = tomogram_direct(rho, th);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.z(i);
    EXPECT_NEAR(tomo.values(0, i), std::exp(-x * x) * (1.0 + 2.0 * x * x) / (2.0 * std::sqrt(kPi)), 1e-12);
  }
}

TEST(Tomogram, RejectsAnglesOutsideHalfTurn) {
  const Grid g = fixtures::grid256();
  const RVector th = {3.5};
  EXPECT_THROW(tomogram_direct(ho_eigenstate(g, 0), th), InvalidArgument);
}

TEST(Wigner, GroundAndExcitedAtOrigin) {
  const Grid g = fixtures::grid256();
  const auto w0 = wigner_transform(ho_eigenstate(g, 0));
  const auto w1 = wigner_transform(ho_eigenstate(g, 1));
  EXPECT_NEAR(w0.values(128, 128), 2.0, 1e-12);
  EXPECT_NEAR(w1.values(128, 128), -2.0, 1e-12);
  EXPECT_NEAR(w0.normalization(), 1.0, 1e-8);
  EXPECT_LE(w1.values.cwiseAbs().maxCoeff(), 2.0 + 1e-6);
}

TEST(Wigner, MarginalOverMomentumIsDensity) {
  const Grid g = fixtures::grid256();
  const auto w = wigner_transform(ho_eigenstate(g, 0));
  EXPECT_NEAR(w.values.row(128).sum() * w.dp / kTwoPi, 1.0 / std::sqrt(kPi), 1e-12);
}

TEST(Radon, GroundStateAtQuarterTurn) {
  const Grid g = fixtures::grid256();
  const RVector th = {0.25 * kPi};
  const auto tomo = radon_tomogram(wigner_transform(ho_eigenstate(g, 0)), th);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(tomo.values(0, i), gauss(g.z(i)), 1e-10);
}

TEST(Radon, ZeroAngleIsDensity) {
  const Grid g = fixtures::grid256();
  const auto rho = fixtures::mix73(g);
  const RVector th = {0.0};
  EXPECT_LT(fixtures::sup_diff(radon_tomogram(wigner_transform(rho), th).row(0), rho.density()), 1e-12);
}

TEST(Radon, AgreesWithDirectRoute) {
  const Grid g = fixtures::grid256();
  const RVector ang = uniform_angles(16);
  for (const auto& f : fixtures::all(g)) {
    const auto a = tomogram_direct(f.rho, ang);
    const auto b = radon_tomogram(wigner_transform(f.rho), ang);
    EXPECT_LT((a.values - b.values).cwiseAbs().maxCoeff(), 1e-6) << f.name;
  }
}

TEST(Marginals, GroundState) {
  const Grid g = fixtures::grid256();
  const auto m = marginals(tomogram_direct(ho_eigenstate(g, 0), uniform_angles(4)));
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(m.density[i], gauss(g.z(i)), 1e-12);
    EXPECT_NEAR(m.momentum[i], gauss(g.z(i)), 1e-12);
  }
}

TEST(Marginals, FermiGasIsSelfDual) {
  const Grid g = fixtures::grid256();
  const auto m = marginals(tomogram_direct(ideal_fermi_rspdm(g, 2), uniform_angles(2)));
  EXPECT_LT(fixtures::sup_diff(m.density, m.momentum), 1e-10);
  EXPECT_NEAR(pairwise_sum(m.density) * g.dz(), 1.0, 1e-6);
  EXPECT_NEAR(pairwise_sum(m.momentum) * g.dz(), 1.0, 1e-6);
}

TEST(Marginals, MatchIndependentMomentumDistribution) {
  const Grid g = fixtures::grid256();
  const auto rho = fixtures::superposition02(g);
  const auto m = marginals(tomogram_direct(rho, uniform_angles(8)));
  EXPECT_LT(fixtures::sup_diff(m.momentum, momentum_distribution(rho, g.positions())), 1e-8);
}

TEST(Marginals, MissingAngle) {
  const Grid g = fixtures::grid256();
  EXPECT_THROW(marginals(tomogram_direct(ho_eigenstate(g, 0), uniform_angles(3))), InvalidArgument);
}

TEST(Homogeneity, Rescale) {
  EXPECT_DOUBLE_EQ(homogeneity_rescale(0.4, 1.0), 0.4);
  EXPECT_DOUBLE_EQ(homogeneity_rescale(0.4, 2.0), 0.2);
  EXPECT_DOUBLE_EQ(homogeneity_rescale(0.4, -1.0), 0.4);
  EXPECT_THROW(homogeneity_rescale(0.4, 0.0), InvalidArgument);
}

TEST(Homogeneity, PointEvaluationObeysScaling) {
  const Grid g = fixtures::grid256();
  const auto orbs = diagonalize(fixtures::superposition02(g));
  const double x = 0.37, mu = 0.6, nu = -0.9;
  const double base = tomogram_point(orbs, x, mu, nu);
  for (double lam : {-1.0, 0.5, 3.0}) {
    const double scaled = tomogram_point(orbs, lam * x, lam * mu, lam * nu);
    EXPECT_NEAR(scaled, homogeneity_rescale(base, lam), 1e-8 * std::abs(scaled));
  }
  // Closed form for the ground state: W(X, mu, nu) = exp(-X^2 / l^2) / sqrt(pi l^2).
  const auto ground = diagonalize(ho_eigenstate(g, 0));
  const double l2 = 1.3 * 1.3 + 0.4 * 0.4;
  EXPECT_NEAR(tomogram_point(ground, 0.5, 1.3, 0.4), std::exp(-0.25 / l2) / std::sqrt(kPi * l2), 1e-12);
}
