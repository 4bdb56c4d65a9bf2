#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace symtomo;

namespace {

double gauss(double x) { return std::exp(-x * x) / std::sqrt(kPi); }

// Largest eigenvalues of rho dz, descending; tolerant of tiny negative ones.
RVector occupations_of(const DensityMatrix& rho, std::size_t n) {
  const CMatrix h = 0.5 * (rho.values() + rho.values().adjoint()) * rho.grid().dz();
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<CMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
  RVector out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = ev(ev.size() - 1 - static_cast<Eigen::Index>(j));
  return out;
}

}  // namespace

TEST(Inversion, GroundStateRoundTrip) {
  const Grid g = fixtures::grid256();
  const auto rho = ho_eigenstate(g, 0);
  const auto rec = rho_from_tomogram(tomogram_direct(rho, uniform_angles(128)));
  EXPECT_LE(relative_frobenius(rec, rho), 1e-4);
}

TEST(Inversion, MixtureOccupations) {
  const Grid g = fixtures::grid256();
  const auto rec = rho_from_tomogram(tomogram_direct(fixtures::mix73(g), uniform_angles(128)));
  const RVector occ = occupations_of(rec, 2);
  EXPECT_NEAR(occ[0], 0.7, 1e-3);
  EXPECT_NEAR(occ[1], 0.3, 1e-3);
}

TEST(Inversion, SingleAngleIsCoverageError) {
  const Grid g = fixtures::grid256();
  const RVector th = {0.3};
  EXPECT_THROW(rho_from_tomogram(tomogram_direct(ho_eigenstate(g, 0), th)), CoverageError);
}

TEST(Inversion, TooFewAnglesIsCoverageError) {
  const Grid g = fixtures::grid256();
  EXPECT_THROW(rho_from_tomogram(tomogram_direct(ho_eigenstate(g, 0), uniform_angles(16))), CoverageError);
}

TEST(Inversion, ReportRecordsRepair) {
  const Grid g = fixtures::grid256();
  const auto rho = fixtures::mix73(g);
  auto rep = reconstruct_from_tomogram(tomogram_direct(rho, uniform_angles(64)), g);
  rep.compare_with(rho);
  EXPECT_NEAR(rep.repair.trace_before, 1.0, 1e-6);
  EXPECT_LT(rep.repair.hermitian_correction, 1e-8);
  ASSERT_TRUE(rep.residual_frobenius.has_value());
  EXPECT_LT(*rep.residual_frobenius, 1e-4);
  EXPECT_EQ(rep.coverage.n_angles, 64u);
}

TEST(ProfilesToTomogram, FreeZeroTimeRowIsDensity) {
  const Grid g = fixtures::grid256();
  const auto rho = fixtures::mix73(g);
  const RVector t = {0.0, 1.0};
  const auto tomo = tomogram_from_profiles(profile_series(diagonalize(rho), EvolutionMode::free(), t));
  ASSERT_EQ(tomo.angles[0], 0.0);
  EXPECT_LT(fixtures::sup_diff(tomo.row(0), rho.density()), 1e-12);
}

TEST(ProfilesToTomogram, FreeGroundAtUnitTime) {
  const Grid g = make_grid(1024, 102.4);
  const auto orbs = embed(diagonalize(ho_eigenstate(fixtures::grid256(), 0)), g);
  const RVector t = {1.0};
  const auto tomo = tomogram_from_profiles(profile_series(orbs, EvolutionMode::free(), t), fixtures::grid256());
  EXPECT_NEAR(tomo.angles[0], 0.25 * kPi, 1e-15);
  for (std::size_t i = 0; i < tomo.x_grid.size(); ++i) EXPECT_NEAR(tomo.values(0, i), gauss(tomo.x_grid.z(i)), 1e-10);
}

TEST(ProfilesToTomogram, HarmonicRowsAreTrapProfiles) {
  const Grid g = fixtures::grid256();
  const auto rho = fixtures::superposition02(g);
  const RVector t = {0.3, 1.1};
  const auto s = profile_series(diagonalize(rho), EvolutionMode::harmonic(1.0), t);
  const auto tomo = tomogram_from_profiles(s, g);
  const auto direct = tomogram_direct(rho, t);
  EXPECT_LT((tomo.values - direct.values).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ProfilesToTomogram, CausticOnlySeriesIsCoverageError) {
  const Grid g = fixtures::grid256();
  const RVector t = {0.5 * kPi - 0.01, 0.5 * kPi, 0.5 * kPi + 0.01};
  const auto s = profile_series(diagonalize(ho_eigenstate(g, 0)), EvolutionMode::harmonic(1.0), t);
  RVector excluded;
  EXPECT_THROW(tomogram_from_profiles(s, g, {}, &excluded), CoverageError);
}

TEST(KSpace, FreeGroundState) {
  const Grid g = fixtures::grid256();
  const auto rho = ho_eigenstate(g, 0);
  auto rep = rho_kspace(fixtures::protocol_series(rho, EvolutionMode::free()), g);
  rep.compare_with(rho);
  EXPECT_LE(*rep.residual_frobenius, 1e-3);
  EXPECT_EQ(rep.source, "free");
  EXPECT_EQ(rep.n_profiles, 128u);
}

TEST(KSpace, GravityMatchesFree) {
  const Grid g = fixtures::grid256();
  const auto rho = fixtures::mix73(g);
  const auto a = rho_kspace(fixtures::protocol_series(rho, EvolutionMode::free()), g);
  const auto b = rho_kspace(fixtures::protocol_series(rho, EvolutionMode::gravity(1.0)), g);
  EXPECT_LE(relative_frobenius(a.rho, b.rho), 1e-6);
}

TEST(KSpace, HarmonicFermiOccupations) {
  const Grid g = fixtures::grid256();
  const auto rec = rho_kspace(fixtures::protocol_series(ideal_fermi_rspdm(g, 2), EvolutionMode::harmonic(1.0)), g);
  EXPECT_GT(rec.n_excluded, 0u);
  const RVector occ = occupations_of(rec.rho, 2);
  EXPECT_NEAR(occ[0], 0.5, 1e-3);
  EXPECT_NEAR(occ[1], 0.5, 1e-3);
}

TEST(KSpace, SymmetricWindowNeedsNoCompletion) {
  const Grid g = fixtures::grid256();
  const auto rho = fixtures::superposition02(g);
  RVector t = fixtures::tan_schedule(12.0, 64);
  RVector sym;
  for (std::size_t k = t.size() - 1; k > 0; --k) sym.push_back(-t[k]);
  sym.insert(sym.end(), t.begin(), t.end());
  const auto s = profile_series(embed(diagonalize(rho), fixtures::expansion_grid()), EvolutionMode::free(), sym);
  EXPECT_TRUE(s.simulation_only());
  ReconstructionSettings st;
  st.completion = Completion::None;
  auto rep = rho_kspace(s, g, st);
  rep.compare_with(rho);
  EXPECT_FALSE(rep.coverage.mirrored);
  EXPECT_LE(*rep.residual_frobenius, 1e-3);
}

TEST(KSpace, ShortWindowIsFlagged) {
  const Grid g = fixtures::grid256();
  const auto s = profile_series(embed(diagonalize(fixtures::mix73(g)), make_grid(1024, 102.4)), EvolutionMode::free(),
                                fixtures::tan_schedule(1.0, 48));
  ReconstructionSettings st;
  st.min_angles = 8;
  st.max_angular_gap = 3.0;
  const auto rep = rho_kspace(s, g, st);
  EXPECT_TRUE(rep.truncation_warning);
  EXPECT_FALSE(rep.warnings.empty());
}

TEST(Fbp, ProfileRouteMatchesKSpace) {
  const Grid g = fixtures::grid256();
  const auto rho = ideal_fermi_rspdm(g, 2);
  const auto s = fixtures::protocol_series(rho, EvolutionMode::free());
  const auto a = rho_kspace(s, g);
  const auto b = rho_fbp(s, g);
  EXPECT_LE(relative_frobenius(b.rho, rho), 1e-3);
  EXPECT_LE(relative_frobenius(a.rho, b.rho), 2e-3);
}

TEST(Harmonic, CausticRobustness) {
  const Grid g = fixtures::grid256();
  const auto rho = fixtures::mix73(g);
  const auto s = fixtures::protocol_series(rho, EvolutionMode::harmonic(1.0));
  RVector err;
  for (double eps : {0.02, 0.05, 0.1}) {
    ReconstructionSettings st;
    st.caustic_epsilon = eps;
    err.push_back(relative_frobenius(rho_kspace(s, g, st).rho, rho));
  }
  // All three sit at roundoff; the ratio is only meaningful above it.
  const double lo = std::max(*std::min_element(err.begin(), err.end()), 1e-12);
  const double hi = *std::max_element(err.begin(), err.end());
  EXPECT_LT(hi, 1e-3);
  EXPECT_LT(hi / lo, 2.0);
}

TEST(Statistics, DualStatesAreDistinguished) {
  const Grid g = fixtures::grid256();
  const auto a = ideal_fermi_rspdm(g, 2);
  const auto b = sqrt_density_state(a);
  const auto ra = rho_kspace(fixtures::protocol_series(a, EvolutionMode::free()), g).rho;
  const auto rb = rho_kspace(fixtures::protocol_series(b, EvolutionMode::free()), g).rho;
  EXPECT_LT(fixtures::sup_diff(ra.density(), rb.density()), 1e-6);
  const RVector p = g.positions();
  EXPECT_GT(fixtures::sup_diff(momentum_distribution(ra, p), momentum_distribution(rb, p)), 1e-2);
}

TEST(Wigner, InverseTransformIsIdentity) {
  const Grid g = fixtures::grid256();
  for (const auto& f : fixtures::all(g)) {
    const auto back = rho_from_wigner(wigner_transform(f.rho));
    EXPECT_LT((back.values() - f.rho.values()).cwiseAbs().maxCoeff(), 1e-10) << f.name;
  }
}

TEST(Wigner, InverseAtOrigin) {
  const Grid g = fixtures::grid256();
  EXPECT_NEAR(rho_from_wigner(wigner_transform(ho_eigenstate(g, 0))).values()(128, 128).real(), 1.0 / std::sqrt(kPi),
              1e-12);
  EXPECT_NEAR(std::abs(rho_from_wigner(wigner_transform(ho_eigenstate(g, 1))).values()(128, 128)), 0.0, 1e-12);
}

TEST(Wigner, BackProjectionRecoversOriginValues) {
  const Grid g = fixtures::grid256();
  const RVector ang = uniform_angles(128);
  const auto w0 = wigner_from_tomogram(tomogram_direct(ho_eigenstate(g, 0), ang));
  const auto w1 = wigner_from_tomogram(tomogram_direct(ho_eigenstate(g, 1), ang));
  EXPECT_NEAR(w0.values(128, 128), 2.0, 5e-3);
  EXPECT_NEAR(w1.values(128, 128), -2.0, 1e-2);
  EXPECT_NEAR(w0.normalization(), 1.0, 1e-4);
  EXPECT_NEAR(w1.normalization(), 1.0, 1e-4);
}

TEST(Wigner, BackProjectionNeedsCoverage) {
  const Grid g = fixtures::grid256();
  EXPECT_THROW(wigner_from_tomogram(tomogram_direct(ho_eigenstate(g, 0), uniform_angles(8))), CoverageError);
}
