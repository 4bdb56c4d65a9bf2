#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"

using namespace symtomo;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("symtomo_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                                                 ::testing::UnitTest::GetInstance()->current_test_info()->name())) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

void truncate_by(const std::string& file, std::uintmax_t n) { fs::resize_file(file, fs::file_size(file) - n); }

}  // namespace

TEST(Io, RspdmRoundTripIsBitExact) {
  TempDir d;
  const auto rho = fixtures::superposition02(fixtures::grid256());
  io::write_rspdm(d / "a.rspdm", rho);
  EXPECT_EQ(io::sniff_format(d / "a.rspdm"), "RSPDM-1");
  const auto back = io::read_rspdm(d / "a.rspdm");
  EXPECT_TRUE(back.grid() == rho.grid());
  EXPECT_TRUE(back.values() == rho.values());
}

TEST(Io, ProfilesRoundTripIsBitExact) {
  TempDir d;
  const Grid g = fixtures::grid256();
  const RVector t = {-0.5, 0.0, 0.25, 1.0};
  const auto s = profile_series(diagonalize(fixtures::mix73(g)), EvolutionMode::harmonic(1.5), t);
  io::write_profiles(d / "a.prof", s);
  const auto back = io::read_profiles(d / "a.prof");
  EXPECT_EQ(back.mode.kind, EvolutionKind::Harmonic);
  EXPECT_EQ(back.mode.omega, 1.5);
  EXPECT_TRUE(back.grid == g);
  EXPECT_EQ(back.times, t);
  EXPECT_TRUE(back.profiles == s.profiles);
  EXPECT_TRUE(back.simulation_only());
}

TEST(Io, TomogramRoundTripUniformAndListed) {
  TempDir d;
  const Grid g = fixtures::grid256();
  const auto orbs = diagonalize(ho_eigenstate(g, 1));
  for (const RVector& ang : {uniform_angles(8), RVector{0.0, 0.3, 1.2, 2.9}}) {
    const auto tomo = tomogram_direct(orbs, ang);
    io::write_tomogram(d / "a.tomo", tomo);
    const auto back = io::read_tomogram(d / "a.tomo");
    EXPECT_EQ(back.angles, tomo.angles);
    EXPECT_TRUE(back.values == tomo.values);
    EXPECT_TRUE(back.x_grid == tomo.x_grid);
  }
}

TEST(Io, ReportHeader) {
  TempDir d;
  const Grid g = fixtures::grid256();
  const auto rho = ho_eigenstate(g, 0);
  auto rep = reconstruct_from_tomogram(tomogram_direct(rho, uniform_angles(32)), g);
  rep.compare_with(rho);
  rep.warnings.push_back("example warning");
  io::write_report(d / "a.recon", rep);
  const auto h = io::read_report(d / "a.recon");
  EXPECT_EQ(h.str("method"), "fbp");
  EXPECT_EQ(h.count("n_angles"), 32u);
  EXPECT_EQ(h.num("residual_frobenius"), *rep.residual_frobenius);
  EXPECT_EQ(h.str("warning_0"), "example warning");
}

TEST(Io, TruncatedPayload) {
  TempDir d;
  io::write_rspdm(d / "a.rspdm", ho_eigenstate(fixtures::grid256(), 0));
  truncate_by(d / "a.rspdm", 8);
  EXPECT_THROW(io::read_rspdm(d / "a.rspdm"), IoError);
}

TEST(Io, TrailingBytes) {
  TempDir d;
  const Grid g = fixtures::grid256();
  const RVector t = {0.0};
  io::write_profiles(d / "a.prof", profile_series(diagonalize(ho_eigenstate(g, 0)), EvolutionMode::free(), t));
  std::ofstream(d / "a.prof", std::ios::app | std::ios::binary) << "x";
  EXPECT_THROW(io::read_profiles(d / "a.prof"), IoError);
}

TEST(Io, WrongMagic) {
  TempDir d;
  std::ofstream(d / "bogus") << "format=NOPE-9\n\n";
  EXPECT_THROW(io::sniff_format(d / "bogus"), InvalidArgument);
  io::write_rspdm(d / "a.rspdm", ho_eigenstate(fixtures::grid256(), 0));
  EXPECT_THROW(io::read_tomogram(d / "a.rspdm"), InvalidArgument);
}

TEST(Io, MissingFile) {
  EXPECT_THROW(io::read_rspdm("/nonexistent/dir/x.rspdm"), IoError);
  EXPECT_THROW(io::write_rspdm("/nonexistent/dir/x.rspdm", ho_eigenstate(fixtures::grid256(), 0)), IoError);
}
