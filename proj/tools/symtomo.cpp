// symtomo: state synthesis, evolution, tomography, reconstruction,
// verification and plot-data export.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical or coverage failure,
// 4 I/O failure.

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "symtomo/symtomo.hpp"

namespace fs = std::filesystem;
using namespace symtomo;

namespace {

std::string fmt(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw InvalidArgument("cannot parse " + what + " '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

struct Units {
  bool physical = false;
  UnitSystem system;

  double length(double x) const { return physical ? system.length_to_internal(x) : x; }
  double time(double t) const { return physical ? system.time_to_internal(t) : t; }
  double momentum(double p) const { return physical ? p / system.momentum_unit() : p; }
  double acceleration(double g) const { return physical ? system.acceleration_to_internal(g) : g; }
  double frequency(double w) const { return physical ? system.omega_to_internal(w) : w; }
};

/// "NxL": N points over extent L, centred on zero.
Grid parse_grid(const std::string& spec, const Units& u) {
  const auto x = spec.find('x');
  if (x == std::string::npos) throw InvalidArgument("grid must look like 256x25.6, got '" + spec + "'");
  const double n = parse_double(spec.substr(0, x), "grid size");
  if (n < 1 || n != static_cast<double>(static_cast<std::size_t>(n))) throw InvalidArgument("grid size must be a positive integer");
  return make_grid(static_cast<std::size_t>(n), u.length(parse_double(spec.substr(x + 1), "grid extent")));
}

std::size_t parse_count(const std::string& s) {
  const double n = parse_double(s, "schedule count");
  if (n < 1 || n != static_cast<double>(static_cast<std::size_t>(n))) throw InvalidArgument("schedule count must be a positive integer");
  return static_cast<std::size_t>(n);
}

/// "t0:t1:n" (uniform), "tan:T:n" or "tan:T0:T1:n" (uniform in arctan t, so
/// the induced free-expansion angles are evenly spaced) or a comma list.
RVector parse_schedule(const std::string& spec, const Units& u) {
  RVector t;
  const auto parts = split(spec, ':');
  if (parts[0] == "tan" && (parts.size() == 3 || parts.size() == 4)) {
    const double a = parts.size() == 4 ? u.time(parse_double(parts[1], "schedule start")) : 0.0;
    const double b = u.time(parse_double(parts[parts.size() - 2], "schedule end"));
    const std::size_t count = parse_count(parts.back());
    const double lo = std::atan(a), hi = std::atan(b);
    t.push_back(a);
    for (std::size_t k = 1; k + 1 < count; ++k)
      t.push_back(std::tan(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1)));
    if (count > 1) t.push_back(b);
  } else if (parts.size() == 3) {
    const std::size_t count = parse_count(parts[2]);
    const double a = u.time(parse_double(parts[0], "schedule start"));
    const double b = u.time(parse_double(parts[1], "schedule end"));
    for (std::size_t k = 0; k < count; ++k)
      t.push_back(count == 1 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1));
  } else if (parts.size() == 1) {
    for (const auto& s : split(spec, ',')) t.push_back(u.time(parse_double(s, "time")));
  } else {
    throw InvalidArgument("schedule must be t0:t1:n, tan:T:n, tan:T0:T1:n or a comma list");
  }
  if (t.empty()) throw InvalidArgument("empty time schedule");
  for (std::size_t k = 1; k < t.size(); ++k)
    if (!(t[k] > t[k - 1])) throw InvalidArgument("schedule times must be strictly increasing");
  return t;
}

void check_input(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read '" + path + "'");
}

void check_output(const std::string& path) {
  if (path.empty()) return;
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) throw IoError("output directory '" + parent.string() + "' does not exist");
}

void print_state_summary(const DensityMatrix& rho) {
  const auto d = rho.diagnose();
  std::cout << "trace " << fmt(d.trace) << (d.trace_ok ? " ok" : " FAIL") << '\n'
            << "hermiticity " << fmt_short(d.hermiticity) << (d.hermitian_ok ? " ok" : " FAIL") << '\n'
            << "min_eigenvalue " << fmt_short(d.min_eigenvalue) << (d.psd_ok ? " ok" : " FAIL") << '\n';
  if (d.psd_ok) {
    const auto orbs = diagonalize(rho);
    std::cout << "occupations";
    for (std::size_t j = 0; j < std::min<std::size_t>(orbs.rank(), 8); ++j) std::cout << ' ' << fmt(std::round(orbs.occupations[j] * 1e10) / 1e10);
    if (orbs.rank() > 8) std::cout << " ... (rank " << orbs.rank() << ")";
    std::cout << '\n';
  }
}

// ---------------------------------------------------------------- state

struct StateArgs {
  std::string kind = "ho";
  std::string grid = "256x25.6";
  std::size_t level = 0;
  double z0 = 0.0, p0 = 0.0;
  std::size_t particles = 1;
  std::string occ, orbitals;
  std::string in, out;
};

int cmd_state(const StateArgs& a, const Units& u) {
  check_output(a.out);
  std::optional<DensityMatrix> rho;
  if (a.kind == "load") {
    if (a.in.empty()) throw InvalidArgument("--kind load needs --in");
    check_input(a.in);
    rho = io::read_rspdm(a.in);
  } else {
    const Grid grid = parse_grid(a.grid, u);
    if (a.kind == "ho") {
      rho = ho_eigenstate(grid, a.level);
    } else if (a.kind == "coherent") {
      rho = coherent_state(grid, u.length(a.z0), u.momentum(a.p0));
    } else if (a.kind == "fermi") {
      rho = ideal_fermi_rspdm(grid, a.particles);
    } else if (a.kind == "mixture") {
      RVector occ;
      std::vector<std::size_t> levels;
      for (const auto& s : split(a.occ, ',')) occ.push_back(parse_double(s, "occupation"));
      for (const auto& s : split(a.orbitals, ',')) {
        const double l = parse_double(s, "orbital level");
        if (l < 0 || l != std::floor(l)) throw InvalidArgument("orbital levels must be non-negative integers");
        levels.push_back(static_cast<std::size_t>(l));
      }
      rho = ho_mixture(grid, occ, levels);
    } else if (a.kind == "sqrt-density") {
      rho = sqrt_density_state(ideal_fermi_rspdm(grid, a.particles));
    } else {
      throw InvalidArgument("unknown state kind '" + a.kind + "'");
    }
  }
  print_state_summary(*rho);
  if (!a.out.empty()) io::write_rspdm(a.out, *rho);
  return 0;
}

// ---------------------------------------------------------------- evolve

struct EvolveArgs {
  std::string state, mode = "free", times, grid, out;
  double g = 1.0, omega = 1.0;
};

EvolutionMode make_mode(const std::string& kind, double g, double omega, const Units& u) {
  EvolutionMode m;
  m.kind = parse_evolution_kind(kind);
  m.g = u.acceleration(g);
  m.omega = u.frequency(omega);
  m.validate();
  return m;
}

int cmd_evolve(const EvolveArgs& a, const Units& u) {
  check_input(a.state);
  check_output(a.out);
  const auto rho = io::read_rspdm(a.state);
  const EvolutionMode mode = make_mode(a.mode, a.g, a.omega, u);
  const RVector times = parse_schedule(a.times, u);
  auto orbs = diagonalize(rho);
  if (!a.grid.empty()) orbs = embed(orbs, parse_grid(a.grid, u));
  const Grid& grid = orbs.grid;
  ProfileSeries series{grid, mode, times, RMatrix(static_cast<Eigen::Index>(times.size()), static_cast<Eigen::Index>(grid.size()))};
  // Times run one by one so an aliasing failure names the first bad time.
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double tk = times[k];
    const auto one = profile_series(orbs, mode, std::span<const double>(&tk, 1));
    series.profiles.row(static_cast<Eigen::Index>(k)) = one.profiles.row(0);
    const RVector p = one.profile(0);
    std::cout << "t " << fmt(tk) << " norm " << fmt(pairwise_sum(p) * grid.dz()) << " aliasing ok\n";
  }
  series.validate();
  if (mode.kind == EvolutionKind::Harmonic) {
    const double period = kTwoPi / mode.omega;
    double dev = -1.0;
    for (std::size_t i = 0; i < times.size(); ++i)
      for (std::size_t j = i + 1; j < times.size(); ++j)
        if (std::abs(times[j] - times[i] - period) < 1e-9 * period) {
          const double d = (series.profiles.row(static_cast<Eigen::Index>(j)) - series.profiles.row(static_cast<Eigen::Index>(i))).cwiseAbs().maxCoeff();
          dev = std::max(dev, d);
        }
    if (dev >= 0.0) std::cout << "periodicity deviation " << fmt_short(dev) << (dev <= 1e-8 ? " ok" : " FAIL") << '\n';
  }
  if (series.simulation_only()) std::cout << "series contains t < 0: simulation-only\n";
  if (!a.out.empty()) io::write_profiles(a.out, series);
  return 0;
}

// ---------------------------------------------------------------- tomogram

struct TomogramArgs {
  std::string state, series, route = "direct", grid, out;
  std::size_t angles = 128;
  double caustic_eps = 0.05;
};

int cmd_tomogram(const TomogramArgs& a, const Units& u) {
  check_output(a.out);
  TomogramSamples tomo{make_grid(8, 1.0), {}, {}};
  if (!a.series.empty()) {
    check_input(a.series);
    const auto series = io::read_profiles(a.series);
    ReconstructionSettings settings;
    settings.caustic_epsilon = a.caustic_eps;
    const Grid x = a.grid.empty() ? series.grid : parse_grid(a.grid, u);
    RVector excluded;
    tomo = tomogram_from_profiles(series, x, settings, &excluded);
    if (!excluded.empty()) std::cout << "skipped " << excluded.size() << " caustic times\n";
  } else {
    if (a.state.empty()) throw InvalidArgument("tomogram needs --state or --series");
    check_input(a.state);
    const auto rho = io::read_rspdm(a.state);
    const RVector ang = uniform_angles(a.angles);
    if (a.route == "direct") tomo = tomogram_direct(rho, ang);
    else if (a.route == "radon") tomo = radon_tomogram(wigner_transform(rho), ang);
    else throw InvalidArgument("unknown route '" + a.route + "'");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < tomo.n_angles(); ++k) worst = std::max(worst, std::abs(tomo.row_integral(k) - 1.0));
  std::cout << "angles " << tomo.n_angles() << " row_integral_max_deviation " << fmt_short(worst) << " min_value "
            << fmt_short(tomo.min_value()) << '\n';
  if (!a.out.empty()) io::write_tomogram(a.out, tomo);
  return 0;
}

// ---------------------------------------------------------------- reconstruct

struct ReconstructArgs {
  std::string series, tomogram, method, grid, reference, out, report, completion = "auto";
  double caustic_eps = 0.05;
  bool strict = false;
};

int cmd_reconstruct(const ReconstructArgs& a, const Units& u) {
  check_output(a.out);
  check_output(a.report);
  ReconstructionSettings settings;
  settings.caustic_epsilon = a.caustic_eps;
  settings.completion = parse_completion(a.completion);
  std::optional<DensityMatrix> reference;
  if (!a.reference.empty()) {
    check_input(a.reference);
    reference = io::read_rspdm(a.reference);
  }
  std::optional<ReconstructionReport> rep;
  if (!a.tomogram.empty()) {
    check_input(a.tomogram);
    const auto tomo = io::read_tomogram(a.tomogram);
    if (!a.method.empty() && a.method != "fbp") throw InvalidArgument("tomogram input supports --method fbp only");
    const Grid target = !a.grid.empty() ? parse_grid(a.grid, u) : reference ? reference->grid() : tomo.x_grid;
    rep = reconstruct_from_tomogram(tomo, target, settings);
  } else {
    if (a.series.empty()) throw InvalidArgument("reconstruct needs --series or --tomogram");
    check_input(a.series);
    const auto series = io::read_profiles(a.series);
    Grid target = series.grid;
    if (!a.grid.empty()) target = parse_grid(a.grid, u);
    else if (reference) target = reference->grid();
    else if (series.grid.size() > 256) target = Grid(256, -128.0 * series.grid.dz(), series.grid.dz());
    if (a.method.empty() || a.method == "kspace") rep = rho_kspace(series, target, settings);
    else if (a.method == "fbp") rep = rho_fbp(series, target, settings);
    else throw InvalidArgument("unknown method '" + a.method + "'");
  }
  if (reference) rep->compare_with(*reference);
  const io::Header h = io::report_header(*rep);
  for (const auto& k : h.keys()) std::cout << k << ' ' << h.str(k) << '\n';
  if (!a.out.empty()) io::write_rspdm(a.out, rep->rho);
  if (!a.report.empty()) io::write_report(a.report, *rep);
  if (a.strict && rep->truncation_warning) {
    std::cerr << "error: truncation warning treated as failure (--strict)\n";
    return static_cast<int>(ErrorKind::Numerical);
  }
  return 0;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string state;
  std::size_t angles = 16;
};

int cmd_verify(const VerifyArgs& a) {
  check_input(a.state);
  const auto rho = io::read_rspdm(a.state);
  bool all = true;
  auto report = [&](const std::string& name, bool ok, double value) {
    std::cout << "check " << name << ' ' << (ok ? "PASS" : "FAIL") << " value=" << fmt_short(value) << '\n';
    all = all && ok;
  };
  const auto d = rho.diagnose();
  report("hermiticity", d.hermitian_ok, d.hermiticity);
  report("trace", d.trace_ok, std::abs(d.trace - 1.0));
  report("positivity", d.psd_ok, d.min_eigenvalue);

  std::optional<NaturalOrbitals> decomposed;
  try {
    decomposed = diagonalize(rho);
  } catch (const Error&) {
    std::cout << "check diagonalize FAIL value=nan\n";
    return static_cast<int>(ErrorKind::Numerical);
  }
  const NaturalOrbitals& orbs = *decomposed;
  const Grid& g = rho.grid();
  RVector ang = uniform_angles(a.angles);
  const auto tomo = tomogram_direct(orbs, ang);

  double norm_dev = 0.0;
  for (std::size_t k = 0; k < tomo.n_angles(); ++k) norm_dev = std::max(norm_dev, std::abs(tomo.row_integral(k) - 1.0));
  report("tomogram_normalization", norm_dev <= kRowNormTol, norm_dev);
  report("tomogram_nonnegativity", tomo.min_value() >= -kNegativityFloor, tomo.min_value());

  const auto m = marginals(tomo);
  const RVector n = orbs.reassemble().density();
  const RVector mom = momentum_distribution(rho, g.positions());
  double dn = 0.0, dp = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    dn = std::max(dn, std::abs(m.density[i] - n[i]));
    dp = std::max(dp, std::abs(m.momentum[i] - mom[i]));
  }
  report("marginal_density", dn <= 1e-8, dn);
  report("marginal_momentum", dp <= 1e-8, dp);

  double hom = 0.0;
  const double dirs[][3] = {{0.3, 0.8, 0.6}, {-0.7, 0.2, 1.1}, {1.2, -0.5, 0.4}};
  for (const auto& q : dirs)
    for (double lam : {-1.0, 0.5, 2.0}) {
      const double base = tomogram_point(orbs, q[0], q[1], q[2]);
      const double scaled = tomogram_point(orbs, lam * q[0], lam * q[1], lam * q[2]);
      hom = std::max(hom, std::abs(scaled - homogeneity_rescale(base, lam)) / std::max(std::abs(scaled), 1e-300));
    }
  report("homogeneity", hom <= 1e-8, hom);

  const auto w = wigner_transform(rho);
  const auto radon = radon_tomogram(w, ang);
  const double dual = (radon.values - tomo.values).cwiseAbs().maxCoeff();
  report("dual_route", dual <= 1e-6, dual);
  report("wigner_normalization", std::abs(w.normalization() - 1.0) <= 1e-8, std::abs(w.normalization() - 1.0));
  return all ? 0 : static_cast<int>(ErrorKind::Numerical);
}

// ---------------------------------------------------------------- plotdata

int cmd_plotdata(const std::string& in, const std::string& out) {
  check_input(in);
  check_output(out);
  const std::string format = io::sniff_format(in);
  std::ofstream file;
  if (!out.empty()) {
    file.open(out, std::ios::trunc);
    if (!file) throw IoError("cannot open '" + out + "' for writing");
  }
  std::ostream& os = out.empty() ? std::cout : file;
  if (format == "PROF-1") {
    const auto s = io::read_profiles(in);
    os << "t,z,n\n";
    for (std::size_t k = 0; k < s.n_times(); ++k)
      for (std::size_t i = 0; i < s.grid.size(); ++i)
        os << fmt(s.times[k]) << ',' << fmt(s.grid.z(i)) << ','
           << fmt(s.profiles(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i))) << '\n';
  } else if (format == "TOMO-1") {
    const auto t = io::read_tomogram(in);
    os << "theta,X,W\n";
    for (std::size_t k = 0; k < t.n_angles(); ++k)
      for (std::size_t i = 0; i < t.x_grid.size(); ++i)
        os << fmt(t.angles[k]) << ',' << fmt(t.x_grid.z(i)) << ','
           << fmt(t.values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i))) << '\n';
  } else if (format == "RSPDM-1") {
    const auto r = io::read_rspdm(in);
    os << "z,zprime,re,im\n";
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < r.size(); ++j)
        os << fmt(r.grid().z(i)) << ',' << fmt(r.grid().z(j)) << ',' << fmt(r(i, j).real()) << ',' << fmt(r(i, j).imag()) << '\n';
  } else {
    const auto h = io::read_report(in);
    os << "key,value\n";
    for (const auto& k : h.keys()) os << k << ',' << h.str(k) << '\n';
  }
  if (!out.empty()) {
    file.flush();
    if (!file) throw IoError("write to '" + out + "' failed");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symplectic tomography of one-body density matrices from post-quench dynamics"};
  app.require_subcommand(1);
  unsigned threads = 0;
  std::string units = "internal";
  Units u;
  app.add_option("--threads", threads, "Worker thread cap (0 = all cores); results do not depend on it");
  app.add_option("--units", units, "Numeric flags in 'internal' (hbar=m=omega=1) or 'physical' units")
      ->check(CLI::IsMember({"internal", "physical"}));
  app.add_option("--hbar", u.system.hbar, "Physical hbar (with --units physical)");
  app.add_option("--mass", u.system.mass, "Physical particle mass (with --units physical)");
  app.add_option("--unit-omega", u.system.omega, "Physical trap frequency defining the unit system");

  StateArgs sa;
  auto* st = app.add_subcommand("state", "Synthesize or load a density matrix and print its invariants");
  st->add_option("--kind", sa.kind, "ho | coherent | fermi | mixture | sqrt-density | load");
  st->add_option("--grid", sa.grid, "Grid as NxL (points x extent)");
  st->add_option("--level", sa.level, "Oscillator level for --kind ho");
  st->add_option("--z0", sa.z0, "Displacement for --kind coherent");
  st->add_option("--p0", sa.p0, "Momentum kick for --kind coherent");
  st->add_option("--n", sa.particles, "Particle number for --kind fermi / sqrt-density");
  st->add_option("--occ", sa.occ, "Comma-separated occupations for --kind mixture");
  st->add_option("--orbitals", sa.orbitals, "Comma-separated oscillator levels for --kind mixture");
  st->add_option("--in", sa.in, "RSPDM-1 input for --kind load");
  st->add_option("--out", sa.out, "RSPDM-1 output");

  EvolveArgs ea;
  auto* ev = app.add_subcommand("evolve", "Evolve a state and write its density profiles");
  ev->add_option("--state", ea.state, "RSPDM-1 input")->required();
  ev->add_option("--mode", ea.mode, "free | gravity | harmonic");
  ev->add_option("--g", ea.g, "Gravitational acceleration");
  ev->add_option("--omega", ea.omega, "Trap frequency");
  ev->add_option("--times", ea.times, "t0:t1:n, tan:T:n, tan:T0:T1:n or t1,t2,...")->required();
  ev->add_option("--grid", ea.grid, "Profile grid NxL (commensurate with the state grid)");
  ev->add_option("--out", ea.out, "PROF-1 output");

  TomogramArgs ta;
  auto* tg = app.add_subcommand("tomogram", "Compute a tomogram from a state or a profile series");
  tg->add_option("--state", ta.state, "RSPDM-1 input");
  tg->add_option("--series", ta.series, "PROF-1 input");
  tg->add_option("--angles", ta.angles, "Number of uniform angles (state input)");
  tg->add_option("--route", ta.route, "direct | radon (state input)");
  tg->add_option("--grid", ta.grid, "Quadrature lattice NxL (series input)");
  tg->add_option("--caustic-eps", ta.caustic_eps, "Harmonic caustic exclusion threshold");
  tg->add_option("--out", ta.out, "TOMO-1 output");

  ReconstructArgs ra;
  auto* rc = app.add_subcommand("reconstruct", "Reconstruct the density matrix from profiles or a tomogram");
  rc->add_option("--series", ra.series, "PROF-1 input");
  rc->add_option("--tomogram", ra.tomogram, "TOMO-1 input");
  rc->add_option("--method", ra.method, "kspace | fbp (default kspace for series, fbp for tomograms)");
  rc->add_option("--grid", ra.grid, "Target grid NxL");
  rc->add_option("--reference", ra.reference, "RSPDM-1 reference for residuals");
  rc->add_option("--completion", ra.completion, "auto | time-reversal | none");
  rc->add_option("--caustic-eps", ra.caustic_eps, "Harmonic caustic exclusion threshold");
  rc->add_flag("--strict", ra.strict, "Treat a truncation warning as a failure");
  rc->add_option("--out", ra.out, "RSPDM-1 output");
  rc->add_option("--report", ra.report, "RECON-1 output");

  VerifyArgs va;
  auto* vf = app.add_subcommand("verify", "Run the property checks on a state");
  vf->add_option("--state", va.state, "RSPDM-1 input")->required();
  vf->add_option("--angles", va.angles, "Angles for the tomogram checks");

  std::string plot_in, plot_out;
  auto* pd = app.add_subcommand("plotdata", "Export an artifact as comma-separated columns");
  pd->add_option("--in", plot_in, "PROF-1, TOMO-1, RSPDM-1 or RECON-1 input")->required();
  pd->add_option("--out", plot_out, "Output table (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ErrorKind::InvalidArgument);
  }

  try {
    set_max_threads(threads);
    u.physical = units == "physical";
    if (u.physical) u.system.validate();
    if (*st) return cmd_state(sa, u);
    if (*ev) return cmd_evolve(ea, u);
    if (*tg) return cmd_tomogram(ta, u);
    if (*rc) return cmd_reconstruct(ra, u);
    if (*vf) return cmd_verify(va);
    if (*pd) return cmd_plotdata(plot_in, plot_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::Numerical);
  }
  return 0;
}
