#pragma once

// Inversion of tomograms and profile series back to the density matrix.
//
// Every route goes through the characteristic function
//   C(mu, nu) = \int W(X, mu, nu) e^{iX} dX = Tr[rho exp(i(mu z + nu p))],
// whose slices give the density matrix in either representation:
//   rho(c + d/2, c - d/2) = (1/2pi) \int dmu exp(-i mu c) C(mu, d),
//   rho(K + q/2, K - q/2) = (1/2pi) \int dnu exp(-i nu K) C(-q, nu).
// C on a Cartesian lattice is obtained from angular samples: along the ray at
// angle theta, C(r cos theta, r sin theta) = Phi_theta(r), the Fourier
// transform of one tomogram row, evaluated exactly by a non-uniform sum. Between
// rays, Phi is interpolated in theta with local Lagrange polynomials.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "symtomo/dynamics.hpp"
#include "symtomo/errors.hpp"
#include "symtomo/interpolation.hpp"
#include "symtomo/lattice.hpp"
#include "symtomo/parallel.hpp"
#include "symtomo/states.hpp"
#include "symtomo/tomography.hpp"

namespace symtomo {

/// How rays at pi - theta are supplied when only one side was measured.
enum class Completion { Auto, TimeReversal, None };

inline std::string_view to_string(Completion c) {
  switch (c) {
    case Completion::Auto: return "auto";
    case Completion::TimeReversal: return "time-reversal";
    case Completion::None: return "none";
  }
  return "auto";
}

inline Completion parse_completion(std::string_view s) {
  if (s == "auto") return Completion::Auto;
  if (s == "time-reversal") return Completion::TimeReversal;
  if (s == "none") return Completion::None;
  throw InvalidArgument("unknown completion '" + std::string(s) + "'");
}

struct ReconstructionSettings {
  std::size_t interpolation_half_width = 4;  ///< Lagrange nodes on each side of a query angle
  double caustic_epsilon = 0.05;             ///< harmonic times with |cos wt| below this are dropped
  Completion completion = Completion::Auto;
  std::size_t min_angles = 32;
  double max_angular_gap = 0.25;  ///< radians
  double max_caustic_fraction = 0.2;
  double tail_threshold = 1e-6;
  double merge_tolerance = 1e-7;  ///< angles closer than this are one ray

  void validate() const {
    if (interpolation_half_width < 1) throw InvalidArgument("interpolation half width must be positive");
    if (!(caustic_epsilon >= 0.0 && caustic_epsilon < 1.0)) throw InvalidArgument("caustic epsilon must be in [0, 1)");
    if (!(max_angular_gap > 0.0)) throw InvalidArgument("maximum angular gap must be positive");
  }
};

/// One measured ray: W_theta(Y) = scale * f(sign * scale * Y - shift) with f
/// sampled on x0 + i dx. Its transform is
///   Phi_theta(r) = dx sum_i f_i exp(i sign r (x_i + shift) / scale).
struct AngularSample {
  double theta = 0.0;  ///< in [0, pi)
  double scale = 1.0;
  double shift = 0.0;
  int sign = 1;
  double x0 = 0.0;
  double dx = 1.0;
  RVector values;
  std::size_t lo = 0, hi = 0;  ///< nonzero support [lo, hi)

  /// Largest |r| resolved by the sample lattice.
  double band_limit() const { return kPi * scale / dx; }

  void crop(double rel = 1e-17) {
    double vmax = 0.0;
    for (double v : values) vmax = std::max(vmax, std::abs(v));
    lo = 0;
    hi = values.size();
    while (lo < hi && std::abs(values[lo]) <= rel * vmax) ++lo;
    while (hi > lo && std::abs(values[hi - 1]) <= rel * vmax) --hi;
  }

  cplx transform(double r) const {
    const double a = static_cast<double>(sign) * r / scale;
    const double wr = std::cos(a * dx), wi = std::sin(a * dx);
    // Horner in w = exp(i a dx), written out to avoid library complex multiply.
    double sr = 0.0, si = 0.0;
    for (std::size_t i = hi; i-- > lo;) {
      const double tr = sr * wr - si * wi + values[i];
      si = sr * wi + si * wr;
      sr = tr;
    }
    const cplx lead = unit_phase(a * (x0 + static_cast<double>(lo) * dx + shift));
    return dx * lead * cplx(sr, si);
  }
};

/// Maps a raw direction angle to [0, pi), flipping the sample sign when the
/// ray is reflected through the origin.
inline void fold_angle(double raw, double& theta, int& sign) {
  theta = raw;
  sign = 1;
  while (theta < 0.0) {
    theta += kPi;
    sign = -sign;
  }
  while (theta >= kPi) {
    theta -= kPi;
    sign = -sign;
  }
}

struct CoverageSummary {
  std::size_t n_angles = 0;
  double max_gap = 0.0;
  double gap_start = 0.0;
  bool mirrored = false;
};

/// C(mu, nu) assembled from angular samples.
class CharacteristicFunction {
 public:
  CharacteristicFunction(std::vector<AngularSample> samples, const ReconstructionSettings& settings)
      : half_width_(settings.interpolation_half_width) {
    settings.validate();
    if (samples.empty()) throw CoverageError("no angular samples to invert");
    for (auto& s : samples) {
      if (s.hi == 0 && s.lo == 0) s.crop();
    }
    build_nodes(samples, settings.merge_tolerance);
    const double raw_gap = max_gap().first;
    bool mirror = settings.completion == Completion::TimeReversal;
    if (settings.completion == Completion::Auto) mirror = raw_gap > settings.max_angular_gap;
    if (mirror) {
      std::vector<AngularSample> all = samples;
      for (const auto& s : samples) {
        if (s.theta < settings.merge_tolerance || std::abs(s.theta - 0.5 * kPi) < settings.merge_tolerance) continue;
        // Real states: W_{pi - theta}(Y) = W_theta(-Y).
        AngularSample m = s;
        m.theta = kPi - s.theta;
        m.sign = -s.sign;
        all.push_back(std::move(m));
      }
      build_nodes(all, settings.merge_tolerance);
    }
    coverage_.mirrored = mirror;
    coverage_.n_angles = nodes_.size();
    std::tie(coverage_.max_gap, coverage_.gap_start) = max_gap();
    if (nodes_.size() < settings.min_angles || nodes_.size() < 2 * half_width_) {
      std::ostringstream msg;
      msg << "only " << nodes_.size() << " distinct angles; need at least " << settings.min_angles;
      throw CoverageError(msg.str());
    }
    if (coverage_.max_gap > settings.max_angular_gap) {
      std::ostringstream msg;
      msg << "angular coverage has a gap of " << coverage_.max_gap << " rad; missing arc from "
          << coverage_.gap_start * 180.0 / kPi << " to " << (coverage_.gap_start + coverage_.max_gap) * 180.0 / kPi
          << " degrees";
      throw CoverageError(msg.str());
    }
    band_limit_ = samples.front().band_limit();
    for (const auto& n : nodes_)
      for (const auto& s : n.members) band_limit_ = std::min(band_limit_, s.band_limit());
  }

  const CoverageSummary& coverage() const { return coverage_; }
  double band_limit() const { return band_limit_; }
  std::size_t n_nodes() const { return nodes_.size(); }
  double node_angle(std::size_t k) const { return nodes_[k].theta; }

  /// Phi at node k along +r.
  cplx node_transform(std::size_t k, double r) const {
    const auto& members = nodes_[k].members;
    cplx acc{};
    for (const auto& s : members) acc += s.transform(r);
    return acc / static_cast<double>(members.size());
  }

  cplx operator()(double mu, double nu) const {
    const double r0 = std::hypot(mu, nu);
    if (r0 > band_limit_) return {};
    double theta = std::atan2(nu, mu);
    double r = r0;
    if (theta < 0.0) {
      theta += kPi;
      r = -r;
    }
    if (theta >= kPi) {
      theta -= kPi;
      r = -r;
    }
    const long m = static_cast<long>(nodes_.size());
    const long below = static_cast<long>(std::upper_bound(angles_.begin(), angles_.end(), theta) - angles_.begin()) - 1;
    const long hw = static_cast<long>(half_width_);
    double xs[64];
    cplx fs[64];
    long count = 0;
    for (long e = below - hw + 1; e <= below + hw; ++e) {
      const long wraps = floor_div(e, m);
      const long k = e - wraps * m;
      xs[count] = angles_[static_cast<std::size_t>(k)] + static_cast<double>(wraps) * kPi;
      // Phi_{theta + pi}(r) = Phi_theta(-r).
      fs[count] = node_transform(static_cast<std::size_t>(k), (wraps % 2 == 0) ? r : -r);
      if (std::abs(xs[count] - theta) < 1e-15) return fs[count];
      ++count;
    }
    const auto w = lagrange_weights(std::span<const double>(xs, static_cast<std::size_t>(count)), theta);
    cplx acc{};
    for (long i = 0; i < count; ++i) acc += w[static_cast<std::size_t>(i)] * fs[i];
    return acc;
  }

 private:
  struct Node {
    double theta;
    std::vector<AngularSample> members;
  };

  static long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

  void build_nodes(const std::vector<AngularSample>& samples, double tol) {
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return samples[a].theta < samples[b].theta; });
    nodes_.clear();
    for (std::size_t idx : order) {
      const auto& s = samples[idx];
      if (!nodes_.empty() && s.theta - nodes_.back().theta <= tol) nodes_.back().members.push_back(s);
      else nodes_.push_back({s.theta, {s}});
    }
    // A ray just below pi is the same ray as one at 0, reflected.
    if (nodes_.size() > 1 && nodes_.back().theta >= kPi - tol && nodes_.front().theta <= tol) {
      for (auto s : nodes_.back().members) {
        s.theta = 0.0;
        s.sign = -s.sign;
        nodes_.front().members.push_back(std::move(s));
      }
      nodes_.pop_back();
    }
    angles_.resize(nodes_.size());
    for (std::size_t k = 0; k < nodes_.size(); ++k) angles_[k] = nodes_[k].theta;
  }

  std::pair<double, double> max_gap() const {
    double gap = 0.0, start = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      const double next = k + 1 < nodes_.size() ? nodes_[k + 1].theta : nodes_.front().theta + kPi;
      if (next - nodes_[k].theta > gap) {
        gap = next - nodes_[k].theta;
        start = nodes_[k].theta;
      }
    }
    return {gap, start};
  }

  std::size_t half_width_;
  std::vector<Node> nodes_;
  RVector angles_;
  CoverageSummary coverage_;
  double band_limit_ = 0.0;
};

inline std::vector<AngularSample> samples_from_tomogram(const TomogramSamples& tomo) {
  std::vector<AngularSample> out;
  for (std::size_t k = 0; k < tomo.n_angles(); ++k) {
    AngularSample s;
    fold_angle(tomo.angles[k], s.theta, s.sign);
    s.x0 = tomo.x_grid.z_min();
    s.dx = tomo.x_grid.dz();
    s.values = tomo.row(k);
    s.crop();
    out.push_back(std::move(s));
  }
  return out;
}

/// Direction (a, b) with n(z, t) = W(z + shift, a, b) for the series mode.
struct ProfileDirection {
  double a, b, shift;
};

inline ProfileDirection profile_direction(const EvolutionMode& mode, double t) {
  switch (mode.kind) {
    case EvolutionKind::Free: return {1.0, t, 0.0};
    case EvolutionKind::Gravity: return {1.0, t, mode.displacement(t)};
    case EvolutionKind::Harmonic:
      return {std::cos(mode.omega * t), std::sin(mode.omega * t) / mode.omega, 0.0};
  }
  return {1.0, t, 0.0};
}

struct ProfileSampling {
  std::vector<AngularSample> samples;
  RVector used_times;
  RVector excluded_times;  ///< harmonic caustic windows
};

inline ProfileSampling samples_from_profiles(const ProfileSeries& series, const ReconstructionSettings& settings) {
  settings.validate();
  series.mode.validate();
  ProfileSampling out;
  for (std::size_t k = 0; k < series.n_times(); ++k) {
    const double t = series.times[k];
    if (series.mode.kind == EvolutionKind::Harmonic &&
        std::abs(std::cos(series.mode.omega * t)) < settings.caustic_epsilon) {
      out.excluded_times.push_back(t);
      continue;
    }
    const auto dir = profile_direction(series.mode, t);
    AngularSample s;
    s.scale = std::hypot(dir.a, dir.b);
    s.shift = dir.shift;
    fold_angle(std::atan2(dir.b, dir.a), s.theta, s.sign);
    s.x0 = series.grid.z_min();
    s.dx = series.grid.dz();
    s.values = series.profile(k);
    s.crop();
    out.samples.push_back(std::move(s));
    out.used_times.push_back(t);
  }
  if (series.n_times() > 0 &&
      static_cast<double>(out.excluded_times.size()) > settings.max_caustic_fraction * static_cast<double>(series.n_times())) {
    std::ostringstream msg;
    msg << out.excluded_times.size() << " of " << series.n_times()
        << " times fall in caustic windows; coverage below 80%";
    throw CoverageError(msg.str());
  }
  return out;
}

/// W_theta on the given quadrature lattice from the profile series, one row
/// per usable time, sorted by angle; coinciding angles are averaged.
inline TomogramSamples tomogram_from_profiles(const ProfileSeries& series, const Grid& x_grid,
                                              const ReconstructionSettings& settings = {},
                                              RVector* excluded_times = nullptr) {
  auto sampling = samples_from_profiles(series, settings);
  if (excluded_times) *excluded_times = sampling.excluded_times;
  auto& samples = sampling.samples;
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return samples[a].theta < samples[b].theta; });
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t idx : order) {
    if (!groups.empty() && samples[idx].theta - samples[groups.back().front()].theta <= settings.merge_tolerance)
      groups.back().push_back(idx);
    else
      groups.push_back({idx});
  }
  const std::size_t nx = x_grid.size();
  TomogramSamples tomo{x_grid, RVector(groups.size()), RMatrix::Zero(static_cast<Eigen::Index>(groups.size()), static_cast<Eigen::Index>(nx))};
  parallel_for(groups.size(), [&](std::size_t g) {
    tomo.angles[g] = samples[groups[g].front()].theta;
    for (std::size_t idx : groups[g]) {
      const auto& s = samples[idx];
      const BandlimitedInterpolant f(s.x0, s.dx, s.values);
      for (std::size_t i = 0; i < nx; ++i) {
        const double y = static_cast<double>(s.sign) * x_grid.z(i);
        tomo.values(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(i)) +=
            s.scale * f(s.scale * y - s.shift) / static_cast<double>(groups[g].size());
      }
    }
  });
  return tomo;
}

inline TomogramSamples tomogram_from_profiles(const ProfileSeries& series, const ReconstructionSettings& settings = {}) {
  return tomogram_from_profiles(series, series.grid, settings);
}

/// Raw rho in the position representation from C on the Cartesian lattice
/// (mu_j, d_m), mu_j = (j - N) pi / L, d_m = m dz.
inline CMatrix rho_position_slices(const CharacteristicFunction& c, const Grid& target) {
  const std::size_t n = target.size();
  const double dz = target.dz();
  const double dmu = kPi / (static_cast<double>(n) * dz);
  CMatrix rho(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  parallel_for(n, [&](std::size_t m) {
    const double d = static_cast<double>(m) * dz;
    const double c0 = target.z_min() + 0.5 * d;
    CVector g(2 * n);
    for (std::size_t j = 0; j < 2 * n; ++j) {
      const double mu = (static_cast<double>(j) - static_cast<double>(n)) * dmu;
      g[j] = c(mu, d) * unit_phase(-mu * c0);
    }
    fft_inplace(g, -1);
    for (std::size_t b = 0; b + m < n; ++b) {
      const double sign = (b % 2 == 0) ? 1.0 : -1.0;
      const cplx v = sign * g[b] * dmu / kTwoPi;
      // C(mu, -d) = conj C(-mu, d) for a real tomogram, so the mirrored
      // element is the conjugate.
      rho(static_cast<Eigen::Index>(b + m), static_cast<Eigen::Index>(b)) = v;
      rho(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b + m)) = std::conj(v);
    }
  });
  return rho;
}

/// Raw rho in the momentum representation on the target k lattice, from C on
/// (-q_m, nu_j) with q_m = m dk, nu_j = (j - N) dz; returned in position form.
inline CMatrix rho_momentum_slices(const CharacteristicFunction& c, const Grid& target) {
  const std::size_t n = target.size();
  const double dz = target.dz();
  const double dk = target.dk();
  CMatrix rk(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  parallel_for(n, [&](std::size_t m) {
    const double q = static_cast<double>(m) * dk;
    const double k0 = target.k_min() + 0.5 * q;
    CVector g(n, cplx{});
    for (std::size_t j = 0; j < 2 * n; ++j) {
      const double nu = (static_cast<double>(j) - static_cast<double>(n)) * dz;
      g[j % n] += c(-q, nu) * unit_phase(-nu * k0);
    }
    fft_inplace(g, -1);
    for (std::size_t b = 0; b + m < n; ++b) {
      const cplx v = g[b] * dz / kTwoPi;
      rk(static_cast<Eigen::Index>(b + m), static_cast<Eigen::Index>(b)) = v;
      rk(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b + m)) = std::conj(v);
    }
  });
  // rho(z, z') = sum_{a,b} <z|k_a> rho(k_a, k_b) <k_b|z'> dk^2.
  const SpectralTransform ft(target);
  CVector col(n);
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t a = 0; a < n; ++a) col[a] = rk(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    ft.inverse_inplace(col);
    for (std::size_t a = 0; a < n; ++a) rk(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = col[a];
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) col[b] = std::conj(rk(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
    ft.inverse_inplace(col);
    for (std::size_t b = 0; b < n; ++b) rk(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = std::conj(col[b]);
  }
  return rk;
}

struct RepairSummary {
  double hermitian_correction = 0.0;  ///< ||rho - rho_sym|| / ||rho||
  double trace_before = 1.0;
};

/// Hermitian symmetrization followed by trace renormalization.
inline DensityMatrix repair(const Grid& grid, const CMatrix& raw, RepairSummary& summary) {
  if (!raw.allFinite()) throw NumericalError("reconstruction produced non-finite values");
  CMatrix sym = 0.5 * (raw + raw.adjoint());
  const double nrm = raw.norm();
  summary.hermitian_correction = nrm > 0.0 ? (raw - sym).norm() / nrm : 0.0;
  summary.trace_before = sym.diagonal().real().sum() * grid.dz();
  if (!(std::abs(summary.trace_before) > 1e-12)) throw NumericalError("reconstructed trace vanishes");
  sym /= summary.trace_before;
  return DensityMatrix(grid, std::move(sym));
}

struct ReconstructionReport {
  ReconstructionReport(DensityMatrix r, std::string m, std::string s)
      : rho(std::move(r)), method(std::move(m)), source(std::move(s)) {}

  DensityMatrix rho;
  std::string method;  ///< "fbp" or "kspace"
  std::string source;  ///< "tomogram" or the evolution mode
  double t_min = 0.0, t_max = 0.0;
  std::size_t n_profiles = 0;
  std::size_t n_excluded = 0;
  CoverageSummary coverage;
  ReconstructionSettings settings;
  double tail_estimate = 0.0;
  bool truncation_warning = false;
  RepairSummary repair;
  std::optional<double> residual_frobenius;
  std::optional<double> residual_sup;
  std::vector<std::string> warnings;

  void compare_with(const DensityMatrix& reference) {
    if (!(reference.grid() == rho.grid())) throw InvalidArgument("reference grid differs from reconstruction grid");
    residual_frobenius = relative_frobenius(rho, reference);
    residual_sup = (rho.values() - reference.values()).cwiseAbs().maxCoeff();
  }
};

inline ReconstructionReport reconstruct_from_tomogram(const TomogramSamples& tomo, const Grid& target,
                                                      const ReconstructionSettings& settings = {}) {
  const CharacteristicFunction c(samples_from_tomogram(tomo), settings);
  RepairSummary rep;
  DensityMatrix rho = repair(target, rho_position_slices(c, target), rep);
  ReconstructionReport out(std::move(rho), "fbp", "tomogram");
  out.coverage = c.coverage();
  out.settings = settings;
  out.repair = rep;
  return out;
}

/// Density matrix on the tomogram's quadrature lattice.
inline DensityMatrix rho_from_tomogram(const TomogramSamples& tomo, const ReconstructionSettings& settings = {}) {
  return reconstruct_from_tomogram(tomo, tomo.x_grid, settings).rho;
}

namespace detail {

inline void fill_series_fields(ReconstructionReport& out, const ProfileSeries& series, const ProfileSampling& sampling,
                               const CharacteristicFunction& c, const ReconstructionSettings& settings) {
  out.source = std::string(to_string(series.mode.kind));
  out.t_min = series.times.empty() ? 0.0 : series.times.front();
  out.t_max = series.times.empty() ? 0.0 : series.times.back();
  out.n_profiles = sampling.used_times.size();
  out.n_excluded = sampling.excluded_times.size();
  out.coverage = c.coverage();
  out.settings = settings;
  if (out.n_excluded > 0) {
    std::ostringstream msg;
    msg << out.n_excluded << " times skipped in caustic windows |cos wt| < " << settings.caustic_epsilon;
    out.warnings.push_back(msg.str());
  }
  // Riemann-Lebesgue tail: largest profile Fourier amplitude left at the end
  // of the window, over nonzero wavenumbers of the target lattice.
  if (series.mode.kind != EvolutionKind::Harmonic && !sampling.samples.empty()) {
    std::size_t last = 0;
    for (std::size_t i = 0; i < sampling.used_times.size(); ++i)
      if (std::abs(sampling.used_times[i]) > std::abs(sampling.used_times[last])) last = i;
    const auto& s = sampling.samples[last];
    const Grid& g = out.rho.grid();
    double tail = 0.0;
    for (std::size_t m = 1; m <= g.size() / 2; ++m) {
      const double r = static_cast<double>(m) * g.dk() * s.scale;
      if (r > s.band_limit()) break;
      tail = std::max(tail, std::abs(s.transform(r)) / std::sqrt(kTwoPi));
    }
    out.tail_estimate = tail;
    out.truncation_warning = tail > settings.tail_threshold;
    if (out.truncation_warning) {
      std::ostringstream msg;
      msg << "time window truncated: profile spectrum tail " << tail << " exceeds " << settings.tail_threshold
          << "; uncovered angles were interpolated";
      out.warnings.push_back(msg.str());
    }
  }
  if (out.coverage.mirrored) out.warnings.push_back("rays at pi - theta supplied by time-reversal completion");
}

}  // namespace detail

/// Momentum-representation reconstruction straight from the profile series.
inline ReconstructionReport rho_kspace(const ProfileSeries& series, const Grid& target,
                                       const ReconstructionSettings& settings = {}) {
  const auto sampling = samples_from_profiles(series, settings);
  const CharacteristicFunction c(sampling.samples, settings);
  RepairSummary rep;
  DensityMatrix rho = repair(target, rho_momentum_slices(c, target), rep);
  ReconstructionReport out(std::move(rho), "kspace", "");
  out.repair = rep;
  detail::fill_series_fields(out, series, sampling, c, settings);
  return out;
}

/// Profiles -> tomogram on the target lattice -> position-space inversion.
inline ReconstructionReport rho_fbp(const ProfileSeries& series, const Grid& target,
                                    const ReconstructionSettings& settings = {}) {
  const auto sampling = samples_from_profiles(series, settings);
  const TomogramSamples tomo = tomogram_from_profiles(series, target, settings);
  const CharacteristicFunction c(samples_from_tomogram(tomo), settings);
  RepairSummary rep;
  DensityMatrix rho = repair(target, rho_position_slices(c, target), rep);
  ReconstructionReport out(std::move(rho), "fbp", "");
  out.repair = rep;
  detail::fill_series_fields(out, series, sampling, c, settings);
  return out;
}

/// Inverse Weyl transform, rho(z, z') = \int W((z+z')/2, p) e^{ip(z-z')} dp/2pi.
/// W is first refined to the half-step centres by spectral interpolation in z.
inline DensityMatrix rho_from_wigner(const WignerFunction& w) {
  const Grid& g = w.grid;
  const std::size_t n = g.size();
  if (w.values.rows() != static_cast<Eigen::Index>(n) || w.values.cols() != static_cast<Eigen::Index>(n))
    throw InvalidArgument("Wigner array shape does not match its grid");
  // Centres c_s = z_min + s dz / 2, s = 0 .. 2N-1.
  RMatrix fine(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(n));
  parallel_for(n, [&](std::size_t j) {
    CVector col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = w.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    fft_inplace(col, -1);
    CVector up(2 * n, cplx{});
    for (std::size_t m = 0; m < n / 2; ++m) up[m] = col[m];
    for (std::size_t m = n / 2 + 1; m < n; ++m) up[m + n] = col[m];
    up[n / 2] = 0.5 * col[n / 2];
    up[n + n / 2] = 0.5 * col[n / 2];
    fft_inplace(up, +1);
    for (std::size_t s = 0; s < 2 * n; ++s)
      fine(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j)) = up[s].real() / static_cast<double>(n);
  });
  CMatrix rho(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double scale = w.dp / kTwoPi;
  parallel_for(2 * n - 1, [&](std::size_t s) {
    // rho(z_a, z_b) with a + b = s, D = a - b: sum_j W(c_s, p_j) e^{i p_j D dz},
    // p_j D dz = pi (j - N/2) D / N.
    CVector buf(2 * n, cplx{});
    for (std::size_t j = 0; j < n; ++j) buf[j] = fine(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j));
    fft_inplace(buf, +1);
    const std::size_t a_lo = s < n ? 0 : s - n + 1;
    const std::size_t a_hi = std::min(s, n - 1);
    for (std::size_t a = a_lo; a <= a_hi; ++a) {
      const std::size_t b = s - a;
      const long d = static_cast<long>(a) - static_cast<long>(b);
      const std::size_t idx = static_cast<std::size_t>((d + 2 * static_cast<long>(n)) % (2 * static_cast<long>(n)));
      rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          buf[idx] * unit_phase(-0.5 * kPi * static_cast<double>(d)) * scale;
    }
  });
  return DensityMatrix(g, std::move(rho));
}

/// Angular quadrature weights for possibly non-uniform angles in [0, pi):
/// half the distance to each neighbour, wrapping around pi.
inline RVector angular_weights(const RVector& angles) {
  const std::size_t m = angles.size();
  RVector w(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double prev = k > 0 ? angles[k - 1] : angles[m - 1] - kPi;
    const double next = k + 1 < m ? angles[k + 1] : angles[0] + kPi;
    w[k] = 0.5 * (next - prev);
  }
  return w;
}

/// Filtered back-projection onto the same (z, p) lattice as wigner_transform.
/// Rows are ramp-filtered with the band-limited spatial kernel (band pi/dX)
/// and back-projected with linear interpolation between quadrature samples.
inline WignerFunction wigner_from_tomogram(const TomogramSamples& tomo, const Grid& grid,
                                           const ReconstructionSettings& settings = {}) {
  const std::size_t m = tomo.n_angles();
  if (m < settings.min_angles) {
    std::ostringstream msg;
    msg << "filtered back-projection needs at least " << settings.min_angles << " angles, got " << m;
    throw CoverageError(msg.str());
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return tomo.angles[a] < tomo.angles[b]; });
  RVector sorted(m);
  for (std::size_t k = 0; k < m; ++k) sorted[k] = tomo.angles[order[k]];
  for (std::size_t k = 0; k + 1 < m; ++k)
    if (sorted[k + 1] - sorted[k] > settings.max_angular_gap || sorted[0] + kPi - sorted[m - 1] > settings.max_angular_gap)
      throw CoverageError("filtered back-projection needs angles covering [0, pi)");
  const RVector wts = angular_weights(sorted);

  const std::size_t nx = tomo.x_grid.size();
  const double dx = tomo.x_grid.dz();
  // Ramp kernel h(n dX) = \int_{|r| < pi/dX} |r| e^{i r n dX} dr. The row is
  // zero-padded to 8x its length so the filtered tails (which decay only as
  // 1/X^2) are kept for back-projection far from the data window, and the
  // result is refined 4x spectrally before linear interpolation.
  constexpr std::size_t kPad = 8, kRefine = 4;
  const std::size_t nfft = kPad * nx;
  const std::size_t offset = nfft / 2 - nx / 2;
  const std::size_t nfine = kRefine * nfft;
  CVector kernel(nfft, cplx{});
  for (std::size_t i = 0; i < nfft; ++i) {
    const long s = i < nfft / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(nfft);
    if (s == 0) kernel[i] = kPi * kPi / (dx * dx);
    else if (s % 2 != 0) kernel[i] = -4.0 / (static_cast<double>(s * s) * dx * dx);
  }
  fft_inplace(kernel, -1);
  RMatrix filtered(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(nfine));
  parallel_for(m, [&](std::size_t k) {
    CVector buf(nfft, cplx{});
    for (std::size_t i = 0; i < nx; ++i)
      buf[offset + i] = tomo.values(static_cast<Eigen::Index>(order[k]), static_cast<Eigen::Index>(i));
    fft_inplace(buf, -1);
    CVector fine(nfine, cplx{});
    for (std::size_t i = 0; i < nfft / 2; ++i) fine[i] = buf[i] * kernel[i];
    for (std::size_t i = nfft / 2 + 1; i < nfft; ++i) fine[i + nfine - nfft] = buf[i] * kernel[i];
    fine[nfft / 2] = 0.5 * buf[nfft / 2] * kernel[nfft / 2];
    fine[nfine - nfft / 2] = fine[nfft / 2];
    fft_inplace(fine, +1);
    for (std::size_t i = 0; i < nfine; ++i)
      filtered(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = fine[i].real() * dx / static_cast<double>(nfft);
  });
  const double fine_dx = dx / static_cast<double>(kRefine);
  const double fine_x0 = tomo.x_grid.z_min() - static_cast<double>(offset) * dx;

  const std::size_t n = grid.size();
  const long half = static_cast<long>(n / 2);
  WignerFunction out{grid, -static_cast<double>(half) * kPi / (static_cast<double>(n) * grid.dz()),
                     kPi / (static_cast<double>(n) * grid.dz()),
                     RMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};
  RVector cs(m), sn(m);
  for (std::size_t k = 0; k < m; ++k) {
    cs[k] = std::cos(sorted[k]);
    sn[k] = std::sin(sorted[k]);
  }
  parallel_for(n, [&](std::size_t i) {
    const double z = grid.z(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double p = out.p(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const double u = (z * cs[k] + p * sn[k] - fine_x0) / fine_dx;
        const double fl = std::floor(u);
        const long i0 = static_cast<long>(fl);
        if (i0 < 0 || i0 + 1 >= static_cast<long>(nfine)) continue;
        const double frac = u - fl;
        const double v0 = filtered(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i0));
        const double v1 = filtered(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i0 + 1));
        acc += wts[k] * ((1.0 - frac) * v0 + frac * v1);
      }
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc / kTwoPi;
    }
  });
  return out;
}

inline WignerFunction wigner_from_tomogram(const TomogramSamples& tomo, const ReconstructionSettings& settings = {}) {
  return wigner_from_tomogram(tomo, tomo.x_grid, settings);
}

}  // namespace symtomo
