#pragma once

// Non-interacting evolution of natural orbitals under the free, gravity and
// harmonic Hamiltonians, and the density-profile series they generate.

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <string>
#include <string_view>

#include "symtomo/errors.hpp"
#include "symtomo/interpolation.hpp"
#include "symtomo/lattice.hpp"
#include "symtomo/parallel.hpp"
#include "symtomo/states.hpp"

namespace symtomo {

enum class EvolutionKind { Free, Gravity, Harmonic };

inline std::string_view to_string(EvolutionKind k) {
  switch (k) {
    case EvolutionKind::Free: return "free";
    case EvolutionKind::Gravity: return "gravity";
    case EvolutionKind::Harmonic: return "harmonic";
  }
  return "free";
}

inline EvolutionKind parse_evolution_kind(std::string_view s) {
  if (s == "free") return EvolutionKind::Free;
  if (s == "gravity") return EvolutionKind::Gravity;
  if (s == "harmonic") return EvolutionKind::Harmonic;
  throw InvalidArgument("unknown evolution mode '" + std::string(s) + "'");
}

struct EvolutionMode {
  EvolutionKind kind = EvolutionKind::Free;
  double g = 0.0;      ///< acceleration along -z (gravity)
  double omega = 1.0;  ///< trap frequency (harmonic)

  static EvolutionMode free() { return {}; }
  static EvolutionMode gravity(double g) { return {EvolutionKind::Gravity, g, 1.0}; }
  static EvolutionMode harmonic(double omega) { return {EvolutionKind::Harmonic, 0.0, omega}; }

  void validate() const {
    if (kind == EvolutionKind::Gravity && !(g >= 0.0 && std::isfinite(g)))
      throw InvalidArgument("gravity requires finite g >= 0");
    if (kind == EvolutionKind::Harmonic && !(omega > 0.0 && std::isfinite(omega)))
      throw InvalidArgument("harmonic evolution requires omega > 0");
  }

  /// Classical displacement of the density, n(z, t) = n_free(z + shift, t).
  double displacement(double t) const { return kind == EvolutionKind::Gravity ? 0.5 * g * t * t : 0.0; }
};

inline constexpr double kAliasingNormTol = 1e-6;
inline constexpr double kAliasingBandFraction = 0.05;

/// Throws AliasingError if more than the tolerated norm sits in the outer
/// band of the box.
inline void check_boundary_leakage(const Grid& grid, std::span<const cplx> psi, double t) {
  const std::size_t n = grid.size();
  const auto band = static_cast<std::size_t>(std::ceil(kAliasingBandFraction * static_cast<double>(n)));
  const double edge = norm_squared(psi.first(band), grid.dz()) + norm_squared(psi.last(band), grid.dz());
  if (edge > kAliasingNormTol) {
    std::ostringstream msg;
    msg << "norm " << edge << " reached the outer 5% of the box at t=" << t
        << "; enlarge the grid or shorten the schedule";
    throw AliasingError(msg.str());
  }
}

/// phi(z, t) for the given mode, computed in one step from phi(z, 0).
inline CVector evolve_orbital(const SpectralTransform& ft, std::span<const cplx> phi, const EvolutionMode& mode,
                              double t) {
  mode.validate();
  const Grid& grid = ft.grid();
  if (phi.size() != grid.size()) throw InvalidArgument("orbital length does not match grid");
  if (!std::isfinite(t)) throw InvalidArgument("evolution time must be finite");
  CVector out(phi.begin(), phi.end());
  if (t == 0.0) return out;
  switch (mode.kind) {
    case EvolutionKind::Free:
      free_propagate_inplace(ft, out, t);
      break;
    case EvolutionKind::Harmonic:
      harmonic_propagate_inplace(ft, out, mode.omega, t);
      break;
    case EvolutionKind::Gravity: {
      const double shift = mode.displacement(t);
      if (std::abs(shift) >= 0.5 * grid.extent()) {
        std::ostringstream msg;
        msg << "fall distance " << shift << " at t=" << t << " exceeds half the box";
        throw AliasingError(msg.str());
      }
      // Free spreading and the rigid fall combined in one spectral phase,
      // then the momentum kick exp(-i g t z - i g^2 t^3 / 6).
      ft.forward_inplace(out);
      for (std::size_t m = 0; m < out.size(); ++m) {
        const double k = grid.k(m);
        out[m] *= unit_phase(-0.5 * k * k * t + k * shift);
      }
      ft.inverse_inplace(out);
      const double c = mode.g * mode.g * t * t * t / 6.0;
      for (std::size_t j = 0; j < out.size(); ++j) out[j] *= unit_phase(-mode.g * t * grid.z(j) - c);
      break;
    }
  }
  check_boundary_leakage(grid, out, t);
  return out;
}

inline CVector evolve_orbital(const Grid& grid, std::span<const cplx> phi, const EvolutionMode& mode, double t) {
  return evolve_orbital(SpectralTransform(grid), phi, mode, t);
}

inline constexpr double kProfileNormTol = 1e-8;

struct ProfileSeries {
  Grid grid;
  EvolutionMode mode;
  RVector times;
  RMatrix profiles;  ///< profiles(k, i) = n(z_i, t_k)

  std::size_t n_times() const { return times.size(); }
  RVector profile(std::size_t k) const {
    const auto r = profiles.row(static_cast<Eigen::Index>(k));
    return RVector(r.begin(), r.end());
  }
  bool simulation_only() const {
    return std::any_of(times.begin(), times.end(), [](double t) { return t < 0.0; });
  }

  void validate() const {
    if (profiles.rows() != static_cast<Eigen::Index>(times.size()) ||
        profiles.cols() != static_cast<Eigen::Index>(grid.size()))
      throw InvalidArgument("profile matrix shape does not match times and grid");
    for (std::size_t k = 1; k < times.size(); ++k)
      if (!(times[k] > times[k - 1])) throw InvalidArgument("profile times must be strictly increasing");
    for (std::size_t k = 0; k < times.size(); ++k) {
      const RVector p = profile(k);
      const double s = pairwise_sum(p) * grid.dz();
      if (std::abs(s - 1.0) > kProfileNormTol) {
        std::ostringstream msg;
        msg << "profile at t=" << times[k] << " integrates to " << s;
        throw NumericalError(msg.str());
      }
      if (*std::min_element(p.begin(), p.end()) < -1e-12)
        throw NumericalError("profile has negative values");
    }
  }
};

inline ProfileSeries profile_series(const NaturalOrbitals& orbs, const EvolutionMode& mode,
                                    std::span<const double> times) {
  mode.validate();
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw InvalidArgument("profile times must be strictly increasing");
  const Grid& grid = orbs.grid;
  const SpectralTransform ft(grid);
  ProfileSeries out{grid, mode, RVector(times.begin(), times.end()),
                    RMatrix::Zero(static_cast<Eigen::Index>(times.size()), static_cast<Eigen::Index>(grid.size()))};
  parallel_for(times.size(), [&](std::size_t k) {
    for (std::size_t j = 0; j < orbs.rank(); ++j) {
      const CVector phi = evolve_orbital(ft, orbs.orbital(j), mode, times[k]);
      for (std::size_t i = 0; i < grid.size(); ++i)
        out.profiles(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) += orbs.occupations[j] * std::norm(phi[i]);
    }
  });
  return out;
}

/// Far-field estimate of the momentum distribution, rho(p) ~ t n(p t, t),
/// sampled on p_i = z_i / t. Error is O(1/t^2) for smooth states.
struct MomentumEstimate {
  double p_min = 0.0;
  double dp = 0.0;
  RVector values;
  double p(std::size_t i) const { return p_min + static_cast<double>(i) * dp; }
};

inline constexpr double kAsymptoticMinTime = 10.0;

inline MomentumEstimate asymptotic_momentum_profile(const ProfileSeries& series, double t_large) {
  if (series.mode.kind != EvolutionKind::Free) throw InvalidArgument("far-field estimate needs a free-expansion series");
  if (!(t_large >= kAsymptoticMinTime)) throw InvalidArgument("far-field estimate needs t >= 10");
  std::size_t k = series.n_times();
  for (std::size_t i = 0; i < series.n_times(); ++i)
    if (std::abs(series.times[i] - t_large) <= 1e-9 * std::max(1.0, t_large)) k = i;
  if (k == series.n_times()) throw InvalidArgument("series has no profile at the requested time");
  MomentumEstimate out{series.grid.z_min() / t_large, series.grid.dz() / t_large, series.profile(k)};
  for (auto& v : out.values) v *= t_large;
  return out;
}

}  // namespace symtomo
