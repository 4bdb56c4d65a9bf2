#pragma once

// Uniform position/momentum lattices, unitary spectral transforms on them,
// and the quadratic-phase machinery behind phase-space rotations.
//
// Conventions (internal units, hbar = m = 1):
//   z_j = z_min + j dz,            j = 0..N-1
//   k_m = (m - N/2) dk,            dk = 2 pi / (N dz)
//   psi~(k) = (2 pi)^{-1/2} \int psi(z) exp(-i k z) dz
// The discrete transforms below reproduce these integrals by the trapezoid
// rule, which is spectrally accurate for band-limited states that decay
// inside the box.

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "symtomo/errors.hpp"

namespace symtomo {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;
using RVector = std::vector<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// exp(i phi) with phi reduced modulo 2 pi first.
inline cplx unit_phase(double phi) {
  const double r = std::remainder(phi, kTwoPi);
  return {std::cos(r), std::sin(r)};
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

class Grid {
 public:
  Grid(std::size_t n_points, double z_min, double dz) : n_(n_points), z_min_(z_min), dz_(dz) {
    if (n_points < 8 || !is_power_of_two(n_points))
      throw InvalidArgument("grid size must be a power of two >= 8, got " + std::to_string(n_points));
    if (!(dz > 0.0) || !std::isfinite(dz))
      throw InvalidArgument("grid spacing must be positive");
    if (!std::isfinite(z_min)) throw InvalidArgument("grid origin must be finite");
  }

  std::size_t size() const { return n_; }
  double z_min() const { return z_min_; }
  double dz() const { return dz_; }
  double z(std::size_t j) const { return z_min_ + static_cast<double>(j) * dz_; }
  double extent() const { return static_cast<double>(n_) * dz_; }

  double dk() const { return kTwoPi / (static_cast<double>(n_) * dz_); }
  double k_min() const { return -kPi / dz_; }
  double k(std::size_t m) const {
    return (static_cast<double>(m) - static_cast<double>(n_ / 2)) * dk();
  }
  double k_max() const { return kPi / dz_; }

  bool is_symmetric() const {
    return std::abs(z_min_ + 0.5 * extent()) <= 1e-12 * extent();
  }

  RVector positions() const {
    RVector out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = z(j);
    return out;
  }
  RVector momenta() const {
    RVector out(n_);
    for (std::size_t m = 0; m < n_; ++m) out[m] = k(m);
    return out;
  }

  /// Same spacing and lattice-aligned origin.
  bool commensurate_with(const Grid& other) const {
    if (std::abs(dz_ - other.dz_) > 1e-12 * dz_) return false;
    const double shift = (z_min_ - other.z_min_) / dz_;
    return std::abs(shift - std::round(shift)) < 1e-9;
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.n_ == b.n_ && a.z_min_ == b.z_min_ && a.dz_ == b.dz_;
  }

 private:
  std::size_t n_;
  double z_min_;
  double dz_;
};

/// Symmetric grid with n_points samples spanning z_extent.
inline Grid make_grid(std::size_t n_points, double z_extent) {
  if (!(z_extent > 0.0) || !std::isfinite(z_extent))
    throw InvalidArgument("grid extent must be positive");
  if (n_points < 8 || !is_power_of_two(n_points))
    throw InvalidArgument("grid size must be a power of two >= 8, got " + std::to_string(n_points));
  const double dz = z_extent / static_cast<double>(n_points);
  return Grid(n_points, -0.5 * z_extent, dz);
}

/// Physical scales. Everything inside the library runs with hbar = m = omega = 1;
/// these helpers convert at the boundary.
struct UnitSystem {
  double hbar = 1.0;
  double mass = 1.0;
  double omega = 1.0;
  double g_grav = 1.0;

  void validate() const {
    if (!(hbar > 0) || !(mass > 0) || !(omega > 0))
      throw InvalidArgument("hbar, mass and omega must be strictly positive");
    if (!(g_grav >= 0)) throw InvalidArgument("g_grav must be non-negative");
  }

  double length_unit() const { return std::sqrt(hbar / (mass * omega)); }
  double time_unit() const { return 1.0 / omega; }
  double momentum_unit() const { return hbar / length_unit(); }
  double acceleration_unit() const { return length_unit() * omega * omega; }

  double length_to_internal(double x) const { return x / length_unit(); }
  double length_from_internal(double x) const { return x * length_unit(); }
  double time_to_internal(double t) const { return t / time_unit(); }
  double time_from_internal(double t) const { return t * time_unit(); }
  double acceleration_to_internal(double g) const { return g / acceleration_unit(); }
  double omega_to_internal(double w) const { return w * time_unit(); }
};

namespace detail {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (size, direction) and kept alive.
class FftPlanCache {
 public:
  static FftPlanCache& instance() {
    static FftPlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<fftw_complex> scratch(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), scratch.data(), scratch.data(), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (p == nullptr) throw NumericalError("FFTW failed to create a plan");
    plans_.emplace(key, p);
    return p;
  }

  ~FftPlanCache() {
    for (auto& [key, p] : plans_) fftw_destroy_plan(p);
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

}  // namespace detail

/// In-place unnormalized DFT. sign = -1 forward, +1 backward.
inline void fft_inplace(std::span<cplx> data, int sign) {
  fftw_plan p = detail::FftPlanCache::instance().get(data.size(), sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p, ptr, ptr);
}

/// Unitary transforms between the position lattice and the centered momentum
/// lattice of one grid. Holds the twiddle vectors; cheap to copy.
class SpectralTransform {
 public:
  explicit SpectralTransform(const Grid& grid) : grid_(grid), pre_(grid.size()), post_(grid.size()) {
    const std::size_t n = grid.size();
    for (std::size_t j = 0; j < n; ++j) {
      pre_[j] = (j % 2 == 0) ? 1.0 : -1.0;
      post_[j] = unit_phase(-grid.k(j) * grid.z_min());
    }
  }

  const Grid& grid() const { return grid_; }

  /// psi(z_j) -> psi~(k_m).
  CVector forward(std::span<const cplx> psi) const {
    check(psi.size());
    CVector out(psi.begin(), psi.end());
    forward_inplace(out);
    return out;
  }

  void forward_inplace(std::span<cplx> data) const {
    check(data.size());
    const std::size_t n = data.size();
    for (std::size_t j = 0; j < n; ++j) data[j] *= pre_[j];
    fft_inplace(data, -1);
    const double scale = grid_.dz() / std::sqrt(kTwoPi);
    for (std::size_t m = 0; m < n; ++m) data[m] *= post_[m] * scale;
  }

  /// psi~(k_m) -> psi(z_j).
  CVector inverse(std::span<const cplx> phi) const {
    check(phi.size());
    CVector out(phi.begin(), phi.end());
    inverse_inplace(out);
    return out;
  }

  void inverse_inplace(std::span<cplx> data) const {
    check(data.size());
    const std::size_t n = data.size();
    for (std::size_t m = 0; m < n; ++m) data[m] *= std::conj(post_[m]);
    fft_inplace(data, +1);
    const double scale = grid_.dk() / std::sqrt(kTwoPi);
    for (std::size_t j = 0; j < n; ++j) data[j] *= pre_[j] * scale;
  }

 private:
  void check(std::size_t n) const {
    if (n != grid_.size()) throw InvalidArgument("array length does not match grid");
  }

  Grid grid_;
  RVector pre_;
  CVector post_;
};

/// sum_j |psi_j|^2 dz, accumulated pairwise so the order is fixed.
inline double norm_squared(std::span<const cplx> psi, double dz) {
  if (psi.empty()) return 0.0;
  if (psi.size() <= 16) {
    double s = 0.0;
    for (const auto& v : psi) s += std::norm(v);
    return s * dz;
  }
  const std::size_t h = psi.size() / 2;
  return norm_squared(psi.first(h), dz) + norm_squared(psi.subspan(h), dz);
}

inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

/// Multiplies psi(z) by exp(-i c z^2 / 2).
inline void apply_position_chirp(const Grid& grid, std::span<cplx> psi, double c) {
  if (c == 0.0) return;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double z = grid.z(j);
    psi[j] *= unit_phase(-0.5 * c * z * z);
  }
}

/// Multiplies psi~(k) by exp(-i c k^2 / 2).
inline void apply_momentum_chirp(const Grid& grid, std::span<cplx> phi, double c) {
  if (c == 0.0) return;
  for (std::size_t m = 0; m < phi.size(); ++m) {
    const double k = grid.k(m);
    phi[m] *= unit_phase(-0.5 * c * k * k);
  }
}

/// Free propagation exp(-i p^2 t / 2) applied spectrally.
inline void free_propagate_inplace(const SpectralTransform& ft, std::span<cplx> psi, double t) {
  if (t == 0.0) return;
  ft.forward_inplace(psi);
  apply_momentum_chirp(ft.grid(), psi, t);
  ft.inverse_inplace(psi);
}

/// Exact propagation under H = (p^2 + omega^2 z^2) / 2 for time t, up to a
/// global phase. Each step of phase angle <= pi/4 is factorized as
///   exp(-i a z^2/2) exp(-i b p^2/2) exp(-i a z^2/2),
///   a = omega tan(omega dt / 2),  b = sin(omega dt) / omega,
/// which is the metaplectic image of the classical rotation. Position chirps
/// are pointwise and the momentum chirp is diagonal in the spectral basis, so
/// the map is exact for states that stay resolved inside the box.
inline void harmonic_propagate_inplace(const SpectralTransform& ft, std::span<cplx> psi, double omega,
                                       double t) {
  const double angle = omega * t;
  if (angle == 0.0) return;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(angle) / (kPi / 4.0) - 1e-12)));
  const double dt = t / steps;
  const double a = omega * std::tan(0.5 * omega * dt);
  const double b = std::sin(omega * dt) / omega;
  const Grid& grid = ft.grid();
  apply_position_chirp(grid, psi, a);
  for (int s = 0; s < steps; ++s) {
    ft.forward_inplace(psi);
    apply_momentum_chirp(grid, psi, b);
    ft.inverse_inplace(psi);
    apply_position_chirp(grid, psi, s + 1 < steps ? 2.0 * a : a);
  }
}

/// Phase-space rotation by theta: the unit-frequency oscillator propagator.
inline CVector rotate_phase_space(const SpectralTransform& ft, std::span<const cplx> psi, double theta) {
  CVector out(psi.begin(), psi.end());
  harmonic_propagate_inplace(ft, out, 1.0, theta);
  return out;
}

/// Quadrature amplitudes F_{mu,nu}[psi](X) on the lattice X_i = lambda z_i,
/// lambda = sqrt(mu^2 + nu^2), with
///   F(X) = (2 pi |nu|)^{-1/2} \int psi(z) exp[i mu z^2/(2 nu) - i X z / nu] dz
/// up to an X-independent phase. |F|^2 is the pure-state tomogram.
struct QuadratureAmplitude {
  double lambda = 1.0;
  double x_min = 0.0;  ///< first quadrature point, lambda * z_min
  double dx = 0.0;     ///< quadrature spacing, lambda * dz
  CVector values;

  double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx; }
};

/// Below this relative |nu| the kernel uses the analytic position-scaling form.
inline constexpr double kFallbackNuRatio = 1e-8;

inline QuadratureAmplitude fractional_kernel(const SpectralTransform& ft, std::span<const cplx> psi,
                                             double mu, double nu) {
  const Grid& grid = ft.grid();
  if (psi.size() != grid.size()) throw InvalidArgument("orbital length does not match grid");
  if (mu == 0.0 && nu == 0.0) throw DegenerateDirection("quadrature direction (0, 0) is degenerate");
  const double lambda = std::hypot(mu, nu);
  QuadratureAmplitude out;
  out.lambda = lambda;
  out.x_min = lambda * grid.z_min();
  out.dx = lambda * grid.dz();
  const double inv_sqrt_lambda = 1.0 / std::sqrt(lambda);

  if (std::abs(nu) < kFallbackNuRatio * (std::abs(mu) + std::abs(nu))) {
    // F(X) = psi(X / mu) / sqrt|mu|; X / mu = sign(mu) z_i on this lattice.
    out.values.resize(grid.size());
    if (mu > 0.0) {
      for (std::size_t i = 0; i < grid.size(); ++i) out.values[i] = psi[i] * inv_sqrt_lambda;
      return out;
    }
    if (grid.is_symmetric()) {
      const std::size_t n = grid.size();
      for (std::size_t i = 0; i < n; ++i) out.values[i] = psi[(n - i) % n] * inv_sqrt_lambda;
      return out;
    }
    // Reflection is not a lattice map here; a rotation by pi is.
    out.values = rotate_phase_space(ft, psi, kPi);
    for (auto& v : out.values) v *= inv_sqrt_lambda;
    return out;
  }

  const double theta = std::atan2(nu, mu);
  out.values = rotate_phase_space(ft, psi, theta);
  // Remove the outgoing chirp of the oscillator kernel so the X dependence
  // matches F exactly.
  const double cot = std::cos(theta) / std::sin(theta);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.z(i);
    out.values[i] *= unit_phase(-0.5 * cot * x * x) * inv_sqrt_lambda;
  }
  return out;
}

}  // namespace symtomo
