#pragma once

// Forward maps: density matrix -> symplectic tomogram (fractional-Fourier
// route and Radon-of-Wigner route), Wigner function, marginals, and the
// homogeneity rescaling that serves off-circle queries.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "symtomo/errors.hpp"
#include "symtomo/interpolation.hpp"
#include "symtomo/lattice.hpp"
#include "symtomo/parallel.hpp"
#include "symtomo/states.hpp"

namespace symtomo {

inline constexpr double kRowNormTol = 1e-6;
inline constexpr double kNegativityFloor = 1e-9;

/// W(X, cos theta, sin theta) sampled on angles x quadrature lattice.
/// The quadrature lattice coincides with the position lattice of the state.
struct TomogramSamples {
  Grid x_grid;
  RVector angles;  ///< theta_k in [0, pi)
  RMatrix values;  ///< values(k, i) = W(X_i, cos theta_k, sin theta_k)

  std::size_t n_angles() const { return angles.size(); }

  double row_integral(std::size_t k) const {
    const auto row = values.row(static_cast<Eigen::Index>(k));
    RVector v(row.begin(), row.end());
    return pairwise_sum(v) * x_grid.dz();
  }

  double min_value() const { return values.size() ? values.minCoeff() : 0.0; }

  RVector row(std::size_t k) const {
    const auto r = values.row(static_cast<Eigen::Index>(k));
    return RVector(r.begin(), r.end());
  }

  /// Index of the stored angle equal to theta (mod pi) within tol.
  std::optional<std::size_t> find_angle(double theta, double tol = 1e-9) const {
    double t = std::fmod(theta, kPi);
    if (t < 0) t += kPi;
    for (std::size_t k = 0; k < angles.size(); ++k) {
      const double d = std::abs(angles[k] - t);
      if (d <= tol || std::abs(d - kPi) <= tol) return k;
    }
    return std::nullopt;
  }

  bool has_uniform_angles(double tol = 1e-9) const {
    const std::size_t m = angles.size();
    if (m == 0) return false;
    for (std::size_t k = 0; k < m; ++k)
      if (std::abs(angles[k] - kPi * static_cast<double>(k) / static_cast<double>(m)) > tol) return false;
    return true;
  }

  /// Throws NumericalError if a row is not normalized or goes below the floor.
  void validate() const {
    for (std::size_t k = 0; k < n_angles(); ++k) {
      const double s = row_integral(k);
      if (std::abs(s - 1.0) > kRowNormTol) {
        std::ostringstream msg;
        msg << "tomogram row at theta=" << angles[k] << " integrates to " << s;
        throw NumericalError(msg.str());
      }
    }
    if (min_value() < -kNegativityFloor) throw NumericalError("tomogram has negative values below the floor");
  }
};

inline RVector uniform_angles(std::size_t count) {
  RVector a(count);
  for (std::size_t k = 0; k < count; ++k) a[k] = kPi * static_cast<double>(k) / static_cast<double>(count);
  return a;
}

/// W(lambda X, lambda mu, lambda nu) from W(X, mu, nu).
inline double homogeneity_rescale(double value, double lambda) {
  if (lambda == 0.0) throw InvalidArgument("homogeneity factor must be nonzero");
  return value / std::abs(lambda);
}

/// Row of the tomogram at theta from natural orbitals: sum_j lambda_j |F_theta[phi_j]|^2.
inline RVector tomogram_row(const NaturalOrbitals& orbs, const SpectralTransform& ft, double theta) {
  const std::size_t n = orbs.grid.size();
  RVector row(n, 0.0);
  for (std::size_t j = 0; j < orbs.rank(); ++j) {
    const CVector phi = orbs.orbital(j);
    const CVector f = theta == 0.0 ? phi : rotate_phase_space(ft, phi, theta);
    for (std::size_t i = 0; i < n; ++i) row[i] += orbs.occupations[j] * std::norm(f[i]);
  }
  return row;
}

inline TomogramSamples tomogram_direct(const NaturalOrbitals& orbs, std::span<const double> angles) {
  const SpectralTransform ft(orbs.grid);
  TomogramSamples out{orbs.grid, RVector(angles.begin(), angles.end()),
                      RMatrix(static_cast<Eigen::Index>(angles.size()), static_cast<Eigen::Index>(orbs.grid.size()))};
  for (double a : angles)
    if (!(a >= 0.0 && a < kPi)) throw InvalidArgument("tomogram angles must lie in [0, pi)");
  parallel_for(angles.size(), [&](std::size_t k) {
    const RVector row = tomogram_row(orbs, ft, angles[k]);
    for (std::size_t i = 0; i < row.size(); ++i) out.values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = row[i];
  });
  return out;
}

inline TomogramSamples tomogram_direct(const DensityMatrix& rho, std::span<const double> angles) {
  return tomogram_direct(diagonalize(rho), angles);
}

/// Tomogram value at an arbitrary (X, mu, nu), computed through the kernel at
/// that direction and band-limited interpolation on its quadrature lattice.
inline double tomogram_point(const NaturalOrbitals& orbs, double x, double mu, double nu) {
  const SpectralTransform ft(orbs.grid);
  RVector w(orbs.grid.size(), 0.0);
  QuadratureAmplitude amp;
  for (std::size_t j = 0; j < orbs.rank(); ++j) {
    const CVector phi = orbs.orbital(j);
    amp = fractional_kernel(ft, phi, mu, nu);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += orbs.occupations[j] * std::norm(amp.values[i]);
  }
  const BandlimitedInterpolant interp(amp.x_min, amp.dx, w);
  return interp(x);
}

/// Wigner function W(z_i, p_j), normalized so sum W dz dp / (2 pi) = 1.
/// The momentum lattice is p_j = (j - N/2) dp with dp = pi / (N dz), which is
/// what the separation step u = 2 dz produces.
struct WignerFunction {
  Grid grid;
  double p_min = 0.0;
  double dp = 0.0;
  RMatrix values;  ///< rows z_i, columns p_j

  double p(std::size_t j) const { return p_min + static_cast<double>(j) * dp; }
  double normalization() const { return values.sum() * grid.dz() * dp / kTwoPi; }
};

inline WignerFunction wigner_transform(const DensityMatrix& rho) {
  const Grid& g = rho.grid();
  const std::size_t n = g.size();
  const long half = static_cast<long>(n / 2);
  WignerFunction out{g, -static_cast<double>(half) * kPi / (static_cast<double>(n) * g.dz()),
                     kPi / (static_cast<double>(n) * g.dz()),
                     RMatrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};
  parallel_for(n, [&](std::size_t i) {
    CVector buf(n, cplx{});
    for (long m = -half; m < half; ++m) {
      const long a = static_cast<long>(i) + m;
      const long b = static_cast<long>(i) - m;
      if (a < 0 || b < 0 || a >= static_cast<long>(n) || b >= static_cast<long>(n)) continue;
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      buf[static_cast<std::size_t>((m + static_cast<long>(n)) % static_cast<long>(n))] =
          sign * rho(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    }
    fft_inplace(buf, -1);
    for (std::size_t j = 0; j < n; ++j)
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 2.0 * g.dz() * buf[j].real();
  });
  return out;
}

namespace detail {

/// Signed angular frequencies of a length-n raw DFT with sample spacing h.
inline RVector fft_frequencies(std::size_t n, double h) {
  RVector k(n);
  const double dk = kTwoPi / (static_cast<double>(n) * h);
  for (std::size_t m = 0; m < n; ++m) {
    const long s = m < n / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n);
    k[m] = static_cast<double>(s) * dk;
  }
  return k;
}

/// Replaces f(x) by f(x - delta) on a periodic lattice of spacing h.
inline void spectral_shift(std::span<cplx> buf, std::span<const double> freqs, double delta) {
  fft_inplace(buf, -1);
  const std::size_t n = buf.size();
  for (std::size_t m = 0; m < n; ++m) {
    if (m == n / 2) buf[m] *= std::cos(freqs[m] * delta);
    else buf[m] *= unit_phase(-freqs[m] * delta);
  }
  fft_inplace(buf, +1);
  const double inv = 1.0 / static_cast<double>(n);
  for (auto& v : buf) v *= inv;
}

}  // namespace detail

/// Radon transform of the Wigner function:
///   W(X, cos t, sin t) = \int W(z, p) delta(X - z cos t - p sin t) dz dp / (2 pi).
/// Phase space is rotated by three spectral shears per step (steps of at most
/// pi/4), then integrated along the rotated momentum axis.
inline RVector radon_row(const WignerFunction& w, double theta) {
  const Grid& g = w.grid;
  const std::size_t n = g.size();
  const auto ni = static_cast<Eigen::Index>(n);
  const RVector kz = detail::fft_frequencies(n, g.dz());
  const RVector kp = detail::fft_frequencies(n, w.dp);
  RMatrix a = w.values;
  if (theta != 0.0) {
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(theta) / (kPi / 4.0) - 1e-12)));
    const double step = theta / steps;
    const double shear_x = std::tan(0.5 * step);
    const double shear_y = std::sin(step);
    CVector buf(n);
    auto shear_rows = [&](double s) {  // f(X, Y) <- f(X - s Y, Y)
      for (Eigen::Index j = 0; j < ni; ++j) {
        for (Eigen::Index i = 0; i < ni; ++i) buf[static_cast<std::size_t>(i)] = a(i, j);
        detail::spectral_shift(buf, kz, s * w.p(static_cast<std::size_t>(j)));
        for (Eigen::Index i = 0; i < ni; ++i) a(i, j) = buf[static_cast<std::size_t>(i)].real();
      }
    };
    auto shear_cols = [&](double s) {  // f(X, Y) <- f(X, Y + s X)
      for (Eigen::Index i = 0; i < ni; ++i) {
        for (Eigen::Index j = 0; j < ni; ++j) buf[static_cast<std::size_t>(j)] = a(i, j);
        detail::spectral_shift(buf, kp, -s * g.z(static_cast<std::size_t>(i)));
        for (Eigen::Index j = 0; j < ni; ++j) a(i, j) = buf[static_cast<std::size_t>(j)].real();
      }
    };
    for (int s = 0; s < steps; ++s) {
      shear_rows(shear_x);
      shear_cols(shear_y);
      shear_rows(shear_x);
    }
  }
  RVector row(n);
  for (Eigen::Index i = 0; i < ni; ++i) row[static_cast<std::size_t>(i)] = a.row(i).sum() * w.dp / kTwoPi;
  return row;
}

inline TomogramSamples radon_tomogram(const WignerFunction& w, std::span<const double> angles) {
  TomogramSamples out{w.grid, RVector(angles.begin(), angles.end()),
                      RMatrix(static_cast<Eigen::Index>(angles.size()), static_cast<Eigen::Index>(w.grid.size()))};
  parallel_for(angles.size(), [&](std::size_t k) {
    const RVector row = radon_row(w, angles[k]);
    for (std::size_t i = 0; i < row.size(); ++i) out.values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = row[i];
  });
  return out;
}

struct Marginals {
  RVector density;   ///< W(X, 1, 0) = n(X)
  RVector momentum;  ///< W(X, 0, 1) = rho(p = X)
};

inline Marginals marginals(const TomogramSamples& tomo) {
  const auto k0 = tomo.find_angle(0.0);
  const auto k1 = tomo.find_angle(0.5 * kPi);
  if (!k0 || !k1) throw InvalidArgument("marginals need tomogram rows at theta = 0 and theta = pi/2");
  return {tomo.row(*k0), tomo.row(*k1)};
}

}  // namespace symtomo
