#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "symtomo/lattice.hpp"

namespace symtomo {

/// Trigonometric (band-limited) interpolant of real samples f(x0 + i dx).
/// Exact for band-limited data that vanishes at the ends of the window;
/// returns 0 outside [x0, x0 + (N-1) dx].
class BandlimitedInterpolant {
 public:
  BandlimitedInterpolant(double x0, double dx, std::span<const double> values)
      : x0_(x0), dx_(dx), n_(values.size()), coeffs_(values.begin(), values.end()) {
    if (n_ == 0 || !(dx > 0)) throw InvalidArgument("interpolant needs samples and positive spacing");
    fft_inplace(coeffs_, -1);
    for (auto& c : coeffs_) c /= static_cast<double>(n_);
  }

  double x0() const { return x0_; }
  double dx() const { return dx_; }
  std::size_t size() const { return n_; }

  double operator()(double x) const {
    const double u = (x - x0_) / dx_;
    if (u < -1e-9 || u > static_cast<double>(n_ - 1) + 1e-9) return 0.0;
    const double w = kTwoPi * u / static_cast<double>(n_);
    const cplx step = unit_phase(w);
    cplx e = step;
    double acc = coeffs_[0].real();
    const std::size_t half = n_ / 2;
    for (std::size_t m = 1; m < (n_ + 1) / 2; ++m) {
      // c_m e^{imw} + c_{-m} e^{-imw} = 2 Re(c_m e^{imw}) for real data.
      acc += 2.0 * (coeffs_[m] * e).real();
      e *= step;
    }
    // Nyquist term split symmetrically between +half and -half.
    if (n_ % 2 == 0) acc += coeffs_[half].real() * std::cos(static_cast<double>(half) * w);
    return acc;
  }

 private:
  double x0_;
  double dx_;
  std::size_t n_;
  CVector coeffs_;
};

/// Lagrange weights for evaluating at x from the given nodes.
inline std::vector<double> lagrange_weights(std::span<const double> nodes, double x) {
  std::vector<double> w(nodes.size(), 1.0);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = 0; j < nodes.size(); ++j)
      if (i != j) w[i] *= (x - nodes[j]) / (nodes[i] - nodes[j]);
  return w;
}

}  // namespace symtomo
