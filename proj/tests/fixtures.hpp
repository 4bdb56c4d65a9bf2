#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "symtomo/symtomo.hpp"

namespace fixtures {

using namespace symtomo;

inline Grid grid256() { return make_grid(256, 25.6); }

/// Wide box for T = 12 free and gravity runs; commensurate with grid256.
inline Grid expansion_grid() { return make_grid(4096, 409.6); }

inline DensityMatrix mix73(const Grid& g) {
  return mixture({{0.7, ho_eigenstate(g, 0)}, {0.3, ho_eigenstate(g, 1)}});
}

inline DensityMatrix superposition02(const Grid& g) {
  const CVector a = ho_orbital(g, 0), b = ho_orbital(g, 2);
  CVector v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (a[i] + cplx(0.0, 1.0) * b[i]) / std::sqrt(2.0);
  return pure_state(g, v);
}

struct Named {
  std::string name;
  DensityMatrix rho;
};

/// The six reference states: ground, first excited, 0.7/0.3 mixture, ideal
/// Fermi N=2 and N=3, and a displaced (coherent) state without rotation symmetry.
inline std::vector<Named> all(const Grid& g) {
  std::vector<Named> out;
  out.push_back({"ho0", ho_eigenstate(g, 0)});
  out.push_back({"ho1", ho_eigenstate(g, 1)});
  out.push_back({"mix73", mix73(g)});
  out.push_back({"fermi2", ideal_fermi_rspdm(g, 2)});
  out.push_back({"fermi3", ideal_fermi_rspdm(g, 3)});
  out.push_back({"coherent", coherent_state(g, 1.5, 0.8)});
  return out;
}

/// tan(k atan(T) / (n - 1)), k = 0..n-1: uniform in the induced angle.
inline RVector tan_schedule(double t_end, std::size_t n) {
  RVector t(n);
  for (std::size_t k = 0; k + 1 < n; ++k) t[k] = std::tan(std::atan(t_end) * static_cast<double>(k) / static_cast<double>(n - 1));
  t[n - 1] = t_end;
  return t;
}

inline RVector period_schedule(double omega, std::size_t n) {
  RVector t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = kTwoPi / omega * static_cast<double>(k) / static_cast<double>(n - 1);
  return t;
}

inline double sup_diff(const RVector& a, const RVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline ProfileSeries protocol_series(const DensityMatrix& rho, const EvolutionMode& mode) {
  const auto orbs = diagonalize(rho);
  if (mode.kind == EvolutionKind::Harmonic) return profile_series(orbs, mode, period_schedule(mode.omega, 256));
  return profile_series(embed(orbs, expansion_grid()), mode, tan_schedule(12.0, 128));
}

}  // namespace fixtures
