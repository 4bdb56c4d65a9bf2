#pragma once

// One-body density matrices on a grid and their natural-orbital form.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "symtomo/errors.hpp"
#include "symtomo/lattice.hpp"

namespace symtomo {

using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kNegativityTol = 1e-10;

/// Invariant diagnostics for a density matrix.
struct StateDiagnostics {
  double trace = 0.0;             ///< sum_i rho(z_i, z_i) dz
  double hermiticity = 0.0;       ///< max|rho - rho^H| / max|rho|
  double min_eigenvalue = 0.0;    ///< of rho dz (occupation scale)
  bool hermitian_ok = false;
  bool trace_ok = false;
  bool psd_ok = false;
  bool ok() const { return hermitian_ok && trace_ok && psd_ok; }
};

/// rho(z_i, z_j) in units of 1/length so that sum_i rho(z_i, z_i) dz = 1.
class DensityMatrix {
 public:
  DensityMatrix(Grid grid, CMatrix values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.rows() != static_cast<Eigen::Index>(grid_.size()) || values_.cols() != values_.rows())
      throw InvalidArgument("density matrix shape does not match grid");
  }

  const Grid& grid() const { return grid_; }
  const CMatrix& values() const { return values_; }
  std::size_t size() const { return grid_.size(); }
  cplx operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  double trace() const { return values_.diagonal().real().sum() * grid_.dz(); }

  /// n(z_i) = rho(z_i, z_i).
  RVector density() const {
    RVector n(size());
    for (std::size_t i = 0; i < size(); ++i) n[i] = (*this)(i, i).real();
    return n;
  }

  StateDiagnostics diagnose() const {
    StateDiagnostics d;
    d.trace = trace();
    const double scale = std::max(values_.cwiseAbs().maxCoeff(), 1e-300);
    d.hermiticity = (values_ - values_.adjoint()).cwiseAbs().maxCoeff() / scale;
    d.hermitian_ok = d.hermiticity <= kHermiticityTol;
    d.trace_ok = std::abs(d.trace - 1.0) <= kTraceTol;
    const CMatrix h = 0.5 * (values_ + values_.adjoint()) * grid_.dz();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.info() == Eigen::Success ? es.eigenvalues().minCoeff() : -1.0;
    d.psd_ok = d.min_eigenvalue >= -kNegativityTol;
    return d;
  }

  /// Throws InvalidArgument describing the first violated invariant.
  void validate() const {
    const auto d = diagnose();
    std::ostringstream msg;
    if (!d.hermitian_ok) msg << "density matrix not Hermitian (rel. deviation " << d.hermiticity << ")";
    else if (!d.trace_ok) msg << "density matrix trace " << d.trace << " != 1";
    else if (!d.psd_ok) msg << "density matrix not positive (min eigenvalue " << d.min_eigenvalue << ")";
    else return;
    throw InvalidArgument(msg.str());
  }

 private:
  Grid grid_;
  CMatrix values_;
};

/// rho = sum_j lambda_j |phi_j><phi_j| with sum_i |phi_j(z_i)|^2 dz = 1.
struct NaturalOrbitals {
  Grid grid;
  RVector occupations;  ///< descending
  CMatrix orbitals;     ///< column j is phi_j on the grid

  std::size_t rank() const { return occupations.size(); }

  CVector orbital(std::size_t j) const {
    CVector out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      out[i] = orbitals(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return out;
  }

  DensityMatrix reassemble() const {
    const auto r = static_cast<Eigen::Index>(rank());
    Eigen::VectorXd occ(r);
    for (Eigen::Index j = 0; j < r; ++j) occ(j) = occupations[static_cast<std::size_t>(j)];
    CMatrix rho = orbitals * occ.asDiagonal() * orbitals.adjoint();
    return DensityMatrix(grid, std::move(rho));
  }
};

/// Unit-frequency oscillator eigenfunctions phi_0..phi_{count-1} on the grid,
/// by the three-term recurrence.
inline RMatrix ho_orbitals(const Grid& grid, std::size_t count) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  RMatrix out = RMatrix::Zero(n, static_cast<Eigen::Index>(count));
  if (count == 0) return out;
  const double c0 = std::pow(kPi, -0.25);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z = grid.z(static_cast<std::size_t>(i));
    double prev = 0.0;
    double cur = c0 * std::exp(-0.5 * z * z);
    out(i, 0) = cur;
    for (std::size_t k = 0; k + 1 < count; ++k) {
      const double kk = static_cast<double>(k);
      const double next = std::sqrt(2.0 / (kk + 1.0)) * z * cur - std::sqrt(kk / (kk + 1.0)) * prev;
      prev = cur;
      cur = next;
      out(i, static_cast<Eigen::Index>(k + 1)) = cur;
    }
  }
  return out;
}

/// Throws ResolutionError unless oscillator level `level` fits on the grid:
/// level <= N/8 and classical turning point plus a margin inside both the
/// box and half the momentum band.
inline void check_ho_resolution(const Grid& grid, std::size_t level) {
  const double turning = std::sqrt(2.0 * static_cast<double>(level) + 1.0);
  const double margin = 4.0;
  const double z_room = std::min(-grid.z_min(), grid.z(grid.size() - 1));
  const double k_room = 0.5 * grid.k_max();
  if (level > grid.size() / 8 || turning + margin > z_room || turning + margin > k_room) {
    std::ostringstream msg;
    msg << "oscillator level " << level << " is not resolved on a " << grid.size() << "-point grid of extent "
        << grid.extent();
    throw ResolutionError(msg.str());
  }
}

inline DensityMatrix pure_state(const Grid& grid, std::span<const cplx> psi) {
  if (psi.size() != grid.size()) throw InvalidArgument("orbital length does not match grid");
  const double nrm = norm_squared(psi, grid.dz());
  if (!(nrm > 0.0)) throw InvalidArgument("orbital has zero norm");
  Eigen::VectorXcd v(static_cast<Eigen::Index>(psi.size()));
  for (std::size_t i = 0; i < psi.size(); ++i) v(static_cast<Eigen::Index>(i)) = psi[i] / std::sqrt(nrm);
  return DensityMatrix(grid, v * v.adjoint());
}

inline CVector ho_orbital(const Grid& grid, std::size_t level) {
  check_ho_resolution(grid, level);
  const RMatrix phi = ho_orbitals(grid, level + 1);
  CVector out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    out[i] = phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(level));
  return out;
}

inline DensityMatrix ho_eigenstate(const Grid& grid, std::size_t level) {
  const CVector phi = ho_orbital(grid, level);
  return pure_state(grid, phi);
}

/// Displaced oscillator ground state, phi_0(z - z0) exp(i p0 z).
inline DensityMatrix coherent_state(const Grid& grid, double z0, double p0) {
  check_ho_resolution(grid, 0);
  if (std::abs(z0) + 4.0 > std::min(-grid.z_min(), grid.z(grid.size() - 1)) ||
      std::abs(p0) + 4.0 > 0.5 * grid.k_max())
    throw ResolutionError("displaced state does not fit on the grid");
  CVector psi(grid.size());
  const double c0 = std::pow(kPi, -0.25);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double z = grid.z(i);
    psi[i] = c0 * std::exp(-0.5 * (z - z0) * (z - z0)) * unit_phase(p0 * z);
  }
  return pure_state(grid, psi);
}

inline constexpr double kWeightSumTol = 1e-10;

/// Convex combination sum_j w_j rho_j.
inline DensityMatrix mixture(const std::vector<std::pair<double, DensityMatrix>>& states) {
  if (states.empty()) throw InvalidArgument("mixture needs at least one state");
  double wsum = 0.0;
  for (const auto& [w, rho] : states) {
    if (!(w >= 0.0)) throw InvalidArgument("mixture weights must be non-negative");
    if (!(rho.grid() == states.front().second.grid())) throw InvalidArgument("mixture grids differ");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > kWeightSumTol) throw InvalidArgument("mixture weights must sum to 1");
  CMatrix acc = CMatrix::Zero(states.front().second.values().rows(), states.front().second.values().cols());
  for (const auto& [w, rho] : states) acc += w * rho.values();
  return DensityMatrix(states.front().second.grid(), std::move(acc));
}

/// Mixture of oscillator levels with the given occupations.
inline DensityMatrix ho_mixture(const Grid& grid, std::span<const double> occupations,
                                std::span<const std::size_t> levels) {
  if (occupations.size() != levels.size() || levels.empty())
    throw InvalidArgument("occupations and orbital levels must have equal, nonzero length");
  std::vector<std::pair<double, DensityMatrix>> parts;
  for (std::size_t j = 0; j < levels.size(); ++j) parts.emplace_back(occupations[j], ho_eigenstate(grid, levels[j]));
  return mixture(parts);
}

/// Spin-polarized ideal Fermi gas of n_particles in the oscillator:
/// rho = (1/N) sum_{j<N} |phi_j><phi_j|.
inline DensityMatrix ideal_fermi_rspdm(const Grid& grid, std::size_t n_particles) {
  if (n_particles == 0) throw InvalidArgument("particle number must be positive");
  check_ho_resolution(grid, n_particles - 1);
  const RMatrix phi = ho_orbitals(grid, n_particles);
  CMatrix rho = (phi * phi.transpose()).cast<cplx>() / static_cast<double>(n_particles);
  return DensityMatrix(grid, std::move(rho));
}

/// Pure state with orbital sqrt(n(z)): same density profile as the input
/// state, different momentum distribution.
inline DensityMatrix sqrt_density_state(const DensityMatrix& rho) {
  const RVector n = rho.density();
  CVector psi(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) psi[i] = std::sqrt(std::max(n[i], 0.0));
  return pure_state(rho.grid(), psi);
}

inline constexpr double kDefaultRankCut = 1e-12;

/// Natural-orbital decomposition. Occupations in [-1e-10, 0) are clamped to
/// zero and the rest renormalized; deeper negativity is an error.
inline NaturalOrbitals diagonalize(const DensityMatrix& rho, double rank_cut = kDefaultRankCut) {
  const double dz = rho.grid().dz();
  const CMatrix h = 0.5 * (rho.values() + rho.values().adjoint()) * dz;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eigensolver failed on " << h.rows() << "x" << h.cols() << " density matrix (Eigen info "
        << static_cast<int>(es.info()) << ")";
    throw NumericalError(msg.str());
  }
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  if (ev.minCoeff() < -kNegativityTol) {
    std::ostringstream msg;
    msg << "density matrix has negative occupation " << ev.minCoeff();
    throw NumericalError(msg.str());
  }
  NaturalOrbitals out{rho.grid(), {}, CMatrix()};
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = ev.size() - 1; j >= 0; --j)
    if (ev(j) >= rank_cut) keep.push_back(j);
  if (keep.empty()) throw NumericalError("density matrix has no occupation above the rank cut");
  double total = 0.0;
  for (auto j : keep) total += std::max(ev(j), 0.0);
  out.orbitals.resize(h.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    out.occupations.push_back(std::max(ev(keep[c]), 0.0) / total);
    Eigen::VectorXcd v = es.eigenvectors().col(keep[c]) / std::sqrt(dz);
    // Fix the phase so the largest component is real and positive.
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    v *= std::conj(v(imax)) / std::abs(v(imax));
    out.orbitals.col(static_cast<Eigen::Index>(c)) = v;
  }
  return out;
}

/// rho(p) = (2 pi)^{-1} \int\int rho(z, z') exp(i p (z' - z)) dz dz' at each
/// requested p, by direct summation over the grid.
inline RVector momentum_distribution(const DensityMatrix& rho, std::span<const double> momenta) {
  const Grid& g = rho.grid();
  const auto n = static_cast<Eigen::Index>(g.size());
  RVector out(momenta.size());
  Eigen::VectorXcd u(n);
  for (std::size_t m = 0; m < momenta.size(); ++m) {
    for (Eigen::Index j = 0; j < n; ++j) u(j) = unit_phase(momenta[m] * g.z(static_cast<std::size_t>(j)));
    const cplx v = u.dot(rho.values() * u);  // u^H rho u
    out[m] = v.real() * g.dz() * g.dz() / kTwoPi;
  }
  return out;
}

/// Restricts orbitals to a commensurate target grid, zero-padding where the
/// target extends beyond the source.
inline NaturalOrbitals embed(const NaturalOrbitals& orbs, const Grid& target) {
  if (!orbs.grid.commensurate_with(target)) throw InvalidArgument("target grid is not commensurate");
  const auto offset = static_cast<long>(std::lround((orbs.grid.z_min() - target.z_min()) / target.dz()));
  NaturalOrbitals out{target, orbs.occupations, CMatrix::Zero(static_cast<Eigen::Index>(target.size()),
                                                                static_cast<Eigen::Index>(orbs.rank()))};
  for (std::size_t i = 0; i < orbs.grid.size(); ++i) {
    const long t = static_cast<long>(i) + offset;
    if (t < 0 || t >= static_cast<long>(target.size())) continue;
    out.orbitals.row(t) = orbs.orbitals.row(static_cast<Eigen::Index>(i));
  }
  return out;
}

/// Relative Frobenius distance ||a - b|| / ||b||.
inline double relative_frobenius(const DensityMatrix& a, const DensityMatrix& b) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("grids differ");
  return (a.values() - b.values()).norm() / b.values().norm();
}

}  // namespace symtomo
