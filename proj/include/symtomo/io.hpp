#pragma once

// Artifact files: a text header of key=value lines, one blank line, then a
// little-endian float64 payload. Doubles in the header are written with 17
// significant digits so every field round-trips bit-exactly.

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "symtomo/dynamics.hpp"
#include "symtomo/errors.hpp"
#include "symtomo/lattice.hpp"
#include "symtomo/reconstruction.hpp"
#include "symtomo/states.hpp"
#include "symtomo/tomography.hpp"

namespace symtomo::io {

class Header {
 public:
  void set(const std::string& key, const std::string& value) {
    if (!values_.count(key)) order_.push_back(key);
    values_[key] = value;
  }
  void set(const std::string& key, double v) { set(key, format_double(v)); }
  void set(const std::string& key, std::size_t v) { set(key, std::to_string(v)); }
  void set(const std::string& key, bool v) { set(key, std::string(v ? "true" : "false")); }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::string& str(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw IoError("header is missing key '" + key + "'");
    return it->second;
  }
  double num(const std::string& key) const {
    const std::string& s = str(key);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw IoError("header key '" + key + "' is not a number: " + s);
    return v;
  }
  std::size_t count(const std::string& key) const {
    const std::string& s = str(key);
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw IoError("header key '" + key + "' is not a count: " + s);
    return v;
  }

  const std::vector<std::string>& keys() const { return order_; }

  static std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
  }

  void write(std::ostream& os) const {
    for (const auto& k : order_) os << k << '=' << values_.at(k) << '\n';
    os << '\n';
  }

  static Header read(std::istream& is) {
    Header h;
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty()) return h;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw IoError("malformed header line: " + line);
      h.set(line.substr(0, eq), line.substr(eq + 1));
    }
    if (h.order_.empty()) throw IoError("empty file");
    return h;
  }

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::string> order_;
};

namespace detail {

inline void write_doubles(std::ostream& os, const double* data, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * sizeof(double)));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      auto bits = std::bit_cast<std::uint64_t>(data[i]);
      char b[8];
      for (int k = 0; k < 8; ++k) b[k] = static_cast<char>((bits >> (8 * k)) & 0xff);
      os.write(b, 8);
    }
  }
}

inline void read_doubles(std::istream& is, double* data, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    is.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n * sizeof(double)));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      unsigned char b[8];
      is.read(reinterpret_cast<char*>(b), 8);
      std::uint64_t bits = 0;
      for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(b[k]) << (8 * k);
      data[i] = std::bit_cast<double>(bits);
    }
  }
  if (!is) throw IoError("payload is truncated");
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  return os;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  return is;
}

inline void finish(std::ostream& os, const std::string& path) {
  os.flush();
  if (!os) throw IoError("write to '" + path + "' failed");
}

inline void expect_end(std::istream& is, const std::string& path) {
  if (is.peek() != std::char_traits<char>::eof()) throw IoError("'" + path + "' has trailing bytes");
}

inline void expect_format(const Header& h, const std::string& fmt) {
  if (h.str("format") != fmt) throw InvalidArgument("expected " + fmt + " file, found " + h.str("format"));
}

inline Grid read_grid(const Header& h, const std::string& n_key, const std::string& min_key, const std::string& d_key) {
  try {
    return Grid(h.count(n_key), h.num(min_key), h.num(d_key));
  } catch (const InvalidArgument& e) {
    throw IoError(std::string("invalid grid in header: ") + e.what());
  }
}

}  // namespace detail

/// Format tag from the first header line; throws InvalidArgument on unknown magic.
inline std::string sniff_format(const std::string& path) {
  auto is = detail::open_in(path);
  std::string line;
  std::getline(is, line);
  const std::string prefix = "format=";
  if (line.rfind(prefix, 0) != 0) throw InvalidArgument("'" + path + "' has no format header");
  const std::string fmt = line.substr(prefix.size());
  if (fmt != "RSPDM-1" && fmt != "PROF-1" && fmt != "TOMO-1" && fmt != "RECON-1")
    throw InvalidArgument("unknown format '" + fmt + "'");
  return fmt;
}

// RSPDM-1: n_points, z_min, dz; payload rho row-major as (re, im) pairs.
inline void write_rspdm(const std::string& path, const DensityMatrix& rho) {
  Header h;
  h.set("format", std::string("RSPDM-1"));
  h.set("n_points", rho.size());
  h.set("z_min", rho.grid().z_min());
  h.set("dz", rho.grid().dz());
  auto os = detail::open_out(path);
  h.write(os);
  const std::size_t n = rho.size();
  std::vector<double> row(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      row[2 * j] = rho(i, j).real();
      row[2 * j + 1] = rho(i, j).imag();
    }
    detail::write_doubles(os, row.data(), row.size());
  }
  detail::finish(os, path);
}

inline DensityMatrix read_rspdm(const std::string& path) {
  auto is = detail::open_in(path);
  const Header h = Header::read(is);
  detail::expect_format(h, "RSPDM-1");
  const Grid grid = detail::read_grid(h, "n_points", "z_min", "dz");
  const std::size_t n = grid.size();
  CMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<double> row(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    detail::read_doubles(is, row.data(), row.size());
    for (std::size_t j = 0; j < n; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cplx(row[2 * j], row[2 * j + 1]);
  }
  detail::expect_end(is, path);
  return DensityMatrix(grid, std::move(m));
}

// PROF-1: mode, g or omega, n_times, n_points, z_min, dz; payload times then
// profiles row-major by time.
inline void write_profiles(const std::string& path, const ProfileSeries& s) {
  Header h;
  h.set("format", std::string("PROF-1"));
  h.set("mode", std::string(to_string(s.mode.kind)));
  if (s.mode.kind == EvolutionKind::Gravity) h.set("g", s.mode.g);
  if (s.mode.kind == EvolutionKind::Harmonic) h.set("omega", s.mode.omega);
  h.set("n_times", s.n_times());
  h.set("n_points", s.grid.size());
  h.set("z_min", s.grid.z_min());
  h.set("dz", s.grid.dz());
  if (s.simulation_only()) h.set("simulation_only", true);
  auto os = detail::open_out(path);
  h.write(os);
  detail::write_doubles(os, s.times.data(), s.times.size());
  std::vector<double> row(s.grid.size());
  for (std::size_t k = 0; k < s.n_times(); ++k) {
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = s.profiles(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i));
    detail::write_doubles(os, row.data(), row.size());
  }
  detail::finish(os, path);
}

inline ProfileSeries read_profiles(const std::string& path) {
  auto is = detail::open_in(path);
  const Header h = Header::read(is);
  detail::expect_format(h, "PROF-1");
  EvolutionMode mode;
  mode.kind = parse_evolution_kind(h.str("mode"));
  if (mode.kind == EvolutionKind::Gravity) mode.g = h.num("g");
  if (mode.kind == EvolutionKind::Harmonic) mode.omega = h.num("omega");
  const Grid grid = detail::read_grid(h, "n_points", "z_min", "dz");
  const std::size_t nt = h.count("n_times");
  ProfileSeries s{grid, mode, RVector(nt), RMatrix(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(grid.size()))};
  detail::read_doubles(is, s.times.data(), nt);
  std::vector<double> row(grid.size());
  for (std::size_t k = 0; k < nt; ++k) {
    detail::read_doubles(is, row.data(), row.size());
    for (std::size_t i = 0; i < row.size(); ++i) s.profiles(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = row[i];
  }
  detail::expect_end(is, path);
  return s;
}

// TOMO-1: n_angles, n_x, x_min, dx, angles=uniform|listed; payload the angle
// list when listed, then values row-major by angle.
inline void write_tomogram(const std::string& path, const TomogramSamples& t) {
  Header h;
  h.set("format", std::string("TOMO-1"));
  h.set("n_angles", t.n_angles());
  h.set("n_x", t.x_grid.size());
  h.set("x_min", t.x_grid.z_min());
  h.set("dx", t.x_grid.dz());
  bool uniform = t.n_angles() > 0;
  for (std::size_t k = 0; k < t.n_angles() && uniform; ++k)
    uniform = t.angles[k] == uniform_angles(t.n_angles())[k];
  h.set("angles", std::string(uniform ? "uniform" : "listed"));
  auto os = detail::open_out(path);
  h.write(os);
  if (!uniform) detail::write_doubles(os, t.angles.data(), t.angles.size());
  std::vector<double> row(t.x_grid.size());
  for (std::size_t k = 0; k < t.n_angles(); ++k) {
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = t.values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i));
    detail::write_doubles(os, row.data(), row.size());
  }
  detail::finish(os, path);
}

inline TomogramSamples read_tomogram(const std::string& path) {
  auto is = detail::open_in(path);
  const Header h = Header::read(is);
  detail::expect_format(h, "TOMO-1");
  const Grid grid = detail::read_grid(h, "n_x", "x_min", "dx");
  const std::size_t na = h.count("n_angles");
  TomogramSamples t{grid, RVector(na), RMatrix(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(grid.size()))};
  const std::string layout = h.has("angles") ? h.str("angles") : "uniform";
  if (layout == "uniform") t.angles = uniform_angles(na);
  else if (layout == "listed") detail::read_doubles(is, t.angles.data(), na);
  else throw IoError("unknown angle layout '" + layout + "'");
  std::vector<double> row(grid.size());
  for (std::size_t k = 0; k < na; ++k) {
    detail::read_doubles(is, row.data(), row.size());
    for (std::size_t i = 0; i < row.size(); ++i) t.values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = row[i];
  }
  detail::expect_end(is, path);
  return t;
}

/// RECON-1 is header-only: settings, coverage, repairs, residuals, warnings.
inline Header report_header(const ReconstructionReport& r) {
  Header h;
  h.set("format", std::string("RECON-1"));
  h.set("method", r.method);
  h.set("source", r.source);
  h.set("n_points", r.rho.size());
  h.set("z_min", r.rho.grid().z_min());
  h.set("dz", r.rho.grid().dz());
  h.set("t_min", r.t_min);
  h.set("t_max", r.t_max);
  h.set("n_profiles", r.n_profiles);
  h.set("n_excluded_caustic", r.n_excluded);
  h.set("n_angles", r.coverage.n_angles);
  h.set("max_angular_gap", r.coverage.max_gap);
  h.set("time_reversal_completion", r.coverage.mirrored);
  h.set("completion", std::string(to_string(r.settings.completion)));
  h.set("interpolation_half_width", r.settings.interpolation_half_width);
  h.set("caustic_epsilon", r.settings.caustic_epsilon);
  h.set("tail_estimate", r.tail_estimate);
  h.set("truncation_warning", r.truncation_warning);
  h.set("hermitian_correction", r.repair.hermitian_correction);
  h.set("trace_before_renormalization", r.repair.trace_before);
  if (r.residual_frobenius) h.set("residual_frobenius", *r.residual_frobenius);
  if (r.residual_sup) h.set("residual_sup", *r.residual_sup);
  h.set("n_warnings", r.warnings.size());
  for (std::size_t i = 0; i < r.warnings.size(); ++i) h.set("warning_" + std::to_string(i), r.warnings[i]);
  return h;
}

inline void write_report(const std::string& path, const ReconstructionReport& r) {
  auto os = detail::open_out(path);
  report_header(r).write(os);
  detail::finish(os, path);
}

inline Header read_report(const std::string& path) {
  auto is = detail::open_in(path);
  Header h = Header::read(is);
  detail::expect_format(h, "RECON-1");
  return h;
}

}  // namespace symtomo::io
