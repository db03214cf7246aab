#include "nsteady/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <stdexcept>

#include "nsteady/spectral.hpp"

namespace nsteady {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct LogFit {
  double slope = 0.0, intercept = 0.0, residual_rms = 0.0;
};

// Least squares of log(y) against log(x); every y must be positive.
LogFit log_log_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  LogFit fit;
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pred = fit.intercept + fit.slope * std::log(xs[i]);
    const double d = std::log(ys[i]) - pred;
    ss += d * d;
  }
  fit.residual_rms = std::sqrt(ss / n);
  return fit;
}

void check_window(const Grid& g, double r_min, double r_max, int n_shells) {
  if (!(r_min > 0.0) || !(r_max > r_min))
    throw std::invalid_argument("shell fit: need 0 < r_min < r_max");
  if (r_max > g.box_length / 4.0 + 1e-12)
    throw std::invalid_argument(
        "shell fit: r_max beyond L/4, shells would wrap around the box");
  if (n_shells < 6)
    throw std::invalid_argument("shell fit: need at least 6 shells");
}

}  // namespace

std::vector<std::pair<double, double>> shell_profile(
    const PhysicalVectorField& field, double r_min, double r_max, int n_shells,
    ShellStat stat, double coord_offset) {
  const Grid& g = field.grid();
  check_window(g, r_min, r_max, n_shells);

  const double log_lo = std::log(r_min);
  const double log_step = (std::log(r_max) - log_lo) / n_shells;
  std::vector<double> acc(n_shells, 0.0);
  std::vector<double> log_r_acc(n_shells, 0.0);  // argmax radius / mean log r
  std::vector<std::size_t> count(n_shells, 0);

  std::size_t s = 0;
  for (int iz = 0; iz < g.n; ++iz) {
    const double z = g.coord(iz) + coord_offset;
    for (int iy = 0; iy < g.n; ++iy) {
      const double y = g.coord(iy) + coord_offset;
      for (int ix = 0; ix < g.n; ++ix, ++s) {
        const double x = g.coord(ix) + coord_offset;
        const double r = std::sqrt(x * x + y * y + z * z);
        if (r < r_min || r >= r_max) continue;
        const int bin = std::min(
            n_shells - 1, static_cast<int>((std::log(r) - log_lo) / log_step));
        const double mag = field.magnitude(s);
        if (stat == ShellStat::max) {
          if (mag >= acc[bin]) {
            acc[bin] = mag;
            log_r_acc[bin] = std::log(r);
          }
        } else {
          acc[bin] += mag * mag;
          log_r_acc[bin] += std::log(r);
        }
        ++count[bin];
      }
    }
  }

  // Each shell is reported at its samples' radius, not the nominal bin
  // center: the radius of the maximizing sample for the max statistic, the
  // geometric-mean sample radius for the L2 mean. Lattice shells near the
  // grid spacing are populated unevenly, and the nominal center would bias
  // the log-log slope there.
  std::vector<std::pair<double, double>> out;
  out.reserve(n_shells);
  for (int b = 0; b < n_shells; ++b) {
    if (count[b] == 0)
      throw std::runtime_error(
          "shell fit: empty shell, grid too coarse for the requested window");
    double r_rep, value;
    if (stat == ShellStat::max) {
      r_rep = std::exp(log_r_acc[b]);
      value = acc[b];
    } else {
      r_rep = std::exp(log_r_acc[b] / static_cast<double>(count[b]));
      value = std::sqrt(acc[b] / static_cast<double>(count[b]));
    }
    out.emplace_back(r_rep, value);
  }
  return out;
}

DecayFit shell_decay_fit(const PhysicalVectorField& field, double r_min,
                         double r_max, int n_shells, ShellStat stat,
                         double coord_offset) {
  const auto profile =
      shell_profile(field, r_min, r_max, n_shells, stat, coord_offset);
  std::vector<double> rs, vs;
  for (const auto& [r, v] : profile) {
    if (!(v > 0.0))
      throw std::runtime_error("shell fit: shell statistic vanished, no slope");
    rs.push_back(r);
    vs.push_back(v);
  }
  const LogFit lf = log_log_fit(rs, vs);
  DecayFit fit;
  fit.exponent = lf.slope;
  fit.intercept = lf.intercept;
  fit.residual_rms = lf.residual_rms;
  fit.r_min = r_min;
  fit.r_max = r_max;
  fit.n_shells = n_shells;
  fit.stat = stat;
  return fit;
}

double MomentumMatrix::frobenius() const {
  double s = 0.0;
  for (int h = 0; h < 3; ++h)
    for (int l = 0; l < 3; ++l) s += m[h][l] * m[h][l];
  return std::sqrt(s);
}

MomentumMatrix momentum_matrix(const PhysicalVectorField& U) {
  MomentumMatrix M;
  const std::size_t n = U.size();
  for (int h = 0; h < 3; ++h)
    for (int l = h; l < 3; ++l) {
      double s = 0.0;
      const Complex* a = U.component(h);
      const Complex* b = U.component(l);
      for (std::size_t i = 0; i < n; ++i) s += a[i].real() * b[i].real();
      M.m[h][l] = M.m[l][h] = s * U.grid().cell_volume();
    }
  return M;
}

double anisotropy_deviation(const MomentumMatrix& M) {
  const double frob = M.frobenius();
  if (frob == 0.0)
    throw std::invalid_argument("anisotropy_deviation: zero matrix");
  const double mean = (M.m[0][0] + M.m[1][1] + M.m[2][2]) / 3.0;
  double dev = 0.0;
  for (int h = 0; h < 3; ++h)
    for (int l = 0; l < 3; ++l) {
      const double e = M.m[h][l] - (h == l ? mean : 0.0);
      dev += e * e;
    }
  return std::sqrt(dev) / frob;
}

std::array<double, 3> stokes_profile_at(const MomentumMatrix& M, double x,
                                        double y, double z) {
  const double r2 = x * x + y * y + z * z;
  if (r2 == 0.0)
    throw std::invalid_argument("stokes_profile_at: singular at the origin");
  const double r = std::sqrt(r2);
  const double r3 = r2 * r;
  const double pos[3] = {x, y, z};

  // [m(x):M]_j = -(1/8 pi r^3) [ (M^T x - M x)_j + x_j tr M - 3 x_j S / r^2 ]
  // with S = x . M x; the first bracket term vanishes for symmetric M.
  double Mx[3] = {0, 0, 0}, Mtx[3] = {0, 0, 0};
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) {
      Mx[j] += M.m[j][l] * pos[l];
      Mtx[j] += M.m[l][j] * pos[l];
    }
  const double trace = M.m[0][0] + M.m[1][1] + M.m[2][2];
  const double S = pos[0] * Mx[0] + pos[1] * Mx[1] + pos[2] * Mx[2];

  std::array<double, 3> out{};
  const double c = -1.0 / (8.0 * kPi * r3);
  for (int j = 0; j < 3; ++j)
    out[j] = c * (Mtx[j] - Mx[j] + pos[j] * (trace - 3.0 * S / r2));
  return out;
}

PhysicalVectorField stokes_profile_term(const MomentumMatrix& M, const Grid& grid,
                                        double coord_offset) {
  PhysicalVectorField out(grid);
  std::size_t s = 0;
  for (int iz = 0; iz < grid.n; ++iz) {
    const double z = grid.coord(iz) + coord_offset;
    for (int iy = 0; iy < grid.n; ++iy) {
      const double y = grid.coord(iy) + coord_offset;
      for (int ix = 0; ix < grid.n; ++ix, ++s) {
        double x = grid.coord(ix) + coord_offset;
        double yy = y, zz = z;
        if (x * x + y * y + z * z == 0.0) {
          // The kernel has no value at the exact origin; sample the cell at
          // its half-spacing corner instead.
          const double half = 0.5 * grid.spacing();
          x = half;
          yy = half;
          zz = half;
        }
        const auto v = stokes_profile_at(M, x, yy, zz);
        for (int c = 0; c < 3; ++c) out.at(c, s) = v[c];
      }
    }
  }
  return out;
}

namespace {

// Multiplier contraction applied to a Gaussian mass of width sigma at the
// origin (Fourier-series coefficients e^{-|k|^2 sigma^2 / 2} / L^3).
PhysicalVectorField multiplier_reconstruction(const MomentumMatrix& M,
                                              const Grid& grid, double sigma) {
  const double L = grid.box_length;
  const double dirac_coeff = 1.0 / (L * L * L);
  SpectralVectorField coeffs(grid);
  std::size_t s = 0;
  for (int iz = 0; iz < grid.n; ++iz) {
    const double kz = grid.wavenumber(iz);
    for (int iy = 0; iy < grid.n; ++iy) {
      const double ky = grid.wavenumber(iy);
      for (int ix = 0; ix < grid.n; ++ix, ++s) {
        const double kx = grid.wavenumber(ix);
        const double k[3] = {kx, ky, kz};
        const double k2 = kx * kx + ky * ky + kz * kz;
        if (k2 == 0.0) continue;
        // -i k_h (delta_jl - k_j k_l/|k|^2) / |k|^2 contracted with M_hl
        double kM[3] = {0, 0, 0};  // (k^T M)_l
        for (int l = 0; l < 3; ++l)
          for (int h = 0; h < 3; ++h) kM[l] += k[h] * M.m[h][l];
        const double kMk = kM[0] * k[0] + kM[1] * k[1] + kM[2] * k[2];
        const double damp = std::exp(-0.5 * k2 * sigma * sigma) * dirac_coeff;
        for (int j = 0; j < 3; ++j) {
          const double imag_part = -(kM[j] - k[j] * kMk / k2) / k2;
          coeffs.at(j, s) = Complex{0.0, imag_part} * damp;
        }
      }
    }
  }
  return inverse_transform_real(coeffs);
}

}  // namespace

PhysicalVectorField stokes_profile_term_spectral(const MomentumMatrix& M,
                                                 const Grid& grid) {
  // The symbol decays only like 1/|k|, so a sharply truncated point-source
  // reconstruction does not converge pointwise (the partial sums oscillate at
  // O(1) of the kernel and the sidelobes grow with n along the axes). The
  // source is therefore mollified to a Gaussian of width ~1.5 cells, whose
  // O(sigma^2) smoothing bias is removed by extrapolating two widths a factor
  // sqrt(2) apart.
  const double sigma = 1.5 * grid.spacing();
  const PhysicalVectorField narrow = multiplier_reconstruction(M, grid, sigma);
  const PhysicalVectorField wide =
      multiplier_reconstruction(M, grid, sigma * std::sqrt(2.0));
  PhysicalVectorField out = narrow;
  for (std::size_t i = 0; i < out.data().size(); ++i)
    out.data()[i] = 2.0 * narrow.data()[i] - wide.data()[i];
  return out;
}

ProfileResidual profile_residual(const SpectralVectorField& U,
                                 const SpectralVectorField& U0,
                                 const MomentumMatrix& M, double r_min,
                                 double r_max, int n_shells, ShellStat stat) {
  if (U.grid() != U0.grid())
    throw std::invalid_argument("profile_residual: grids differ");
  PhysicalVectorField u = inverse_transform_real(U);
  const PhysicalVectorField u0 = inverse_transform_real(U0);
  const PhysicalVectorField term = stokes_profile_term(M, U.grid());
  for (std::size_t i = 0; i < u.data().size(); ++i)
    u.data()[i] -= u0.data()[i] + term.data()[i];

  ProfileResidual out{std::move(u), {}};
  out.fit = shell_decay_fit(out.residual, r_min, r_max, n_shells, stat);
  return out;
}

NonexistenceReport nonexistence_diagnostic(
    const std::vector<AmplitudeSample>& family, double r_min, double r_max,
    int n_shells, int n_directions) {
  if (family.size() < 3)
    throw std::invalid_argument(
        "nonexistence_diagnostic: need at least three amplitudes");
  for (std::size_t i = 1; i < family.size(); ++i) {
    if (family[i].U.grid() != family[0].U.grid())
      throw std::invalid_argument("nonexistence_diagnostic: grids differ");
    if (!(family[i].eta > family[i - 1].eta))
      throw std::invalid_argument(
          "nonexistence_diagnostic: amplitudes must increase strictly");
  }
  if (!(family[0].eta > 0.0))
    throw std::invalid_argument("nonexistence_diagnostic: amplitudes must be positive");
  const Grid& g = family[0].U.grid();
  check_window(g, r_min, r_max, n_shells);
  if (n_directions < 8)
    throw std::invalid_argument("nonexistence_diagnostic: too few directions");

  NonexistenceReport rep;
  std::vector<MomentumMatrix> mats;
  for (const auto& sample : family) {
    const MomentumMatrix M = momentum_matrix(inverse_transform_real(sample.U));
    mats.push_back(M);
    rep.etas.push_back(sample.eta);
    rep.deviations.push_back(anisotropy_deviation(M));
    rep.offdiag.push_back(std::abs(M.m[0][1]));
  }

  {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < family.size(); ++i)
      if (rep.offdiag[i] > 0.0) {
        xs.push_back(rep.etas[i]);
        ys.push_back(rep.offdiag[i]);
      }
    if (xs.size() >= 2) rep.eta_scaling_exponent = log_log_fit(xs, ys).slope;
  }

  // Remainder against the smallest sample extrapolated quadratically.
  {
    const double eta0 = rep.etas.front();
    std::vector<double> xs, ys;
    for (std::size_t i = 1; i < family.size(); ++i) {
      const double scale = (rep.etas[i] / eta0) * (rep.etas[i] / eta0);
      double ss = 0.0;
      for (int h = 0; h < 3; ++h)
        for (int l = 0; l < 3; ++l) {
          const double d = mats[i].m[h][l] - scale * mats[0].m[h][l];
          ss += d * d;
        }
      const double rem = std::sqrt(ss);
      if (rem > 0.0) {
        xs.push_back(rep.etas[i]);
        ys.push_back(rem);
      }
    }
    if (xs.size() >= 2) rep.quadratic_remainder_slope = log_log_fit(xs, ys).slope;
  }

  // Directional floor of r^2 |U| for the largest sample, judged against 10%
  // of the peak predicted profile magnitude on the unit sphere.
  const MomentumMatrix& M_top = mats.back();
  const PhysicalVectorField u = inverse_transform_real(family.back().U);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  std::vector<std::array<double, 3>> dirs;
  dirs.reserve(n_directions);
  for (int i = 0; i < n_directions; ++i) {
    const double zc = 1.0 - 2.0 * (i + 0.5) / n_directions;
    const double rho = std::sqrt(std::max(0.0, 1.0 - zc * zc));
    const double phi = golden * i;
    dirs.push_back({rho * std::cos(phi), rho * std::sin(phi), zc});
  }

  double peak = 0.0;
  for (const auto& d : dirs) {
    const auto v = stokes_profile_at(M_top, d[0], d[1], d[2]);
    peak = std::max(peak,
                    std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]));
  }
  // A profile below round-off of the momentum scale cannot floor anything.
  if (peak <= 1e-10 * M_top.frobenius() / (8.0 * kPi)) {
    rep.directional_floor = 0.0;
    rep.directional_floor_fraction = 0.0;
    return rep;
  }
  rep.directional_floor = 0.1 * peak;

  const double h = g.spacing();
  const double log_lo = std::log(r_min);
  const double log_step = (std::log(r_max) - log_lo) / (n_shells - 1);
  int passing = 0;
  for (const auto& d : dirs) {
    double stat = std::numeric_limits<double>::infinity();
    for (int b = 0; b < n_shells; ++b) {
      const double r = std::exp(log_lo + b * log_step);
      std::size_t site;
      {
        auto wrap = [&](double coord) {
          long i = std::lround(coord / h);
          return static_cast<int>(((i % g.n) + g.n) % g.n);
        };
        site = g.index(wrap(r * d[0]), wrap(r * d[1]), wrap(r * d[2]));
      }
      stat = std::min(stat, r * r * u.magnitude(site));
    }
    if (stat >= rep.directional_floor) ++passing;
  }
  rep.directional_floor_fraction =
      static_cast<double>(passing) / static_cast<double>(n_directions);
  return rep;
}

std::string decay_fit_to_json(const DecayFit& fit) {
  nlohmann::json j;
  j["exponent"] = fit.exponent;
  j["intercept"] = fit.intercept;
  j["residual_rms"] = fit.residual_rms;
  j["r_min"] = fit.r_min;
  j["r_max"] = fit.r_max;
  j["n_shells"] = fit.n_shells;
  j["stat"] = fit.stat == ShellStat::max ? "max" : "l2_mean";
  return j.dump();
}

std::string NonexistenceReport::to_json() const {
  nlohmann::json j;
  j["etas"] = etas;
  j["deviations"] = deviations;
  j["offdiag"] = offdiag;
  j["eta_scaling_exponent"] = eta_scaling_exponent;
  j["quadratic_remainder_slope"] = quadratic_remainder_slope;
  j["directional_floor"] = directional_floor;
  j["directional_floor_fraction"] = directional_floor_fraction;
  return j.dump();
}

}  // namespace nsteady
