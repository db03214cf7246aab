#include "nsteady/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "nsteady/forcing.hpp"
#include "nsteady/lorentz.hpp"
#include "nsteady/spectral.hpp"

namespace nsteady {

namespace {

double weak3(const PhysicalVectorField& u) {
  return lorentz_value(decreasing_rearrangement(u), 3.0, kInfiniteQ);
}

void check_zero_mean(const SpectralVectorField& F, const char* what) {
  double peak = 0.0;
  for (const auto& v : F.data()) peak = std::max(peak, std::abs(v));
  double mean = 0.0;
  for (int c = 0; c < 3; ++c) mean = std::max(mean, std::abs(F.at(c, 0)));
  if (mean > 1e-10 * peak && mean > 1e-14)
    throw std::invalid_argument(std::string(what) + ": nonzero mean mode");
}

void check_solenoidal(const SpectralVectorField& F, const char* what) {
  double peak = 0.0;
  for (const auto& v : F.data()) peak = std::max(peak, std::abs(v));
  const SpectralScalarField div = divergence(F);
  double defect = 0.0;
  for (const auto& v : div.data()) defect = std::max(defect, std::abs(v));
  const double scale = peak * F.grid().dealias_wavenumber();
  if (defect > 1e-8 * scale && defect > 1e-14)
    throw std::invalid_argument(std::string(what) + ": not divergence-free");
}

struct LogFit {
  double slope = 0.0, residual_rms = 0.0;
};

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
  LogFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - f.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::log(ys[i]) - intercept - f.slope * std::log(xs[i]);
    ss += d * d;
  }
  f.residual_rms = std::sqrt(ss / n);
  return f;
}

using Coeffs = std::vector<Complex>;

void axpy(Coeffs& y, double a, const Coeffs& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

SpectralVectorField duhamel_forcing(const SpectralVectorField& f, double t) {
  if (t < 0.0) throw std::invalid_argument("duhamel_forcing: t must be >= 0");
  check_zero_mean(f, "duhamel_forcing");
  SpectralVectorField out = leray_project(f);
  const Grid& g = out.grid();
  std::size_t s = 0;
  for (int iz = 0; iz < g.n; ++iz) {
    const double kz = g.wavenumber(iz);
    for (int iy = 0; iy < g.n; ++iy) {
      const double ky = g.wavenumber(iy);
      for (int ix = 0; ix < g.n; ++ix, ++s) {
        const double kx = g.wavenumber(ix);
        const double k2 = kx * kx + ky * ky + kz * kz;
        const double factor = k2 == 0.0 ? 0.0 : -std::expm1(-k2 * t) / k2;
        for (int c = 0; c < 3; ++c) out.at(c, s) *= factor;
      }
    }
  }
  return out;
}

Trajectory evolve(const SpectralVectorField& u0, const SpectralVectorField& f,
                  const EvolutionConfig& cfg,
                  const SpectralVectorField* reference) {
  const Grid& g = u0.grid();
  if (f.grid() != g || (reference && reference->grid() != g))
    throw std::invalid_argument("evolve: grids differ");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
  if (cfg.t_final < 0.0) throw std::invalid_argument("evolve: t_final < 0");
  if (!(cfg.cfl_safety > 0.0) || cfg.cfl_safety > 1.0)
    throw std::invalid_argument("evolve: cfl_safety must lie in (0, 1]");
  if (cfg.norm_stride < 1)
    throw std::invalid_argument("evolve: norm_stride must be >= 1");
  for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i) {
    const double ts = cfg.snapshot_times[i];
    if (ts < 0.0 || ts > cfg.t_final + 1e-12)
      throw std::invalid_argument("evolve: snapshot time outside [0, t_final]");
    if (i > 0 && ts < cfg.snapshot_times[i - 1])
      throw std::invalid_argument("evolve: snapshot times not sorted");
  }
  check_zero_mean(u0, "evolve u0");
  check_zero_mean(f, "evolve f");
  check_solenoidal(u0, "evolve u0");

  Trajectory traj;
  traj.grid = g;
  traj.config = cfg;
  traj.has_reference = reference != nullptr;

  SpectralVectorField u = u0;
  PhysicalVectorField u_phys = inverse_transform_real(u);

  const double max0 = max_magnitude(u_phys);
  if (max0 > 0.0 && cfg.dt > cfg.cfl_safety * g.spacing() / max0)
    throw std::invalid_argument(
        "evolve: dt violates the advective CFL limit for u0");

  const double l2_start = l2_norm(u);

  auto record = [&](double t) {
    TrajectoryPoint p;
    p.t = t;
    p.weak3 = weak3(u_phys);
    p.l2 = l2_norm(u);
    p.grad_l2 = grad_l2_norm(u);
    for (double q : cfg.q_norms)
      p.q_norms.push_back(lorentz_norm(u_phys, q, q).value);
    if (reference) {
      SpectralVectorField d = u;
      for (std::size_t i = 0; i < d.data().size(); ++i)
        d.data()[i] -= reference->data()[i];
      const PhysicalVectorField dp = inverse_transform_real(d);
      p.diff_weak3 = weak3(dp);
      p.diff_l2 = l2_norm(dp);
      for (double q : cfg.q_norms)
        p.diff_q_norms.push_back(lorentz_norm(dp, q, q).value);
    }
    traj.series.push_back(std::move(p));
  };

  std::size_t snap_idx = 0;
  auto take_snapshots = [&](double t, double half_step) {
    while (snap_idx < cfg.snapshot_times.size() &&
           cfg.snapshot_times[snap_idx] <= t + half_step) {
      traj.snapshots.emplace_back(t, u);
      ++snap_idx;
    }
  };

  record(0.0);
  take_snapshots(0.0, 0.5 * cfg.dt);

  const int n_steps =
      std::max(0, static_cast<int>(std::ceil(cfg.t_final / cfg.dt - 1e-9)));

  // One integrating-factor step of length dt: the heat factor and the Duhamel
  // integral of the constant force are exact; only the advection term is
  // advanced by the Runge-Kutta stages.
  auto step = [&](double dt) {
    const SpectralVectorField Df = duhamel_forcing(f, dt);
    SpectralVectorField base = heat_multiply(u, dt);
    axpy(base.data(), 1.0, Df.data());

    if (!cfg.nonlinear) {
      u = std::move(base);
      return;
    }

    if (cfg.scheme == TimeScheme::rk2) {
      const SpectralVectorField hN1 =
          heat_multiply(projected_advection(u, u), dt);
      SpectralVectorField pred = base;
      axpy(pred.data(), -dt, hN1.data());
      const SpectralVectorField N2 = projected_advection(pred, pred);
      u = std::move(base);
      axpy(u.data(), -0.5 * dt, hN1.data());
      axpy(u.data(), -0.5 * dt, N2.data());
      return;
    }

    const SpectralVectorField Dfh = duhamel_forcing(f, 0.5 * dt);
    SpectralVectorField half = heat_multiply(u, 0.5 * dt);
    axpy(half.data(), 1.0, Dfh.data());

    const SpectralVectorField N1 = projected_advection(u, u);
    const SpectralVectorField hN1 = heat_multiply(N1, 0.5 * dt);

    SpectralVectorField a = half;
    axpy(a.data(), -0.5 * dt, hN1.data());
    const SpectralVectorField N2 = projected_advection(a, a);

    SpectralVectorField b = std::move(half);
    axpy(b.data(), -0.5 * dt, N2.data());
    const SpectralVectorField N3 = projected_advection(b, b);

    SpectralVectorField c = base;
    axpy(c.data(), -dt, heat_multiply(N3, 0.5 * dt).data());
    const SpectralVectorField N4 = projected_advection(c, c);

    u = std::move(base);
    axpy(u.data(), -dt / 6.0, heat_multiply(hN1, 0.5 * dt).data());
    axpy(u.data(), -dt / 3.0, heat_multiply(N2, 0.5 * dt).data());
    axpy(u.data(), -dt / 3.0, heat_multiply(N3, 0.5 * dt).data());
    axpy(u.data(), -dt / 6.0, N4.data());
  };

  double t = 0.0;
  for (int k = 1; k <= n_steps; ++k) {
    const double dt =
        k == n_steps ? cfg.t_final - (n_steps - 1) * cfg.dt : cfg.dt;
    step(dt);
    t = k == n_steps ? cfg.t_final : k * cfg.dt;
    u_phys = inverse_transform_real(u);

    const double l2 = l2_norm(u);
    if (!std::isfinite(l2) || l2 > 1e6 * (l2_start + 1.0)) {
      traj.aborted_blowup = true;
      record(t);
      return traj;
    }
    const double umax = max_magnitude(u_phys);
    if (umax > 0.0 && cfg.dt > cfg.cfl_safety * g.spacing() / umax) {
      traj.aborted_cfl = true;
      record(t);
      return traj;
    }

    if (k % cfg.norm_stride == 0 || k == n_steps) record(t);
    take_snapshots(t, 0.5 * cfg.dt);
  }
  return traj;
}

std::string Trajectory::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "t,weak3_norm,l2_norm,grad_l2_norm";
  for (double q : config.q_norms) out << ",lq_" << q;
  if (has_reference) {
    out << ",diff_weak3,diff_l2";
    for (double q : config.q_norms) out << ",diff_lq_" << q;
  }
  out << '\n';
  for (const auto& p : series) {
    out << p.t << ',' << p.weak3 << ',' << p.l2 << ',' << p.grad_l2;
    for (double v : p.q_norms) out << ',' << v;
    if (has_reference) {
      out << ',' << p.diff_weak3 << ',' << p.diff_l2;
      for (double v : p.diff_q_norms) out << ',' << v;
    }
    out << '\n';
  }
  return out.str();
}

std::vector<RateFit> stability_rates(const Trajectory& traj,
                                     const std::vector<double>& q_list,
                                     double t0, double t1) {
  if (!(t0 > 0.0) || !(t1 > t0))
    throw std::invalid_argument("stability_rates: need 0 < t0 < t1");
  if (std::sqrt(t1) > traj.grid.box_length / 8.0 + 1e-12)
    throw std::invalid_argument(
        "stability_rates: sqrt(t1) beyond L/8, box confinement corrupts the fit");
  if (!traj.has_reference)
    throw std::invalid_argument("stability_rates: trajectory has no reference");

  std::vector<RateFit> out;
  for (double q : q_list) {
    int q_idx = -1;
    if (q != 2.0) {
      for (std::size_t i = 0; i < traj.config.q_norms.size(); ++i)
        if (std::abs(traj.config.q_norms[i] - q) < 1e-12)
          q_idx = static_cast<int>(i);
      if (q_idx < 0)
        throw std::invalid_argument(
            "stability_rates: requested q was not recorded");
    }
    std::vector<double> ts, vs;
    for (const auto& p : traj.series) {
      if (p.t < t0 || p.t > t1) continue;
      ts.push_back(p.t);
      vs.push_back(q == 2.0 ? p.diff_l2 : p.diff_q_norms[q_idx]);
    }
    if (ts.size() < 5)
      throw std::invalid_argument("stability_rates: fewer than 5 samples in window");
    const double scale = traj.series.front().l2;
    double vmax = 0.0;
    for (double v : vs) vmax = std::max(vmax, v);
    if (vmax <= 1e-9 * scale)
      throw std::runtime_error(
          "stability_rates: difference at the noise floor, fit degenerate");

    const LogFit lf = log_log_fit(ts, vs);
    RateFit fit;
    fit.q = q;
    fit.exponent = lf.slope;
    fit.residual_rms = lf.residual_rms;
    fit.t_min = t0;
    fit.t_max = t1;
    out.push_back(fit);
  }
  return out;
}

DifferenceProfileReport difference_profile_check(const Trajectory& traj,
                                                 const SpectralVectorField& U,
                                                 const SpectralVectorField& u0,
                                                 double q, double p, double t0,
                                                 double t1) {
  if (!(p > 1.5) || p > 3.0)
    throw std::invalid_argument("difference_profile_check: p must lie in (3/2, 3]");
  const double q_lo = 3.0 * p / (6.0 - p);
  if (q < q_lo - 1e-9 || q > p + 1e-9)
    throw std::invalid_argument(
        "difference_profile_check: q outside [3p/(6-p), p]");
  if (std::sqrt(t1) > traj.grid.box_length / 8.0 + 1e-12)
    throw std::invalid_argument("difference_profile_check: heat-length guard");
  if (U.grid() != traj.grid || u0.grid() != traj.grid)
    throw std::invalid_argument("difference_profile_check: grids differ");

  SpectralVectorField w0 = u0;
  for (std::size_t i = 0; i < w0.data().size(); ++i)
    w0.data()[i] -= U.data()[i];

  std::vector<double> ts, lhs, heat;
  for (const auto& [t, snap] : traj.snapshots) {
    if (t < t0 || t > t1) continue;
    const SpectralVectorField hw = heat_multiply(w0, t);
    SpectralVectorField d = snap;
    for (std::size_t i = 0; i < d.data().size(); ++i)
      d.data()[i] -= U.data()[i] + hw.data()[i];
    ts.push_back(t);
    lhs.push_back(lorentz_norm(inverse_transform_real(d), q, q).value);
    heat.push_back(lorentz_norm(inverse_transform_real(hw), q, q).value);
  }
  if (ts.size() < 4)
    throw std::invalid_argument(
        "difference_profile_check: fewer than 4 snapshots in window");

  DifferenceProfileReport rep;
  rep.lhs_final = lhs.back();
  rep.heat_final = heat.back();

  const double scale =
      lorentz_norm(inverse_transform_real(U), q, q).value + heat.front();
  double lhs_max = 0.0;
  for (double v : lhs) lhs_max = std::max(lhs_max, v);
  if (lhs_max <= 1e-9 * scale || heat.front() == 0.0) {
    rep.lhs_at_noise_floor = true;
    return rep;
  }

  const LogFit lf = log_log_fit(ts, lhs);
  const LogFit hf = log_log_fit(ts, heat);
  rep.lhs_fit = {q, lf.slope, lf.residual_rms, t0, t1};
  rep.heat_fit = {q, hf.slope, hf.residual_rms, t0, t1};
  rep.lhs_decays_faster = lf.slope < hf.slope;
  return rep;
}

LargeDataReport large_data_experiment(const SpectralVectorField& v0,
                                      const SpectralVectorField& w0,
                                      const SpectralVectorField& f,
                                      const EvolutionConfig& cfg,
                                      const SpectralVectorField* reference) {
  if (v0.grid() != w0.grid() || v0.grid() != f.grid())
    throw std::invalid_argument("large_data_experiment: grids differ");

  LargeDataReport rep;
  rep.a_proxy = weak3(inverse_transform_real(w0)) +
                weak3(inverse_transform_real(compute_U0(f)));
  rep.band = 22.0 * rep.a_proxy;

  SpectralVectorField u0 = v0;
  for (std::size_t i = 0; i < u0.data().size(); ++i)
    u0.data()[i] += w0.data()[i];

  rep.trajectory = evolve(u0, f, cfg, reference);
  const auto& series = rep.trajectory.series;
  rep.initial_weak3 = series.front().weak3;

  // first recorded time after which the weak-3 norm never leaves the band
  for (std::size_t i = 0; i < series.size(); ++i) {
    bool stays = true;
    for (std::size_t j = i; j < series.size(); ++j)
      if (series[j].weak3 > rep.band) {
        stays = false;
        break;
      }
    if (stays) {
      rep.entry_time = series[i].t;
      break;
    }
  }
  rep.stayed_in_band = rep.entry_time >= 0.0 &&
                       !rep.trajectory.aborted_blowup &&
                       !rep.trajectory.aborted_cfl;
  return rep;
}

std::string LargeDataReport::to_json() const {
  nlohmann::json j;
  j["a_proxy"] = a_proxy;
  j["band"] = band;
  j["entry_time"] = entry_time;
  j["stayed_in_band"] = stayed_in_band;
  j["initial_weak3"] = initial_weak3;
  j["aborted_blowup"] = trajectory.aborted_blowup;
  j["aborted_cfl"] = trajectory.aborted_cfl;
  j["samples"] = trajectory.series.size();
  return j.dump();
}

namespace {

std::array<double, 3> normalize_axis(const std::array<double, 3>& axis) {
  const double n =
      std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (!(n > 0.0)) throw std::invalid_argument("perturbation: zero axis");
  return {axis[0] / n, axis[1] / n, axis[2] / n};
}

// (x cross e) * profile(r): divergence-free for any radial profile.
SpectralVectorField swirl_field(const Grid& grid, double amplitude,
                                const std::array<double, 3>& axis,
                                const std::function<double(double)>& profile) {
  const auto e = normalize_axis(axis);
  PhysicalVectorField w(grid);
  double peak = 0.0;
  std::size_t s = 0;
  for (int iz = 0; iz < grid.n; ++iz) {
    const double z = grid.coord(iz);
    for (int iy = 0; iy < grid.n; ++iy) {
      const double y = grid.coord(iy);
      for (int ix = 0; ix < grid.n; ++ix, ++s) {
        const double x = grid.coord(ix);
        const double r = std::sqrt(x * x + y * y + z * z);
        const double f = profile(r);
        const double cx = (y * e[2] - z * e[1]) * f;
        const double cy = (z * e[0] - x * e[2]) * f;
        const double cz = (x * e[1] - y * e[0]) * f;
        w.at(0, s) = cx;
        w.at(1, s) = cy;
        w.at(2, s) = cz;
        peak = std::max(peak, std::sqrt(cx * cx + cy * cy + cz * cz));
      }
    }
  }
  if (peak > 0.0)
    for (auto& v : w.data()) v *= amplitude / peak;
  SpectralVectorField W = transform(w);
  for (int c = 0; c < 3; ++c) W.at(c, 0) = 0.0;  // exact zero mean
  dealias(W);
  // the continuum swirl is divergence-free but its band-limited samples are
  // not exactly so; project to make the discrete divergence vanish
  return leray_project(W);
}

}  // namespace

SpectralVectorField gaussian_swirl(const Grid& grid, double amplitude,
                                   double width,
                                   const std::array<double, 3>& axis) {
  if (!(width > 0.0))
    throw std::invalid_argument("gaussian_swirl: width must be positive");
  return swirl_field(grid, amplitude, axis, [width](double r) {
    return std::exp(-0.5 * r * r / (width * width));
  });
}

SpectralVectorField power_swirl(const Grid& grid, double amplitude, double decay,
                                const std::array<double, 3>& axis) {
  if (!(decay > 0.0))
    throw std::invalid_argument("power_swirl: decay must be positive");
  // smooth cutoff well before the box faces so the sampled field is periodic
  const double r0 = 0.35 * grid.box_length;
  const double r1 = 0.48 * grid.box_length;
  return swirl_field(grid, amplitude, axis, [decay, r0, r1](double r) {
    double chi = 1.0;
    if (r >= r1) {
      chi = 0.0;
    } else if (r > r0) {
      const double c = std::cos(0.5 * M_PI * (r - r0) / (r1 - r0));
      chi = c * c;
    }
    return chi / std::pow(1.0 + r * r, 0.5 * (decay + 1.0));
  });
}

PhysicalVectorField chirp_field(const Grid& grid, double amplitude,
                                const std::array<double, 3>& axis) {
  const auto e = normalize_axis(axis);
  PhysicalVectorField g(grid, /*complex_valued=*/true);
  std::size_t s = 0;
  for (int iz = 0; iz < grid.n; ++iz) {
    const double z = grid.coord(iz);
    for (int iy = 0; iy < grid.n; ++iy) {
      const double y = grid.coord(iy);
      for (int ix = 0; ix < grid.n; ++ix, ++s) {
        const double x = grid.coord(ix);
        const double r2 = x * x + y * y + z * z;
        const Complex phase{std::cos(r2), std::sin(r2)};
        const Complex v = amplitude * phase / std::sqrt(1.0 + r2);
        for (int c = 0; c < 3; ++c) g.at(c, s) = e[c] * v;
      }
    }
  }
  return g;
}

}  // namespace nsteady
