#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "nsteady/asymptotics.hpp"
#include "nsteady/evolution.hpp"
#include "nsteady/forcing.hpp"
#include "nsteady/lorentz.hpp"
#include "nsteady/spectral.hpp"
#include "nsteady/steady.hpp"

using namespace nsteady;

namespace {

double max_coeff(const SpectralVectorField& F) {
  double m = 0.0;
  for (const auto& v : F.data()) m = std::max(m, std::abs(v));
  return m;
}

double max_coeff_diff(const SpectralVectorField& a, const SpectralVectorField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double max_coeff_scalar(const SpectralScalarField& F) {
  double m = 0.0;
  for (const auto& v : F.data()) m = std::max(m, std::abs(v));
  return m;
}

double weak3(const PhysicalVectorField& f) {
  return lorentz_norm(f, 3.0, kInfiniteQ).value;
}

// cos(k x) along e_z: a single solenoidal mode pair (k aligned with e_x).
SpectralVectorField cosine_mode(const Grid& g) {
  PhysicalVectorField u(g);
  std::size_t idx = 0;
  for (int iz = 0; iz < g.n; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix, ++idx) {
        const double k1 = 2.0 * M_PI / g.box_length;
        u.at(2, idx) = std::cos(k1 * g.coord(ix));
      }
  return transform(u);
}

SpectralVectorField annulus_force(const Grid& g, double amplitude,
                                  double k_min, double k_max,
                                  std::uint64_t seed) {
  ForceSpec spec;
  spec.kind = ForceKind::fourier_annulus;
  spec.amplitude = amplitude;
  spec.k_min = k_min;
  spec.k_max = k_max;
  spec.seed = seed;
  return transform(build_force(spec, g));
}

SpectralVectorField steady_solution(const SpectralVectorField& f) {
  PicardConfig cfg;
  cfg.max_iters = 60;
  cfg.tol_rel = 1e-11;
  PicardResult res = picard_solve(compute_U0(f), cfg);
  REQUIRE(res.trace.converged);
  return res.U;
}

SpectralVectorField add(const SpectralVectorField& a,
                        const SpectralVectorField& b) {
  SpectralVectorField out = a;
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] += b.data()[i];
  return out;
}

}  // namespace

TEST_CASE("forcing integral is zero at t = 0 and rejects negative times") {
  Grid g = make_grid(16, 2.0 * M_PI);
  SpectralVectorField f = annulus_force(g, 0.3, 1.5, 4.5, 5);
  CHECK(max_coeff(duhamel_forcing(f, 0.0)) == 0.0);
  CHECK_THROWS_AS(duhamel_forcing(f, -0.1), std::invalid_argument);
}

TEST_CASE("forcing integral on a unit mode carries the closed-form factor") {
  Grid g = make_grid(16, 2.0 * M_PI);
  SpectralVectorField f = cosine_mode(g);  // |k|^2 = 1, already solenoidal
  SpectralVectorField d = duhamel_forcing(f, 1.0);
  const double factor = 1.0 - std::exp(-1.0);
  SpectralVectorField expected = f;
  for (auto& v : expected.data()) v *= factor;
  CHECK(max_coeff_diff(d, expected) < 1e-14);

  // t -> infinity limit is the Stokes balance for the same force
  SpectralVectorField late = duhamel_forcing(f, 80.0);
  CHECK(max_coeff_diff(late, compute_U0(f)) < 1e-14);
}

TEST_CASE("forcing integral matches midpoint time quadrature") {
  Grid g = make_grid(24, 2.0 * M_PI);
  SpectralVectorField f = annulus_force(g, 0.4, 1.5, 3.5, 9);
  const double t = 0.5;
  const int m = 512;
  SpectralVectorField pf = leray_project(f);
  SpectralVectorField sum(g);
  for (int j = 0; j < m; ++j) {
    const double s = (j + 0.5) * t / m;
    SpectralVectorField h = heat_multiply(pf, t - s);
    for (std::size_t i = 0; i < sum.data().size(); ++i)
      sum.data()[i] += h.data()[i] * (t / m);
  }
  SpectralVectorField d = duhamel_forcing(f, t);
  CHECK(max_coeff_diff(d, sum) < 1e-8);
}

TEST_CASE("with the advection term disabled the stepper is exact") {
  Grid g = make_grid(16, 2.0 * M_PI);
  SpectralVectorField u0 = cosine_mode(g);

  EvolutionConfig cfg;
  cfg.dt = 0.1;
  cfg.t_final = 0.8;
  cfg.snapshot_times = {0.8};
  cfg.norm_stride = 100;
  cfg.nonlinear = false;

  SUBCASE("free heat decay of a single mode") {
    SpectralVectorField f(g);
    Trajectory traj = evolve(u0, f, cfg);
    REQUIRE(traj.snapshots.size() == 1);
    SpectralVectorField expected = heat_multiply(u0, 0.8);
    CHECK(max_coeff_diff(traj.snapshots[0].second, expected) < 1e-10);
  }

  SUBCASE("heat plus forcing integral under a steady force") {
    SpectralVectorField f = annulus_force(g, 0.3, 1.5, 4.5, 5);
    Trajectory traj = evolve(u0, f, cfg);
    REQUIRE(traj.snapshots.size() == 1);
    SpectralVectorField expected = add(heat_multiply(u0, 0.8),
                                       duhamel_forcing(f, 0.8));
    CHECK(max_coeff_diff(traj.snapshots[0].second, expected) < 1e-10);
  }
}

TEST_CASE("the steady solution is a discrete equilibrium of the stepper") {
  // Wide box so the rate-fit windows below clear the heat-length guard.
  Grid g = make_grid(32, 30.0);
  SpectralVectorField f = annulus_force(g, 0.02, 0.8, 1.6, 7);
  SpectralVectorField U = steady_solution(f);

  EvolutionConfig cfg;
  cfg.dt = 0.05;
  cfg.t_final = 10.0;
  cfg.scheme = TimeScheme::rk4;  // rk2's O(dt^2) fixed-point shift is ~1e-5
  cfg.norm_stride = 20;
  cfg.snapshot_times = {2.0, 4.0, 6.0, 8.0};
  Trajectory traj = evolve(U, f, cfg, &U);
  REQUIRE_FALSE(traj.aborted_blowup);
  REQUIRE_FALSE(traj.aborted_cfl);

  const double uref = l2_norm(U);
  for (const auto& p : traj.series) CHECK(p.diff_l2 <= 1e-6 * uref);

  SUBCASE("a vanishing difference is rejected as a degenerate rate fit") {
    CHECK_THROWS_AS(stability_rates(traj, {2.0}, 1.0, 9.0), std::runtime_error);
  }
  SUBCASE("the profile comparison reports the noise floor for w0 = 0") {
    DifferenceProfileReport rep =
        difference_profile_check(traj, U, U, 2.0, 2.0, 2.0, 8.0);
    CHECK(rep.lhs_at_noise_floor);
  }
}

TEST_CASE("step-halving reproduces the scheme orders") {
  Grid g = make_grid(32, 2.0 * M_PI);
  SpectralVectorField f = annulus_force(g, 0.5, 1.5, 4.5, 3);
  SpectralVectorField u0 = gaussian_swirl(g, 0.5, 1.0, {0.0, 0.0, 1.0});

  auto final_state = [&](TimeScheme scheme, double dt) {
    EvolutionConfig cfg;
    cfg.dt = dt;
    cfg.t_final = 1.0;
    cfg.scheme = scheme;
    cfg.snapshot_times = {1.0};
    cfg.norm_stride = 1000;
    Trajectory traj = evolve(u0, f, cfg);
    REQUIRE(traj.snapshots.size() == 1);
    return traj.snapshots[0].second;
  };

  auto diff_l2 = [](const SpectralVectorField& a, const SpectralVectorField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
      s += std::norm(a.data()[i] - b.data()[i]);
    return std::sqrt(s);
  };

  const double dt0 = 0.05;
  for (auto [scheme, order] :
       {std::pair{TimeScheme::rk2, 2.0}, {TimeScheme::rk4, 4.0}}) {
    SpectralVectorField a = final_state(scheme, dt0);
    SpectralVectorField b = final_state(scheme, dt0 / 2.0);
    SpectralVectorField c = final_state(scheme, dt0 / 4.0);
    const double ratio = diff_l2(a, b) / diff_l2(b, c);
    const double expected = std::pow(2.0, order);
    CHECK(ratio > 0.8 * expected);
    CHECK(ratio < 1.2 * expected);
  }
}

TEST_CASE("trajectory invariants: solenoidal snapshots and the a-priori bound") {
  Grid g = make_grid(32, 2.0 * M_PI);
  SpectralVectorField f = annulus_force(g, 0.05, 1.5, 4.5, 11);
  SpectralVectorField U = steady_solution(f);
  SpectralVectorField u0 = add(U, gaussian_swirl(g, 0.05, 0.8, {0.0, 1.0, 0.0}));

  EvolutionConfig cfg;
  cfg.dt = 0.05;
  cfg.t_final = 6.0;
  cfg.norm_stride = 5;
  cfg.snapshot_times = {1.0, 3.0, 6.0};
  Trajectory traj = evolve(u0, f, cfg);
  REQUIRE_FALSE(traj.aborted_blowup);
  REQUIRE_FALSE(traj.aborted_cfl);

  for (const auto& [t, snap] : traj.snapshots) {
    const double div = max_coeff_scalar(divergence(snap));
    CHECK(div <= 1e-10 * g.dealias_wavenumber() * max_coeff(snap));
  }

  const double bound = 2.0 * weak3(inverse_transform_real(u0)) +
                       4.0 * weak3(inverse_transform_real(compute_U0(f)));
  for (const auto& p : traj.series) CHECK(p.weak3 <= 1.1 * bound);
}

TEST_CASE("unforced runs obey the discrete energy inequality") {
  Grid g = make_grid(32, 2.0 * M_PI);
  SpectralVectorField f(g);
  SpectralVectorField u0 = gaussian_swirl(g, 0.5, 1.0, {1.0, 0.0, 0.0});

  EvolutionConfig cfg;
  cfg.dt = 0.005;
  cfg.t_final = 1.0;
  cfg.norm_stride = 1;
  Trajectory traj = evolve(u0, f, cfg);
  REQUIRE_FALSE(traj.aborted_blowup);

  // Simpson in time: the trapezoid rule over-credits the dissipation of the
  // fast modes and breaks the inequality spuriously at this step size.
  const auto& s = traj.series;
  const double e0 = s.front().l2 * s.front().l2;
  auto g2 = [&](std::size_t j) { return s[j].grad_l2 * s[j].grad_l2; };
  double dissipated = 0.0;
  for (std::size_t i = 2; i < s.size(); i += 2) {
    dissipated += (s[i].t - s[i - 1].t) / 3.0 *
                  (g2(i - 2) + 4.0 * g2(i - 1) + g2(i));
    CHECK(s[i].l2 * s[i].l2 + 2.0 * dissipated <= e0 * (1.0 + 1e-6));
  }
  for (std::size_t i = 1; i < s.size(); ++i)
    CHECK(s[i].l2 <= s[i - 1].l2 * (1.0 + 1e-12));  // monotone for f = 0
}

TEST_CASE("the stepper rejects initial data violating the advective limit") {
  Grid g = make_grid(16, 2.0 * M_PI);
  SpectralVectorField f(g);
  SpectralVectorField u0 = gaussian_swirl(g, 50.0, 1.0, {0.0, 0.0, 1.0});
  EvolutionConfig cfg;
  cfg.dt = 1.0;
  cfg.t_final = 2.0;
  CHECK_THROWS_AS(evolve(u0, f, cfg), std::invalid_argument);
}

TEST_CASE("perturbed steady states relax at the expected norm rates") {
  // The power-law swirl tail sits in the borderline decay class for which the
  // difference should shed its q-norms like t^{-(3/2)(1/3 - 1/q)}. The fit
  // window starts once the core has smoothed and ends before the truncated
  // tail is exhausted by the heat length.
  Grid g = make_grid(64, 40.0);
  SpectralVectorField f = annulus_force(g, 0.02, 0.8, 1.6, 7);
  SpectralVectorField U = steady_solution(f);
  SpectralVectorField u0 = add(U, power_swirl(g, 0.2, 1.0, {0.0, 0.0, 1.0}));

  EvolutionConfig cfg;
  cfg.dt = 0.25;
  cfg.t_final = 3.0;
  cfg.q_norms = {4.0, 6.0};
  cfg.norm_stride = 1;
  Trajectory traj = evolve(u0, f, cfg, &U);
  REQUIRE_FALSE(traj.aborted_blowup);
  REQUIRE_FALSE(traj.aborted_cfl);

  std::vector<RateFit> fits = stability_rates(traj, {4.0, 6.0}, 0.5, 3.0);
  REQUIRE(fits.size() == 2);
  CHECK(std::abs(fits[0].exponent - (-0.125)) <= 0.05);
  CHECK(std::abs(fits[1].exponent - (-0.25)) <= 0.07);

  SUBCASE("fit windows past the heat-length guard are rejected") {
    CHECK_THROWS_AS(stability_rates(traj, {4.0}, 0.5, 26.0),
                    std::invalid_argument);
  }
  SUBCASE("unrecorded exponents are rejected") {
    CHECK_THROWS_AS(stability_rates(traj, {5.0}, 0.5, 3.0),
                    std::invalid_argument);
  }
}

TEST_CASE("the nonlinear correction decays faster than the heat part") {
  // Steeper tail: the perturbation decays like r^{-2}, for which the full
  // difference sheds L2 mass like t^{-1/4} while the correction beyond the
  // free heat evolution drops off faster still.
  Grid g = make_grid(64, 40.0);
  SpectralVectorField f = annulus_force(g, 0.02, 0.8, 1.6, 7);
  SpectralVectorField U = steady_solution(f);
  SpectralVectorField u0 = add(U, power_swirl(g, 0.2, 2.0, {0.0, 0.0, 1.0}));

  EvolutionConfig cfg;
  cfg.dt = 0.25;
  cfg.t_final = 12.0;
  cfg.norm_stride = 1;
  cfg.snapshot_times = {1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0, 12.0};
  Trajectory traj = evolve(u0, f, cfg, &U);
  REQUIRE_FALSE(traj.aborted_blowup);
  REQUIRE_FALSE(traj.aborted_cfl);

  std::vector<RateFit> l2fit = stability_rates(traj, {2.0}, 0.5, 3.0);
  CHECK(std::abs(l2fit[0].exponent - (-0.25)) <= 0.07);

  DifferenceProfileReport rep =
      difference_profile_check(traj, U, u0, 2.0, 2.0, 1.5, 12.0);
  REQUIRE_FALSE(rep.lhs_at_noise_floor);
  CHECK(rep.lhs_fit.exponent <= -0.25 + 0.07);  // the bound is one-sided
  CHECK(rep.lhs_decays_faster);
  CHECK(rep.lhs_final <= 0.05 * rep.heat_final);

  SUBCASE("exponent brackets are enforced") {
    CHECK_THROWS_AS(difference_profile_check(traj, U, u0, 3.0, 2.0, 1.5, 12.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(difference_profile_check(traj, U, u0, 2.0, 1.2, 1.5, 12.0),
                    std::invalid_argument);
  }
}

TEST_CASE("an L2 bump perturbation is fully absorbed") {
  Grid g = make_grid(32, 2.0 * M_PI);
  SpectralVectorField f = annulus_force(g, 0.05, 1.5, 4.5, 11);
  SpectralVectorField U = steady_solution(f);
  SpectralVectorField u0 = add(U, gaussian_swirl(g, 0.2, 0.8, {0.0, 0.0, 1.0}));

  EvolutionConfig cfg;
  cfg.dt = 0.05;
  cfg.t_final = 8.0;
  cfg.norm_stride = 20;
  Trajectory traj = evolve(u0, f, cfg, &U);
  REQUIRE_FALSE(traj.aborted_blowup);
  REQUIRE_FALSE(traj.aborted_cfl);

  const double d0 = traj.series.front().diff_l2;
  CHECK(traj.series.back().diff_l2 <= 1e-3 * d0);
}

TEST_CASE("a large bump forgets its initial size and enters the small band") {
  Grid g = make_grid(48, 30.0);
  SpectralVectorField f = annulus_force(g, 0.02, 0.8, 1.6, 7);
  SpectralVectorField v0 = gaussian_swirl(g, 2.0, 3.0, {0.0, 0.0, 1.0});
  SpectralVectorField w0(g);

  EvolutionConfig cfg;
  cfg.dt = 0.1;
  cfg.t_final = 15.0;
  cfg.norm_stride = 10;
  LargeDataReport rep = large_data_experiment(v0, w0, f, cfg);

  CHECK(rep.initial_weak3 > 3.0 * rep.band);
  CHECK(rep.entry_time > 0.0);
  CHECK(rep.entry_time <= 12.0);
  CHECK(rep.stayed_in_band);
  CHECK_FALSE(rep.trajectory.aborted_blowup);
  CHECK_FALSE(rep.trajectory.aborted_cfl);
  CHECK(rep.to_json().find("\"stayed_in_band\":true") != std::string::npos);
}

TEST_CASE("without forcing a large bump decays outright") {
  Grid g = make_grid(32, 2.0 * M_PI);
  SpectralVectorField f(g);
  SpectralVectorField v0 = gaussian_swirl(g, 2.0, 1.0, {0.0, 0.0, 1.0});
  SpectralVectorField w0(g);

  EvolutionConfig cfg;
  cfg.dt = 0.02;
  cfg.t_final = 2.0;
  cfg.norm_stride = 5;
  LargeDataReport rep = large_data_experiment(v0, w0, f, cfg);

  const auto& series = rep.trajectory.series;
  for (std::size_t i = 1; i < series.size(); ++i)
    CHECK(series[i].l2 <= series[i - 1].l2 * (1.0 + 1e-12));
  CHECK(series.back().l2 < 0.5 * series.front().l2);
}

TEST_CASE("the chirp loses its weak-3 mass under the heat flow") {
  Grid g = make_grid(48, 30.0);
  PhysicalVectorField c = chirp_field(g, 1.0, {0.0, 0.0, 1.0});
  SpectralVectorField C = transform(c);
  const double w_start = weak3(c);
  REQUIRE(w_start > 0.0);
  CHECK(weak3(inverse_transform(heat_multiply(C, 1.0))) <= w_start / 10.0);
  CHECK(weak3(inverse_transform(heat_multiply(C, 4.0))) <= w_start / 20.0);
}

TEST_CASE("perturbation builders produce clean solenoidal bumps") {
  Grid g = make_grid(32, 20.0);

  SUBCASE("gaussian swirl") {
    SpectralVectorField w = gaussian_swirl(g, 0.3, 2.0, {0.0, 0.0, 1.0});
    CHECK(std::abs(w.at(0, 0)) + std::abs(w.at(1, 0)) + std::abs(w.at(2, 0)) ==
          0.0);
    const double div = max_coeff_scalar(divergence(w));
    CHECK(div <= 1e-10 * g.dealias_wavenumber() * max_coeff(w));
    const double peak = max_magnitude(inverse_transform_real(w));
    CHECK(peak == doctest::Approx(0.3).epsilon(0.05));
  }
  SUBCASE("power swirl magnitude follows its nominal tail exponent") {
    SpectralVectorField w = power_swirl(g, 0.3, 1.0, {0.0, 0.0, 1.0});
    const double div = max_coeff_scalar(divergence(w));
    CHECK(div <= 1e-10 * g.dealias_wavenumber() * max_coeff(w));
    DecayFit fit = shell_decay_fit(inverse_transform_real(w), 2.0, 5.0, 8,
                                   ShellStat::l2_mean);
    CHECK(fit.exponent == doctest::Approx(-1.0).epsilon(0.35));
  }
  SUBCASE("degenerate parameters are rejected") {
    CHECK_THROWS_AS(gaussian_swirl(g, 0.1, -1.0, {0.0, 0.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(power_swirl(g, 0.1, 0.0, {0.0, 0.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(gaussian_swirl(g, 0.1, 1.0, {0.0, 0.0, 0.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("trajectory CSV carries the difference columns when referenced") {
  Grid g = make_grid(16, 2.0 * M_PI);
  SpectralVectorField f = annulus_force(g, 0.05, 1.5, 4.5, 11);
  SpectralVectorField u0 = compute_U0(f);

  EvolutionConfig cfg;
  cfg.dt = 0.1;
  cfg.t_final = 0.3;
  cfg.q_norms = {4.0};
  Trajectory traj = evolve(u0, f, cfg, &u0);
  std::string csv = traj.to_csv();
  CHECK(csv.rfind("t,weak3_norm,l2_norm,grad_l2_norm,lq_4,diff_weak3,diff_l2,diff_lq_4\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') ==
        static_cast<long>(traj.series.size()) + 1);
}
