#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "nsteady/field.hpp"

namespace nsteady {

enum class TimeScheme { rk2, rk4 };

struct EvolutionConfig {
  double dt = 0.0;
  double t_final = 0.0;
  TimeScheme scheme = TimeScheme::rk2;
  std::vector<double> snapshot_times;  // sorted, within [0, t_final]
  // Advective stability: dt must stay below cfl_safety * spacing / max|u|
  // (the heat part is integrated exactly and imposes no constraint).
  double cfl_safety = 0.9;
  std::vector<double> q_norms;  // extra Lebesgue exponents recorded per sample
  int norm_stride = 1;          // record the norm series every k-th step
  bool nonlinear = true;        // test hook: false drops the advection term
};

struct TrajectoryPoint {
  double t = 0.0;
  double weak3 = 0.0, l2 = 0.0, grad_l2 = 0.0;
  std::vector<double> q_norms;
  // norms of u(t) - U when a reference steady field was supplied
  double diff_weak3 = 0.0, diff_l2 = 0.0;
  std::vector<double> diff_q_norms;
};

struct Trajectory {
  Grid grid;
  EvolutionConfig config;
  std::vector<std::pair<double, SpectralVectorField>> snapshots;
  std::vector<TrajectoryPoint> series;
  bool has_reference = false;
  bool aborted_blowup = false;  // norms left the trusted range mid-run
  bool aborted_cfl = false;     // advective limit violated mid-run

  // t,weak3_norm,l2_norm,grad_l2_norm[,lq_<q>...][,diff_...]
  std::string to_csv() const;
};

// Closed-form Duhamel integral of a constant-in-time force:
// coefficient (1 - e^{-|k|^2 t}) / |k|^2 times the solenoidal part of f,
// zero at k = 0. Requires t >= 0 and zero-mean f.
SpectralVectorField duhamel_forcing(const SpectralVectorField& f, double t);

// Integrating-factor time stepper for the mild equation
// u(t) = e^{t Lap} u0 + duhamel(f, t) - int_0^t e^{(t-s) Lap} P div(u (x) u):
// the heat factor is exact, the forcing uses the closed-form Duhamel integral
// per step, and the advection term advances at the configured Runge-Kutta
// order. u0 and f must be real, zero-mean and (for u0) divergence-free.
// Blow-up and mid-run CFL violations stop the run and are flagged on the
// returned trajectory, never thrown.
Trajectory evolve(const SpectralVectorField& u0, const SpectralVectorField& f,
                  const EvolutionConfig& cfg,
                  const SpectralVectorField* reference = nullptr);

struct RateFit {
  double q = 0.0;
  double exponent = 0.0;
  double residual_rms = 0.0;
  double t_min = 0.0, t_max = 0.0;
};

// Log-log fits of ||u(t) - U||_{L^q} against t over [t0, t1] from the
// recorded norm series. Requires the trajectory to carry difference norms
// (reference supplied to evolve) with each q recorded; q = 2 uses the L2
// column. Enforces the heat-length guard sqrt(t1) <= L/8 and rejects
// difference series at the integrator noise floor as degenerate.
std::vector<RateFit> stability_rates(const Trajectory& traj,
                                     const std::vector<double>& q_list,
                                     double t0, double t1);

struct DifferenceProfileReport {
  RateFit lhs_fit;       // ||u(t) - U - e^{t Lap}(u0 - U)||_q
  RateFit heat_fit;      // ||e^{t Lap}(u0 - U)||_q
  double lhs_final = 0.0;
  double heat_final = 0.0;
  bool lhs_at_noise_floor = false;  // w0 = 0 case: no fit attempted
  bool lhs_decays_faster = false;
};

// Compares the nonlinear part of the difference u(t) - U against the free
// heat evolution of w0 = u0 - U at the snapshot times inside [t0, t1].
// The declared exponents must satisfy p in (3/2, 3] and 3p/(6-p) <= q <= p.
DifferenceProfileReport difference_profile_check(const Trajectory& traj,
                                                 const SpectralVectorField& U,
                                                 const SpectralVectorField& u0,
                                                 double q, double p, double t0,
                                                 double t1);

struct LargeDataReport {
  double a_proxy = 0.0;      // weak-3 of the small part + weak-3 of -Lap^{-1} P f
  double band = 0.0;         // 22 * a_proxy
  double entry_time = -1.0;  // first recorded time after which weak-3 <= band
  bool stayed_in_band = false;
  double initial_weak3 = 0.0;
  Trajectory trajectory;
  std::string to_json() const;
};

// Evolves u0 = v0 + w0 (large part + small part) and reports when the weak-3
// norm of the solution enters the band 22 * (discrete smallness proxy) and
// whether it stays there until t_final. The proxy replaces the paper-style
// local smallness quantity with grid weak-3 norms.
LargeDataReport large_data_experiment(const SpectralVectorField& v0,
                                      const SpectralVectorField& w0,
                                      const SpectralVectorField& f,
                                      const EvolutionConfig& cfg,
                                      const SpectralVectorField* reference =
                                          nullptr);

// Divergence-free perturbation builders, all peak-normalized to `amplitude`
// and band-limited by the 2/3 rule.
// Gaussian swirl (x cross axis) e^{-r^2 / 2 width^2}: an L2-and-better bump.
SpectralVectorField gaussian_swirl(const Grid& grid, double amplitude,
                                   double width,
                                   const std::array<double, 3>& axis);

// Power-law swirl (x cross axis) / <x>^{decay+1}, magnitude ~ r^{-decay} in
// the mid range, smoothly cut to zero before the box faces. decay = 1 sits in
// weak-3, decay = 2 in weak-3/2.
SpectralVectorField power_swirl(const Grid& grid, double amplitude,
                                double decay,
                                const std::array<double, 3>& axis);

// Complex chirp e^{i |x|^2} / <x> along a fixed direction: bounded weak-3
// norm but no decay of the profile itself; its heat evolution spreads the
// oscillation and drives the weak-3 norm down (linear test hook only).
PhysicalVectorField chirp_field(const Grid& grid, double amplitude,
                                const std::array<double, 3>& axis);

}  // namespace nsteady
