#pragma once

#include <array>
#include <string>
#include <vector>

#include "nsteady/field.hpp"

namespace nsteady {

enum class ShellStat { max, l2_mean };

struct DecayFit {
  double exponent = 0.0;
  double intercept = 0.0;      // log-log fit intercept
  double residual_rms = 0.0;   // RMS of log residuals
  double r_min = 0.0, r_max = 0.0;
  int n_shells = 0;
  ShellStat stat = ShellStat::max;
};

// (shell radius, shell statistic of |field|) over log-spaced shells.
std::vector<std::pair<double, double>> shell_profile(
    const PhysicalVectorField& field, double r_min, double r_max, int n_shells,
    ShellStat stat, double coord_offset = 0.0);

// Least-squares slope of log(stat) vs log(r). Requires n_shells >= 6 and
// r_max <= L/4 (beyond that the periodic wrap distorts radii); throws when a
// shell ends up empty.
DecayFit shell_decay_fit(const PhysicalVectorField& field, double r_min,
                         double r_max, int n_shells, ShellStat stat,
                         double coord_offset = 0.0);

// Gram matrix of velocity components: M_hl = sum_x U_h U_l * cell_volume.
struct MomentumMatrix {
  std::array<std::array<double, 3>, 3> m{};
  double frobenius() const;
};

MomentumMatrix momentum_matrix(const PhysicalVectorField& U);

// ||M - (tr M / 3) I||_F / ||M||_F, in [0, 1]. Zero matrix is rejected.
double anisotropy_deviation(const MomentumMatrix& M);

// Far-field profile kernel contracted with M at a point:
// [m(x):M]_j = -sum_{h,l} (d/dx_h of the Oseen tensor entry jl) * M_hl,
// homogeneous of degree -2 and identically zero when M is a multiple of I.
std::array<double, 3> stokes_profile_at(const MomentumMatrix& M, double x,
                                        double y, double z);

// Samples the profile term on the grid (offset shifts every coordinate; the
// exact origin, if sampled, falls back to the half-spacing cell corner).
PhysicalVectorField stokes_profile_term(const MomentumMatrix& M, const Grid& grid,
                                        double coord_offset = 0.0);

// Same contraction evaluated through the Fourier multiplier
// -i k_h (delta_jl - k_j k_l/|k|^2)/|k|^2 on the grid. Reconstructs the
// periodized kernel from a Gaussian-mollified source with the smoothing bias
// extrapolated away; used as the convention oracle for stokes_profile_term.
// Note the result is the periodic kernel: away-from-origin comparisons must
// periodize the closed form over neighbor images.
PhysicalVectorField stokes_profile_term_spectral(const MomentumMatrix& M,
                                                 const Grid& grid);

struct ProfileResidual {
  PhysicalVectorField residual;  // U - U0 - m(x):M on grid samples
  DecayFit fit;
};

ProfileResidual profile_residual(const SpectralVectorField& U,
                                 const SpectralVectorField& U0,
                                 const MomentumMatrix& M, double r_min,
                                 double r_max, int n_shells, ShellStat stat);

// One member of a small-amplitude family: the solve at force scale eta.
struct AmplitudeSample {
  double eta = 0.0;
  SpectralVectorField U;
  SpectralVectorField U0;
};

struct NonexistenceReport {
  std::vector<double> etas;
  std::vector<double> deviations;        // anisotropy deviation per eta
  std::vector<double> offdiag;           // |M^{12}| per eta
  double eta_scaling_exponent = 0.0;     // slope of log|M^{12}| vs log eta
  double quadratic_remainder_slope = 0.0;  // slope of log|M - eta^2 W| vs log eta
  double directional_floor_fraction = 0.0;
  double directional_floor = 0.0;
  std::string to_json() const;
};

// Diagnostics for the nonexistence mechanism: eta^2 growth of the momentum
// off-diagonal, cubic smallness of its remainder against the unit-amplitude
// reference, and the fraction of sphere directions where r^2 |U| of the
// largest sample stays above 10% of the peak predicted profile magnitude
// (reported as 0 when the predicted profile vanishes).
NonexistenceReport nonexistence_diagnostic(
    const std::vector<AmplitudeSample>& family, double r_min, double r_max,
    int n_shells, int n_directions = 500);

std::string decay_fit_to_json(const DecayFit& fit);

}  // namespace nsteady
