#pragma once

#include <string>
#include <vector>

#include "nsteady/field.hpp"
#include "nsteady/lorentz.hpp"

namespace nsteady {

struct PicardConfig {
  int max_iters = 40;
  double tol_rel = 1e-10;  // on the weak-3 increment, relative to ||U0||
  // Abort when an iterate's weak-3 norm exceeds growth_factor * ||U0||;
  // a small fixed point obeys ||U_k|| <= 2||U0||, so growth past 2.1x means
  // the input is outside the contraction regime.
  bool safeguard = true;
  double growth_factor = 2.1;
};

struct PicardIterationRecord {
  int iter = 0;
  double weak3 = 0.0;      // ||U_k|| weak-3
  double l2 = 0.0;         // ||U_k|| L2
  double increment = 0.0;  // ||U_k - U_{k-1}|| weak-3 (0 at iter 0)
  double ratio = 0.0;      // increment_k / increment_{k-1} (0 when undefined)
};

struct PicardTrace {
  std::vector<PicardIterationRecord> rows;
  bool converged = false;
  bool aborted_growth = false;
  int iterations = 0;

  // Header "iter,weak3_norm,l2_norm,increment,ratio" plus one row per iterate.
  std::string to_csv() const;
};

struct PicardResult {
  SpectralVectorField U;
  PicardTrace trace;
};

// Fixed-point iteration U_k = U0 + B(U_{k-1}, U_{k-1}) starting from U0 (or
// from *initial_guess when given). Convergence and safeguards are judged in
// the weak-3 norm. Non-convergence and growth aborts are reported through the
// trace, never silently.
PicardResult picard_solve(const SpectralVectorField& U0, const PicardConfig& cfg,
                          const SpectralVectorField* initial_guess = nullptr);

struct SteadyResidual {
  double weak3 = 0.0;
  double l2 = 0.0;
  double weak3_rel = 0.0;  // weak3 / ||U0||_weak3 (0 when U0 = 0)
  double l2_rel = 0.0;
};

// Norms of U - U0 - B(U, U).
SteadyResidual steady_residual(const SpectralVectorField& U,
                               const SpectralVectorField& U0);

// Pressure from the divergence of the momentum equation:
// P_hat = -(i k . f_hat + sum_jl k_j k_l W_hat_jl) / |k|^2, zero mode 0,
// with W the dealiased tensor product U (x) U.
SpectralScalarField recover_pressure(const SpectralVectorField& U,
                                     const SpectralVectorField& f);

// Sup norm of grad W + grad P - Laplacian U - f over spectral coefficients,
// relative to the force scale; small for converged fixed points.
double momentum_residual(const SpectralVectorField& U,
                         const SpectralScalarField& P,
                         const SpectralVectorField& f);

struct LpSweepEntry {
  double p = 0.0;
  NormReport solution_lp, solution_weak;
  NormReport data_lp, data_weak;  // same norms of U0
};

// Discrete L^p and L^{p,inf} norms of U and U0 for each p. Values of
// p <= 3/2 are rejected: below that exponent no small solution exists.
std::vector<LpSweepEntry> lp_norm_sweep(const SpectralVectorField& U,
                                        const SpectralVectorField& U0,
                                        const std::vector<double>& p_list);

}  // namespace nsteady
