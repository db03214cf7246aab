#pragma once

#include <limits>
#include <string>
#include <vector>

#include "nsteady/field.hpp"

namespace nsteady {

// One computed norm estimate, serializable as a JSON line.
struct NormReport {
  std::string space;  // "lorentz" | "weak" | "weighted_sup" | "morrey" | "lebesgue"
  double p = 0.0;
  double q_or_theta = 0.0;  // q for lorentz/morrey, theta for weighted_sup
  double value = 0.0;
  int grid_n = 0;
  double grid_box_length = 0.0;
  std::string notes;

  std::string to_json_line() const;
};

// Decreasing rearrangement of the pointwise magnitudes: f*(t) is the step
// function taking values[r] on [r*measure_step, (r+1)*measure_step).
struct Rearrangement {
  std::vector<double> values;  // nonincreasing
  double measure_step = 0.0;   // cell volume
};

Rearrangement decreasing_rearrangement(std::vector<double> magnitudes,
                                       double cell_volume);
Rearrangement decreasing_rearrangement(const PhysicalVectorField& field);
Rearrangement decreasing_rearrangement(const PhysicalScalarField& field);

inline constexpr double kInfiniteQ = std::numeric_limits<double>::infinity();

// Discrete L^{p,q} norm from the rearrangement, 1 < p < inf.
// q = kInfiniteQ gives the weak norm sup_t t^{1/p} f*(t); finite q integrates
// f*(t)^q t^{q/p} dt/t exactly over the step function, which makes the (p,p)
// norm coincide with the plain discrete L^p norm.
double lorentz_value(const Rearrangement& r, double p, double q);

// Weak-norm estimate that skips the first min_rank - 1 ranks. For fields with
// a point singularity the raw sup is attained on the handful of cells touching
// it, where the lattice count of a tiny ball overshoots its volume by a
// scale-invariant factor (about 1.43 at rank 8); ignoring sub-resolution
// scales recovers the plateau value the estimator is after.
double weak_value_resolved(const Rearrangement& r, double p, std::size_t min_rank);

NormReport lorentz_norm(const PhysicalVectorField& field, double p, double q);
NormReport lorentz_norm(const PhysicalScalarField& field, double p, double q);

// sup over grid points of |x|^theta |f(x)|. coord_offset shifts every sample
// coordinate by the same amount per axis (used for half-cell offset sampling
// of functions singular at the origin).
NormReport weighted_sup_norm(const PhysicalVectorField& field, double theta,
                             double coord_offset = 0.0);
NormReport weighted_sup_norm(const PhysicalScalarField& field, double theta,
                             double coord_offset = 0.0);

// Lower bound for the Morrey norm sup over balls of
// R^{3/p - 3/q} (integral over the ball of |f|^q)^{1/q}, maximized over a
// coarse sublattice of centers (every center_stride-th point per axis) and
// the supplied radii. Balls are not wrapped periodically: only cells inside
// the box contribute, so the result underestimates the true sup.
NormReport morrey_norm_lower_bound(const PhysicalVectorField& field, double p,
                                   double q, int center_stride,
                                   const std::vector<double>& radii,
                                   double coord_offset = 0.0);
NormReport morrey_norm_lower_bound(const PhysicalScalarField& field, double p,
                                   double q, int center_stride,
                                   const std::vector<double>& radii,
                                   double coord_offset = 0.0);

// Splits f into f1 = f on {|f| > threshold}, f2 = f on {|f| <= threshold},
// choosing the largest sample-attained threshold for which the discrete
// weak-3 norm of f2 stays below epsilon. Throws when even the smallest
// nonzero sample pushes f2 past epsilon (the target is below what the grid
// can resolve).
struct ThresholdSplit {
  PhysicalVectorField large_part;  // f1, compactly supported spikes
  PhysicalVectorField small_part;  // f2, bounded by threshold
  double threshold = 0.0;
  double small_part_weak3 = 0.0;
};

ThresholdSplit threshold_split(const PhysicalVectorField& field, double epsilon);

}  // namespace nsteady
