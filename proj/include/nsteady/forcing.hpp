#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "nsteady/field.hpp"

namespace nsteady {

enum class ForceKind {
  regularized_dirac,  // Gaussian bump along a direction, mean removed
  fourier_annulus,    // random phases on a spectral shell k_min <= |k| <= k_max
  symmetric_annulus,  // annulus followed by symmetry-group averaging
  wave_packet,        // annulus carrier under a Gaussian spatial envelope
  custom_snapshot,    // loaded from an NSF1 file
};

struct ForceSpec {
  ForceKind kind = ForceKind::fourier_annulus;
  double amplitude = 1.0;  // peak pointwise magnitude of the built force

  // regularized_dirac
  std::array<double, 3> direction{1.0, 0.0, 0.0};
  double width = 0.0;  // sigma of the Gaussian; must resolve >= 2 cells

  // fourier_annulus / symmetric_annulus / wave_packet
  double k_min = 0.0;
  double k_max = 0.0;
  std::uint64_t seed = 1;

  // wave_packet: Gaussian envelope width in physical units (0 = L/8)
  double envelope_width = 0.0;

  // custom_snapshot
  std::string snapshot_path;
};

// Builds the force on the grid. Output is real-valued with exactly zero
// spatial mean. Annulus and wave-packet forces are band-limited to the
// dealias sphere and scaled so their peak magnitude equals spec.amplitude;
// for regularized_dirac the amplitude is the signed integral of the bump
// before mean removal; custom_snapshot is taken as stored apart from mean
// removal.
PhysicalVectorField build_force(const ForceSpec& spec, const Grid& grid);

// First Picard iterate: solves the Stokes balance for the given force, i.e.
// minus the inverse Laplacian of its solenoidal part. Rejects forces with a
// nonzero mean mode.
SpectralVectorField compute_U0(const SpectralVectorField& force);

// Averages the field over the 24-element group generated by the cyclic
// coordinate shift R: (x1,x2,x3) -> (x2,x3,x1) and the reflection
// S: (x1,x2,x3) -> (-x1,x2,x3), making it exactly R,S-symmetric.
void symmetrize(PhysicalVectorField& field);

// Largest violation of f(Gx) = G f(x) over G in {R, S}, relative to the
// peak field magnitude (0 for the zero field).
double symmetry_defect(const PhysicalVectorField& field);

// Axisymmetric exact steady jet profile, homogeneous of degree -1.
struct LandauParams {
  std::array<double, 3> axis{1.0, 0.0, 0.0};  // normalized on use
  double a = 2.0;                             // profile parameter, > 1
};

// Closed-form velocity at a point (undefined at the origin).
std::array<double, 3> landau_velocity(const LandauParams& params, double x,
                                      double y, double z);

// Samples the closed form on the grid with every coordinate shifted by
// coord_offset (use half a cell so the origin is never evaluated).
PhysicalVectorField landau_field(const LandauParams& params, const Grid& grid,
                                 double coord_offset);

}  // namespace nsteady
