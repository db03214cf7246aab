#pragma once

#include "nsteady/field.hpp"

namespace nsteady {

// Forward transform, normalization 1/n^3 (constant field c -> coeff c at k=0).
SpectralVectorField transform(const PhysicalVectorField& field);
PhysicalVectorField inverse_transform(const SpectralVectorField& field);
SpectralScalarField transform(const PhysicalScalarField& field);
PhysicalScalarField inverse_transform(const SpectralScalarField& field);

// Inverse transform of a field known to be real-valued: imaginary round-off
// is dropped and the result is flagged real.
PhysicalVectorField inverse_transform_real(const SpectralVectorField& field);

// Leray projection: multiplier delta_jl - k_j k_l / |k|^2 for k != 0, the
// k = 0 mode passes through unchanged.
SpectralVectorField leray_project(const SpectralVectorField& field);

// Multiplies by -1/|k|^2 for k != 0 and zeroes the k = 0 mode.
SpectralVectorField inverse_laplacian(const SpectralVectorField& field);

// Multiplies by -|k|^2 (for residual checks; zero mode stays zero).
SpectralVectorField laplacian(const SpectralVectorField& field);

// Heat semigroup e^{t Laplacian}: multiplier e^{-|k|^2 t}, t >= 0.
SpectralVectorField heat_multiply(const SpectralVectorField& field, double t);

// Spectral divergence: sum_j i k_j g_j(k).
SpectralScalarField divergence(const SpectralVectorField& field);

// Gradient of a scalar: component j is i k_j p(k).
SpectralVectorField gradient(const SpectralScalarField& field);

// Zeroes every mode with |m| > n/3 (2/3-rule spherical truncation).
void dealias(SpectralVectorField& field);
void dealias(SpectralScalarField& field);

// B(U, V) = inverse_laplacian(leray(div(U (x) V))), with the tensor product
// formed pointwise in physical space and dealiased before differentiation.
// Both inputs must be real-valued fields on the same grid.
SpectralVectorField bilinear(const SpectralVectorField& U, const SpectralVectorField& V);

// Projected divergence of the dealiased tensor product: P div(U (x) V).
// This is the nonlinear term of the evolution equation; bilinear() equals
// inverse_laplacian of it.
SpectralVectorField projected_advection(const SpectralVectorField& U,
                                        const SpectralVectorField& V);

// Dealiased spectral tensor product W_jl = U_j V_l, slot j*3+l. The product
// is formed pointwise in physical space (inputs must be real-valued fields on
// the same grid) and truncated by the 2/3 rule.
std::vector<std::vector<Complex>> tensor_product(const SpectralVectorField& U,
                                                 const SpectralVectorField& V);

// Maximum Hermitian-symmetry defect |c(k) - conj(c(-k))| relative to the
// largest coefficient magnitude (0 for the zero field).
double hermitian_defect(const SpectralVectorField& field);

// Discrete L2 norms (physical normalization: sum |.|^2 * cell_volume).
double l2_norm(const PhysicalVectorField& field);
double l2_norm(const SpectralVectorField& field);  // via Parseval
double max_magnitude(const PhysicalVectorField& field);

// Discrete L2 norm of the gradient, computed spectrally.
double grad_l2_norm(const SpectralVectorField& field);

}  // namespace nsteady
