#include "nsteady/steady.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nsteady/spectral.hpp"

namespace nsteady {

namespace {

double weak3_norm(const SpectralVectorField& F) {
  return lorentz_value(decreasing_rearrangement(inverse_transform_real(F)), 3.0,
                       kInfiniteQ);
}

SpectralVectorField subtract(const SpectralVectorField& a,
                             const SpectralVectorField& b) {
  SpectralVectorField out = a;
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] -= b.data()[i];
  return out;
}

}  // namespace

std::string PicardTrace::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "iter,weak3_norm,l2_norm,increment,ratio\n";
  for (const auto& r : rows)
    out << r.iter << ',' << r.weak3 << ',' << r.l2 << ',' << r.increment << ','
        << r.ratio << '\n';
  return out.str();
}

PicardResult picard_solve(const SpectralVectorField& U0, const PicardConfig& cfg,
                          const SpectralVectorField* initial_guess) {
  if (cfg.max_iters < 1) throw std::invalid_argument("picard: max_iters must be >= 1");
  if (!(cfg.tol_rel > 0.0)) throw std::invalid_argument("picard: tol_rel must be positive");

  PicardResult result{initial_guess ? *initial_guess : U0, {}};
  const double u0_weak3 = weak3_norm(U0);
  const double tol_abs = cfg.tol_rel * u0_weak3;

  {
    PicardIterationRecord row;
    row.iter = 0;
    row.weak3 = weak3_norm(result.U);
    row.l2 = l2_norm(result.U);
    result.trace.rows.push_back(row);
  }

  if (u0_weak3 == 0.0 && weak3_norm(result.U) == 0.0) {
    // The zero force fixes the zero field immediately.
    result.trace.converged = true;
    return result;
  }

  double prev_increment = 0.0;
  for (int k = 1; k <= cfg.max_iters; ++k) {
    SpectralVectorField next = bilinear(result.U, result.U);
    for (std::size_t i = 0; i < next.data().size(); ++i)
      next.data()[i] += U0.data()[i];

    const double increment = weak3_norm(subtract(next, result.U));
    result.U = std::move(next);

    PicardIterationRecord row;
    row.iter = k;
    row.weak3 = weak3_norm(result.U);
    row.l2 = l2_norm(result.U);
    row.increment = increment;
    row.ratio = prev_increment > 0.0 ? increment / prev_increment : 0.0;
    result.trace.rows.push_back(row);
    result.trace.iterations = k;
    prev_increment = increment;

    if (cfg.safeguard && row.weak3 > cfg.growth_factor * u0_weak3) {
      result.trace.aborted_growth = true;
      return result;
    }
    if (increment <= tol_abs) {
      result.trace.converged = true;
      return result;
    }
  }
  return result;  // not converged; trace says so
}

SteadyResidual steady_residual(const SpectralVectorField& U,
                               const SpectralVectorField& U0) {
  if (U.grid() != U0.grid())
    throw std::invalid_argument("steady_residual: grids differ");
  SpectralVectorField r = bilinear(U, U);
  for (std::size_t i = 0; i < r.data().size(); ++i)
    r.data()[i] = U.data()[i] - U0.data()[i] - r.data()[i];

  SteadyResidual out;
  out.weak3 = weak3_norm(r);
  out.l2 = l2_norm(r);
  const double u0_weak3 = weak3_norm(U0);
  const double u0_l2 = l2_norm(U0);
  out.weak3_rel = u0_weak3 > 0.0 ? out.weak3 / u0_weak3 : 0.0;
  out.l2_rel = u0_l2 > 0.0 ? out.l2 / u0_l2 : 0.0;
  return out;
}

SpectralScalarField recover_pressure(const SpectralVectorField& U,
                                     const SpectralVectorField& f) {
  if (U.grid() != f.grid())
    throw std::invalid_argument("recover_pressure: grids differ");
  const Grid& g = U.grid();
  auto W = tensor_product(U, U);

  SpectralScalarField P(g);
  std::size_t s = 0;
  for (int iz = 0; iz < g.n; ++iz) {
    const double kz = g.wavenumber(iz);
    for (int iy = 0; iy < g.n; ++iy) {
      const double ky = g.wavenumber(iy);
      for (int ix = 0; ix < g.n; ++ix, ++s) {
        const double kx = g.wavenumber(ix);
        const double k[3] = {kx, ky, kz};
        const double k2 = kx * kx + ky * ky + kz * kz;
        if (k2 == 0.0) continue;
        Complex kkW{0.0, 0.0};
        for (int j = 0; j < 3; ++j)
          for (int l = 0; l < 3; ++l) kkW += k[j] * k[l] * W[j * 3 + l][s];
        const Complex kdotf =
            kx * f.at(0, s) + ky * f.at(1, s) + kz * f.at(2, s);
        P.at(s) = -(Complex{0.0, 1.0} * kdotf + kkW) / k2;
      }
    }
  }
  return P;
}

double momentum_residual(const SpectralVectorField& U,
                         const SpectralScalarField& P,
                         const SpectralVectorField& f) {
  const Grid& g = U.grid();
  auto W = tensor_product(U, U);

  double worst = 0.0;
  double scale = 0.0;
  for (const auto& v : f.data()) scale = std::max(scale, std::abs(v));
  for (const auto& v : U.data()) scale = std::max(scale, std::abs(v));

  std::size_t s = 0;
  for (int iz = 0; iz < g.n; ++iz) {
    const double kz = g.wavenumber(iz);
    for (int iy = 0; iy < g.n; ++iy) {
      const double ky = g.wavenumber(iy);
      for (int ix = 0; ix < g.n; ++ix, ++s) {
        const double kx = g.wavenumber(ix);
        const double k[3] = {kx, ky, kz};
        const double k2 = kx * kx + ky * ky + kz * kz;
        for (int j = 0; j < 3; ++j) {
          Complex divW{0.0, 0.0};
          for (int l = 0; l < 3; ++l) divW += Complex{0.0, k[l]} * W[j * 3 + l][s];
          const Complex res = divW + Complex{0.0, k[j]} * P.at(s) +
                              k2 * U.at(j, s) - f.at(j, s);
          worst = std::max(worst, std::abs(res));
        }
      }
    }
  }
  return scale > 0.0 ? worst / scale : worst;
}

std::vector<LpSweepEntry> lp_norm_sweep(const SpectralVectorField& U,
                                        const SpectralVectorField& U0,
                                        const std::vector<double>& p_list) {
  for (double p : p_list)
    if (!(p > 1.5))
      throw std::invalid_argument(
          "lp_norm_sweep: p <= 3/2 rejected (no finite-L^p solution exists there)");

  PhysicalVectorField u = inverse_transform_real(U);
  PhysicalVectorField u0 = inverse_transform_real(U0);
  std::vector<LpSweepEntry> out;
  for (double p : p_list) {
    LpSweepEntry e;
    e.p = p;
    e.solution_lp = lorentz_norm(u, p, p);
    e.solution_weak = lorentz_norm(u, p, kInfiniteQ);
    e.data_lp = lorentz_norm(u0, p, p);
    e.data_weak = lorentz_norm(u0, p, kInfiniteQ);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace nsteady
