#include "nsteady/spectral.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "nsteady/fft.hpp"

namespace nsteady {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_same_grid(const Grid& a, const Grid& b) {
  if (a != b) throw std::invalid_argument("fields live on different grids");
}

// Applies fn(site, kx, ky, kz, |k|^2) over all lattice sites.
template <typename Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
  const int n = g.n;
  std::size_t site = 0;
  for (int iz = 0; iz < n; ++iz) {
    const double kz = g.wavenumber(iz);
    for (int iy = 0; iy < n; ++iy) {
      const double ky = g.wavenumber(iy);
      for (int ix = 0; ix < n; ++ix, ++site) {
        const double kx = g.wavenumber(ix);
        fn(site, kx, ky, kz, kx * kx + ky * ky + kz * kz);
      }
    }
  }
}

}  // namespace

SpectralVectorField transform(const PhysicalVectorField& field) {
  SpectralVectorField out(field.grid());
  out.data() = field.data();
  for (int c = 0; c < 3; ++c)
    detail::fft3(field.grid().n, out.component(c), /*forward=*/true);
  return out;
}

PhysicalVectorField inverse_transform(const SpectralVectorField& field) {
  PhysicalVectorField out(field.grid(), /*complex_valued=*/true);
  out.data() = field.data();
  for (int c = 0; c < 3; ++c)
    detail::fft3(field.grid().n, out.component(c), /*forward=*/false);
  return out;
}

PhysicalVectorField inverse_transform_real(const SpectralVectorField& field) {
  PhysicalVectorField out = inverse_transform(field);
  for (auto& v : out.data()) v = Complex{v.real(), 0.0};
  out.set_complex_valued(false);
  return out;
}

SpectralScalarField transform(const PhysicalScalarField& field) {
  SpectralScalarField out(field.grid());
  out.data() = field.data();
  detail::fft3(field.grid().n, out.data().data(), /*forward=*/true);
  return out;
}

PhysicalScalarField inverse_transform(const SpectralScalarField& field) {
  PhysicalScalarField out(field.grid());
  out.data() = field.data();
  detail::fft3(field.grid().n, out.data().data(), /*forward=*/false);
  return out;
}

SpectralVectorField leray_project(const SpectralVectorField& field) {
  SpectralVectorField out(field.grid());
  for_each_mode(field.grid(), [&](std::size_t s, double kx, double ky, double kz, double k2) {
    if (k2 == 0.0) {
      for (int c = 0; c < 3; ++c) out.at(c, s) = field.at(c, s);
      return;
    }
    const std::array<double, 3> k{kx, ky, kz};
    Complex kdotg = kx * field.at(0, s) + ky * field.at(1, s) + kz * field.at(2, s);
    for (int c = 0; c < 3; ++c) out.at(c, s) = field.at(c, s) - k[c] / k2 * kdotg;
  });
  return out;
}

SpectralVectorField inverse_laplacian(const SpectralVectorField& field) {
  SpectralVectorField out(field.grid());
  for_each_mode(field.grid(), [&](std::size_t s, double, double, double, double k2) {
    if (k2 == 0.0) {
      for (int c = 0; c < 3; ++c) out.at(c, s) = Complex{0.0, 0.0};
      return;
    }
    for (int c = 0; c < 3; ++c) out.at(c, s) = -field.at(c, s) / k2;
  });
  return out;
}

SpectralVectorField laplacian(const SpectralVectorField& field) {
  SpectralVectorField out(field.grid());
  for_each_mode(field.grid(), [&](std::size_t s, double, double, double, double k2) {
    for (int c = 0; c < 3; ++c) out.at(c, s) = -k2 * field.at(c, s);
  });
  return out;
}

SpectralVectorField heat_multiply(const SpectralVectorField& field, double t) {
  if (t < 0.0) throw std::invalid_argument("heat_multiply: t must be nonnegative");
  SpectralVectorField out(field.grid());
  for_each_mode(field.grid(), [&](std::size_t s, double, double, double, double k2) {
    const double factor = std::exp(-k2 * t);
    for (int c = 0; c < 3; ++c) out.at(c, s) = factor * field.at(c, s);
  });
  return out;
}

SpectralScalarField divergence(const SpectralVectorField& field) {
  SpectralScalarField out(field.grid());
  for_each_mode(field.grid(), [&](std::size_t s, double kx, double ky, double kz, double) {
    out.at(s) = kI * (kx * field.at(0, s) + ky * field.at(1, s) + kz * field.at(2, s));
  });
  return out;
}

SpectralVectorField gradient(const SpectralScalarField& field) {
  SpectralVectorField out(field.grid());
  for_each_mode(field.grid(), [&](std::size_t s, double kx, double ky, double kz, double) {
    out.at(0, s) = kI * kx * field.at(s);
    out.at(1, s) = kI * ky * field.at(s);
    out.at(2, s) = kI * kz * field.at(s);
  });
  return out;
}

namespace {

bool mode_kept(const Grid& g, int ix, int iy, int iz) {
  const double mx = g.mode(ix), my = g.mode(iy), mz = g.mode(iz);
  const double r = g.dealias_mode_radius();
  return mx * mx + my * my + mz * mz <= r * r;
}

}  // namespace

void dealias(SpectralVectorField& field) {
  const Grid& g = field.grid();
  std::size_t site = 0;
  for (int iz = 0; iz < g.n; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix, ++site)
        if (!mode_kept(g, ix, iy, iz))
          for (int c = 0; c < 3; ++c) field.at(c, site) = Complex{0.0, 0.0};
}

void dealias(SpectralScalarField& field) {
  const Grid& g = field.grid();
  std::size_t site = 0;
  for (int iz = 0; iz < g.n; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix, ++site)
        if (!mode_kept(g, ix, iy, iz)) field.at(site) = Complex{0.0, 0.0};
}

// W is component-major with slot j*3+l. When U and V alias the same object
// only 6 products are formed.
std::vector<std::vector<Complex>> tensor_product(const SpectralVectorField& U,
                                                 const SpectralVectorField& V) {
  check_same_grid(U.grid(), V.grid());
  const Grid& g = U.grid();
  const std::size_t count = g.size();
  const bool same = &U == &V;

  PhysicalVectorField u = inverse_transform(U);
  PhysicalVectorField v = same ? u : inverse_transform(V);

  std::vector<std::vector<Complex>> W(9);
  for (int j = 0; j < 3; ++j) {
    for (int l = 0; l < 3; ++l) {
      if (same && l < j) continue;
      auto& slot = W[j * 3 + l];
      slot.resize(count);
      const Complex* uj = u.component(j);
      const Complex* vl = v.component(l);
      for (std::size_t s = 0; s < count; ++s)
        slot[s] = uj[s].real() * vl[s].real();  // inputs are real-valued
      detail::fft3(g.n, slot.data(), /*forward=*/true);
    }
  }
  if (same)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < j; ++l) W[j * 3 + l] = W[l * 3 + j];

  // 2/3-rule truncation of the product before differentiation.
  std::size_t site = 0;
  for (int iz = 0; iz < g.n; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix, ++site)
        if (!mode_kept(g, ix, iy, iz))
          for (auto& slot : W) slot[site] = Complex{0.0, 0.0};
  return W;
}

SpectralVectorField projected_advection(const SpectralVectorField& U,
                                        const SpectralVectorField& V) {
  auto W = tensor_product(U, V);
  const Grid& g = U.grid();
  SpectralVectorField out(g);
  for_each_mode(g, [&](std::size_t s, double kx, double ky, double kz, double k2) {
    const std::array<double, 3> k{kx, ky, kz};
    std::array<Complex, 3> divW;
    for (int j = 0; j < 3; ++j)
      divW[j] = kI * (kx * W[j * 3 + 0][s] + ky * W[j * 3 + 1][s] + kz * W[j * 3 + 2][s]);
    if (k2 == 0.0) {
      for (int c = 0; c < 3; ++c) out.at(c, s) = Complex{0.0, 0.0};
      return;
    }
    Complex kdot = kx * divW[0] + ky * divW[1] + kz * divW[2];
    for (int c = 0; c < 3; ++c) out.at(c, s) = divW[c] - k[c] / k2 * kdot;
  });
  return out;
}

SpectralVectorField bilinear(const SpectralVectorField& U, const SpectralVectorField& V) {
  return inverse_laplacian(projected_advection(U, V));
}

double hermitian_defect(const SpectralVectorField& field) {
  const Grid& g = field.grid();
  double max_defect = 0.0;
  double max_mag = 0.0;
  for (int iz = 0; iz < g.n; ++iz) {
    const int jz = (g.n - iz) % g.n;
    for (int iy = 0; iy < g.n; ++iy) {
      const int jy = (g.n - iy) % g.n;
      for (int ix = 0; ix < g.n; ++ix) {
        const int jx = (g.n - ix) % g.n;
        const std::size_t s = g.index(ix, iy, iz);
        const std::size_t m = g.index(jx, jy, jz);
        for (int c = 0; c < 3; ++c) {
          const Complex a = field.at(c, s);
          max_mag = std::max(max_mag, std::abs(a));
          max_defect = std::max(max_defect, std::abs(a - std::conj(field.at(c, m))));
        }
      }
    }
  }
  return max_mag > 0.0 ? max_defect / max_mag : 0.0;
}

double l2_norm(const PhysicalVectorField& field) {
  double sum = 0.0;
  for (const auto& v : field.data()) sum += std::norm(v);
  return std::sqrt(sum * field.grid().cell_volume());
}

double l2_norm(const SpectralVectorField& field) {
  double sum = 0.0;
  for (const auto& v : field.data()) sum += std::norm(v);
  const double L = field.grid().box_length;
  return std::sqrt(sum * L * L * L);
}

double max_magnitude(const PhysicalVectorField& field) {
  double m = 0.0;
  for (std::size_t s = 0; s < field.size(); ++s) m = std::max(m, field.magnitude(s));
  return m;
}

double grad_l2_norm(const SpectralVectorField& field) {
  double sum = 0.0;
  for_each_mode(field.grid(), [&](std::size_t s, double, double, double, double k2) {
    for (int c = 0; c < 3; ++c) sum += k2 * std::norm(field.at(c, s));
  });
  const double L = field.grid().box_length;
  return std::sqrt(sum * L * L * L);
}

}  // namespace nsteady
