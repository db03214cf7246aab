#include "nsteady/forcing.hpp"

#include <cmath>
#include <stdexcept>

#include "nsteady/rng.hpp"
#include "nsteady/snapshot.hpp"
#include "nsteady/spectral.hpp"

namespace nsteady {

namespace {

void remove_mean(PhysicalVectorField& f) {
  const double inv = 1.0 / static_cast<double>(f.size());
  for (int c = 0; c < 3; ++c) {
    Complex sum{0.0, 0.0};
    const Complex* p = f.component(c);
    for (std::size_t s = 0; s < f.size(); ++s) sum += p[s];
    const Complex mean = sum * inv;
    Complex* q = f.component(c);
    for (std::size_t s = 0; s < f.size(); ++s) q[s] -= mean;
  }
}

void scale_peak_to(PhysicalVectorField& f, double amplitude) {
  const double peak = max_magnitude(f);
  if (peak <= 0.0) throw std::runtime_error("force: built field is identically zero");
  const double s = amplitude / peak;
  for (auto& v : f.data()) v *= s;
}

void check_annulus(const ForceSpec& spec, const Grid& g) {
  if (!(spec.amplitude > 0.0))
    throw std::invalid_argument("force: amplitude must be positive");
  if (!(spec.k_min > 0.0) || !(spec.k_max > spec.k_min))
    throw std::invalid_argument("force: need 0 < k_min < k_max");
  if (!(spec.k_max < g.dealias_wavenumber()))
    throw std::invalid_argument("force: annulus must sit inside the dealias sphere");
}

// Random-phase band field: independent complex coefficients on the shell
// k_min <= |k| <= k_max, Hermitian pairs set from one deterministic stream.
SpectralVectorField annulus_spectrum(const ForceSpec& spec, const Grid& g) {
  SpectralVectorField F(g);
  Xorshift64Star rng(spec.seed);
  const double k2min = spec.k_min * spec.k_min;
  const double k2max = spec.k_max * spec.k_max;
  std::size_t s = 0;
  for (int iz = 0; iz < g.n; ++iz) {
    const int mz = g.mode(iz);
    const double kz = g.wavenumber(iz);
    for (int iy = 0; iy < g.n; ++iy) {
      const int my = g.mode(iy);
      const double ky = g.wavenumber(iy);
      for (int ix = 0; ix < g.n; ++ix, ++s) {
        const int mx = g.mode(ix);
        const double kx = g.wavenumber(ix);
        const double k2 = kx * kx + ky * ky + kz * kz;
        if (k2 < k2min || k2 > k2max) continue;
        // Draw only at the lexicographically positive mode of each +-k pair;
        // the partner gets the conjugate so the field is real.
        const bool canonical =
            mz > 0 || (mz == 0 && (my > 0 || (my == 0 && mx > 0)));
        if (!canonical) continue;
        const std::size_t partner =
            g.index((g.n - ix) % g.n, (g.n - iy) % g.n, (g.n - iz) % g.n);
        for (int c = 0; c < 3; ++c) {
          const Complex v{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
          F.at(c, s) = v;
          F.at(c, partner) = std::conj(v);
        }
      }
    }
  }
  return F;
}

PhysicalVectorField build_dirac(const ForceSpec& spec, const Grid& g) {
  if (!(spec.amplitude > 0.0))
    throw std::invalid_argument("force: amplitude must be positive");
  if (!(spec.width >= 2.0 * g.spacing()))
    throw std::invalid_argument("force: dirac width must span at least 2 cells");
  double d2 = 0.0;
  for (double d : spec.direction) d2 += d * d;
  if (!(d2 > 0.0)) throw std::invalid_argument("force: zero direction");
  const double dn = 1.0 / std::sqrt(d2);

  const double s2 = spec.width * spec.width;
  const double norm =
      spec.amplitude * std::pow(2.0 * M_PI * s2, -1.5);
  PhysicalVectorField f(g);
  std::size_t s = 0;
  for (int iz = 0; iz < g.n; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix, ++s) {
        const double x = g.coord(ix), y = g.coord(iy), z = g.coord(iz);
        const double b = norm * std::exp(-(x * x + y * y + z * z) / (2.0 * s2));
        for (int c = 0; c < 3; ++c) f.at(c, s) = b * spec.direction[c] * dn;
      }
  remove_mean(f);
  return f;
}

PhysicalVectorField build_annulus(const ForceSpec& spec, const Grid& g,
                                  bool symmetric) {
  check_annulus(spec, g);
  PhysicalVectorField f = inverse_transform_real(annulus_spectrum(spec, g));
  if (symmetric) symmetrize(f);
  remove_mean(f);
  scale_peak_to(f, spec.amplitude);
  return f;
}

PhysicalVectorField build_wave_packet(const ForceSpec& spec, const Grid& g) {
  check_annulus(spec, g);
  const double sigma =
      spec.envelope_width > 0.0 ? spec.envelope_width : g.box_length / 8.0;
  PhysicalVectorField carrier = inverse_transform_real(annulus_spectrum(spec, g));
  std::size_t s = 0;
  for (int iz = 0; iz < g.n; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix, ++s) {
        const double x = g.coord(ix), y = g.coord(iy), z = g.coord(iz);
        const double env = std::exp(-(x * x + y * y + z * z) / (2.0 * sigma * sigma));
        for (int c = 0; c < 3; ++c) carrier.at(c, s) *= env;
      }
  // The envelope spreads the spectrum; clip it back into the resolved sphere.
  SpectralVectorField F = transform(carrier);
  dealias(F);
  PhysicalVectorField f = inverse_transform_real(F);
  remove_mean(f);
  scale_peak_to(f, spec.amplitude);
  return f;
}

}  // namespace

PhysicalVectorField build_force(const ForceSpec& spec, const Grid& grid) {
  switch (spec.kind) {
    case ForceKind::regularized_dirac:
      return build_dirac(spec, grid);
    case ForceKind::fourier_annulus:
      return build_annulus(spec, grid, false);
    case ForceKind::symmetric_annulus:
      return build_annulus(spec, grid, true);
    case ForceKind::wave_packet:
      return build_wave_packet(spec, grid);
    case ForceKind::custom_snapshot: {
      Snapshot snap = read_snapshot(spec.snapshot_path);
      if (snap.grid != grid)
        throw std::invalid_argument("force: snapshot grid does not match run grid");
      PhysicalVectorField f = snap.as_physical();
      remove_mean(f);
      return f;
    }
  }
  throw std::logic_error("force: unknown kind");
}

SpectralVectorField compute_U0(const SpectralVectorField& force) {
  double peak = 0.0;
  for (const auto& v : force.data()) peak = std::max(peak, std::abs(v));
  double mean = 0.0;
  for (int c = 0; c < 3; ++c) mean = std::max(mean, std::abs(force.at(c, 0)));
  if (peak > 0.0 && mean > 1e-12 * peak)
    throw std::invalid_argument("compute_U0: force has a nonzero mean mode");

  SpectralVectorField U0 = inverse_laplacian(leray_project(force));
  for (auto& v : U0.data()) v = -v;
  return U0;
}

namespace {

// One signed cyclic shift: y_a = sign[a] * x[perm[a]].
struct GroupElement {
  int perm[3];
  double sign[3];
};

std::vector<GroupElement> symmetry_group() {
  static const int cycles[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  std::vector<GroupElement> g;
  for (const auto& p : cycles)
    for (int bits = 0; bits < 8; ++bits)
      g.push_back(GroupElement{{p[0], p[1], p[2]},
                               {bits & 1 ? -1.0 : 1.0, bits & 2 ? -1.0 : 1.0,
                                bits & 4 ? -1.0 : 1.0}});
  return g;
}

int flip_index(int n, int i) { return (n - i) % n; }

}  // namespace

void symmetrize(PhysicalVectorField& field) {
  const Grid& g = field.grid();
  const auto group = symmetry_group();
  PhysicalVectorField out(g, field.complex_valued());

  for (const GroupElement& e : group) {
    std::size_t s = 0;
    int idx[3];
    for (int iz = 0; iz < g.n; ++iz)
      for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix, ++s) {
          const int site_idx[3] = {ix, iy, iz};
          // Lattice index of the transformed point Gx.
          for (int a = 0; a < 3; ++a) {
            int i = site_idx[e.perm[a]];
            idx[a] = e.sign[a] < 0.0 ? flip_index(g.n, i) : i;
          }
          const std::size_t src = g.index(idx[0], idx[1], idx[2]);
          // Accumulate G^T f(Gx): component perm[b] receives sign[b]*f_b.
          for (int b = 0; b < 3; ++b)
            out.at(e.perm[b], s) += e.sign[b] * field.at(b, src);
        }
  }
  const double inv = 1.0 / static_cast<double>(group.size());
  for (auto& v : out.data()) v *= inv;
  field = std::move(out);
}

double symmetry_defect(const PhysicalVectorField& field) {
  const Grid& g = field.grid();
  const GroupElement checks[2] = {
      {{1, 2, 0}, {1.0, 1.0, 1.0}},   // R: (x1,x2,x3) -> (x2,x3,x1)
      {{0, 1, 2}, {-1.0, 1.0, 1.0}},  // S: (x1,x2,x3) -> (-x1,x2,x3)
  };
  const double peak = max_magnitude(field);
  if (peak <= 0.0) return 0.0;

  double defect = 0.0;
  for (const GroupElement& e : checks) {
    std::size_t s = 0;
    int idx[3];
    for (int iz = 0; iz < g.n; ++iz)
      for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix, ++s) {
          const int site_idx[3] = {ix, iy, iz};
          for (int a = 0; a < 3; ++a) {
            int i = site_idx[e.perm[a]];
            idx[a] = e.sign[a] < 0.0 ? flip_index(g.n, i) : i;
          }
          const std::size_t src = g.index(idx[0], idx[1], idx[2]);
          // f(Gx)_a vs (G f(x))_a = sign[a] * f(x)_{perm[a]}.
          for (int a = 0; a < 3; ++a)
            defect = std::max(defect, std::abs(field.at(a, src) -
                                               e.sign[a] * field.at(e.perm[a], s)));
        }
  }
  return defect / peak;
}

std::array<double, 3> landau_velocity(const LandauParams& params, double x,
                                      double y, double z) {
  if (!(params.a > 1.0))
    throw std::invalid_argument("landau: parameter a must exceed 1");
  double n2 = 0.0;
  for (double v : params.axis) n2 += v * v;
  if (!(n2 > 0.0)) throw std::invalid_argument("landau: zero axis");
  const double ninv = 1.0 / std::sqrt(n2);
  const double nx = params.axis[0] * ninv, ny = params.axis[1] * ninv,
               nz = params.axis[2] * ninv;

  const double r = std::sqrt(x * x + y * y + z * z);
  if (!(r > 0.0)) throw std::invalid_argument("landau: origin evaluation");
  const double ex = x / r, ey = y / r, ez = z / r;
  const double ct = ex * nx + ey * ny + ez * nz;  // cos(theta)
  const double a = params.a;
  const double d = a - ct;

  // Radial and polar parts; u_theta/sin(theta) stays bounded on the axis.
  const double ur = 2.0 * (2.0 * a * ct - ct * ct - 1.0) / (r * d * d);
  const double ut_over_st = -2.0 / (r * d);

  // u = ur * e_r + ut_over_st * (ct * e_r - n)
  return {ur * ex + ut_over_st * (ct * ex - nx),
          ur * ey + ut_over_st * (ct * ey - ny),
          ur * ez + ut_over_st * (ct * ez - nz)};
}

PhysicalVectorField landau_field(const LandauParams& params, const Grid& grid,
                                 double coord_offset) {
  PhysicalVectorField f(grid);
  std::size_t s = 0;
  for (int iz = 0; iz < grid.n; ++iz)
    for (int iy = 0; iy < grid.n; ++iy)
      for (int ix = 0; ix < grid.n; ++ix, ++s) {
        const auto u = landau_velocity(params, grid.coord(ix) + coord_offset,
                                       grid.coord(iy) + coord_offset,
                                       grid.coord(iz) + coord_offset);
        for (int c = 0; c < 3; ++c) f.at(c, s) = u[c];
      }
  return f;
}

}  // namespace nsteady
