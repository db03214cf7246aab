#pragma once

#include <cmath>
#include <cstddef>

namespace nsteady {

// Periodic box [-L/2, L/2)^3 sampled on an n^3 lattice.
//
// Storage is component-major, x-fastest row-major: within one component the
// flat index of lattice site (ix, iy, iz) is (iz*n + iy)*n + ix.
//
// Coordinates follow the centered FFT convention: index i along an axis maps
// to i*h for i < n/2 and (i-n)*h otherwise, with h = L/n, so the origin is a
// sample and coordinates cover [-L/2, L/2). Wavevector of index i is
// (2*pi/L)*m with m = i for i < n/2 and m = i-n otherwise; index (0,0,0)
// carries the zero wavevector.
struct Grid {
  int n = 0;
  double box_length = 0.0;

  double spacing() const { return box_length / n; }
  double cell_volume() const {
    const double h = spacing();
    return h * h * h;
  }
  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }

  int mode(int i) const { return i < n / 2 ? i : i - n; }
  double coord(int i) const { return mode(i) * spacing(); }
  double wavenumber(int i) const { return 2.0 * M_PI / box_length * mode(i); }

  // Largest retained |m| (integer units) under the 2/3-rule spherical cut.
  double dealias_mode_radius() const { return n / 3.0; }
  double dealias_wavenumber() const {
    return 2.0 * M_PI / box_length * dealias_mode_radius();
  }

  std::size_t index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(iz) * n + iy) * n + ix;
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.n == b.n && a.box_length == b.box_length;
  }
  friend bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }
};

// Validating constructor: n must be even and at least 8, L positive.
Grid make_grid(int n, double box_length);

}  // namespace nsteady
