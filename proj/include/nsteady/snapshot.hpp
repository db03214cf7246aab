#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "nsteady/field.hpp"

namespace nsteady {

// Binary field snapshot, format "NSF1":
//   magic "NSF1" | u32 LE n_per_axis | f64 LE box_length | u8 domain flag |
//   payload: component-major, x-fastest, f64 LE (re,im pairs when complex).
// Domain flag: 0 physical real, 1 physical complex, 2 spectral complex.
enum class SnapshotDomain : std::uint8_t {
  physical_real = 0,
  physical_complex = 1,
  spectral_complex = 2,
};

struct SnapshotError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_snapshot(const std::string& path, const PhysicalVectorField& field);
void write_snapshot(const std::string& path, const SpectralVectorField& field);

struct Snapshot {
  Grid grid;
  SnapshotDomain domain = SnapshotDomain::physical_real;
  std::vector<Complex> data;  // 3 * n^3, component-major

  PhysicalVectorField as_physical() const;  // transforms if spectral
  SpectralVectorField as_spectral() const;  // transforms if physical
};

Snapshot read_snapshot(const std::string& path);

}  // namespace nsteady
