#include "nsteady/snapshot.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

#include "nsteady/spectral.hpp"

namespace nsteady {

namespace {

constexpr char kMagic[4] = {'N', 'S', 'F', '1'};

// The format is little-endian; this code assumes a little-endian host (the
// supported platforms all are) and writes native doubles for bit-exactness.
static_assert(std::numeric_limits<double>::is_iec559, "need IEEE 754 doubles");

void write_raw(std::ofstream& out, const void* p, std::size_t bytes) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(bytes));
}

void write_header(std::ofstream& out, const Grid& g, SnapshotDomain domain) {
  write_raw(out, kMagic, 4);
  const std::uint32_t n = static_cast<std::uint32_t>(g.n);
  write_raw(out, &n, 4);
  write_raw(out, &g.box_length, 8);
  const std::uint8_t flag = static_cast<std::uint8_t>(domain);
  write_raw(out, &flag, 1);
}

void write_payload(std::ofstream& out, const std::vector<Complex>& data,
                   bool complex_valued) {
  if (complex_valued) {
    write_raw(out, data.data(), data.size() * sizeof(Complex));
  } else {
    for (const Complex& c : data) {
      const double re = c.real();
      write_raw(out, &re, 8);
    }
  }
}

}  // namespace

void write_snapshot(const std::string& path, const PhysicalVectorField& field) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError("snapshot: cannot open for writing: " + path);
  const bool cplx = field.complex_valued();
  write_header(out, field.grid(),
               cplx ? SnapshotDomain::physical_complex : SnapshotDomain::physical_real);
  write_payload(out, field.data(), cplx);
  if (!out) throw SnapshotError("snapshot: write failed: " + path);
}

void write_snapshot(const std::string& path, const SpectralVectorField& field) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError("snapshot: cannot open for writing: " + path);
  write_header(out, field.grid(), SnapshotDomain::spectral_complex);
  write_payload(out, field.data(), true);
  if (!out) throw SnapshotError("snapshot: write failed: " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("snapshot: cannot open: " + path);

  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw SnapshotError("snapshot: bad magic in " + path);

  std::uint32_t n = 0;
  double box_length = 0.0;
  std::uint8_t flag = 0;
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&box_length), 8);
  in.read(reinterpret_cast<char*>(&flag), 1);
  if (!in) throw SnapshotError("snapshot: truncated header in " + path);
  if (n < 8 || n > 4096)
    throw SnapshotError("snapshot: implausible grid dimension in " + path);
  if (flag > 2) throw SnapshotError("snapshot: unknown domain flag in " + path);

  Snapshot snap;
  snap.grid = make_grid(static_cast<int>(n), box_length);
  snap.domain = static_cast<SnapshotDomain>(flag);
  const std::size_t count = 3 * snap.grid.size();
  snap.data.resize(count);

  if (snap.domain == SnapshotDomain::physical_real) {
    std::vector<double> raw(count);
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(count * 8));
    if (!in) throw SnapshotError("snapshot: truncated payload in " + path);
    for (std::size_t i = 0; i < count; ++i) snap.data[i] = Complex{raw[i], 0.0};
  } else {
    in.read(reinterpret_cast<char*>(snap.data.data()),
            static_cast<std::streamsize>(count * sizeof(Complex)));
    if (!in) throw SnapshotError("snapshot: truncated payload in " + path);
  }
  // Trailing bytes mean the header lied about the size.
  if (in.peek() != std::char_traits<char>::eof())
    throw SnapshotError("snapshot: trailing bytes in " + path);
  return snap;
}

PhysicalVectorField Snapshot::as_physical() const {
  if (domain == SnapshotDomain::spectral_complex) {
    SpectralVectorField F(grid);
    F.data() = data;
    return inverse_transform_real(F);
  }
  PhysicalVectorField f(grid, domain == SnapshotDomain::physical_complex);
  f.data() = data;
  return f;
}

SpectralVectorField Snapshot::as_spectral() const {
  if (domain == SnapshotDomain::spectral_complex) {
    SpectralVectorField F(grid);
    F.data() = data;
    return F;
  }
  PhysicalVectorField f(grid, domain == SnapshotDomain::physical_complex);
  f.data() = data;
  return transform(f);
}

}  // namespace nsteady
