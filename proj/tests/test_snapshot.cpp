#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "nsteady/snapshot.hpp"
#include "nsteady/spectral.hpp"

using namespace nsteady;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/nsteady_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

PhysicalVectorField random_field(const Grid& g, unsigned seed, bool cplx) {
  PhysicalVectorField f(g, cplx);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto& v : f.data()) v = Complex{dist(rng), cplx ? dist(rng) : 0.0};
  return f;
}

}  // namespace

TEST_CASE("physical real round trip is bit identical") {
  TempFile tmp("real.nsf1");
  Grid g = make_grid(12, 3.5);
  PhysicalVectorField f = random_field(g, 1, false);
  write_snapshot(tmp.path, f);
  Snapshot snap = read_snapshot(tmp.path);
  CHECK(snap.domain == SnapshotDomain::physical_real);
  CHECK(snap.grid == g);
  PhysicalVectorField back = snap.as_physical();
  CHECK(!back.complex_valued());
  for (std::size_t i = 0; i < f.data().size(); ++i)
    CHECK(back.data()[i] == f.data()[i]);
}

TEST_CASE("physical complex round trip is bit identical") {
  TempFile tmp("cplx.nsf1");
  Grid g = make_grid(8, 1.0);
  PhysicalVectorField f = random_field(g, 2, true);
  write_snapshot(tmp.path, f);
  Snapshot snap = read_snapshot(tmp.path);
  CHECK(snap.domain == SnapshotDomain::physical_complex);
  PhysicalVectorField back = snap.as_physical();
  for (std::size_t i = 0; i < f.data().size(); ++i)
    CHECK(back.data()[i] == f.data()[i]);
}

TEST_CASE("spectral round trip is bit identical") {
  TempFile tmp("spec.nsf1");
  Grid g = make_grid(8, 2.0);
  SpectralVectorField F = transform(random_field(g, 3, false));
  write_snapshot(tmp.path, F);
  Snapshot snap = read_snapshot(tmp.path);
  CHECK(snap.domain == SnapshotDomain::spectral_complex);
  SpectralVectorField back = snap.as_spectral();
  for (std::size_t i = 0; i < F.data().size(); ++i)
    CHECK(back.data()[i] == F.data()[i]);
}

TEST_CASE("corrupt magic is a typed error") {
  TempFile tmp("badmagic.nsf1");
  Grid g = make_grid(8, 2.0);
  write_snapshot(tmp.path, random_field(g, 4, false));
  {
    std::fstream io(tmp.path, std::ios::in | std::ios::out | std::ios::binary);
    io.put('X');
  }
  CHECK_THROWS_AS(read_snapshot(tmp.path), SnapshotError);
}

TEST_CASE("truncated payload is a typed error") {
  TempFile tmp("trunc.nsf1");
  Grid g = make_grid(8, 2.0);
  write_snapshot(tmp.path, random_field(g, 5, false));
  std::ifstream in(tmp.path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), {});
  in.close();
  std::ofstream out(tmp.path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
  out.close();
  CHECK_THROWS_AS(read_snapshot(tmp.path), SnapshotError);
}

TEST_CASE("trailing bytes are a typed error") {
  TempFile tmp("trail.nsf1");
  Grid g = make_grid(8, 2.0);
  write_snapshot(tmp.path, random_field(g, 6, false));
  std::ofstream out(tmp.path, std::ios::binary | std::ios::app);
  out.put('\0');
  out.close();
  CHECK_THROWS_AS(read_snapshot(tmp.path), SnapshotError);
}

TEST_CASE("implausible dimensions are rejected") {
  TempFile tmp("dim.nsf1");
  std::ofstream out(tmp.path, std::ios::binary);
  out.write("NSF1", 4);
  std::uint32_t n = 1u << 30;
  out.write(reinterpret_cast<char*>(&n), 4);
  double L = 1.0;
  out.write(reinterpret_cast<char*>(&L), 8);
  out.put('\0');
  out.close();
  CHECK_THROWS_AS(read_snapshot(tmp.path), SnapshotError);
}

TEST_CASE("missing file is a typed error") {
  CHECK_THROWS_AS(read_snapshot("/tmp/nsteady_no_such_file.nsf1"), SnapshotError);
}
