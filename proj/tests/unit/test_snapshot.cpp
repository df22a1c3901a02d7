#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "elsim/errors.hpp"
#include "elsim/snapshot.hpp"
#include "support.hpp"

using namespace elsim;
using namespace elsim::testing;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() : path(std::filesystem::temp_directory_path() / "elsim_test_snapshot") {
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("snapshot round trip is bit exact") {
  TempDir tmp;
  for (int dim : {2, 3}) {
    const auto g = SpectralGrid::create(dim, 8);
    const auto s = random_state(g, 9);
    const auto file = tmp.path / "d.snap";
    write_snapshot(file, s.d, 0.1 + 0.2);

    const auto h = read_snapshot_header(file);
    CHECK(h.version == kSnapshotVersion);
    CHECK(h.dim == static_cast<std::uint32_t>(dim));
    CHECK(h.n == 8);
    CHECK(h.components == 3);
    CHECK(h.time == 0.1 + 0.2);

    double t = 0.0;
    const auto back = load_field(file, g, 3, &t);
    CHECK(t == 0.1 + 0.2);
    CHECK(std::memcmp(back.data().data(), s.d.data().data(),
                      s.d.data().size() * sizeof(double)) == 0);
    CHECK(std::filesystem::file_size(file) == 8 + 4 * 4 + 8 + s.d.data().size() * 8);
  }
}

TEST_CASE("snapshot errors") {
  TempDir tmp;
  const auto g = SpectralGrid::create(2, 8);
  const auto s = random_state(g, 1);
  const auto file = tmp.path / "u.snap";
  write_snapshot(file, s.u, 0.0);

  CHECK_THROWS_AS(load_field(file, SpectralGrid::create(2, 16), 2), GridMismatchError);
  CHECK_THROWS_AS(load_field(file, SpectralGrid::create(3, 8), 2), GridMismatchError);
  CHECK_THROWS_AS(load_field(file, g, 3), GridMismatchError);
  CHECK_THROWS_AS(read_snapshot(tmp.path / "absent.snap"), IoError);

  SUBCASE("truncated") {
    std::filesystem::resize_file(file, std::filesystem::file_size(file) - 8);
    CHECK_THROWS_AS(read_snapshot(file), IoError);
    std::filesystem::resize_file(file, 10);
    CHECK_THROWS_AS(read_snapshot_header(file), IoError);
  }
  SUBCASE("bad magic") {
    std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
    f.write("NOTASNAP", 8);
    f.close();
    CHECK_THROWS_AS(read_snapshot(file), IoError);
  }
  SUBCASE("unwritable target") {
    CHECK_THROWS_AS(write_snapshot(tmp.path / "no" / "such" / "dir.snap", s.u, 0.0), IoError);
  }
}
