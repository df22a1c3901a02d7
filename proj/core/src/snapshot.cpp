#include "elsim/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "elsim/errors.hpp"

namespace elsim {

namespace {

constexpr std::array<char, 8> kMagic{'E', 'L', 'S', 'I', 'M', 'S', 'N', 'P'};
constexpr std::size_t kHeaderBytes = 8 + 4 * 4 + 8;

template <class T>
void put_le(std::vector<unsigned char>& out, T v) {
  std::array<unsigned char, sizeof(T)> b;
  std::memcpy(b.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  out.insert(out.end(), b.begin(), b.end());
}

template <class T>
T get_le(const unsigned char* p) {
  std::array<unsigned char, sizeof(T)> b;
  std::memcpy(b.data(), p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  T v;
  std::memcpy(&v, b.data(), sizeof(T));
  return v;
}

std::vector<unsigned char> read_bytes(const std::filesystem::path& path, std::size_t limit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot " + path.string());
  std::vector<unsigned char> buf;
  char chunk[1 << 14];
  while (buf.size() < limit && in) {
    in.read(chunk, static_cast<std::streamsize>(std::min(sizeof chunk, limit - buf.size())));
    buf.insert(buf.end(), chunk, chunk + in.gcount());
  }
  return buf;
}

SnapshotHeader decode_header(const std::vector<unsigned char>& b, const std::filesystem::path& path) {
  if (b.size() < kHeaderBytes) throw IoError("truncated snapshot header in " + path.string());
  if (!std::equal(kMagic.begin(), kMagic.end(), b.begin())) {
    throw IoError(path.string() + " is not a snapshot file");
  }
  SnapshotHeader h;
  h.version = get_le<std::uint32_t>(b.data() + 8);
  h.dim = get_le<std::uint32_t>(b.data() + 12);
  h.n = get_le<std::uint32_t>(b.data() + 16);
  h.components = get_le<std::uint32_t>(b.data() + 20);
  h.time = get_le<double>(b.data() + 24);
  if (h.version != kSnapshotVersion) {
    throw IoError("unsupported snapshot version " + std::to_string(h.version) + " in " +
                  path.string());
  }
  if ((h.dim != 2 && h.dim != 3) || h.n == 0 || h.components == 0) {
    throw IoError("corrupt snapshot header in " + path.string());
  }
  return h;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const FieldData& field, double time) {
  const auto& g = field.grid();
  std::vector<unsigned char> out;
  out.reserve(kHeaderBytes + field.data().size() * sizeof(double));
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  put_le<std::uint32_t>(out, kSnapshotVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.n()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(field.components()));
  put_le<double>(out, time);
  for (const double v : field.data()) put_le<double>(out, v);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write snapshot " + path.string());
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("short write to snapshot " + path.string());
}

SnapshotHeader read_snapshot_header(const std::filesystem::path& path) {
  return decode_header(read_bytes(path, kHeaderBytes), path);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path, static_cast<std::size_t>(-1));
  Snapshot s;
  s.header = decode_header(bytes, path);
  std::size_t count = s.header.components;
  for (std::uint32_t a = 0; a < s.header.dim; ++a) count *= s.header.n;
  if (bytes.size() != kHeaderBytes + count * sizeof(double)) {
    throw IoError("snapshot " + path.string() + " has " + std::to_string(bytes.size()) +
                  " bytes, header implies " + std::to_string(kHeaderBytes + count * 8));
  }
  s.data.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    s.data[i] = get_le<double>(bytes.data() + kHeaderBytes + i * sizeof(double));
  }
  return s;
}

VectorField load_field(const std::filesystem::path& path, const GridPtr& grid,
                       std::size_t components, double* time) {
  auto snap = read_snapshot(path);
  const auto& h = snap.header;
  if (static_cast<int>(h.dim) != grid->dim() || static_cast<int>(h.n) != grid->n() ||
      h.components != components) {
    throw GridMismatchError("snapshot " + path.string() + " is dim=" + std::to_string(h.dim) +
                            " n=" + std::to_string(h.n) + " with " +
                            std::to_string(h.components) + " components; expected dim=" +
                            std::to_string(grid->dim()) + " n=" + std::to_string(grid->n()) +
                            " with " + std::to_string(components));
  }
  VectorField f(grid, components);
  std::copy(snap.data.begin(), snap.data.end(), f.data().begin());
  f.require_finite("snapshot " + path.string());
  if (time != nullptr) *time = h.time;
  return f;
}

}  // namespace elsim
