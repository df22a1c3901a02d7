#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "elsim/field.hpp"

namespace elsim {

/// Binary field file: 8-byte magic "ELSIMSNP", then little-endian u32 version,
/// dim, n, component count, f64 time, followed by the samples as f64,
/// component-major, each component row-major with the last axis fastest.
struct SnapshotHeader {
  std::uint32_t version = 1;
  std::uint32_t dim = 0;
  std::uint32_t n = 0;
  std::uint32_t components = 0;
  double time = 0.0;
};

struct Snapshot {
  SnapshotHeader header;
  std::vector<double> data;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

/// Throws IoError on write failure.
void write_snapshot(const std::filesystem::path& path, const FieldData& field, double time);
/// Throws IoError for missing/truncated files, a bad magic or unknown version.
SnapshotHeader read_snapshot_header(const std::filesystem::path& path);
Snapshot read_snapshot(const std::filesystem::path& path);

/// Loads a snapshot into a field on `grid`. Throws GridMismatchError if the
/// file's dim, n or component count differ from the request.
VectorField load_field(const std::filesystem::path& path, const GridPtr& grid,
                       std::size_t components, double* time = nullptr);

}  // namespace elsim
