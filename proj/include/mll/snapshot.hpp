#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mll/spectral.hpp"

namespace mll {

// Binary snapshot layout, all integers and floats little-endian:
//
//   "MLSF"                 4 bytes
//   version                u32 (= 1)
//   d, N                   u32, u32
//   field count            u32
//   per field:
//     name length          u32
//     name                 UTF-8 bytes
//     N^d coefficients     (re, im) float64 pairs
//
// Coefficients are written row-major over wavevectors, each axis running
// through k = -N/2+1, ..., N/2 in ascending order (last axis fastest).
inline constexpr std::uint32_t kSnapshotVersion = 1;

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NamedField {
  std::string name;
  SpectralField field;
};

struct Snapshot {
  TorusGrid grid;
  std::vector<NamedField> fields;

  const SpectralField& field(const std::string& name) const;
};

std::vector<std::uint8_t> encode_snapshot(const Snapshot& snapshot);
Snapshot decode_snapshot(std::span<const std::uint8_t> bytes);

void write_snapshot(const std::filesystem::path& path, const Snapshot& snapshot);
Snapshot read_snapshot(const std::filesystem::path& path);

// Fields named p, v1, ..., vd.
Snapshot snapshot_of(const StateU& u);
VectorField velocity_snapshot_fields(const Snapshot& snapshot, const std::string& prefix);
StateU state_from_snapshot(const Snapshot& snapshot);

}  // namespace mll
