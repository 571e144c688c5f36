#pragma once

// Binary field snapshot, all multi-byte values little-endian:
//
//   offset  size  content
//   0       5     magic "QFLD1"
//   5       1     format version (1)
//   6       8     x_min   (IEEE-754 double)
//   14      8     x_max   (IEEE-754 double)
//   22      8     n       (unsigned 64-bit)
//   30      8     time    (IEEE-754 double)
//   38      8n    A samples
//   38+8n   8n    B samples

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>

#include "qfield/field_state.hpp"

namespace qfield::io {

inline constexpr char kSnapshotMagic[5] = {'Q', 'F', 'L', 'D', '1'};
inline constexpr std::uint8_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 38;

void write_snapshot(const FieldState<double>& state, std::ostream& sink);
FieldState<double> read_snapshot(std::istream& source);

void save_snapshot(const FieldState<double>& state, const std::filesystem::path& path);
FieldState<double> load_snapshot(const std::filesystem::path& path);

}  // namespace qfield::io
