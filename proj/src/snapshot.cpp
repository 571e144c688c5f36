#include "qfield/io/snapshot.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "qfield/error.hpp"

namespace qfield::io {

namespace {

void put_u64(std::vector<unsigned char>& out, std::uint64_t bits) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(bits >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& out, double value) {
  put_u64(out, std::bit_cast<std::uint64_t>(value));
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= std::uint64_t(p[i]) << (8 * i);
  return bits;
}

double get_f64(const unsigned char* p) { return std::bit_cast<double>(get_u64(p)); }

}  // namespace

void write_snapshot(const FieldState<double>& state, std::ostream& sink) {
  const auto n = static_cast<std::uint64_t>(state.grid.n_points);
  if (state.a.size() != state.grid.n_points || state.b.size() != state.grid.n_points) {
    throw ValidationError("field sample count does not match grid");
  }
  std::vector<unsigned char> bytes;
  bytes.reserve(kSnapshotHeaderBytes + 16 * n);
  bytes.insert(bytes.end(), std::begin(kSnapshotMagic), std::end(kSnapshotMagic));
  bytes.push_back(kSnapshotVersion);
  put_f64(bytes, state.grid.x_min);
  put_f64(bytes, state.grid.x_max);
  put_u64(bytes, n);
  put_f64(bytes, state.time);
  for (Index i = 0; i < state.a.size(); ++i) put_f64(bytes, state.a[i]);
  for (Index i = 0; i < state.b.size(); ++i) put_f64(bytes, state.b[i]);
  sink.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  sink.flush();
  if (!sink) throw IoError("failed writing snapshot");
}

FieldState<double> read_snapshot(std::istream& source) {
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(source)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < kSnapshotHeaderBytes) {
    throw IoError("snapshot truncated: header needs " + std::to_string(kSnapshotHeaderBytes) +
                  " bytes, got " + std::to_string(bytes.size()));
  }
  if (std::memcmp(bytes.data(), kSnapshotMagic, sizeof kSnapshotMagic) != 0) {
    throw IoError("not a snapshot: bad magic");
  }
  if (bytes[5] != kSnapshotVersion) {
    throw IoError("unsupported snapshot version " + std::to_string(bytes[5]) + " (expected " +
                  std::to_string(kSnapshotVersion) + ")");
  }
  const double x_min = get_f64(&bytes[6]);
  const double x_max = get_f64(&bytes[14]);
  const std::uint64_t n = get_u64(&bytes[22]);
  const double time = get_f64(&bytes[30]);
  const std::size_t payload = bytes.size() - kSnapshotHeaderBytes;
  if (n > (std::uint64_t(1) << 40) || payload != 16 * n) {
    throw IoError("snapshot payload length mismatch: expected " + std::to_string(16 * n) +
                  " bytes, got " + std::to_string(payload));
  }
  GridSpec<double> grid;
  try {
    grid = make_grid(x_min, x_max, static_cast<Index>(n));
  } catch (const ValidationError& e) {
    throw IoError(std::string("snapshot has invalid grid: ") + e.what());
  }
  VectorX<double> a(grid.n_points), b(grid.n_points);
  const unsigned char* p = bytes.data() + kSnapshotHeaderBytes;
  for (Index i = 0; i < grid.n_points; ++i) a[i] = get_f64(p + 8 * i);
  p += 8 * n;
  for (Index i = 0; i < grid.n_points; ++i) b[i] = get_f64(p + 8 * i);
  return {grid, std::move(a), std::move(b), time};
}

void save_snapshot(const FieldState<double>& state, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_snapshot(state, out);
}

FieldState<double> load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_snapshot(in);
}

}  // namespace qfield::io
