#include "mll/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace mll {

namespace {

constexpr char kMagic[4] = {'M', 'L', 'S', 'F'};

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  void raw(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    bytes_.insert(bytes_.end(), p, p + n);
  }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(bits);
  }
  std::string str(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw SnapshotError("snapshot truncated");
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

// Storage index of the row-th wavevector in ascending wavenumber order.
std::size_t storage_index(const TorusGrid& grid, std::size_t row) {
  const int n = grid.n();
  int k[3] = {0, 0, 0};
  for (int axis = grid.dim() - 1; axis >= 0; --axis) {
    k[axis] = static_cast<int>(row % static_cast<std::size_t>(n)) - n / 2 + 1;
    row /= static_cast<std::size_t>(n);
  }
  return grid.index_of(std::span<const int>(k, 3));
}

}  // namespace

const SpectralField& Snapshot::field(const std::string& name) const {
  for (const auto& f : fields) {
    if (f.name == name) return f.field;
  }
  throw SnapshotError("snapshot has no field named '" + name + "'");
}

std::vector<std::uint8_t> encode_snapshot(const Snapshot& snapshot) {
  const auto& grid = snapshot.grid;
  Writer w;
  w.raw(kMagic, 4);
  w.u32(kSnapshotVersion);
  w.u32(static_cast<std::uint32_t>(grid.dim()));
  w.u32(static_cast<std::uint32_t>(grid.n()));
  w.u32(static_cast<std::uint32_t>(snapshot.fields.size()));
  for (const auto& [name, field] : snapshot.fields) {
    if (!(field.grid() == grid)) throw SnapshotError("field '" + name + "' is on a different grid");
    w.u32(static_cast<std::uint32_t>(name.size()));
    w.raw(name.data(), name.size());
    const auto c = field.coefficients();
    for (std::size_t row = 0; row < grid.size(); ++row) {
      const Complex z = c[storage_index(grid, row)];
      w.f64(z.real());
      w.f64(z.imag());
    }
  }
  return w.take();
}

Snapshot decode_snapshot(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  if (r.str(4) != std::string(kMagic, 4)) throw SnapshotError("not a snapshot file (bad magic)");
  const auto version = r.u32();
  if (version != kSnapshotVersion) throw SnapshotError("unsupported snapshot version " + std::to_string(version));
  const auto dim = r.u32();
  const auto n = r.u32();
  if (dim > 3 || n > (1u << 16)) throw SnapshotError("snapshot grid header out of range");
  TorusGrid grid = [&] {
    try {
      return TorusGrid(static_cast<int>(dim), static_cast<int>(n));
    } catch (const std::invalid_argument& e) {
      throw SnapshotError(std::string("invalid snapshot grid: ") + e.what());
    }
  }();
  const auto count = r.u32();
  Snapshot snapshot{grid, {}};
  for (std::uint32_t f = 0; f < count; ++f) {
    const auto name_length = r.u32();
    std::string name = r.str(name_length);
    std::vector<Complex> c(grid.size());
    for (std::size_t row = 0; row < grid.size(); ++row) {
      const double re = r.f64();
      const double im = r.f64();
      c[storage_index(grid, row)] = {re, im};
    }
    snapshot.fields.push_back({std::move(name), SpectralField(grid, std::move(c))});
  }
  if (!r.done()) throw SnapshotError("trailing bytes after snapshot payload");
  return snapshot;
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snapshot) {
  const auto bytes = encode_snapshot(snapshot);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw SnapshotError("write to '" + path.string() + "' failed");
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

Snapshot snapshot_of(const StateU& u) {
  Snapshot s{u.grid(), {}};
  s.fields.push_back({"p", u.p});
  for (std::size_t i = 0; i < u.v.size(); ++i) s.fields.push_back({"v" + std::to_string(i + 1), u.v[i]});
  return s;
}

VectorField velocity_snapshot_fields(const Snapshot& snapshot, const std::string& prefix) {
  VectorField v;
  for (int i = 0; i < snapshot.grid.dim(); ++i) v.push_back(snapshot.field(prefix + std::to_string(i + 1)));
  return v;
}

StateU state_from_snapshot(const Snapshot& snapshot) {
  return StateU{snapshot.field("p"), velocity_snapshot_fields(snapshot, "v"), 1.0, 0.0};
}

}  // namespace mll
