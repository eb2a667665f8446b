#include "oseen/snapshot.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <vector>

namespace oseen {
namespace {

constexpr std::array<char, 4> kMagic{'O', 'S', 'N', '1'};

template <class T>
void put_le(std::ostream& out, T value) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits = std::bit_cast<U>(value);
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t k = 0; k < sizeof(T); ++k) {
    bytes[k] = static_cast<char>(bits & 0xffu);
    bits >>= 8;
  }
  out.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& in) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw SnapshotError("snapshot: truncated header or payload");
  U bits = 0;
  for (std::size_t k = sizeof(T); k-- > 0;) bits = (bits << 8) | bytes[k];
  return std::bit_cast<T>(bits);
}

double or_nan(std::optional<double> v) {
  return v ? *v : std::numeric_limits<double>::quiet_NaN();
}

std::optional<double> from_nan(double v) {
  if (std::isnan(v)) return std::nullopt;
  return v;
}

}  // namespace

void write_snapshot(std::ostream& out, const ScalarField& field, std::optional<double> alpha) {
  const auto n = field.grid().n();
  if (n > std::numeric_limits<std::uint32_t>::max()) throw SnapshotError("snapshot: n too large");
  out.write(kMagic.data(), kMagic.size());
  put_le(out, static_cast<std::uint32_t>(n));
  put_le(out, field.grid().half_width());
  put_le(out, or_nan(field.time()));
  put_le(out, or_nan(alpha));
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(field.values().data()),
              static_cast<std::streamsize>(field.values().size_bytes()));
  } else {
    for (double v : field.values()) put_le(out, v);
  }
  if (!out) throw SnapshotError("snapshot: write failed");
}

void write_snapshot(const std::filesystem::path& path, const ScalarField& field,
                    std::optional<double> alpha) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError("snapshot: cannot open " + path.string() + " for writing");
  write_snapshot(out, field, alpha);
}

Snapshot read_snapshot(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw SnapshotError("snapshot: bad magic (expected OSN1)");
  const auto n = get_le<std::uint32_t>(in);
  const auto half_width = get_le<double>(in);
  const auto t = get_le<double>(in);
  const auto alpha = get_le<double>(in);
  GridSpec grid(half_width, n);
  std::vector<double> values(grid.cell_count());
  if constexpr (std::endian::native == std::endian::little) {
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!in) throw SnapshotError("snapshot: truncated payload");
  } else {
    for (double& v : values) v = get_le<double>(in);
  }
  return {ScalarField(grid, std::move(values), from_nan(t)), from_nan(alpha)};
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("snapshot: cannot open " + path.string());
  return read_snapshot(in);
}

}  // namespace oseen
