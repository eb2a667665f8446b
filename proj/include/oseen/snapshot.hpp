#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>

#include "oseen/grid.hpp"

namespace oseen {

/// Snapshot layout (all little-endian):
///   "OSN1" | n: u32 | L: f64 | t: f64 (NaN = untagged) | alpha: f64 (NaN = n/a)
///   | n*n f64 values, row-major.
struct Snapshot {
  ScalarField field;
  std::optional<double> alpha;
};

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_snapshot(std::ostream& out, const ScalarField& field, std::optional<double> alpha);
void write_snapshot(const std::filesystem::path& path, const ScalarField& field,
                    std::optional<double> alpha);

Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace oseen
