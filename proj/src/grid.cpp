#include "oseen/grid.hpp"

#include <algorithm>
#include <string>

namespace oseen {

GridSpec::GridSpec(double half_width, std::size_t n)
    : half_width_(half_width), n_(n), spacing_(2.0 * half_width / static_cast<double>(n)) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw DomainError("GridSpec: half width L must be positive and finite");
  }
  if (n < 16 || n % 2 != 0) {
    throw DomainError("GridSpec: n must be even and >= 16 (got " + std::to_string(n) + ")");
  }
}

ScalarField::ScalarField(GridSpec grid, std::optional<double> time)
    : grid_(grid), values_(grid.cell_count(), 0.0), time_(time) {}

ScalarField::ScalarField(GridSpec grid, std::vector<double> values, std::optional<double> time)
    : grid_(grid), values_(std::move(values)), time_(time) {
  if (values_.size() != grid_.cell_count()) {
    throw DomainError("ScalarField: value count does not match grid");
  }
}

bool ScalarField::finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator*=(double a) {
  for (double& v : values_) v *= a;
  return *this;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "ScalarField +=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "ScalarField -=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

ScalarField operator*(double a, ScalarField f) { return f *= a; }
ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw DomainError(std::string(what) + ": grid mismatch");
}

}  // namespace oseen
