#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace oseen {

/// Raised for violated preconditions on domain objects.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
};

struct Vec2 {
  double v1 = 0.0;
  double v2 = 0.0;
};

/// Uniform square grid of n x n cells on [-L, L]^2. Cell (i, j) is centred at
/// (-L + (i + 1/2) h, -L + (j + 1/2) h); i indexes x1 and is the slow index.
class GridSpec {
 public:
  GridSpec(double half_width, std::size_t n);

  double half_width() const { return half_width_; }
  std::size_t n() const { return n_; }
  double spacing() const { return spacing_; }
  double cell_area() const { return spacing_ * spacing_; }
  std::size_t cell_count() const { return n_ * n_; }

  double center(std::size_t i) const {
    return -half_width_ + (static_cast<double>(i) + 0.5) * spacing_;
  }
  Point cell_center(std::size_t i, std::size_t j) const { return {center(i), center(j)}; }

  /// |x_ij|^2 in units of (h/2)^2, exact in integer arithmetic. Used wherever
  /// radial ties must be detected exactly.
  long long radius_key(std::size_t i, std::size_t j) const {
    const long long a = 2 * static_cast<long long>(i) + 1 - static_cast<long long>(n_);
    const long long b = 2 * static_cast<long long>(j) + 1 - static_cast<long long>(n_);
    return a * a + b * b;
  }

  bool operator==(const GridSpec& other) const {
    return n_ == other.n_ && half_width_ == other.half_width_;
  }

 private:
  double half_width_;
  std::size_t n_;
  double spacing_;
};

/// Gridded real function, row-major (i over x1 slow, j over x2 fast).
class ScalarField {
 public:
  explicit ScalarField(GridSpec grid, std::optional<double> time = std::nullopt);
  ScalarField(GridSpec grid, std::vector<double> values, std::optional<double> time = std::nullopt);

  template <class F>
  static ScalarField sample(const GridSpec& grid, F&& fn, std::optional<double> time = std::nullopt) {
    ScalarField out(grid, time);
    for (std::size_t i = 0; i < grid.n(); ++i) {
      for (std::size_t j = 0; j < grid.n(); ++j) out(i, j) = fn(grid.cell_center(i, j));
    }
    return out;
  }

  const GridSpec& grid() const { return grid_; }
  std::optional<double> time() const { return time_; }
  void set_time(std::optional<double> t) { time_ = t; }

  double& operator()(std::size_t i, std::size_t j) { return values_[i * grid_.n() + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * grid_.n() + j]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& storage() { return values_; }

  /// True when every value is finite.
  bool finite() const;

  ScalarField& operator*=(double a);
  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);

 private:
  GridSpec grid_;
  std::vector<double> values_;
  std::optional<double> time_;
};

ScalarField operator*(double a, ScalarField f);
ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);

/// Gridded two-component field (velocity u or rescaled velocity v).
struct VectorField {
  explicit VectorField(GridSpec g, std::optional<double> t = std::nullopt)
      : grid(g), u1(g.cell_count(), 0.0), u2(g.cell_count(), 0.0), time(t) {}

  GridSpec grid;
  std::vector<double> u1;
  std::vector<double> u2;
  std::optional<double> time;

  Vec2 at(std::size_t i, std::size_t j) const {
    const std::size_t k = i * grid.n() + j;
    return {u1[k], u2[k]};
  }
};

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

}  // namespace oseen
