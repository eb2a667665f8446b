#include "oseen/lamb_oseen.hpp"

#include <cmath>
#include <numbers>

namespace oseen {
namespace {

constexpr double kPi = std::numbers::pi;

// (1 - exp(-r2/4)) / r2, switching to the series
// 1/4 - r2/32 + r2^2/384 - r2^3/6144 below r2 = 1e-4 (truncation < 1e-18).
double bracket_over_r2(double r2) {
  if (r2 < 1e-4) {
    return 0.25 - r2 / 32.0 + r2 * r2 / 384.0 - r2 * r2 * r2 / 6144.0;
  }
  return -std::expm1(-0.25 * r2) / r2;
}

void require_positive_time(double t) {
  if (!(t > 0.0)) throw DomainError("Lamb-Oseen vortex: t must be positive");
}

}  // namespace

double gauss_G(Point xi) {
  return std::exp(-0.25 * (xi.x1 * xi.x1 + xi.x2 * xi.x2)) / (4.0 * kPi);
}

Vec2 velocity_vG(Point xi) {
  const double r2 = xi.x1 * xi.x1 + xi.x2 * xi.x2;
  const double s = bracket_over_r2(r2) / (2.0 * kPi);
  return {-xi.x2 * s, xi.x1 * s};
}

double oseen_vorticity(Point x, double t, Circulation alpha) {
  require_positive_time(t);
  const double st = std::sqrt(t);
  return alpha.alpha / t * gauss_G({x.x1 / st, x.x2 / st});
}

Vec2 oseen_velocity(Point x, double t, Circulation alpha) {
  require_positive_time(t);
  const double st = std::sqrt(t);
  const Vec2 v = velocity_vG({x.x1 / st, x.x2 / st});
  const double c = alpha.alpha / st;
  return {c * v.v1, c * v.v2};
}

ScalarField sample_oseen_vorticity(const GridSpec& grid, double t, Circulation alpha) {
  require_positive_time(t);
  return ScalarField::sample(grid, [&](Point x) { return oseen_vorticity(x, t, alpha); }, t);
}

VectorField sample_oseen_velocity(const GridSpec& grid, double t, Circulation alpha) {
  require_positive_time(t);
  VectorField out(grid, t);
  for (std::size_t i = 0; i < grid.n(); ++i) {
    for (std::size_t j = 0; j < grid.n(); ++j) {
      const Vec2 u = oseen_velocity(grid.cell_center(i, j), t, alpha);
      out.u1[i * grid.n() + j] = u.v1;
      out.u2[i * grid.n() + j] = u.v2;
    }
  }
  return out;
}

ScalarField sample_gauss_G(const GridSpec& grid) {
  return ScalarField::sample(grid, gauss_G);
}

}  // namespace oseen
