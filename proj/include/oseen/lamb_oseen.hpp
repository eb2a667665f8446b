#pragma once

#include "oseen/grid.hpp"

namespace oseen {

/// Total circulation alpha = integral of the vorticity.
struct Circulation {
  double alpha = 1.0;
};

/// Self-similar profile G(xi) = exp(-|xi|^2 / 4) / (4 pi).
double gauss_G(Point xi);

/// Velocity profile v^G(xi) = xi^perp / (2 pi |xi|^2) * (1 - exp(-|xi|^2 / 4)),
/// with xi^perp = (-xi2, xi1). Near the origin the bracket over |xi|^2 is
/// replaced by its Taylor series.
Vec2 velocity_vG(Point xi);

/// Omega(x, t) = alpha / t * G(x / sqrt t). Rejects t <= 0.
double oseen_vorticity(Point x, double t, Circulation alpha);

/// u(x, t) = alpha / sqrt t * v^G(x / sqrt t). Rejects t <= 0.
Vec2 oseen_velocity(Point x, double t, Circulation alpha);

/// Grid samples of the closed forms, tagged with t.
ScalarField sample_oseen_vorticity(const GridSpec& grid, double t, Circulation alpha);
VectorField sample_oseen_velocity(const GridSpec& grid, double t, Circulation alpha);

/// G sampled on a grid (no time tag).
ScalarField sample_gauss_G(const GridSpec& grid);

}  // namespace oseen
