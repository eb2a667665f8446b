#pragma once

#include <limits>
#include <span>

#include "oseen/grid.hpp"

namespace oseen {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Midpoint quadrature h^2 * sum(values).
double integrate(const ScalarField& f);

/// h^2 * sum |x_ij|^2 f_ij.
double second_moment(const ScalarField& f);

/// First moments (h^2 sum x1 f, h^2 sum x2 f).
Point first_moment(const ScalarField& f);

/// (h^2 sum |f|^p)^(1/p), or max |f| for p = infinity. Rejects p < 1. The terms
/// are summed in sorted order, so the result is invariant under permuting
/// the cells.
double lp_norm(const ScalarField& f, double p);

/// ||f - g||_{L^p} on a common grid.
double lp_distance(const ScalarField& f, const ScalarField& g, double p);

/// Bilinear evaluation of f at arbitrary points; the field is extended by zero
/// outside its lattice of cell centres.
void sample_bilinear(const ScalarField& f, std::span<const double> x1, std::span<const double> x2,
                     std::span<double> out);
double sample_bilinear(const ScalarField& f, Point p);

/// Scaling map f -> lambda^2 f(lambda x) onto GridSpec(L / lambda, n).
/// On that grid the samples land on source cell centres, so the map is exact;
/// the carried time tag becomes t / lambda^2.
ScalarField rescale_solution(const ScalarField& f, double lambda);

/// Same map sampled onto an explicit target grid by bilinear interpolation.
ScalarField rescale_solution(const ScalarField& f, double lambda, const GridSpec& target);

/// Self-similar change of variables w(xi, tau) = t omega(sqrt(t) xi, t),
/// tau = log t. Both directions copy values onto the rescaled grid
/// (half-width L / sqrt(t), resp. L e^{tau/2}), so they are exact.
/// to_self_similar needs a positive time tag t and tags the result with tau;
/// to_physical needs a tau tag and tags the result with t.
ScalarField to_self_similar(const ScalarField& omega);
ScalarField to_physical(const ScalarField& w);

}  // namespace oseen
