#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "oseen/grid.hpp"

namespace oseen {

/// Decreasing rearrangement f* of a gridded function as a step function: entry
/// k covers measures [k h^2, (k+1) h^2).
struct RearrangementProfile {
  std::vector<double> levels;      // |f| sorted descending
  double cell_measure = 0.0;       // h^2
  std::vector<double> cumulative;  // cumulative[k] = integral of f* over [0, (k+1) h^2]

  std::size_t size() const { return levels.size(); }
  double total() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
  /// f*(s); zero beyond the grid measure.
  double value_at(double s) const;
  /// Integral of f* over [0, s], linear inside a cell.
  double cumulative_at(double s) const;
};

/// meas{|f| > t}. Rejects t < 0.
double distribution_function(const ScalarField& f, double t);

RearrangementProfile decreasing_rearrangement(const ScalarField& f);

/// Cell indices (i * n + j) ordered by distance to the origin, ties broken by
/// (i, j). Depends only on n.
const std::vector<std::size_t>& radial_cell_order(std::size_t n);

/// f^#: the k-th closest cell receives the k-th largest |f|.
ScalarField symmetric_rearrangement(const ScalarField& f);

struct DominationReport {
  bool dominated = true;
  /// min over prefix measures of (integral of g^# - integral of f^#) over the
  /// disc of that measure, including the empty disc, so never positive.
  double worst_margin = 0.0;
  /// Radius R with pi R^2 equal to the prefix measure of the worst margin.
  double radius_at_worst = 0.0;
  double tol_mass = 0.0;
};

/// Is f dominated by g, up to tol_mass? Both profiles must come from the
/// same grid.
DominationReport dominates(const RearrangementProfile& f, const RearrangementProfile& g,
                           double tol_mass);
DominationReport dominates(const ScalarField& f, const ScalarField& g, double tol_mass);

/// The convex test functions used to cross-check domination. All satisfy
/// phi(0) = 0.
class ConvexFunction {
 public:
  static ConvexFunction square();
  static ConvexFunction three_halves();
  /// max(t - c, 0), c >= 0.
  static ConvexFunction hinge(double c);

  double operator()(double t) const;
  std::string name() const;

 private:
  enum class Kind { kSquare, kThreeHalves, kHinge };
  ConvexFunction(Kind kind, double c) : kind_(kind), c_(c) {}
  Kind kind_;
  double c_;
};

/// h^2 * sum phi(|f|).
double convex_test_functional(const ScalarField& f, const ConvexFunction& phi);

/// Quantitative form of the rigidity statement: with H(r) the integral of
/// g* - f* over [0, r],
///   entropy_gap  = sup_r H(r)
///   moment_gap   = integral of s (f*(s) - g*(s)) ds
///   min_H        = inf_r H(r)    (>= 0 iff f is dominated by g)
///   integral_H   = integral of H(s) ds
/// Integration by parts gives moment_gap = integral_H up to the boundary
/// term S * H(S), which vanishes for equal masses. Both gaps are zero iff
/// f* = g*.
struct Prop1Gap {
  double entropy_gap = 0.0;
  double moment_gap = 0.0;
  double min_H = 0.0;
  double integral_H = 0.0;
};

/// Requires g to be radially nonincreasing (||g - g^#||_1 <= 1e-10) and the
/// two masses to agree within 1e-8 relative; throws DomainError otherwise.
Prop1Gap prop1_gap(const ScalarField& f, const ScalarField& g);

}  // namespace oseen
