#include "oseen/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>

#include "oseen/fields.hpp"
#include "oseen/simd/kernels.hpp"

namespace oseen {
namespace {

// Running Neumaier sum, so that prefix sums agree with the full compensated
// reductions used by lp_norm.
class RunningSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::fabs(sum_) >= std::fabs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

std::vector<std::size_t> build_radial_order(std::size_t n) {
  const GridSpec unit(1.0, n);
  std::vector<long long> key(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) key[i * n + j] = unit.radius_key(i, j);
  }
  std::vector<std::size_t> order(n * n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Row-major index order is (i, j) lexicographic order, so a stable sort on
  // the radius key gives the declared tie-break.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  return order;
}

}  // namespace

double RearrangementProfile::value_at(double s) const {
  if (s < 0.0) throw DomainError("RearrangementProfile::value_at: measure must be >= 0");
  const auto k = static_cast<std::size_t>(s / cell_measure);
  return k < levels.size() ? levels[k] : 0.0;
}

double RearrangementProfile::cumulative_at(double s) const {
  if (s <= 0.0 || levels.empty()) return 0.0;
  const auto k = static_cast<std::size_t>(s / cell_measure);
  if (k >= levels.size()) return total();
  const double before = k == 0 ? 0.0 : cumulative[k - 1];
  return before + levels[k] * (s - static_cast<double>(k) * cell_measure);
}

double distribution_function(const ScalarField& f, double t) {
  if (!(t >= 0.0)) throw DomainError("distribution_function: level must be >= 0");
  const auto values = f.values();
  const auto count =
      std::count_if(values.begin(), values.end(), [t](double v) { return std::fabs(v) > t; });
  return f.grid().cell_area() * static_cast<double>(count);
}

RearrangementProfile decreasing_rearrangement(const ScalarField& f) {
  RearrangementProfile p;
  p.cell_measure = f.grid().cell_area();
  const auto values = f.values();
  p.levels.resize(values.size());
  std::transform(values.begin(), values.end(), p.levels.begin(),
                 [](double v) { return std::fabs(v); });
  std::sort(p.levels.begin(), p.levels.end(), std::greater<>());
  p.cumulative.resize(p.levels.size());
  RunningSum acc;
  for (std::size_t k = 0; k < p.levels.size(); ++k) {
    acc.add(p.levels[k]);
    p.cumulative[k] = p.cell_measure * acc.value();
  }
  return p;
}

const std::vector<std::size_t>& radial_cell_order(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<const std::vector<std::size_t>>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<const std::vector<std::size_t>>(build_radial_order(n));
  return *slot;
}

ScalarField symmetric_rearrangement(const ScalarField& f) {
  const auto profile = decreasing_rearrangement(f);
  const auto& order = radial_cell_order(f.grid().n());
  ScalarField out(f.grid(), f.time());
  auto values = out.values();
  for (std::size_t k = 0; k < order.size(); ++k) values[order[k]] = profile.levels[k];
  return out;
}

DominationReport dominates(const RearrangementProfile& f, const RearrangementProfile& g,
                           double tol_mass) {
  if (f.size() != g.size() || f.cell_measure != g.cell_measure) {
    throw DomainError("dominates: profiles come from different grids");
  }
  DominationReport report;
  report.tol_mass = tol_mass;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double margin = g.cumulative[k] - f.cumulative[k];
    if (margin < report.worst_margin) {
      report.worst_margin = margin;
      report.radius_at_worst =
          std::sqrt(static_cast<double>(k + 1) * f.cell_measure / std::numbers::pi);
    }
  }
  report.dominated = report.worst_margin >= -tol_mass;
  return report;
}

DominationReport dominates(const ScalarField& f, const ScalarField& g, double tol_mass) {
  require_same_grid(f.grid(), g.grid(), "dominates");
  return dominates(decreasing_rearrangement(f), decreasing_rearrangement(g), tol_mass);
}

ConvexFunction ConvexFunction::square() { return {Kind::kSquare, 0.0}; }
ConvexFunction ConvexFunction::three_halves() { return {Kind::kThreeHalves, 0.0}; }
ConvexFunction ConvexFunction::hinge(double c) {
  if (!(c >= 0.0)) throw DomainError("ConvexFunction::hinge: threshold must be >= 0");
  return {Kind::kHinge, c};
}

double ConvexFunction::operator()(double t) const {
  switch (kind_) {
    case Kind::kSquare:
      return t * t;
    case Kind::kThreeHalves:
      return t * std::sqrt(t);
    case Kind::kHinge:
      return std::max(t - c_, 0.0);
  }
  return 0.0;
}

std::string ConvexFunction::name() const {
  switch (kind_) {
    case Kind::kSquare:
      return "t^2";
    case Kind::kThreeHalves:
      return "t^1.5";
    case Kind::kHinge: {
      std::ostringstream s;
      s << "max(t-" << c_ << ",0)";
      return s.str();
    }
  }
  return "?";
}

double convex_test_functional(const ScalarField& f, const ConvexFunction& phi) {
  const auto values = f.values();
  std::vector<double> mapped(values.size());
  std::transform(values.begin(), values.end(), mapped.begin(),
                 [&](double v) { return phi(std::fabs(v)); });
  // Ascending order makes the sum a function of the multiset of values, so
  // f and f^# give identical results.
  std::sort(mapped.begin(), mapped.end());
  return f.grid().cell_area() * simd::sum(mapped);
}

Prop1Gap prop1_gap(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid(), "prop1_gap");
  const double radial_defect = lp_distance(g, symmetric_rearrangement(g), 1.0);
  if (radial_defect > 1e-10) {
    std::ostringstream msg;
    msg << "prop1_gap: g is not radially nonincreasing (||g - g^#||_1 = " << radial_defect << ")";
    throw DomainError(msg.str());
  }
  const double mf = integrate(f);
  const double mg = integrate(g);
  if (std::fabs(mf - mg) > 1e-8 * std::fabs(mg)) {
    std::ostringstream msg;
    msg << "prop1_gap: masses differ (" << mf << " vs " << mg << ")";
    throw DomainError(msg.str());
  }

  const auto pf = decreasing_rearrangement(f);
  const auto pg = decreasing_rearrangement(g);
  const double delta = pf.cell_measure;
  Prop1Gap gap;
  RunningSum moment, area;
  double previous_H = 0.0;
  for (std::size_t k = 0; k < pf.size(); ++k) {
    const double H = pg.cumulative[k] - pf.cumulative[k];
    gap.entropy_gap = std::max(gap.entropy_gap, H);
    gap.min_H = std::min(gap.min_H, H);
    // Exact integrals of the step function s * (f* - g*) and of the
    // piecewise-linear H over the cell [k delta, (k+1) delta).
    moment.add((static_cast<double>(k) + 0.5) * (pf.levels[k] - pg.levels[k]));
    area.add(0.5 * (previous_H + H));
    previous_H = H;
  }
  gap.moment_gap = delta * delta * moment.value();
  gap.integral_H = delta * area.value();
  return gap;
}

}  // namespace oseen
