#include "oseen/fields.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "oseen/simd/kernels.hpp"

namespace oseen {

double integrate(const ScalarField& f) {
  return f.grid().cell_area() * simd::sum(f.values());
}

double second_moment(const ScalarField& f) {
  // sum_ij (x_i^2 + x_j^2) f_ij = sum_i x_i^2 rowsum_i + sum_i <x^2, row_i>
  const GridSpec& g = f.grid();
  const std::size_t n = g.n();
  std::vector<double> sq(n);
  for (std::size_t j = 0; j < n; ++j) sq[j] = g.center(j) * g.center(j);
  std::vector<double> row_terms(2 * n);
  const auto values = f.values();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = values.subspan(i * n, n);
    row_terms[2 * i] = sq[i] * simd::sum(row);
    row_terms[2 * i + 1] = simd::dot(sq, row);
  }
  return g.cell_area() * simd::sum(row_terms);
}

Point first_moment(const ScalarField& f) {
  const GridSpec& g = f.grid();
  const std::size_t n = g.n();
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = g.center(j);
  std::vector<double> m1(n), m2(n);
  const auto values = f.values();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = values.subspan(i * n, n);
    m1[i] = x[i] * simd::sum(row);
    m2[i] = simd::dot(x, row);
  }
  return {g.cell_area() * simd::sum(m1), g.cell_area() * simd::sum(m2)};
}

namespace {

// Sums the terms in ascending order. The result depends only on the multiset
// of terms, so equimeasurable fields (f and its rearrangements) get bitwise
// identical norms.
double ordered_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  return simd::sum(terms);
}

}  // namespace

double lp_norm(const ScalarField& f, double p) {
  if (std::isnan(p) || p < 1.0) throw DomainError("lp_norm: p must be >= 1");
  const auto values = f.values();
  if (std::isinf(p)) return simd::max_abs(values);
  const double area = f.grid().cell_area();
  std::vector<double> terms(values.size());
  if (p == 1.0) {
    for (std::size_t k = 0; k < values.size(); ++k) terms[k] = std::fabs(values[k]);
    return area * ordered_sum(terms);
  }
  if (p == 2.0) {
    for (std::size_t k = 0; k < values.size(); ++k) terms[k] = values[k] * values[k];
    return std::sqrt(area * ordered_sum(terms));
  }
  // Generic exponent: scale by the max to keep pow in range.
  const double m = simd::max_abs(values);
  if (m == 0.0) return 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) terms[k] = std::pow(std::fabs(values[k]) / m, p);
  return m * std::pow(area * ordered_sum(terms), 1.0 / p);
}

double lp_distance(const ScalarField& f, const ScalarField& g, double p) {
  require_same_grid(f.grid(), g.grid(), "lp_distance");
  return lp_norm(f - g, p);
}

void sample_bilinear(const ScalarField& f, std::span<const double> x1, std::span<const double> x2,
                     std::span<double> out) {
  const GridSpec& g = f.grid();
  const simd::BilinearLattice lattice{f.values().data(), g.n(), g.center(0), 1.0 / g.spacing()};
  simd::active().bilinear(lattice, x1.data(), x2.data(), out.data(), out.size());
}

double sample_bilinear(const ScalarField& f, Point p) {
  double out = 0.0;
  sample_bilinear(f, std::span<const double>(&p.x1, 1), std::span<const double>(&p.x2, 1),
                  std::span<double>(&out, 1));
  return out;
}

namespace {

std::optional<double> scaled_time(const ScalarField& f, double lambda) {
  if (!f.time()) return std::nullopt;
  return *f.time() / (lambda * lambda);
}

void require_positive_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("rescale_solution: lambda must be positive");
  }
}

}  // namespace

ScalarField rescale_solution(const ScalarField& f, double lambda) {
  require_positive_lambda(lambda);
  const GridSpec target(f.grid().half_width() / lambda, f.grid().n());
  std::vector<double> values(f.values().begin(), f.values().end());
  for (double& v : values) v *= lambda * lambda;
  return ScalarField(target, std::move(values), scaled_time(f, lambda));
}

ScalarField rescale_solution(const ScalarField& f, double lambda, const GridSpec& target) {
  require_positive_lambda(lambda);
  const std::size_t count = target.cell_count();
  std::vector<double> x1(count), x2(count), out(count);
  for (std::size_t i = 0; i < target.n(); ++i) {
    for (std::size_t j = 0; j < target.n(); ++j) {
      x1[i * target.n() + j] = lambda * target.center(i);
      x2[i * target.n() + j] = lambda * target.center(j);
    }
  }
  sample_bilinear(f, x1, x2, out);
  for (double& v : out) v *= lambda * lambda;
  return ScalarField(target, std::move(out), scaled_time(f, lambda));
}

ScalarField to_self_similar(const ScalarField& omega) {
  const auto t = omega.time();
  if (!t || !(*t > 0.0)) throw DomainError("to_self_similar: needs a positive time tag");
  const GridSpec target(omega.grid().half_width() / std::sqrt(*t), omega.grid().n());
  std::vector<double> values(omega.values().begin(), omega.values().end());
  for (double& v : values) v *= *t;
  return ScalarField(target, std::move(values), std::log(*t));
}

ScalarField to_physical(const ScalarField& w) {
  const auto tau = w.time();
  if (!tau) throw DomainError("to_physical: needs a tau tag");
  const double t = std::exp(*tau);
  const GridSpec target(w.grid().half_width() * std::sqrt(t), w.grid().n());
  std::vector<double> values(w.values().begin(), w.values().end());
  for (double& v : values) v /= t;
  return ScalarField(target, std::move(values), t);
}

}  // namespace oseen
