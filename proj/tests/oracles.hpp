#pragma once

// Reference computations for the tests. Nothing here calls into the library
// code paths under test: each value is rebuilt from first principles (direct
// sums, 1-D quadrature, closed forms) so that agreement is evidence rather
// than a tautology.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "oseen/grid.hpp"

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

inline double gauss(double x1, double x2) {
  return std::exp(-(x1 * x1 + x2 * x2) / 4.0) / (4.0 * kPi);
}

/// |v^G| as a function of r, written out directly.
inline double vg_speed(double r) { return -std::expm1(-r * r / 4.0) / (2.0 * kPi * r); }

/// Maximum of a unimodal function on [a, b] by golden-section search.
inline double golden_max(const std::function<double(double)>& f, double a, double b,
                         double* argmax = nullptr) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  while (b - a > 1e-12) {
    if (f(c) > f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - inv_phi * (b - a);
    d = a + inv_phi * (b - a);
  }
  const double x = 0.5 * (a + b);
  if (argmax) *argmax = x;
  return f(x);
}

/// Composite Simpson rule for int_a^b f, with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t panels = 20000) {
  if (panels % 2) ++panels;
  const double h = (b - a) / static_cast<double>(panels);
  double s = f(a) + f(b);
  for (std::size_t k = 1; k < panels; ++k) {
    s += (k % 2 ? 4.0 : 2.0) * f(a + static_cast<double>(k) * h);
  }
  return s * h / 3.0;
}

/// Radially symmetric density exp(-r^2 / 4s) / (4 pi s): the Gaussian with s
/// times the variance of G. Entropy and Fisher information relative to G by
/// 1-D quadrature in r.
inline double scaled_gauss(double r, double s) {
  return std::exp(-r * r / (4.0 * s)) / (4.0 * kPi * s);
}

inline double scaled_gauss_entropy(double s) {
  const double R = 40.0 * std::sqrt(std::max(s, 1.0));
  return simpson(
      [s](double r) {
        const double f = scaled_gauss(r, s);
        // log(f / G) written out to avoid dividing two underflowing numbers.
        const double log_ratio = -std::log(s) - r * r / (4.0 * s) + r * r / 4.0;
        return f * log_ratio * 2.0 * kPi * r;
      },
      0.0, R);
}

inline double scaled_gauss_fisher(double s) {
  const double R = 40.0 * std::sqrt(std::max(s, 1.0));
  return simpson(
      [s](double r) {
        const double grad = r / 2.0 * (1.0 - 1.0 / s);  // d/dr log(f / G)
        return scaled_gauss(r, s) * grad * grad * 2.0 * kPi * r;
      },
      0.0, R);
}

/// ||G(. - m) - G||_1 for |m| = d: the two densities differ only along m,
/// where they are 1-D normals of variance 2 shifted by d.
inline double shifted_gauss_l1(double d) { return 2.0 * std::erf(d / 4.0); }

/// u(x_ij) = h^2 sum_kl K(x_ij - y_kl) omega_kl as a literal double sum.
template <class Kernel>
std::vector<std::pair<double, double>> direct_sum_velocity(const oseen::ScalarField& omega,
                                                           Kernel&& kernel) {
  const auto& g = omega.grid();
  const std::size_t n = g.n();
  std::vector<std::pair<double, double>> u(n * n, {0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      long double a = 0.0L, b = 0.0L;
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
          const auto [k1, k2] = kernel(static_cast<long long>(i) - static_cast<long long>(k),
                                       static_cast<long long>(j) - static_cast<long long>(l));
          a += static_cast<long double>(k1) * omega(k, l);
          b += static_cast<long double>(k2) * omega(k, l);
        }
      }
      u[i * n + j] = {static_cast<double>(a) * g.cell_area(),
                      static_cast<double>(b) * g.cell_area()};
    }
  }
  return u;
}

/// x^perp / (2 pi |x|^2) at lattice offset (di, dj) h, zero at the origin.
inline std::pair<double, double> point_kernel(long long di, long long dj, double h) {
  if (di == 0 && dj == 0) return {0.0, 0.0};
  const double x1 = static_cast<double>(di) * h;
  const double x2 = static_cast<double>(dj) * h;
  const double r2 = x1 * x1 + x2 * x2;
  return {-x2 / (2.0 * kPi * r2), x1 / (2.0 * kPi * r2)};
}

/// Values of f sorted by decreasing magnitude.
inline std::vector<double> sorted_magnitudes(const oseen::ScalarField& f) {
  std::vector<double> v;
  v.reserve(f.values().size());
  for (double x : f.values()) v.push_back(std::fabs(x));
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

/// int_0^S s (f*(s) - g*(s)) ds for step profiles on cells of measure delta:
/// cell k covers [k delta, (k+1) delta), where int s ds = delta^2 (k + 1/2).
inline double profile_moment_gap(const oseen::ScalarField& f, const oseen::ScalarField& g) {
  const auto a = sorted_magnitudes(f);
  const auto b = sorted_magnitudes(g);
  const double delta = f.grid().cell_area();
  long double sum = 0.0L;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sum += static_cast<long double>(a[k] - b[k]) * (static_cast<double>(k) + 0.5);
  }
  return static_cast<double>(sum) * delta * delta;
}

/// sup over prefix lengths of sum (g*_k - f*_k) delta, including the empty prefix.
inline double profile_sup_H(const oseen::ScalarField& f, const oseen::ScalarField& g) {
  const auto a = sorted_magnitudes(f);
  const auto b = sorted_magnitudes(g);
  long double H = 0.0L, best = 0.0L;
  for (std::size_t k = 0; k < a.size(); ++k) {
    H += static_cast<long double>(b[k] - a[k]);
    best = std::max(best, H);
  }
  return static_cast<double>(best) * f.grid().cell_area();
}

/// Smooth random field: a few Gaussians of random sign, width and position,
/// plus optional cellwise noise. Centres lie within spread * L of the origin
/// in each coordinate.
inline oseen::ScalarField random_field(const oseen::GridSpec& g, std::mt19937_64& rng,
                                       bool nonnegative, double noise = 0.0,
                                       double spread = 0.5) {
  std::uniform_real_distribution<double> pos(-spread * g.half_width(), spread * g.half_width());
  std::uniform_real_distribution<double> width(0.3, 1.5);
  std::uniform_real_distribution<double> amp(nonnegative ? 0.1 : -1.0, 1.0);
  std::uniform_int_distribution<int> bumps(1, 4);
  const int count = bumps(rng);
  struct Bump {
    double c1, c2, w, a;
  };
  std::vector<Bump> b;
  for (int k = 0; k < count; ++k) b.push_back({pos(rng), pos(rng), width(rng), amp(rng)});
  std::uniform_real_distribution<double> jitter(nonnegative ? 0.0 : -noise, noise);
  oseen::ScalarField f(g);
  for (std::size_t i = 0; i < g.n(); ++i) {
    for (std::size_t j = 0; j < g.n(); ++j) {
      const auto x = g.cell_center(i, j);
      double v = 0.0;
      for (const auto& q : b) {
        const double d1 = x.x1 - q.c1, d2 = x.x2 - q.c2;
        v += q.a * std::exp(-(d1 * d1 + d2 * d2) / (q.w * q.w));
      }
      f(i, j) = v + (noise > 0.0 ? jitter(rng) : 0.0);
    }
  }
  return f;
}

/// Random integer-valued staircase field with values in {0, ..., levels}.
inline oseen::ScalarField staircase_field(const oseen::GridSpec& g, std::mt19937_64& rng,
                                          int levels) {
  std::uniform_int_distribution<int> v(0, levels);
  oseen::ScalarField f(g);
  for (double& x : f.values()) x = static_cast<double>(v(rng));
  return f;
}

}  // namespace oracle
