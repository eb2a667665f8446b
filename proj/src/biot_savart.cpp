#include "oseen/biot_savart.hpp"

#include <cmath>
#include <numbers>

#include "oseen/simd/kernels.hpp"

namespace oseen {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Signed offset represented by wrap-ordered index k on a lattice of size m.
long long signed_offset(std::size_t k, std::size_t m) {
  return k < m / 2 ? static_cast<long long>(k)
                   : static_cast<long long>(k) - static_cast<long long>(m);
}

std::size_t wrap(long long d, std::size_t m) {
  const long long mm = static_cast<long long>(m);
  return static_cast<std::size_t>(((d % mm) + mm) % mm);
}

}  // namespace

BiotSavartPlan::BiotSavartPlan(const GridSpec& grid, BiotSavartKernel kind)
    : grid_(grid), kind_(kind), fft_(fft::real_fft(2 * grid.n())) {
  const std::size_t n = grid.n();
  const std::size_t m = 2 * n;
  const double h = grid.spacing();
  k1_.assign(m * m, 0.0);
  k2_.assign(m * m, 0.0);

  if (kind == BiotSavartKernel::kPointSample) {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        const long long di = signed_offset(a, m);
        const long long dj = signed_offset(b, m);
        // The origin and the unpaired Nyquist rows stay zero, keeping the
        // kernel exactly odd.
        if ((di == 0 && dj == 0) || a == n || b == n) continue;
        const double r2 = static_cast<double>(di * di + dj * dj);
        k1_[a * m + b] = -static_cast<double>(dj) / (kTwoPi * h * r2);
        k2_[a * m + b] = static_cast<double>(di) / (kTwoPi * h * r2);
      }
    }
  } else {
    // Potential log(|x|) / (2 pi) on the periodic 2n lattice. The origin value
    // log(2h) - 2 makes the nearest-neighbour differences reproduce
    // 1 / (2 pi h) exactly.
    std::vector<double> pot(m * m);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        const long long di = signed_offset(a, m);
        const long long dj = signed_offset(b, m);
        const double r = (di == 0 && dj == 0)
                             ? 2.0 * h * std::exp(-2.0)
                             : h * std::hypot(static_cast<double>(di), static_cast<double>(dj));
        pot[a * m + b] = std::log(r) / kTwoPi;
      }
    }
    const double inv2h = 1.0 / (2.0 * h);
    for (std::size_t a = 0; a < m; ++a) {
      const std::size_t ap = (a + 1) % m, am = (a + m - 1) % m;
      for (std::size_t b = 0; b < m; ++b) {
        const std::size_t bp = (b + 1) % m, bm = (b + m - 1) % m;
        k1_[a * m + b] = -(pot[a * m + bp] - pot[a * m + bm]) * inv2h;
        k2_[a * m + b] = (pot[ap * m + b] - pot[am * m + b]) * inv2h;
      }
    }
  }

  const double scale = h * h / static_cast<double>(m * m);
  auto real = fft_->make_real();
  k1_hat_ = fft_->make_spectrum();
  k2_hat_ = fft_->make_spectrum();
  std::copy(k1_.begin(), k1_.end(), real.data());
  fft_->forward(real, k1_hat_);
  std::copy(k2_.begin(), k2_.end(), real.data());
  fft_->forward(real, k2_hat_);
  for (std::size_t k = 0; k < k1_hat_.size(); ++k) {
    k1_hat_[k] *= scale;
    k2_hat_[k] *= scale;
  }
}

Vec2 BiotSavartPlan::kernel_at(long long di, long long dj) const {
  const long long n = static_cast<long long>(grid_.n());
  if (di < -n || di > n || dj < -n || dj > n) {
    throw DomainError("BiotSavartPlan::kernel_at: offset outside the padded lattice");
  }
  const std::size_t m = 2 * grid_.n();
  const std::size_t k = wrap(di, m) * m + wrap(dj, m);
  return {k1_[k], k2_[k]};
}

VectorField BiotSavartPlan::velocity(const ScalarField& omega) const {
  require_same_grid(grid_, omega.grid(), "velocity_from_vorticity");
  const std::size_t n = grid_.n();
  auto real = fft_->make_real();
  auto omega_hat = fft_->make_spectrum();
  auto product = fft_->make_spectrum();
  fft::pad_into(omega, real);
  fft_->forward(real, omega_hat);

  VectorField u(grid_, omega.time());
  const auto& mul = simd::active().mul_complex;
  mul(k1_hat_.data(), omega_hat.data(), product.data(), product.size());
  fft_->inverse(product, real);
  fft::crop_from(real, 1.0, std::span<double>(u.u1), n);
  mul(k2_hat_.data(), omega_hat.data(), product.data(), product.size());
  fft_->inverse(product, real);
  fft::crop_from(real, 1.0, std::span<double>(u.u2), n);
  return u;
}

BiotSavartPlan make_plan(const GridSpec& grid, BiotSavartKernel kind) {
  return BiotSavartPlan(grid, kind);
}

VectorField velocity_from_vorticity(const BiotSavartPlan& plan, const ScalarField& omega) {
  return plan.velocity(omega);
}

double sup_velocity_scaling(const BiotSavartPlan& plan, const ScalarField& omega) {
  const auto t = omega.time();
  if (!t) throw DomainError("sup_velocity_scaling: vorticity carries no time tag");
  if (!(*t > 0.0)) throw DomainError("sup_velocity_scaling: time tag must be positive");
  const VectorField u = plan.velocity(omega);
  double peak = 0.0;
  for (std::size_t k = 0; k < u.u1.size(); ++k) {
    peak = std::max(peak, std::hypot(u.u1[k], u.u2[k]));
  }
  return std::sqrt(*t) * peak;
}

double sup_velocity_scaling(const ScalarField& omega) {
  if (!omega.time()) throw DomainError("sup_velocity_scaling: vorticity carries no time tag");
  return sup_velocity_scaling(make_plan(omega.grid()), omega);
}

ScalarField discrete_divergence(const VectorField& u) {
  const std::size_t n = u.grid.n();
  const double inv2h = 1.0 / (2.0 * u.grid.spacing());
  ScalarField out(u.grid, u.time);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    for (std::size_t j = 1; j + 1 < n; ++j) {
      out(i, j) = (u.u1[(i + 1) * n + j] - u.u1[(i - 1) * n + j] + u.u2[i * n + j + 1] -
                   u.u2[i * n + j - 1]) *
                  inv2h;
    }
  }
  return out;
}

ScalarField discrete_curl(const VectorField& u) {
  const std::size_t n = u.grid.n();
  const double inv2h = 1.0 / (2.0 * u.grid.spacing());
  ScalarField out(u.grid, u.time);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    for (std::size_t j = 1; j + 1 < n; ++j) {
      out(i, j) = (u.u2[(i + 1) * n + j] - u.u2[(i - 1) * n + j] - u.u1[i * n + j + 1] +
                   u.u1[i * n + j - 1]) *
                  inv2h;
    }
  }
  return out;
}

}  // namespace oseen
