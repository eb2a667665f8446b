#pragma once

#include <complex>
#include <vector>

#include "oseen/fft.hpp"
#include "oseen/grid.hpp"

namespace oseen {

/// Discrete kernel used by the convolution.
///
/// kCurlOfLog is the centred-difference perpendicular gradient of the sampled
/// log potential log|x| / (2 pi). It is odd, vanishes at the origin, equals
/// x^perp / (2 pi |x|^2) exactly at the four nearest neighbours, and its output
/// is divergence-free to rounding under centred differences.
///
/// kPointSample stores x^perp / (2 pi |x|^2) at every lattice offset. It is
/// kept for comparison; its aliasing leaves an O(h^2) discrete divergence.
enum class BiotSavartKernel { kCurlOfLog, kPointSample };

/// Precomputed free-space convolution on the 2n x 2n zero-padded lattice.
/// Immutable once built; velocity evaluation is safe from several threads.
class BiotSavartPlan {
 public:
  BiotSavartPlan(const GridSpec& grid, BiotSavartKernel kind);

  const GridSpec& grid() const { return grid_; }
  BiotSavartKernel kind() const { return kind_; }

  /// Kernel value at lattice offset (di, dj) * h, |di|, |dj| <= n.
  Vec2 kernel_at(long long di, long long dj) const;

  VectorField velocity(const ScalarField& omega) const;

 private:
  GridSpec grid_;
  BiotSavartKernel kind_;
  std::shared_ptr<const fft::RealFft2D> fft_;
  std::vector<double> k1_, k2_;  // spatial samples, wrap-ordered on 2n x 2n
  fft::AlignedBuffer<std::complex<double>> k1_hat_, k2_hat_;  // include h^2 and 1/(2n)^2
};

BiotSavartPlan make_plan(const GridSpec& grid,
                         BiotSavartKernel kind = BiotSavartKernel::kCurlOfLog);

/// u = K * omega on the grid; the time tag of omega is carried over.
VectorField velocity_from_vorticity(const BiotSavartPlan& plan, const ScalarField& omega);

/// sqrt(t) * max |u|, the quantity bounded by C * ||omega||_1 in the
/// Carlen-Loss estimate. Needs a positive time tag.
double sup_velocity_scaling(const BiotSavartPlan& plan, const ScalarField& omega);
double sup_velocity_scaling(const ScalarField& omega);

/// Centred-difference divergence and curl on interior cells (zero on the
/// outermost ring).
ScalarField discrete_divergence(const VectorField& u);
ScalarField discrete_curl(const VectorField& u);

}  // namespace oseen
