#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "oseen/biot_savart.hpp"
#include "oseen/diagnostics.hpp"
#include "oseen/grid.hpp"
#include "oseen/lamb_oseen.hpp"
#include "oseen/rearrangement.hpp"

namespace oseen {

enum class Variables { kPhysical, kSelfSimilar };
enum class Splitting { kLie, kStrang };

/// Exact heat semigroup e^{tau Delta} applied on the 2n x 2n zero-padded
/// lattice, then cropped. Rejects tau <= 0. The time tag advances by tau.
ScalarField heat_step(const ScalarField& f, double tau);

/// Semi-Lagrangian transport over tau with u frozen: the foot of each
/// characteristic is found by the midpoint rule and f is sampled there
/// bilinearly (zero outside the grid). The time tag is left unchanged; it is a
/// substep with the velocity held fixed.
ScalarField transport_step(const ScalarField& f, const VectorField& u, double tau);

/// One split step of the vorticity equation. Lie: transport(heat(f)).
/// Strang: heat(dt/2), transport(dt), heat(dt/2). The velocity is computed
/// from the field entering the transport substep. Bilinear sampling does not
/// conserve mass, so the transported field is rescaled to the mass it had
/// before transport (skipped for sign-balanced data, where the ratio is
/// meaningless). For nonnegative f the result is clipped at zero and rescaled
/// to its own mass: the spectral heat step undershoots by ~1e-11 of the peak
/// in the far field.
ScalarField step_physical(const ScalarField& f, const BiotSavartPlan& plan, double dt,
                          Splitting splitting = Splitting::kStrang);

/// One step of the rescaled equation for w on the xi-grid, by conjugation
/// with the self-similar change of variables: with W the physical step of
/// length e^{dtau} - 1 taken in xi units,
///   w(xi, tau + dtau) = e^{dtau} W(e^{dtau/2} xi).
/// The dilation is resampled with band-limited (periodic sinc) interpolation,
/// which keeps the mass to rounding. Nonnegative w stays nonnegative by the
/// same clip-and-rescale as step_physical. A tau tag advances by dtau.
ScalarField step_self_similar(const ScalarField& w, const BiotSavartPlan& plan, double dtau,
                              Splitting splitting = Splitting::kStrang);

/// Band-limited evaluation of f at (s x_i, s x_j) for every cell, zero where
/// s x_i leaves [-L, L]. Exposed for testing.
ScalarField sinc_dilate(const ScalarField& f, double s);

struct SimulationConfig {
  GridSpec grid{12.0, 128};
  double t_start = 1.0;
  double t_end = 2.0;
  /// Time step, or the tau-step when variables is kSelfSimilar.
  double dt = 1e-3;
  Circulation alpha_expected{1.0};
  Variables variables = Variables::kPhysical;
  Splitting splitting = Splitting::kStrang;
  std::size_t record_every = 100;
  bool diagnostics_enabled = true;
  /// Co-evolve the heat flow of the rearranged initial data and record
  /// domination margins (physical variables only).
  bool track_domination = false;

  /// Throws DomainError on violated invariants.
  void validate() const;
  /// Number of steps; the interval must be a whole number of steps.
  std::size_t step_count() const;
};

struct Frame {
  Variables variables = Variables::kPhysical;
  /// In the run's variables: omega tagged with t, or w tagged with tau.
  ScalarField field;
  std::size_t step = 0;
  std::optional<DiagnosticsRecord> record;
  /// Against e^{(t - t0) Delta} omega0^#.
  std::optional<DominationReport> domination;
  /// Against the Oseen vortex of the same mass at time t.
  std::optional<DominationReport> domination_oseen;

  /// The physical vorticity of this frame.
  ScalarField physical() const;
};

struct Trajectory {
  Variables variables = Variables::kPhysical;
  std::vector<Frame> frames;
  /// Set when a step failed; the last valid state is the final frame.
  std::optional<std::string> failure;
};

/// Invoked after each frame is recorded.
using FrameObserver = std::function<void(const Frame&)>;

/// Advances from t_start to t_end. initial is omega on config.grid tagged with
/// t_start (physical), or w on config.grid tagged with log(t_start)
/// (self-similar). Frames are recorded at step 0, every record_every steps and
/// at the last step.
Trajectory run(const SimulationConfig& config, const ScalarField& initial,
               const FrameObserver& observer = {});

/// run() in physical variables with domination tracking switched on.
Trajectory trotter_domination_run(const SimulationConfig& config, const ScalarField& initial,
                                  double tol_mass, const FrameObserver& observer = {});

}  // namespace oseen
