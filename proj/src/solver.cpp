#include "oseen/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "oseen/fft.hpp"
#include "oseen/fields.hpp"
#include "oseen/simd/kernels.hpp"

namespace oseen {
namespace {

std::optional<double> advanced(std::optional<double> tag, double by) {
  if (!tag) return std::nullopt;
  return *tag + by;
}

// Separable factor exp(-k^2 tau) for every wrap-ordered index of a lattice.
std::vector<double> heat_factor(std::size_t count, std::size_t m, double h, double tau) {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double kk = fft::wavenumber(k, m, h);
    out[k] = std::exp(-kk * kk * tau);
  }
  return out;
}

// Cell-centre coordinates, flattened in field order.
struct CellCoordinates {
  std::vector<double> x1, x2;
};

CellCoordinates cell_coordinates(const GridSpec& g) {
  const std::size_t n = g.n();
  CellCoordinates c{std::vector<double>(n * n), std::vector<double>(n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c.x1[i * n + j] = g.center(i);
      c.x2[i * n + j] = g.center(j);
    }
  }
  return c;
}

simd::BilinearLattice lattice_of(const GridSpec& g, const double* values) {
  return {values, g.n(), g.center(0), 1.0 / g.spacing()};
}

// Periodic band-limited interpolation matrix for the dilation x -> s x:
// row i evaluates the trigonometric interpolant at s x_i.
using SincMatrix = std::vector<double>;

SincMatrix build_sinc_matrix(const GridSpec& g, double s) {
  const std::size_t n = g.n();
  const double h = g.spacing();
  const double L = g.half_width();
  const double pi = std::numbers::pi;
  SincMatrix M(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double target = s * g.center(i);
    if (std::fabs(target) > L) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const double y = target - g.center(j);
      M[i * n + j] = std::fabs(y) < 1e-14 * h
                         ? 1.0
                         : std::sin(pi * y / h) / (static_cast<double>(n) * std::tan(pi * y / (2.0 * L)));
    }
  }
  return M;
}

std::shared_ptr<const SincMatrix> sinc_matrix(const GridSpec& g, double s) {
  static std::mutex mutex;
  static std::map<std::tuple<std::size_t, double, double>, std::shared_ptr<const SincMatrix>> cache;
  const auto key = std::make_tuple(g.n(), g.half_width(), s);
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_shared<const SincMatrix>(build_sinc_matrix(g, s))).first;
  }
  return it->second;
}

// out = M * a for n x n row-major matrices, row by row as axpy sweeps.
void left_multiply(const SincMatrix& M, const std::vector<double>& a, std::vector<double>& out,
                   std::size_t n) {
  const auto& axpy = simd::active().axpy;
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double c = M[i * n + j];
      if (c != 0.0) axpy(c, a.data() + j * n, out.data() + i * n, n);
    }
  }
}

void transpose(std::vector<double>& a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) std::swap(a[i * n + j], a[j * n + i]);
  }
}

void require_positive_step(double dt, const char* who) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw DomainError(std::string(who) + ": step must be positive and finite");
  }
}

bool nonnegative(const ScalarField& f) {
  const auto v = f.values();
  return std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0; });
}

// The spectral heat multiplier and the band-limited dilation both ring a
// little around the high-frequency tail that bilinear transport leaves
// behind, so a nonnegative field comes back with undershoots of order 1e-11
// of its peak in the far field. Zero them and rescale so the mass is the one
// the step produced.
void clip_undershoot(ScalarField& f) {
  const double mass = integrate(f);
  bool clipped = false;
  for (double& v : f.values()) {
    if (v < 0.0) {
      v = 0.0;
      clipped = true;
    }
  }
  if (!clipped) return;
  const double now = integrate(f);
  if (mass > 0.0 && now > 0.0) f *= mass / now;
}

}  // namespace

ScalarField heat_step(const ScalarField& f, double tau) {
  require_positive_step(tau, "heat_step");
  const GridSpec& g = f.grid();
  const std::size_t m = 2 * g.n();
  const auto plan = fft::real_fft(m);
  auto real = plan->make_real();
  auto spec = plan->make_spectrum();
  fft::pad_into(f, real);
  plan->forward(real, spec);

  const std::size_t cols = plan->spectrum_columns();
  const auto rows_factor = heat_factor(m, m, g.spacing(), tau);
  auto cols_factor = heat_factor(cols, m, g.spacing(), tau);
  // Fold the inverse-transform normalization into the column factor.
  for (double& c : cols_factor) c /= static_cast<double>(m * m);
  std::vector<double> row_multiplier(cols);
  const auto& scale = simd::active().scale_complex;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < cols; ++b) row_multiplier[b] = rows_factor[a] * cols_factor[b];
    scale(spec.data() + a * cols, row_multiplier.data(), cols);
  }
  plan->inverse(spec, real);
  ScalarField out(g, advanced(f.time(), tau));
  fft::crop_from(real, 1.0, out);
  return out;
}

ScalarField transport_step(const ScalarField& f, const VectorField& u, double tau) {
  require_same_grid(f.grid(), u.grid, "transport_step");
  const GridSpec& g = f.grid();
  const std::size_t count = g.cell_count();
  const auto& bilinear = simd::active().bilinear;
  const auto x = cell_coordinates(g);

  // Midpoint of the backward characteristic, then the velocity there.
  std::vector<double> y1(count), y2(count), w1(count), w2(count);
  for (std::size_t k = 0; k < count; ++k) {
    y1[k] = x.x1[k] - 0.5 * tau * u.u1[k];
    y2[k] = x.x2[k] - 0.5 * tau * u.u2[k];
  }
  bilinear(lattice_of(g, u.u1.data()), y1.data(), y2.data(), w1.data(), count);
  bilinear(lattice_of(g, u.u2.data()), y1.data(), y2.data(), w2.data(), count);
  for (std::size_t k = 0; k < count; ++k) {
    y1[k] = x.x1[k] - tau * w1[k];
    y2[k] = x.x2[k] - tau * w2[k];
  }
  ScalarField out(g, f.time());
  bilinear(lattice_of(g, f.values().data()), y1.data(), y2.data(), out.values().data(), count);
  return out;
}

ScalarField step_physical(const ScalarField& f, const BiotSavartPlan& plan, double dt,
                          Splitting splitting) {
  require_positive_step(dt, "step_physical");
  require_same_grid(f.grid(), plan.grid(), "step_physical");
  ScalarField a = heat_step(f, splitting == Splitting::kStrang ? 0.5 * dt : dt);
  const VectorField u = plan.velocity(a);
  ScalarField b = transport_step(a, u, dt);

  const double before = integrate(a);
  const double after = integrate(b);
  if (std::fabs(before) > 1e-3 * lp_norm(a, 1.0) && after != 0.0 && before / after > 0.0) {
    b *= before / after;
  }
  ScalarField out = splitting == Splitting::kStrang ? heat_step(b, 0.5 * dt) : std::move(b);
  if (nonnegative(f)) clip_undershoot(out);
  out.set_time(advanced(f.time(), dt));
  return out;
}

ScalarField sinc_dilate(const ScalarField& f, double s) {
  if (!(s > 0.0)) throw DomainError("sinc_dilate: factor must be positive");
  const std::size_t n = f.grid().n();
  const auto M = sinc_matrix(f.grid(), s);
  std::vector<double> a(f.values().begin(), f.values().end());
  std::vector<double> b(n * n);
  left_multiply(*M, a, b, n);  // b = M f
  transpose(b, n);             // b = (M f)^T
  left_multiply(*M, b, a, n);  // a = M (M f)^T = (M f M^T)^T
  transpose(a, n);
  return ScalarField(f.grid(), std::move(a), f.time());
}

ScalarField step_self_similar(const ScalarField& w, const BiotSavartPlan& plan, double dtau,
                              Splitting splitting) {
  require_positive_step(dtau, "step_self_similar");
  ScalarField physical(w.grid(), std::vector<double>(w.values().begin(), w.values().end()));
  const ScalarField moved = step_physical(physical, plan, std::expm1(dtau), splitting);
  ScalarField out = sinc_dilate(moved, std::exp(0.5 * dtau));
  if (nonnegative(w)) clip_undershoot(out);
  out *= std::exp(dtau);
  out.set_time(advanced(w.time(), dtau));
  return out;
}

void SimulationConfig::validate() const {
  if (!(t_start > 0.0) || !std::isfinite(t_start)) {
    throw DomainError("t_start must be positive and finite");
  }
  if (!(t_end > t_start) || !std::isfinite(t_end)) throw DomainError("t_end must exceed t_start");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive and finite");
  if (record_every == 0) throw DomainError("record_every must be >= 1");
  if (!std::isfinite(alpha_expected.alpha)) throw DomainError("alpha must be finite");
  if (track_domination && variables != Variables::kPhysical) {
    throw DomainError("domination tracking needs physical variables");
  }
  (void)step_count();
}

std::size_t SimulationConfig::step_count() const {
  const double span =
      variables == Variables::kPhysical ? t_end - t_start : std::log(t_end / t_start);
  const double steps = std::round(span / dt);
  if (steps < 1.0 || std::fabs(steps * dt - span) > 1e-6 * dt) {
    std::ostringstream msg;
    msg << "the run length " << span << " is not a whole number of steps of " << dt;
    throw DomainError(msg.str());
  }
  return static_cast<std::size_t>(steps);
}

ScalarField Frame::physical() const {
  return variables == Variables::kPhysical ? field : to_physical(field);
}

namespace {

struct Runner {
  const SimulationConfig& config;
  const FrameObserver& observer;
  double tol_mass;
  std::optional<ScalarField> rearranged_initial;
  Trajectory trajectory;
  std::optional<std::size_t> observed_step;

  double time_at(std::size_t k) const {
    const double d = static_cast<double>(k) * config.dt;
    return config.variables == Variables::kPhysical ? config.t_start + d
                                                    : std::log(config.t_start) + d;
  }

  void record(const ScalarField& field, std::size_t step) {
    trajectory.frames.push_back(Frame{config.variables, field, step, {}, {}, {}});
    Frame& f = trajectory.frames.back();
    const ScalarField omega = f.physical();
    if (rearranged_initial) {
      const double elapsed = *omega.time() - config.t_start;
      const ScalarField g =
          step == 0 ? *rearranged_initial : heat_step(*rearranged_initial, elapsed);
      f.domination = dominates(omega, g, tol_mass);
      f.domination_oseen = dominates(
          omega, sample_oseen_vorticity(omega.grid(), *omega.time(), config.alpha_expected),
          tol_mass);
    }
    if (config.diagnostics_enabled) {
      f.record = make_record(
          omega, f.domination ? std::optional<double>(f.domination->worst_margin) : std::nullopt);
    }
    if (observer) observer(f);
    observed_step = step;
  }

  ScalarField advance(const ScalarField& field, const BiotSavartPlan& plan) const {
    return config.variables == Variables::kPhysical
               ? step_physical(field, plan, config.dt, config.splitting)
               : step_self_similar(field, plan, config.dt, config.splitting);
  }
};

Trajectory run_impl(const SimulationConfig& config, const ScalarField& initial,
                    const FrameObserver& observer, double tol_mass) {
  config.validate();
  require_same_grid(config.grid, initial.grid(), "run");
  const std::size_t steps = config.step_count();
  const BiotSavartPlan plan = make_plan(config.grid);

  Runner runner{config, observer, tol_mass, std::nullopt, {}, std::nullopt};
  runner.trajectory.variables = config.variables;
  ScalarField field = initial;
  field.set_time(runner.time_at(0));
  if (config.track_domination) runner.rearranged_initial = symmetric_rearrangement(field);

  std::size_t field_step = 0;  // step index of the last valid state in `field`
  try {
    runner.record(field, 0);
    for (std::size_t k = 1; k <= steps; ++k) {
      ScalarField next = runner.advance(field, plan);
      if (!next.finite()) {
        std::ostringstream msg;
        msg << "non-finite values after step " << k;
        throw std::runtime_error(msg.str());
      }
      next.set_time(runner.time_at(k));
      field = std::move(next);
      field_step = k;
      if (k % config.record_every == 0 || k == steps) runner.record(field, k);
    }
  } catch (const std::exception& e) {
    runner.trajectory.failure = e.what();
    // Persist the last valid state as the final frame. Its diagnostics may be
    // what failed, so the frame can lack a record.
    auto& frames = runner.trajectory.frames;
    if (frames.empty() || frames.back().step != field_step) {
      frames.push_back(Frame{config.variables, field, field_step, {}, {}, {}});
    }
    if (observer && runner.observed_step != std::optional<std::size_t>(field_step)) {
      observer(frames.back());
    }
  }
  return std::move(runner.trajectory);
}

}  // namespace

Trajectory run(const SimulationConfig& config, const ScalarField& initial,
               const FrameObserver& observer) {
  return run_impl(config, initial, observer, 1e-4 * std::fabs(config.alpha_expected.alpha));
}

Trajectory trotter_domination_run(const SimulationConfig& config, const ScalarField& initial,
                                  double tol_mass, const FrameObserver& observer) {
  SimulationConfig c = config;
  c.variables = Variables::kPhysical;
  c.track_domination = true;
  return run_impl(c, initial, observer, tol_mass);
}

}  // namespace oseen
