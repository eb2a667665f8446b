#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "oseen/grid.hpp"

namespace oseen {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Relative entropy and Fisher information with respect to G. All functions in
// this group take a probability density on a xi-grid: integrate(f) must be 1
// within 1e-6, and no cell may be below -1e-13 (a positivity breach of the
// solver). Violations throw DomainError.

/// H(f) = integral of f log(f / G). Cells at or below 1e-16 * max f are left
/// out of the quadrature; their contribution is bounded cell by cell by the
/// range of x log(x / G) over [0, floor], giving [tail_low, tail_high].
struct EntropyEstimate {
  double value = 0.0;  // interior quadrature + interval midpoint
  double tail_low = 0.0;
  double tail_high = 0.0;
  bool trusted = false;  // tail interval narrower than 1e-8
};

EntropyEstimate relative_entropy_estimate(const ScalarField& f);
double relative_entropy(const ScalarField& f);

/// I(f) = integral of f |grad log(f / G)|^2 with centred differences. A cell
/// counts only when it and its four neighbours exceed 1e-10 * max f, so no
/// difference touches floored values. coverage is the mass fraction of the
/// counted cells.
struct FisherEstimate {
  double value = 0.0;
  double coverage = 0.0;
};

FisherEstimate fisher_information_estimate(const ScalarField& f);
double fisher_information(const ScalarField& f);

/// H(f) - ||f - G||_1^2 / 2; nonnegative by Csiszar-Kullback.
double csiszar_kullback_check(const ScalarField& f);
/// I(f) - H(f); nonnegative by the logarithmic Sobolev inequality.
double log_sobolev_check(const ScalarField& f);

/// Smallest K1 with omega(x) <= K1 alpha / t * exp(-beta |x|^2 / 4t) on the
/// cells where omega > 1e-10 * max omega (below that the field is rounding
/// noise and the weight exp(beta |x|^2 / 4t) would amplify it without bound).
/// alpha is the measured mass. Needs a positive time tag and positive mass.
double envelope_fit(const ScalarField& omega, double beta);

struct DecayTolerances {
  double tol_decay = 0.05;
  double tol_rate = 0.1;
  /// Dissipation identity dh/dtau = -I is compared where h exceeds this.
  double dissipation_floor = 1e-4;
  double tol_dissipation = 0.15;
};

struct DecayPair {
  std::size_t first = 0;
  std::size_t second = 0;
  double h_second = 0.0;
  double bound = 0.0;  // exp(-(tau2 - tau1)) h(tau1) (1 + tol_decay)
  bool pass = false;
};

struct EntropyDecayReport {
  bool nonincreasing = true;
  bool strictly_decreasing = true;
  std::vector<DecayPair> pairs;
  bool pairs_pass = true;
  std::vector<double> dh_dtau;    // finite-difference derivative per snapshot
  std::vector<bool> rate_ok;      // dh/dtau <= -h + tol_rate h
  bool rate_pass = true;
  double fitted_exponent = kNaN;  // least-squares slope of log h against tau
  double max_dissipation_error = 0.0;  // max |dh/dtau + I| / I where h > floor
  std::size_t dissipation_points = 0;
  bool dissipation_pass = true;
  double sup_h = 0.0;

  /// (a), (b) and (c) together.
  bool pass() const { return nonincreasing && pairs_pass && rate_pass; }
};

/// Checks the decay law along a self-similar trajectory. Derivatives are
/// centred in the interior and one-sided second order at the ends. fisher may
/// be empty, in which case the dissipation identity is skipped. Throws with
/// fewer than three snapshots.
EntropyDecayReport entropy_decay_report(std::span<const double> tau, std::span<const double> h,
                                        std::span<const double> fisher = {},
                                        const DecayTolerances& tol = {});

/// Three-point derivative on a possibly nonuniform grid.
std::vector<double> finite_difference_derivative(std::span<const double> x,
                                                 std::span<const double> y);

struct DiagnosticsRecord {
  double tau = kNaN;
  double t = kNaN;
  double mass = 0.0;
  double second_moment = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
  double entropy_H = kNaN;
  double fisher_I = kNaN;
  double envelope_K1 = kNaN;  // beta = 0.9
  std::optional<double> domination_margin;
  double ck_slack = kNaN;
  double lsi_slack = kNaN;
  bool entropy_trusted = false;
  double fisher_coverage = kNaN;
};

inline constexpr double kEnvelopeBeta = 0.9;

/// Full record for a physical vorticity snapshot with time tag t > 0. The
/// entropy group is evaluated on w / alpha (w(xi) = t omega(sqrt(t) xi)) and
/// left NaN when the mass is not positive.
DiagnosticsRecord make_record(const ScalarField& omega,
                              std::optional<double> domination_margin = std::nullopt);

/// diagnostics.csv with the columns
/// tau,t,mass,m2,l1,l2,linf,H,I,K1_beta0.9,dom_margin,ck_slack,lsi_slack.
void write_diagnostics_csv(std::ostream& out, std::span<const DiagnosticsRecord> records);
void write_diagnostics_csv(const std::filesystem::path& path,
                           std::span<const DiagnosticsRecord> records);
std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::filesystem::path& path);

/// Generic matplotlib script plotting the CSV columns against tau.
void write_plot_script(const std::filesystem::path& path, const std::string& csv_name);

/// Least-squares slope of y against x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace oseen
