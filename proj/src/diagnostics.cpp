#include "oseen/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "oseen/fields.hpp"
#include "oseen/lamb_oseen.hpp"
#include "oseen/simd/kernels.hpp"

namespace oseen {
namespace {

constexpr double kEntropyFloor = 1e-16;
constexpr double kGradientFloor = 1e-10;
constexpr double kPositivityGuard = -1e-13;
constexpr double kTrustedTail = 1e-8;
const double kLog4Pi = std::log(4.0 * std::numbers::pi);

void require_density(const ScalarField& f, const char* who) {
  const double mass = integrate(f);
  if (std::fabs(mass - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << who << ": input must be a normalized density (mass " << mass << ")";
    throw DomainError(msg.str());
  }
  const auto values = f.values();
  const double lowest = *std::min_element(values.begin(), values.end());
  if (lowest < kPositivityGuard) {
    std::ostringstream msg;
    msg << who << ": negative density " << lowest << " (positivity breach)";
    throw DomainError(msg.str());
  }
}

// log G(xi) for the cell centre (i, j).
double log_gauss(const GridSpec& g, std::size_t i, std::size_t j) {
  const double a = g.center(i), b = g.center(j);
  return -0.25 * (a * a + b * b) - kLog4Pi;
}

double max_value(std::span<const double> v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

EntropyEstimate relative_entropy_estimate(const ScalarField& f) {
  require_density(f, "relative_entropy");
  const GridSpec& g = f.grid();
  const std::size_t n = g.n();
  const double floor = kEntropyFloor * max_value(f.values());
  std::vector<double> inside, low, high;
  inside.reserve(g.cell_count());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = f(i, j);
      const double log_G = log_gauss(g, i, j);
      if (v > floor) {
        inside.push_back(v * (std::log(v) - log_G));
        continue;
      }
      // Range of x log(x / G) on [0, floor]: the minimum is at x = G / e if
      // that lies in range, and the maximum at one of the endpoints.
      const double at_floor = floor * (std::log(floor) - log_G);
      const double G = std::exp(log_G);
      low.push_back(G / std::numbers::e <= floor ? -G / std::numbers::e : at_floor);
      high.push_back(std::max(0.0, at_floor));
    }
  }
  const double area = g.cell_area();
  EntropyEstimate e;
  e.tail_low = area * simd::sum(low);
  e.tail_high = area * simd::sum(high);
  e.value = area * simd::sum(inside) + 0.5 * (e.tail_low + e.tail_high);
  e.trusted = e.tail_high - e.tail_low < kTrustedTail;
  return e;
}

double relative_entropy(const ScalarField& f) { return relative_entropy_estimate(f).value; }

FisherEstimate fisher_information_estimate(const ScalarField& f) {
  require_density(f, "fisher_information");
  const GridSpec& g = f.grid();
  const std::size_t n = g.n();
  const double floor = kGradientFloor * max_value(f.values());
  std::vector<double> q(g.cell_count());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      q[i * n + j] = std::log(std::max(f(i, j), floor)) - log_gauss(g, i, j);
    }
  }
  const double inv2h = 1.0 / (2.0 * g.spacing());
  std::vector<double> terms, covered;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    for (std::size_t j = 1; j + 1 < n; ++j) {
      if (!(f(i, j) > floor && f(i - 1, j) > floor && f(i + 1, j) > floor &&
            f(i, j - 1) > floor && f(i, j + 1) > floor)) {
        continue;
      }
      const double d1 = (q[(i + 1) * n + j] - q[(i - 1) * n + j]) * inv2h;
      const double d2 = (q[i * n + j + 1] - q[i * n + j - 1]) * inv2h;
      terms.push_back(f(i, j) * (d1 * d1 + d2 * d2));
      covered.push_back(f(i, j));
    }
  }
  const double area = g.cell_area();
  return {area * simd::sum(terms), area * simd::sum(covered) / integrate(f)};
}

double fisher_information(const ScalarField& f) { return fisher_information_estimate(f).value; }

double csiszar_kullback_check(const ScalarField& f) {
  const double H = relative_entropy(f);
  const double d = lp_distance(f, sample_gauss_G(f.grid()), 1.0);
  return H - 0.5 * d * d;
}

double log_sobolev_check(const ScalarField& f) {
  return fisher_information(f) - relative_entropy(f);
}

double envelope_fit(const ScalarField& omega, double beta) {
  const auto t = omega.time();
  if (!t) throw DomainError("envelope_fit: field carries no time tag");
  if (!(*t > 0.0)) throw DomainError("envelope_fit: time tag must be positive");
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("envelope_fit: beta must lie in (0, 1]");
  const double alpha = integrate(omega);
  if (!(alpha > 0.0)) throw DomainError("envelope_fit: mass must be positive");
  const GridSpec& g = omega.grid();
  const double floor = kGradientFloor * max_value(omega.values());
  // Work with logarithms: exp(beta |x|^2 / 4t) overflows far out.
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.n(); ++i) {
    for (std::size_t j = 0; j < g.n(); ++j) {
      const double v = omega(i, j);
      if (!(v > floor)) continue;
      const double a = g.center(i), b = g.center(j);
      best = std::max(best, std::log(v) + beta * (a * a + b * b) / (4.0 * *t));
    }
  }
  return std::exp(best) * *t / alpha;
}

std::vector<double> finite_difference_derivative(std::span<const double> x,
                                                 std::span<const double> y) {
  const std::size_t m = x.size();
  if (m < 3 || y.size() != m) {
    throw DomainError("finite_difference_derivative: needs at least three matching samples");
  }
  std::vector<double> d(m);
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double h1 = x[i] - x[i - 1], h2 = x[i + 1] - x[i];
    d[i] = -h2 / (h1 * (h1 + h2)) * y[i - 1] + (h2 - h1) / (h1 * h2) * y[i] +
           h1 / (h2 * (h1 + h2)) * y[i + 1];
  }
  {
    const double h1 = x[1] - x[0], h2 = x[2] - x[1];
    d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * y[0] + (h1 + h2) / (h1 * h2) * y[1] -
           h1 / (h2 * (h1 + h2)) * y[2];
  }
  {
    const double h1 = x[m - 2] - x[m - 3], h2 = x[m - 1] - x[m - 2];
    d[m - 1] = h2 / (h1 * (h1 + h2)) * y[m - 3] - (h1 + h2) / (h1 * h2) * y[m - 2] +
               (2.0 * h2 + h1) / (h2 * (h1 + h2)) * y[m - 1];
  }
  return d;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t m = std::min(x.size(), y.size());
  if (m < 2) return kNaN;
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : kNaN;
}

EntropyDecayReport entropy_decay_report(std::span<const double> tau, std::span<const double> h,
                                        std::span<const double> fisher,
                                        const DecayTolerances& tol) {
  const std::size_t m = tau.size();
  if (m < 3) throw DomainError("entropy_decay_report: needs at least three snapshots");
  if (h.size() != m || (!fisher.empty() && fisher.size() != m)) {
    throw DomainError("entropy_decay_report: series lengths differ");
  }
  EntropyDecayReport r;
  r.sup_h = *std::max_element(h.begin(), h.end());
  for (std::size_t k = 0; k + 1 < m; ++k) {
    if (h[k + 1] > h[k]) r.nonincreasing = false;
    if (!(h[k + 1] < h[k])) r.strictly_decreasing = false;
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      DecayPair p{a, b, h[b], std::exp(-(tau[b] - tau[a])) * h[a] * (1.0 + tol.tol_decay), false};
      p.pass = p.h_second <= p.bound;
      r.pairs_pass = r.pairs_pass && p.pass;
      r.pairs.push_back(p);
    }
  }
  r.dh_dtau = finite_difference_derivative(tau, h);
  r.rate_ok.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    r.rate_ok[k] = r.dh_dtau[k] <= -h[k] + tol.tol_rate * h[k];
    r.rate_pass = r.rate_pass && r.rate_ok[k];
  }
  std::vector<double> xs, logs;
  for (std::size_t k = 0; k < m; ++k) {
    if (h[k] > 0.0) {
      xs.push_back(tau[k]);
      logs.push_back(std::log(h[k]));
    }
  }
  r.fitted_exponent = least_squares_slope(xs, logs);
  if (!fisher.empty()) {
    for (std::size_t k = 0; k < m; ++k) {
      if (!(h[k] > tol.dissipation_floor)) continue;
      const double err = std::fabs(r.dh_dtau[k] + fisher[k]) / std::fabs(fisher[k]);
      r.max_dissipation_error = std::max(r.max_dissipation_error, err);
      ++r.dissipation_points;
    }
    r.dissipation_pass = r.max_dissipation_error <= tol.tol_dissipation;
  }
  return r;
}

DiagnosticsRecord make_record(const ScalarField& omega, std::optional<double> domination_margin) {
  const auto t = omega.time();
  if (!t || !(*t > 0.0)) throw DomainError("make_record: snapshot needs a positive time tag");
  DiagnosticsRecord r;
  r.t = *t;
  r.tau = std::log(*t);
  r.mass = integrate(omega);
  r.second_moment = second_moment(omega);
  r.l1 = lp_norm(omega, 1.0);
  r.l2 = lp_norm(omega, 2.0);
  r.linf = lp_norm(omega, kInfinity);
  r.domination_margin = domination_margin;
  if (r.mass > 0.0) {
    ScalarField density = to_self_similar(omega);
    density *= 1.0 / r.mass;
    const auto H = relative_entropy_estimate(density);
    const auto I = fisher_information_estimate(density);
    r.entropy_H = H.value;
    r.entropy_trusted = H.trusted;
    r.fisher_I = I.value;
    r.fisher_coverage = I.coverage;
    const double d = lp_distance(density, sample_gauss_G(density.grid()), 1.0);
    r.ck_slack = H.value - 0.5 * d * d;
    r.lsi_slack = I.value - H.value;
    r.envelope_K1 = envelope_fit(omega, kEnvelopeBeta);
  }
  return r;
}

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

constexpr const char* kCsvHeader =
    "tau,t,mass,m2,l1,l2,linf,H,I,K1_beta0.9,dom_margin,ck_slack,lsi_slack";

}  // namespace

void write_diagnostics_csv(std::ostream& out, std::span<const DiagnosticsRecord> records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << fmt(r.tau) << ',' << fmt(r.t) << ',' << fmt(r.mass) << ',' << fmt(r.second_moment)
        << ',' << fmt(r.l1) << ',' << fmt(r.l2) << ',' << fmt(r.linf) << ',' << fmt(r.entropy_H)
        << ',' << fmt(r.fisher_I) << ',' << fmt(r.envelope_K1) << ','
        << (r.domination_margin ? fmt(*r.domination_margin) : std::string()) << ','
        << fmt(r.ck_slack) << ',' << fmt(r.lsi_slack) << '\n';
  }
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           std::span<const DiagnosticsRecord> records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_diagnostics_csv(out, records);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error(path.string() + ": unexpected diagnostics header");
  }
  std::vector<DiagnosticsRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 13) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected 13 columns");
    }
    auto num = [&](std::size_t k) { return std::strtod(cells[k].c_str(), nullptr); };
    DiagnosticsRecord r;
    r.tau = num(0);
    r.t = num(1);
    r.mass = num(2);
    r.second_moment = num(3);
    r.l1 = num(4);
    r.l2 = num(5);
    r.linf = num(6);
    r.entropy_H = num(7);
    r.fisher_I = num(8);
    r.envelope_K1 = num(9);
    if (!cells[10].empty()) r.domination_margin = num(10);
    r.ck_slack = num(11);
    r.lsi_slack = num(12);
    out.push_back(r);
  }
  return out;
}

void write_plot_script(const std::filesystem::path& path, const std::string& csv_name) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "#!/usr/bin/env python3\n"
         "# Plots every column of the diagnostics table against tau.\n"
         "import csv, math, sys\n"
         "import matplotlib.pyplot as plt\n\n"
         "path = sys.argv[1] if len(sys.argv) > 1 else '"
      << csv_name
      << "'\n"
         "with open(path) as fh:\n"
         "    rows = list(csv.DictReader(fh))\n"
         "tau = [float(r['tau']) for r in rows]\n"
         "cols = [c for c in rows[0] if c not in ('tau', 't')]\n"
         "fig, axes = plt.subplots(len(cols), 1, sharex=True, figsize=(7, 2 * len(cols)))\n"
         "for ax, c in zip(axes, cols):\n"
         "    ys = [float(r[c]) if r[c] else math.nan for r in rows]\n"
         "    ax.plot(tau, ys, marker='.')\n"
         "    ax.set_ylabel(c)\n"
         "axes[-1].set_xlabel('tau')\n"
         "fig.tight_layout()\n"
         "fig.savefig(path.rsplit('.', 1)[0] + '.png', dpi=120)\n";
}

}  // namespace oseen
