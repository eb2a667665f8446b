#include "oseen/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "oseen/fields.hpp"
#include "oseen/lamb_oseen.hpp"
#include "oseen/snapshot.hpp"

namespace oseen {
namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string fixed(double v, int digits = 3) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<DiagnosticsRecord> records_of(const Trajectory& traj) {
  std::vector<DiagnosticsRecord> out;
  for (const auto& f : traj.frames) {
    if (f.record) out.push_back(*f.record);
  }
  return out;
}

void check_run_completed(Verdict& v, const Trajectory& traj) {
  if (traj.failure) v.add("run", false, "run aborted: " + *traj.failure);
}

// |mass - alpha| <= 1e-8 alpha at every record.
void check_mass(Verdict& v, const std::string& id, const std::vector<DiagnosticsRecord>& recs,
                double alpha) {
  double worst = 0.0;
  for (const auto& r : recs) worst = std::max(worst, std::fabs(r.mass - alpha));
  const double limit = 1e-8 * std::fabs(alpha);
  v.add(id, !recs.empty() && worst <= limit,
        "max |mass - alpha| = " + sci(worst) + " (limit " + sci(limit) + ")");
}

// Least-squares slope of the second moment against t equals 4 alpha within 1%.
void check_moment_slope(Verdict& v, const std::string& id,
                        const std::vector<DiagnosticsRecord>& recs, double alpha) {
  std::vector<double> t, m2;
  for (const auto& r : recs) {
    t.push_back(r.t);
    m2.push_back(r.second_moment);
  }
  const double slope = least_squares_slope(t, m2);
  const double rel = std::fabs(slope - 4.0 * alpha) / (4.0 * std::fabs(alpha));
  v.add(id, std::isfinite(rel) && rel <= 0.01,
        "d(m2)/dt = " + fixed(slope, 6) + " vs 4 alpha = " + fixed(4.0 * alpha, 6) +
            " (relative error " + sci(rel) + ", limit 1e-02)");
}

double sup_envelope(const std::vector<DiagnosticsRecord>& recs) {
  double k = 0.0;
  for (const auto& r : recs) {
    if (std::isfinite(r.envelope_K1)) k = std::max(k, r.envelope_K1);
  }
  return k;
}

struct DecaySeries {
  std::vector<double> tau, h, fisher;
};

DecaySeries decay_series(const std::vector<DiagnosticsRecord>& recs) {
  DecaySeries s;
  for (const auto& r : recs) {
    s.tau.push_back(r.tau);
    s.h.push_back(r.entropy_H);
    s.fisher.push_back(r.fisher_I);
  }
  return s;
}

void add_decay_criteria(Verdict& v, const EntropyDecayReport& rep) {
  std::size_t failed_pairs = 0;
  for (const auto& p : rep.pairs) failed_pairs += p.pass ? 0 : 1;
  std::size_t failed_rates = 0;
  for (bool ok : rep.rate_ok) failed_rates += ok ? 0 : 1;
  v.add("decay.monotone", rep.nonincreasing,
        std::string("h(tau) ") + (rep.nonincreasing ? "nonincreasing" : "increases somewhere"));
  v.add("decay.pairs", rep.pairs_pass,
        std::to_string(failed_pairs) + " of " + std::to_string(rep.pairs.size()) +
            " pairs violate h(tau2) <= exp(-(tau2-tau1)) h(tau1) (1 + 0.05)");
  v.add("decay.rate", rep.rate_pass,
        std::to_string(failed_rates) + " of " + std::to_string(rep.rate_ok.size()) +
            " snapshots violate dh/dtau <= -h + 0.1 h");
  v.notes.push_back("fitted decay exponent " + fixed(rep.fitted_exponent, 4));
  v.notes.push_back("sup h = " + sci(rep.sup_h));
}

SimulationConfig base_config(double L, std::size_t n, double t_start, double t_end, double dt,
                             std::size_t record_every) {
  SimulationConfig c;
  c.grid = GridSpec(L, n);
  c.t_start = t_start;
  c.t_end = t_end;
  c.dt = dt;
  c.record_every = record_every;
  return c;
}

std::filesystem::path prepare_dir(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.rfind("snapshot_", 0) == 0) {
      std::filesystem::remove(entry.path());
    }
  }
  return dir;
}

Trajectory run_spec(const RunSpec& spec, const std::filesystem::path& dir) {
  const double alpha = spec.simulation.alpha_expected.alpha;
  return run(spec.simulation, initial_field(spec), snapshot_writer(dir, alpha));
}

Verdict oseen_exact(const RunSpec& spec, const std::filesystem::path& dir, Trajectory& traj) {
  Verdict v{"oseen_exact", {}, {}};
  const auto& c = spec.simulation;
  const double alpha = c.alpha_expected.alpha;
  traj = run_spec(spec, dir);
  check_run_completed(v, traj);
  const auto recs = records_of(traj);

  const ScalarField& final_field = traj.frames.back().field;
  const double err = lp_distance(final_field, sample_oseen_vorticity(c.grid, c.t_end, c.alpha_expected), 1.0);
  v.add("E1.error", err <= 1e-3,
        "L1 distance to Omega(., " + fixed(c.t_end, 3) + ") = " + sci(err) + " (limit 1e-03)");

  SimulationConfig half = c;
  half.dt = 0.5 * c.dt;
  half.diagnostics_enabled = false;
  half.record_every = half.step_count();
  const Trajectory refined = run(half, initial_field(spec));
  const double err_half = lp_distance(
      refined.frames.back().field, sample_oseen_vorticity(c.grid, c.t_end, c.alpha_expected), 1.0);
  const double ratio = err / err_half;
  v.add("E1.order", ratio >= 3.0,
        "error at dt = " + sci(c.dt) + ": " + sci(err) + ", at dt/2: " + sci(err_half) +
            ", reduction " + fixed(ratio, 3) + "x (limit >= 3x)");

  check_mass(v, "E2.mass", recs, alpha);
  check_moment_slope(v, "E2.moment", recs, alpha);
  v.notes.push_back("sqrt(t) max|u| at t_end = " +
                    fixed(sup_velocity_scaling(make_plan(c.grid), final_field), 7));
  return v;
}

Verdict entropy_decay(const RunSpec& spec, const std::filesystem::path& dir, Trajectory& traj) {
  Verdict v{"entropy_decay", {}, {}};
  const double alpha = spec.simulation.alpha_expected.alpha;
  traj = run_spec(spec, dir);
  check_run_completed(v, traj);
  const auto recs = records_of(traj);
  const auto series = decay_series(recs);
  const auto rep = entropy_decay_report(series.tau, series.h, series.fisher);

  v.add("E3.strict", rep.strictly_decreasing,
        std::string("h(tau) ") +
            (rep.strictly_decreasing ? "strictly decreasing" : "not strictly decreasing") +
            " over " + std::to_string(series.h.size()) + " snapshots");
  v.add("E3.exponent", rep.fitted_exponent <= -0.85,
        "fitted exponent " + fixed(rep.fitted_exponent, 4) + " (limit <= -0.85)");

  ScalarField w = traj.frames.back().field;
  w *= 1.0 / integrate(w);
  const double dist = lp_distance(w, sample_gauss_G(w.grid()), 1.0);
  const double h_final = series.h.back();
  const double ck_limit = 2.0 * std::sqrt(std::max(h_final, 0.0));
  v.add("E3.l1", dist <= ck_limit && dist <= 0.02,
        "||w/alpha - G||_1 = " + sci(dist) + " (limits 2 sqrt(h_final) = " + sci(ck_limit) +
            " and 2e-02)");
  v.add("E3.dissipation", rep.dissipation_pass && rep.dissipation_points > 0,
        "max |dh/dtau + I| / I = " + sci(rep.max_dissipation_error) + " over " +
            std::to_string(rep.dissipation_points) + " snapshots with h > 1e-4 (limit 0.15)");
  add_decay_criteria(v, rep);
  check_mass(v, "E2.mass", recs, alpha);
  check_moment_slope(v, "E2.moment", recs, alpha);
  v.notes.push_back("sup K1(beta = 0.9) over the run = " + fixed(sup_envelope(recs), 6));
  return v;
}

Verdict trotter_domination(const RunSpec& spec, const std::filesystem::path& dir,
                           Trajectory& traj) {
  Verdict v{"trotter_domination", {}, {}};
  const auto& c = spec.simulation;
  const double alpha = c.alpha_expected.alpha;
  const double tol = 1e-4 * std::fabs(alpha);
  traj = trotter_domination_run(c, initial_field(spec), tol, snapshot_writer(dir, alpha));
  check_run_completed(v, traj);

  double worst = 0.0, worst_t = c.t_start;
  double worst_oseen = 0.0, worst_oseen_t = 2.0 * c.t_start;
  std::size_t oseen_frames = 0;
  for (const auto& f : traj.frames) {
    if (!f.domination) continue;
    const double t = *f.field.time();
    if (f.domination->worst_margin < worst) {
      worst = f.domination->worst_margin;
      worst_t = t;
    }
    if (t >= 2.0 * c.t_start * (1.0 - 1e-12)) {
      ++oseen_frames;
      if (f.domination_oseen->worst_margin < worst_oseen) {
        worst_oseen = f.domination_oseen->worst_margin;
        worst_oseen_t = t;
      }
    }
  }
  v.add("E4.trotter", worst >= -tol,
        "worst margin against exp((t-t0)Delta) omega0^# = " + sci(worst) + " at t = " +
            fixed(worst_t, 3) + " (limit -" + sci(tol) + ")");
  v.add("E4.oseen", oseen_frames > 0 && worst_oseen >= -tol,
        "worst margin against Omega(., t) for t >= 2 t0 = " + sci(worst_oseen) + " at t = " +
            fixed(worst_oseen_t, 3) + " over " + std::to_string(oseen_frames) +
            " snapshots (limit -" + sci(tol) + ")");
  return v;
}

Verdict two_bump_uniqueness(const RunSpec& spec, const std::filesystem::path& dir,
                            Trajectory& traj) {
  Verdict v{"two_bump_uniqueness", {}, {}};
  const auto& c = spec.simulation;
  const double alpha = c.alpha_expected.alpha;
  traj = run_spec(spec, dir);
  check_run_completed(v, traj);
  const auto recs = records_of(traj);

  // Csiszar-Kullback with the entropy decay law bounds the distance to the
  // Oseen vortex of the same circulation:
  //   ||omega(t) - Omega(t)||_1 <= alpha sqrt(2 h(tau0)) exp(-(tau - tau0) / 2).
  const double h0 = recs.front().entropy_H;
  const double tau0 = std::log(c.t_start);
  double worst_ratio = 0.0;
  double final_dist = 0.0;
  for (const auto& f : traj.frames) {
    const double t = *f.field.time();
    const double dist =
        lp_distance(f.field, sample_oseen_vorticity(c.grid, t, c.alpha_expected), 1.0);
    const double bound = alpha * std::sqrt(2.0 * h0) * std::exp(-0.5 * (std::log(t) - tau0));
    worst_ratio = std::max(worst_ratio, dist / bound);
    final_dist = dist;
  }
  v.add("U.envelope", worst_ratio <= 1.0,
        "max ||omega - Omega||_1 / (alpha sqrt(2 h0) e^{-(tau - tau0)/2}) = " +
            fixed(worst_ratio, 4) + " (limit 1), h0 = " + sci(h0));
  check_moment_slope(v, "E2.moment", recs, alpha);
  double drift = 0.0;
  for (const auto& r : recs) drift = std::max(drift, std::fabs(r.mass - alpha));
  v.notes.push_back("final ||omega - Omega||_1 = " + sci(final_dist));
  v.notes.push_back("max |mass - alpha| = " + sci(drift));
  return v;
}

}  // namespace

bool Verdict::pass() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.pass; });
}

void Verdict::add(std::string id, bool ok, std::string detail) {
  criteria.push_back({std::move(id), ok, std::move(detail)});
}

std::string Verdict::text() const {
  std::ostringstream out;
  out << "scenario " << title << '\n';
  for (const auto& c : criteria) {
    out << (c.pass ? "PASS " : "FAIL ") << c.id << "  " << c.detail << '\n';
  }
  for (const auto& n : notes) out << "note " << n << '\n';
  out << "overall " << (pass() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

void Verdict::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text();
}

int exit_code(const Verdict& verdict) { return verdict.pass() ? 0 : 1; }

std::string snapshot_name(std::size_t step) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "snapshot_%07zu.osn", step);
  return buf;
}

FrameObserver snapshot_writer(const std::filesystem::path& dir, std::optional<double> alpha) {
  return [dir, alpha](const Frame& frame) {
    write_snapshot(dir / snapshot_name(frame.step), frame.physical(), alpha);
  };
}

void write_run_tables(const Trajectory& trajectory, const std::filesystem::path& dir) {
  const auto recs = records_of(trajectory);
  write_diagnostics_csv(dir / "diagnostics.csv", recs);
  write_plot_script(dir / "plot_diagnostics.py", "diagnostics.csv");
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"oseen_exact", "two_bump_uniqueness",
                                              "trotter_domination", "entropy_decay"};
  return names;
}

RunSpec scenario_spec(const std::string& name) {
  RunSpec spec;
  InitialRecipe& r = spec.initial;
  if (name == "oseen_exact") {
    spec.simulation = base_config(12.0, 128, 1.0, 2.0, 1e-3, 100);
    r.kind = InitialRecipe::Kind::kOseen;
  } else if (name == "entropy_decay") {
    spec.simulation = base_config(14.0, 192, 0.05, 0.05 * std::exp(5.0), 5e-3, 10);
    spec.simulation.variables = Variables::kSelfSimilar;
    r.kind = InitialRecipe::Kind::kTwoBump;
  } else if (name == "trotter_domination") {
    spec.simulation = base_config(8.0, 192, 0.05, 1.0, 1e-3, 25);
    spec.simulation.track_domination = true;
    r.kind = InitialRecipe::Kind::kTwoBump;
  } else if (name == "two_bump_uniqueness") {
    spec.simulation = base_config(8.0, 192, 0.05, 1.0, 1e-3, 25);
    r.kind = InitialRecipe::Kind::kTwoBump;
  } else {
    throw std::invalid_argument("unknown scenario '" + name + "'");
  }
  r.t0 = spec.simulation.t_start;
  r.alpha = spec.simulation.alpha_expected;
  r.offset = 0.2;
  return spec;
}

ScenarioResult run_scenario(const std::string& name, const std::filesystem::path& out_root) {
  const RunSpec spec = scenario_spec(name);
  ScenarioResult result;
  result.directory = prepare_dir(out_root / name);
  if (name == "oseen_exact") {
    result.verdict = oseen_exact(spec, result.directory, result.trajectory);
  } else if (name == "entropy_decay") {
    result.verdict = entropy_decay(spec, result.directory, result.trajectory);
  } else if (name == "trotter_domination") {
    result.verdict = trotter_domination(spec, result.directory, result.trajectory);
  } else {
    result.verdict = two_bump_uniqueness(spec, result.directory, result.trajectory);
  }
  write_run_tables(result.trajectory, result.directory);
  result.verdict.write(result.directory / "verdict.txt");
  return result;
}

ScenarioResult simulate(const RunSpec& spec, const std::filesystem::path& out_dir) {
  ScenarioResult result;
  result.directory = prepare_dir(out_dir);
  const double alpha = spec.simulation.alpha_expected.alpha;
  const ScalarField initial = initial_field(spec);
  result.trajectory = spec.simulation.track_domination
                          ? trotter_domination_run(spec.simulation, initial, 1e-4 * std::fabs(alpha),
                                                   snapshot_writer(result.directory, alpha))
                          : run_spec(spec, result.directory);
  Verdict& v = result.verdict;
  v.title = "simulate";
  check_run_completed(v, result.trajectory);
  const auto recs = records_of(result.trajectory);
  if (!recs.empty()) {
    const double mass0 = recs.front().mass;
    if (mass0 != 0.0) {
      check_mass(v, "mass", recs, mass0);
      if (mass0 > 0.0 && recs.size() >= 2) check_moment_slope(v, "moment", recs, mass0);
    }
  }
  if (spec.simulation.track_domination) {
    double worst = 0.0;
    for (const auto& f : result.trajectory.frames) {
      if (f.domination) worst = std::min(worst, f.domination->worst_margin);
    }
    const double tol = 1e-4 * std::fabs(alpha);
    v.add("domination", worst >= -tol,
          "worst margin " + sci(worst) + " (limit -" + sci(tol) + ")");
  }
  write_run_tables(result.trajectory, result.directory);
  v.write(result.directory / "verdict.txt");
  return result;
}

std::vector<ScalarField> load_trajectory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::invalid_argument(dir.string() + " is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.rfind("snapshot_", 0) == 0 &&
        entry.path().extension() == ".osn") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<ScalarField> out;
  for (const auto& f : files) out.push_back(read_snapshot(f).field);
  return out;
}

namespace {

std::vector<DiagnosticsRecord> directory_records(const std::vector<ScalarField>& snaps) {
  std::vector<DiagnosticsRecord> recs;
  for (const auto& s : snaps) recs.push_back(make_record(s));
  return recs;
}

}  // namespace

Verdict entropy_command(const std::filesystem::path& dir) {
  const auto snaps = load_trajectory(dir);
  const auto recs = directory_records(snaps);
  write_diagnostics_csv(dir / "diagnostics.csv", recs);
  Verdict v{"entropy", {}, {}};
  const auto series = decay_series(recs);
  const auto rep = entropy_decay_report(series.tau, series.h, series.fisher);
  add_decay_criteria(v, rep);
  v.add("decay.dissipation", rep.dissipation_pass,
        "max |dh/dtau + I| / I = " + sci(rep.max_dissipation_error) + " over " +
            std::to_string(rep.dissipation_points) + " snapshots with h > 1e-4 (limit 0.15)");
  v.write(dir / "verdict.txt");
  return v;
}

Verdict verify_command(const std::filesystem::path& dir) {
  const auto snaps = load_trajectory(dir);
  if (snaps.empty()) throw std::invalid_argument(dir.string() + " holds no snapshots");
  const auto recs = directory_records(snaps);
  write_diagnostics_csv(dir / "diagnostics.csv", recs);
  Verdict v{"verify", {}, {}};
  for (std::size_t k = 1; k < snaps.size(); ++k) {
    if (!(*snaps[k].time() > *snaps[k - 1].time())) {
      v.add("time_order", false, "time tags not strictly increasing at snapshot " +
                                     std::to_string(k));
      break;
    }
  }
  const double mass0 = recs.front().mass;
  if (mass0 != 0.0) check_mass(v, "mass", recs, mass0);
  const auto first = snaps.front().values();
  if (*std::min_element(first.begin(), first.end()) >= 0.0) {
    double lowest = 0.0;
    for (const auto& s : snaps) {
      const auto vals = s.values();
      lowest = std::min(lowest, *std::min_element(vals.begin(), vals.end()));
    }
    v.add("positivity", lowest >= -1e-13,
          "min omega = " + sci(lowest) + " (limit -1e-13)");
  }
  if (mass0 > 0.0 && recs.size() >= 2) check_moment_slope(v, "moment", recs, mass0);
  if (mass0 > 0.0 && recs.size() >= 3) {
    const auto series = decay_series(recs);
    add_decay_criteria(v, entropy_decay_report(series.tau, series.h, series.fisher));
  }
  v.write(dir / "verdict.txt");
  return v;
}

RearrangeOutput rearrange_command(const std::filesystem::path& snapshot,
                                  const std::filesystem::path& out_dir) {
  const Snapshot snap = read_snapshot(snapshot);
  std::filesystem::create_directories(out_dir);
  const std::string stem = snapshot.stem().string();
  RearrangeOutput out{out_dir / (stem + "_sharp.osn"), out_dir / (stem + "_profile.csv")};
  write_snapshot(out.snapshot, symmetric_rearrangement(snap.field), snap.alpha);
  const auto profile = decreasing_rearrangement(snap.field);
  std::ofstream csv(out.profile_csv, std::ios::trunc);
  if (!csv) throw std::runtime_error("cannot open " + out.profile_csv.string());
  csv << "measure,cumulative\n";
  char buf[64];
  for (std::size_t k = 0; k < profile.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n",
                  static_cast<double>(k + 1) * profile.cell_measure, profile.cumulative[k]);
    csv << buf;
  }
  return out;
}

}  // namespace oseen
