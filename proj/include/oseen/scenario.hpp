#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "oseen/config.hpp"
#include "oseen/solver.hpp"

namespace oseen {

/// One checked criterion. detail always names the measured value and the
/// limit it was held to.
struct Criterion {
  std::string id;
  bool pass = false;
  std::string detail;
};

struct Verdict {
  std::string title;
  std::vector<Criterion> criteria;
  /// Monitored quantities that are reported but not asserted.
  std::vector<std::string> notes;

  bool pass() const;
  void add(std::string id, bool pass, std::string detail);
  std::string text() const;
  void write(const std::filesystem::path& path) const;
};

/// 0 when every criterion passes, 1 otherwise.
int exit_code(const Verdict& verdict);

/// Snapshot file name for a step index.
std::string snapshot_name(std::size_t step);

/// Writes each frame as a physical snapshot into dir as it is recorded, so a
/// failed run still leaves its last valid state on disk.
FrameObserver snapshot_writer(const std::filesystem::path& dir, std::optional<double> alpha);

/// diagnostics.csv and the plotting script for the recorded frames.
void write_run_tables(const Trajectory& trajectory, const std::filesystem::path& dir);

/// Named presets: oseen_exact, two_bump_uniqueness, trotter_domination,
/// entropy_decay.
const std::vector<std::string>& scenario_names();

/// The configuration each preset runs with.
RunSpec scenario_spec(const std::string& name);

struct ScenarioResult {
  Verdict verdict;
  std::filesystem::path directory;
  Trajectory trajectory;
};

/// Runs a preset into out_root/<name>, writing snapshots, diagnostics.csv and
/// verdict.txt. Throws std::invalid_argument for an unknown name.
ScenarioResult run_scenario(const std::string& name, const std::filesystem::path& out_root);

/// `simulate`: runs a parsed configuration into out_dir and checks the
/// conservation laws on the result.
ScenarioResult simulate(const RunSpec& spec, const std::filesystem::path& out_dir);

/// Physical snapshots of a trajectory directory, in file-name order.
std::vector<ScalarField> load_trajectory(const std::filesystem::path& dir);

/// `entropy`: entropy, Fisher information and the decay-law report over the
/// snapshots in dir. Writes diagnostics.csv and verdict.txt into dir.
Verdict entropy_command(const std::filesystem::path& dir);

/// `verify`: conservation laws, positivity and (for three or more snapshots)
/// the decay law. Writes diagnostics.csv and verdict.txt into dir.
Verdict verify_command(const std::filesystem::path& dir);

/// `rearrange`: writes f^# next to the input (<stem>_sharp.osn) and a CSV of
/// (prefix measure, cumulative mass) pairs (<stem>_profile.csv).
struct RearrangeOutput {
  std::filesystem::path snapshot;
  std::filesystem::path profile_csv;
};
RearrangeOutput rearrange_command(const std::filesystem::path& snapshot,
                                  const std::filesystem::path& out_dir);

}  // namespace oseen
