// oseen-lab: command-line front end.
//
//   oseen-lab simulate <config>      run a key=value configuration
//   oseen-lab rearrange <snapshot>   symmetric rearrangement and its profile
//   oseen-lab entropy <traj_dir>     entropy / Fisher table and decay verdict
//   oseen-lab verify <traj_dir>      conservation, positivity and decay checks
//   oseen-lab scenario <name>        run a preset experiment
//
// Exit status: 0 all criteria pass, 1 a criterion failed, 2 usage or input
// error. OSEEN_LAB_OUT sets the output root (default ./oseen_lab_out).

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "oseen/config.hpp"
#include "oseen/scenario.hpp"
#include "oseen/simd/kernels.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kUsageError = 2;

std::optional<fs::path> env_root() {
  const char* env = std::getenv("OSEEN_LAB_OUT");
  if (env == nullptr || *env == '\0') return std::nullopt;
  return fs::path(env);
}

fs::path output_root() { return env_root().value_or(fs::path("oseen_lab_out")); }

fs::path simulate_dir(const fs::path& config, const oseen::RunSpec& spec) {
  const fs::path name = spec.out_dir.empty() ? config.stem() : spec.out_dir;
  if (auto root = env_root()) return *root / (name.is_absolute() ? name.filename() : name);
  return spec.out_dir.empty() ? output_root() / name : spec.out_dir;
}

int report(const oseen::Verdict& verdict) {
  std::cout << verdict.text();
  return oseen::exit_code(verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the 2D vorticity equation and the Lamb-Oseen vortex"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "oseen-lab 1.0");

  std::string config_path, snapshot_path, traj_dir, scenario_name, rearrange_out;

  auto* simulate = app.add_subcommand("simulate", "run a key=value configuration file");
  simulate->add_option("config", config_path, "configuration file")->required();

  auto* rearrange = app.add_subcommand("rearrange", "write f^# and its cumulative profile");
  rearrange->add_option("snapshot", snapshot_path, "input snapshot (.osn)")->required();
  rearrange->add_option("-o,--out", rearrange_out, "output directory");

  auto* entropy = app.add_subcommand("entropy", "entropy decay table and verdict");
  entropy->add_option("traj_dir", traj_dir, "trajectory directory")->required();

  auto* verify = app.add_subcommand("verify", "check a trajectory directory");
  verify->add_option("traj_dir", traj_dir, "trajectory directory")->required();

  auto* scenario = app.add_subcommand("scenario", "run a preset experiment");
  scenario->add_option("name", scenario_name, "preset name")
      ->required()
      ->check(CLI::IsMember(oseen::scenario_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  std::clog << "oseen-lab: kernels " << oseen::simd::level_name(oseen::simd::active_level())
            << '\n';
  try {
    if (*simulate) {
      const oseen::RunSpec spec = oseen::parse_config(config_path);
      const fs::path dir = simulate_dir(config_path, spec);
      const auto result = oseen::simulate(spec, dir);
      std::clog << "oseen-lab: wrote " << result.directory.string() << '\n';
      return report(result.verdict);
    }
    if (*rearrange) {
      fs::path out = rearrange_out;
      if (out.empty()) {
        out = env_root() ? *env_root() / "rearrange" : fs::path(snapshot_path).parent_path();
        if (out.empty()) out = ".";
      }
      const auto written = oseen::rearrange_command(snapshot_path, out);
      std::cout << written.snapshot.string() << '\n' << written.profile_csv.string() << '\n';
      return 0;
    }
    if (*entropy) return report(oseen::entropy_command(traj_dir));
    if (*verify) return report(oseen::verify_command(traj_dir));
    if (*scenario) {
      const auto result = oseen::run_scenario(scenario_name, output_root());
      std::clog << "oseen-lab: wrote " << result.directory.string() << '\n';
      return report(result.verdict);
    }
  } catch (const std::exception& e) {
    std::cerr << "oseen-lab: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}
