#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "oseen/solver.hpp"

namespace oseen {

/// Configuration problems; the message carries "<source>:<line>: ...".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Initial data recipe.
///   oseen:    Omega(., t0; alpha)
///   two_bump: (alpha/2) [Omega(. - c, t0) + Omega(. + c, t0)], c = (d, 0),
///             normalized to mass alpha
///   snapshot: a stored physical snapshot, which must sit on the run's grid
struct InitialRecipe {
  enum class Kind { kOseen, kTwoBump, kSnapshot };
  Kind kind = Kind::kOseen;
  double t0 = 1.0;
  Circulation alpha{1.0};
  double offset = 0.2;
  std::filesystem::path path;
};

struct RunSpec {
  SimulationConfig simulation;
  InitialRecipe initial;
  /// Empty when the file does not set out_dir.
  std::filesystem::path out_dir;
};

/// key=value lines, '#' starts a comment. Keys: L, n, t_start, t_end, dt,
/// alpha, variables (physical|self_similar), splitting (lie|strang),
/// record_every, init (oseen|two_bump|snapshot:<path>), out_dir, bump_offset,
/// track_domination (true|false). Unknown or repeated keys and out-of-range
/// values raise ConfigError with the offending line.
RunSpec parse_config(const std::filesystem::path& path);
RunSpec parse_config_text(std::string_view text, const std::string& source = "<config>");

/// Physical vorticity at t0 on grid, tagged with t0.
ScalarField make_initial_data(const InitialRecipe& recipe, const GridSpec& grid);

/// The same data in self-similar variables, w(xi) = t0 omega(sqrt(t0) xi),
/// on the xi-grid, tagged with log t0. Gaussian recipes are sampled directly;
/// snapshots are converted and must land on grid.
ScalarField make_self_similar_initial_data(const InitialRecipe& recipe, const GridSpec& grid);

/// Initial field in the variables the run uses.
ScalarField initial_field(const RunSpec& spec);

}  // namespace oseen
