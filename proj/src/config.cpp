#include "oseen/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "oseen/fields.hpp"
#include "oseen/lamb_oseen.hpp"
#include "oseen/snapshot.hpp"

namespace oseen {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

struct Entry {
  std::string value;
  std::size_t line;
};

class Parser {
 public:
  Parser(std::string source, std::map<std::string, Entry> entries)
      : source_(std::move(source)), entries_(std::move(entries)) {}

  [[noreturn]] void fail(std::size_t line, const std::string& what) const {
    throw ConfigError(source_, line, what);
  }

  std::optional<Entry> get(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t line_of(const std::string& key) const {
    auto e = get(key);
    return e ? e->line : 0;
  }

  double number(const std::string& key, double fallback) const {
    auto e = get(key);
    if (!e) return fallback;
    const char* begin = e->value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v)) {
      fail(e->line, key + " = '" + e->value + "' is not a finite number");
    }
    return v;
  }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    auto e = get(key);
    if (!e) return fallback;
    unsigned long long v = 0;
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      fail(e->line, key + " = '" + e->value + "' is not a nonnegative integer");
    }
    return static_cast<std::size_t>(v);
  }

  std::string word(const std::string& key, const std::string& fallback) const {
    auto e = get(key);
    return e ? e->value : fallback;
  }

 private:
  std::string source_;
  std::map<std::string, Entry> entries_;
};

const char* const kKeys[] = {"L",       "n",          "t_start",      "t_end",
                             "dt",      "alpha",      "variables",    "splitting",
                             "record_every", "init",  "out_dir",      "bump_offset",
                             "track_domination"};

bool known_key(const std::string& key) {
  for (const char* k : kKeys) {
    if (key == k) return true;
  }
  return false;
}

std::string describe(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

}  // namespace

ConfigError::ConfigError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + (line ? std::to_string(line) : std::string("-")) + ": " +
                         what),
      line_(line) {}

RunSpec parse_config_text(std::string_view text, const std::string& source) {
  std::map<std::string, Entry> entries;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line_no, "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_key(key)) throw ConfigError(source, line_no, "unknown key '" + key + "'");
    if (value.empty()) throw ConfigError(source, line_no, "empty value for '" + key + "'");
    if (auto it = entries.find(key); it != entries.end()) {
      throw ConfigError(source, line_no,
                        "duplicate key '" + key + "' (lines " + std::to_string(it->second.line) +
                            " and " + std::to_string(line_no) + ")");
    }
    entries.emplace(key, Entry{value, line_no});
  }

  const Parser p(source, std::move(entries));
  RunSpec spec;
  SimulationConfig& c = spec.simulation;

  const double L = p.number("L", 12.0);
  if (!(L > 0.0)) p.fail(p.line_of("L"), "L = " + describe(L) + " violates L > 0");
  const std::size_t n = p.count("n", 128);
  if (n < 16 || n % 2 != 0) {
    p.fail(p.line_of("n"), "n = " + std::to_string(n) + " violates n even, >= 16");
  }
  c.grid = GridSpec(L, n);

  c.t_start = p.number("t_start", 1.0);
  if (!(c.t_start > 0.0)) {
    p.fail(p.line_of("t_start"), "t_start = " + describe(c.t_start) + " violates t_start > 0");
  }
  c.t_end = p.number("t_end", 2.0);
  if (!(c.t_end > c.t_start)) {
    p.fail(p.line_of("t_end"), "t_end = " + describe(c.t_end) + " violates t_end > t_start");
  }
  c.dt = p.number("dt", 1e-3);
  if (!(c.dt > 0.0)) p.fail(p.line_of("dt"), "dt = " + describe(c.dt) + " violates dt > 0");
  c.alpha_expected = Circulation{p.number("alpha", 1.0)};

  const std::string variables = p.word("variables", "physical");
  if (variables == "physical") {
    c.variables = Variables::kPhysical;
  } else if (variables == "self_similar") {
    c.variables = Variables::kSelfSimilar;
  } else {
    p.fail(p.line_of("variables"), "variables must be physical or self_similar");
  }
  if (c.variables == Variables::kSelfSimilar && !(c.alpha_expected.alpha > 0.0)) {
    p.fail(p.line_of("alpha"), "self-similar runs need alpha > 0");
  }

  const std::string splitting = p.word("splitting", "strang");
  if (splitting == "strang") {
    c.splitting = Splitting::kStrang;
  } else if (splitting == "lie") {
    c.splitting = Splitting::kLie;
  } else {
    p.fail(p.line_of("splitting"), "splitting must be lie or strang");
  }

  c.record_every = p.count("record_every", 100);
  if (c.record_every == 0) p.fail(p.line_of("record_every"), "record_every must be >= 1");

  const std::string track = p.word("track_domination", "false");
  if (track == "true") {
    c.track_domination = true;
  } else if (track != "false") {
    p.fail(p.line_of("track_domination"), "track_domination must be true or false");
  }
  if (c.track_domination && c.variables != Variables::kPhysical) {
    p.fail(p.line_of("track_domination"), "track_domination needs variables = physical");
  }

  try {
    (void)c.step_count();
  } catch (const DomainError& e) {
    p.fail(p.line_of("dt"), e.what());
  }

  InitialRecipe& r = spec.initial;
  r.t0 = c.t_start;
  r.alpha = c.alpha_expected;
  r.offset = p.number("bump_offset", 0.2);
  if (!(r.offset >= 0.0)) p.fail(p.line_of("bump_offset"), "bump_offset must be >= 0");
  const std::string init = p.word("init", "oseen");
  if (init == "oseen") {
    r.kind = InitialRecipe::Kind::kOseen;
  } else if (init == "two_bump") {
    r.kind = InitialRecipe::Kind::kTwoBump;
  } else if (init.rfind("snapshot:", 0) == 0 && init.size() > 9) {
    r.kind = InitialRecipe::Kind::kSnapshot;
    r.path = init.substr(9);
  } else {
    p.fail(p.line_of("init"), "init must be oseen, two_bump or snapshot:<path>");
  }
  if (auto out = p.get("out_dir")) spec.out_dir = out->value;
  return spec;
}

RunSpec parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  RunSpec spec = parse_config_text(text.str(), path.string());
  // Relative snapshot paths are taken relative to the config file.
  if (spec.initial.kind == InitialRecipe::Kind::kSnapshot && spec.initial.path.is_relative()) {
    spec.initial.path = path.parent_path() / spec.initial.path;
  }
  return spec;
}

namespace {

ScalarField read_recipe_snapshot(const InitialRecipe& recipe) {
  Snapshot snap = read_snapshot(recipe.path);
  if (!snap.field.time()) {
    throw DomainError("initial snapshot " + recipe.path.string() + " carries no time tag");
  }
  return std::move(snap.field);
}

}  // namespace

ScalarField make_initial_data(const InitialRecipe& recipe, const GridSpec& grid) {
  switch (recipe.kind) {
    case InitialRecipe::Kind::kOseen:
      return sample_oseen_vorticity(grid, recipe.t0, recipe.alpha);
    case InitialRecipe::Kind::kTwoBump: {
      const double t0 = recipe.t0;
      const double d = recipe.offset;
      ScalarField f = ScalarField::sample(
          grid,
          [&](Point x) {
            return 0.5 * (oseen_vorticity({x.x1 - d, x.x2}, t0, Circulation{1.0}) +
                          oseen_vorticity({x.x1 + d, x.x2}, t0, Circulation{1.0}));
          },
          t0);
      f *= recipe.alpha.alpha / integrate(f);
      return f;
    }
    case InitialRecipe::Kind::kSnapshot: {
      ScalarField f = read_recipe_snapshot(recipe);
      if (!(f.grid() == grid)) {
        throw DomainError("initial snapshot " + recipe.path.string() +
                          " does not sit on the configured grid");
      }
      return f;
    }
  }
  throw DomainError("unknown initial data recipe");
}

ScalarField make_self_similar_initial_data(const InitialRecipe& recipe, const GridSpec& grid) {
  const double tau0 = std::log(recipe.t0);
  switch (recipe.kind) {
    case InitialRecipe::Kind::kOseen: {
      ScalarField w = sample_gauss_G(grid);
      w *= recipe.alpha.alpha;
      w.set_time(tau0);
      return w;
    }
    case InitialRecipe::Kind::kTwoBump: {
      const double m = recipe.offset / std::sqrt(recipe.t0);
      ScalarField w = ScalarField::sample(
          grid,
          [&](Point xi) {
            return 0.5 * (gauss_G({xi.x1 - m, xi.x2}) + gauss_G({xi.x1 + m, xi.x2}));
          },
          tau0);
      w *= recipe.alpha.alpha / integrate(w);
      return w;
    }
    case InitialRecipe::Kind::kSnapshot: {
      const ScalarField w = to_self_similar(read_recipe_snapshot(recipe));
      const double rel = std::fabs(w.grid().half_width() / grid.half_width() - 1.0);
      if (w.grid().n() != grid.n() || rel > 1e-12) {
        throw DomainError("initial snapshot " + recipe.path.string() +
                          " does not map onto the configured xi-grid");
      }
      return ScalarField(grid, std::vector<double>(w.values().begin(), w.values().end()),
                         w.time());
    }
  }
  throw DomainError("unknown initial data recipe");
}

ScalarField initial_field(const RunSpec& spec) {
  const auto& c = spec.simulation;
  return c.variables == Variables::kPhysical
             ? make_initial_data(spec.initial, c.grid)
             : make_self_similar_initial_data(spec.initial, c.grid);
}

}  // namespace oseen
