#include "ephydro/config.hpp"

#include "ephydro/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace ephydro {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string out = "invalid configuration";
  for (const auto& p : problems) out += "\n  " + p;
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(trim(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double to_double(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v))
    throw DomainError("expected a number, got '" + std::string(text) + "'");
  return v;
}

std::size_t to_size(std::string_view text) {
  text = trim(text);
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw DomainError("expected a non-negative integer, got '" + std::string(text) + "'");
  return v;
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const auto k = static_cast<std::size_t>(it - xs.begin());
  const double a = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return (1.0 - a) * ys[k - 1] + a * ys[k];
}

Check check_from_name(std::string_view name) {
  for (Check c : all_checks())
    if (to_string(c) == name) return c;
  throw DomainError("unknown check '" + std::string(name) + "'");
}

struct Setter {
  std::string section;
  std::function<void(ExperimentConfig&, std::string_view)> apply;
};

using SetterTable = std::map<std::string, Setter, std::less<>>;

const SetterTable& setters() {
  static const SetterTable table = [] {
    SetterTable t;
    auto add = [&t](std::string section, std::string key, std::function<void(ExperimentConfig&, std::string_view)> f) {
      t.emplace(std::move(key), Setter{std::move(section), std::move(f)});
    };
    // model; gamma is range checked after all keys are read
    add("model", "gamma", [](ExperimentConfig& c, std::string_view v) {
      c.solver.model.gamma = to_double(v);
    });
    add("model", "doping", [](ExperimentConfig& c, std::string_view v) { c.doping_spec = std::string(v); });
    add("initial", "n0", [](ExperimentConfig& c, std::string_view v) { c.n0 = FieldSpec::parse(v, c.base_dir); });
    add("initial", "J0", [](ExperimentConfig& c, std::string_view v) { c.J0 = FieldSpec::parse(v, c.base_dir); });
    add("solver", "epsilon", [](ExperimentConfig& c, std::string_view v) { c.solver.epsilon = to_double(v); });
    add("solver", "N", [](ExperimentConfig& c, std::string_view v) { c.solver.cells = to_size(v); });
    add("solver", "T_final", [](ExperimentConfig& c, std::string_view v) { c.solver.t_final = to_double(v); });
    add("solver", "cfl_safety", [](ExperimentConfig& c, std::string_view v) { c.solver.cfl_safety = to_double(v); });
    add("solver", "output_stride",
        [](ExperimentConfig& c, std::string_view v) { c.solver.output_stride = to_size(v); });
    add("solver", "output_interval",
        [](ExperimentConfig& c, std::string_view v) { c.solver.output_interval = to_double(v); });
    add("solver", "n_floor", [](ExperimentConfig& c, std::string_view v) { c.solver.n_floor = to_double(v); });
    add("solver", "clamp_fraction",
        [](ExperimentConfig& c, std::string_view v) { c.solver.clamp_fraction = to_double(v); });
    add("solver", "scheme", [](ExperimentConfig& c, std::string_view v) {
      if (v == "central")
        c.solver.flux = FluxScheme::central;
      else if (v == "rusanov")
        c.solver.flux = FluxScheme::rusanov;
      else
        throw DomainError("scheme must be central or rusanov, got '" + std::string(v) + "'");
    });
    add("solver", "relaxation", [](ExperimentConfig& c, std::string_view v) {
      if (v == "explicit")
        c.solver.relaxation = RelaxationTreatment::explicit_euler;
      else if (v == "exponential")
        c.solver.relaxation = RelaxationTreatment::exponential;
      else
        throw DomainError("relaxation must be explicit or exponential, got '" + std::string(v) + "'");
    });
    add("solver", "boundary", [](ExperimentConfig& c, std::string_view v) {
      if (v == "zero-flux")
        c.solver.boundary = BoundaryCondition::zero_flux;
      else if (v == "dirichlet")
        c.solver.boundary = BoundaryCondition::dirichlet;
      else
        throw DomainError("boundary must be zero-flux or dirichlet, got '" + std::string(v) + "'");
    });
    add("diagnostics", "checks", [](ExperimentConfig& c, std::string_view v) {
      auto& checks = c.diagnostics.checks;
      checks.clear();
      if (v == "all") {
        checks = all_checks();
        return;
      }
      if (v == "none" || v.empty()) return;
      for (auto name : split(v, ',')) checks.push_back(check_from_name(name));
    });
    add("diagnostics", "region_M", [](ExperimentConfig& c, std::string_view v) { c.diagnostics.region_M = to_double(v); });
    add("diagnostics", "region_tol",
        [](ExperimentConfig& c, std::string_view v) { c.diagnostics.region_tol = to_double(v); });
    add("diagnostics", "fit_window", [](ExperimentConfig& c, std::string_view v) {
      const auto parts = split(v, ',');
      if (parts.size() != 2) throw DomainError("fit_window expects t0,t1");
      c.diagnostics.fit_window = {to_double(parts[0]), to_double(parts[1])};
    });
    add("diagnostics", "entropy_tests", [](ExperimentConfig& c, std::string_view v) {
      const auto parts = split(v, 'x');
      if (parts.size() != 2) throw DomainError("entropy_tests expects <space>x<time>, e.g. 5x5");
      c.diagnostics.entropy_grid.space = to_size(parts[0]);
      c.diagnostics.entropy_grid.time = to_size(parts[1]);
    });
    add("diagnostics", "c_trunc",
        [](ExperimentConfig& c, std::string_view v) { c.diagnostics.entropy_grid.c_trunc = to_double(v); });
    add("diagnostics", "entropy_min_samples",
        [](ExperimentConfig& c, std::string_view v) { c.diagnostics.entropy_grid.min_samples = to_size(v); });
    add("diagnostics", "weak_power", [](ExperimentConfig& c, std::string_view v) {
      c.diagnostics.weak_power = static_cast<int>(to_size(v));
    });
    add("diagnostics", "lambda", [](ExperimentConfig& c, std::string_view v) { c.diagnostics.lambda = to_double(v); });
    add("diagnostics", "lambda_margin",
        [](ExperimentConfig& c, std::string_view v) { c.diagnostics.lambda_margin = to_double(v); });
    add("diagnostics", "lyapunov_tol",
        [](ExperimentConfig& c, std::string_view v) { c.diagnostics.lyapunov_tol = to_double(v); });
    add("diagnostics", "coercivity_samples",
        [](ExperimentConfig& c, std::string_view v) { c.diagnostics.coercivity_samples = to_size(v); });
    add("diagnostics", "stationary_N",
        [](ExperimentConfig& c, std::string_view v) { c.diagnostics.stationary_cells = to_size(v); });
    add("diagnostics", "stationary_tol",
        [](ExperimentConfig& c, std::string_view v) { c.diagnostics.stationary_tol = to_double(v); });
    add("output", "dir", [](ExperimentConfig& c, std::string_view v) { c.out_dir = std::string(v); });
    add("mms", "solution", [](ExperimentConfig& c, std::string_view v) {
      if (v != "trig" && v != "constant") throw DomainError("mms solution must be trig or constant");
      c.mms.solution = std::string(v);
    });
    add("mms", "resolutions",
        [](ExperimentConfig& c, std::string_view v) { c.mms.resolutions = parse_size_list(v); });
    return t;
  }();
  return table;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

FieldSpec FieldSpec::parse(std::string_view spec, const std::filesystem::path& base_dir) {
  spec = trim(spec);
  FieldSpec f;
  f.text = std::string(spec);
  if (spec == "doping-match") {
    f.kind = Kind::doping_match;
    return f;
  }
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw DomainError("malformed field spec '" + std::string(spec) + "'");
  const auto kind = spec.substr(0, colon);
  const auto rest = spec.substr(colon + 1);
  if (kind == "constant") {
    f.kind = Kind::constant;
    f.value = to_double(rest);
  } else if (kind == "sine") {
    const auto parts = split(rest, ':');
    if (parts.size() != 3) throw DomainError("sine field expects sine:<mean>:<amplitude>:<frequency>");
    f.kind = Kind::sine;
    f.mean = to_double(parts[0]);
    f.amplitude = to_double(parts[1]);
    f.frequency = to_double(parts[2]);
  } else if (kind == "table") {
    std::filesystem::path p{std::string(rest)};
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    auto table = read_profile_table(p);
    if (table.x.size() < 2) throw DomainError("field table '" + p.string() + "' needs at least two rows");
    f.kind = Kind::table;
    f.x = std::move(table.x);
    f.y = std::move(table.d);
  } else {
    throw DomainError("unknown field kind '" + std::string(kind) + "'");
  }
  return f;
}

std::vector<double> FieldSpec::sample(const Grid& grid, const DopingProfile& doping) const {
  std::vector<double> out(grid.nodes());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = grid.x(i);
    switch (kind) {
      case Kind::doping_match: out[i] = doping(x); break;
      case Kind::constant: out[i] = value; break;
      case Kind::sine: out[i] = mean + amplitude * std::sin(2.0 * std::numbers::pi * frequency * x); break;
      case Kind::table: out[i] = interpolate(this->x, y, x); break;
    }
  }
  return out;
}

std::string to_string(Check c) {
  switch (c) {
    case Check::mass: return "mass";
    case Check::invariant_region: return "invariant_region";
    case Check::density_bound: return "density_bound";
    case Check::region_signs: return "region_signs";
    case Check::entropy: return "entropy";
    case Check::coercivity: return "coercivity";
    case Check::lyapunov: return "lyapunov";
    case Check::decay: return "decay";
  }
  return "unknown";
}

std::vector<Check> all_checks() {
  return {Check::mass,    Check::invariant_region, Check::density_bound, Check::region_signs,
          Check::entropy, Check::coercivity,       Check::lyapunov,      Check::decay};
}

bool DiagnosticsConfig::enabled(Check c) const { return std::find(checks.begin(), checks.end(), c) != checks.end(); }

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  std::vector<std::string> problems;
  std::string section;
  bool gamma_seen = false;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') {
        problems.push_back(where + "malformed section header");
        continue;
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const char* known[] = {"model", "initial", "solver", "diagnostics", "output", "mms"};
      if (std::find(std::begin(known), std::end(known), section) == std::end(known))
        problems.push_back(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      problems.push_back(where + "expected key = value");
      continue;
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end() || (!section.empty() && it->second.section != section)) {
      problems.push_back(where + "unknown key '" + std::string(key) + "'" +
                         (section.empty() ? "" : " in [" + section + "]"));
      continue;
    }
    try {
      it->second.apply(cfg, value);
      if (key == "gamma") gamma_seen = true;
    } catch (const std::exception& e) {
      problems.push_back(where + std::string(key) + ": " + e.what());
    }
  }

  if (gamma_seen) {
    const double g = cfg.solver.model.gamma;
    try {
      cfg.solver.model = GasModel::from_gamma(g);
    } catch (const DomainError&) {
      std::ostringstream os;
      os << "gamma = " << g << " out of range: requires 1 < gamma ≤ 3";
      problems.push_back(os.str());
    }
  }
  try {
    cfg.doping = DopingProfile::parse(cfg.doping_spec, base_dir);
  } catch (const std::exception& e) {
    problems.push_back("doping: " + std::string(e.what()));
  }
  try {
    cfg.solver.validate();
  } catch (const std::exception& e) {
    problems.push_back(e.what());
  }
  const auto& d = cfg.diagnostics;
  if (!(d.fit_window.t1 > d.fit_window.t0)) problems.push_back("fit_window must satisfy t0 < t1");
  if (d.entropy_grid.space == 0 || d.entropy_grid.time == 0) problems.push_back("entropy_tests must be positive");
  if (!(d.entropy_grid.c_trunc > 0.0)) problems.push_back("c_trunc must be positive");
  if (d.weak_power < 0) problems.push_back("weak_power must be >= 0");
  if (!(d.lambda_margin > 1.0)) problems.push_back("lambda_margin must exceed 1");
  if (!(d.lyapunov_tol >= 0.0)) problems.push_back("lyapunov_tol must be >= 0");
  if (d.coercivity_samples < 2) problems.push_back("coercivity_samples must be at least 2");
  if (!(d.stationary_tol > 0.0)) problems.push_back("stationary_tol must be positive");
  if (d.region_tol && !(*d.region_tol >= 0.0)) problems.push_back("region_tol must be >= 0");
  if (cfg.mms.resolutions.size() < 3) problems.push_back("mms resolutions need at least three entries");

  if (!problems.empty()) throw ConfigError(std::move(problems));
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config '" + path.string() + "'"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(to_double(part));
  return out;
}

std::vector<std::size_t> parse_size_list(std::string_view text) {
  std::vector<std::size_t> out;
  for (auto part : split(text, ',')) out.push_back(to_size(part));
  return out;
}

}  // namespace ephydro
