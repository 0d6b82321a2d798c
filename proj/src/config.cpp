#include "fraclap/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fraclap {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

using Section = std::map<std::string, Entry>;

struct RawConfig {
  std::map<std::string, Section> sections;

  const Entry* find(const std::string& sec, const std::string& key) const {
    auto s = sections.find(sec);
    if (s == sections.end()) return nullptr;
    auto k = s->second.find(key);
    return (k == s->second.end()) ? nullptr : &k->second;
  }
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string where(const std::string& sec, const std::string& key, int line) {
  std::string loc = sec.empty() ? key : sec + "." + key;
  return loc + " (line " + std::to_string(line) + ")";
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  // Allowed keys per section; anything else is rejected with its location.
  static const std::map<std::string, std::set<std::string>> schema = {
      {"", {"command", "seed"}},
      {"domain", {"dim", "lengths", "n_cells"}},
      {"operator", {"s", "shift"}},
      {"solver",
       {"omega", "tol", "max_iter", "act_tol", "residual_tol", "oracle_cap", "trials"}},
      {"time", {"t_end", "steps", "times"}},
      {"source", {"profile", "amplitude", "mode", "center", "width", "decay", "path",
                  "time_shape", "rate", "frequency", "sample_dt"}},
      {"source2", {"profile", "amplitude", "mode", "center", "width", "decay", "path",
                   "time_shape", "rate", "frequency", "sample_dt"}},
      {"obstacle", {"profile", "amplitude", "mode", "center", "width", "decay", "path"}},
      {"obstacle2", {"profile", "amplitude", "mode", "center", "width", "decay", "path"}},
      {"initial", {"profile", "amplitude", "mode", "center", "width", "decay", "path"}},
      {"initial2", {"profile", "amplitude", "mode", "center", "width", "decay", "path"}},
      {"fstar", {"profile", "amplitude", "mode", "center", "width", "decay", "path"}},
      {"extension", {"levels", "grading", "height_factor"}},
      {"asymptotic", {"horizon", "step", "stop_tol", "tol"}},
      {"output", {"dir"}},
  };

  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: unterminated section header (line " +
                          std::to_string(lineno) + ")");
      section = trim(line.substr(1, line.size() - 2));
      if (schema.find(section) == schema.end())
        throw ConfigError("config: unknown section [" + section + "] (line " +
                          std::to_string(lineno) + ")");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value (line " + std::to_string(lineno) + ")");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config: empty key (line " + std::to_string(lineno) + ")");

    const auto& allowed = schema.at(section);
    if (allowed.find(key) == allowed.end())
      throw ConfigError("config: unknown key " + where(section, key, lineno));

    auto [it, inserted] = raw.sections[section].emplace(key, Entry{value, lineno, false});
    if (!inserted)
      throw ConfigError("config: duplicate key " + where(section, key, lineno) +
                        ", first set on line " + std::to_string(it->second.line));
  }

  // Typed extraction.
  const auto get_string = [&](const std::string& sec, const std::string& key,
                              const std::string& fallback) {
    const Entry* e = raw.find(sec, key);
    return e ? e->value : fallback;
  };
  const auto parse_double = [&](const std::string& sec, const std::string& key,
                                const Entry& e) {
    try {
      size_t pos = 0;
      const double v = std::stod(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw ConfigError("config: " + where(sec, key, e.line) + " is not a number, got '" +
                        e.value + "'");
    }
  };
  const auto get_double = [&](const std::string& sec, const std::string& key, double fallback) {
    const Entry* e = raw.find(sec, key);
    return e ? parse_double(sec, key, *e) : fallback;
  };
  const auto get_int = [&](const std::string& sec, const std::string& key, long long fallback) {
    const Entry* e = raw.find(sec, key);
    if (!e) return fallback;
    try {
      size_t pos = 0;
      const long long v = std::stoll(e->value, &pos);
      if (pos != e->value.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw ConfigError("config: " + where(sec, key, e->line) + " is not an integer, got '" +
                        e->value + "'");
    }
  };
  const auto split_list = [](const std::string& v) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : v) {
      if (c == ',') {
        parts.push_back(trim(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    parts.push_back(trim(cur));
    return parts;
  };
  const auto get_double_list = [&](const std::string& sec, const std::string& key,
                                   std::vector<double> fallback) {
    const Entry* e = raw.find(sec, key);
    if (!e) return fallback;
    std::vector<double> out;
    for (const std::string& p : split_list(e->value)) {
      try {
        size_t pos = 0;
        out.push_back(std::stod(p, &pos));
        if (pos != p.size()) throw std::invalid_argument("");
      } catch (...) {
        throw ConfigError("config: " + where(sec, key, e->line) +
                          " must be a comma-separated list of numbers, got '" + e->value + "'");
      }
    }
    return out;
  };
  const auto get_int_list = [&](const std::string& sec, const std::string& key,
                                std::vector<int> fallback) {
    const Entry* e = raw.find(sec, key);
    if (!e) return fallback;
    std::vector<int> out;
    for (const std::string& p : split_list(e->value)) {
      try {
        size_t pos = 0;
        out.push_back(std::stoi(p, &pos));
        if (pos != p.size()) throw std::invalid_argument("");
      } catch (...) {
        throw ConfigError("config: " + where(sec, key, e->line) +
                          " must be a comma-separated list of integers, got '" + e->value + "'");
      }
    }
    return out;
  };

  RunConfig cfg;

  const Entry* cmd = raw.find("", "command");
  if (!cmd) throw ConfigError("config: missing required key 'command'");
  cfg.command = cmd->value;
  static const std::set<std::string> commands = {
      "solve-poisson", "solve-obstacle", "evolve",          "verify-ls",
      "compare",       "asymptotic",     "extension-check", "suite"};
  if (commands.find(cfg.command) == commands.end())
    throw ConfigError("config: unknown command '" + cfg.command + "' (line " +
                      std::to_string(cmd->line) + ")");

  cfg.seed = static_cast<std::uint64_t>(get_int("", "seed", 0));

  cfg.domain.dim = static_cast<int>(get_int("domain", "dim", 1));
  cfg.domain.lengths = get_double_list("domain", "lengths", {1.0});
  {
    std::vector<int> n = get_int_list("domain", "n_cells", {32});
    cfg.domain.n_cells = n;
  }
  if (cfg.domain.dim == 2 && cfg.domain.lengths.size() == 1)
    cfg.domain.lengths.push_back(cfg.domain.lengths[0]);
  if (cfg.domain.dim == 2 && cfg.domain.n_cells.size() == 1)
    cfg.domain.n_cells.push_back(cfg.domain.n_cells[0]);
  try {
    cfg.domain.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: [domain] ") + e.what());
  }

  cfg.s = get_double("operator", "s", 0.5);
  if (!(cfg.s > 0.0) || !(cfg.s < 1.0)) {
    const Entry* e = raw.find("operator", "s");
    throw ConfigError("config: operator.s must lie in (0,1), got " + std::to_string(cfg.s) +
                      (e ? " (line " + std::to_string(e->line) + ")" : ""));
  }
  cfg.shift = get_double("operator", "shift", 0.0);
  if (cfg.shift < 0.0) {
    const Entry* e = raw.find("operator", "shift");
    throw ConfigError("config: operator.shift must be >= 0" +
                      (e ? " (line " + std::to_string(e->line) + ")" : std::string()));
  }

  cfg.solver.omega = get_double("solver", "omega", cfg.solver.omega);
  cfg.solver.tol = get_double("solver", "tol", cfg.solver.tol);
  cfg.solver.max_iter = static_cast<int>(get_int("solver", "max_iter", cfg.solver.max_iter));
  cfg.solver.act_tol = get_double("solver", "act_tol", cfg.solver.act_tol);
  cfg.solver.residual_tol = get_double("solver", "residual_tol", cfg.solver.residual_tol);
  cfg.solver.oracle_cap =
      static_cast<int>(get_int("solver", "oracle_cap", cfg.solver.oracle_cap));
  cfg.solver.trials = static_cast<int>(get_int("solver", "trials", cfg.solver.trials));
  cfg.solver.seed = cfg.seed;
  try {
    cfg.solver.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: [solver] ") + e.what());
  }

  cfg.t_end = get_double("time", "t_end", cfg.t_end);
  cfg.steps = static_cast<int>(get_int("time", "steps", cfg.steps));
  cfg.times = get_double_list("time", "times", {});
  if (cfg.times.empty()) {
    if (!(cfg.t_end > 0.0)) throw ConfigError("config: time.t_end must be positive");
    if (cfg.steps < 1) throw ConfigError("config: time.steps must be positive");
  }

  const auto read_profile = [&](const std::string& sec) {
    ProfileSpec p;
    if (raw.sections.find(sec) == raw.sections.end()) return p;
    p.present = true;
    p.kind = get_string(sec, "profile", "zero");
    static const std::set<std::string> kinds = {"zero",   "constant", "eigenmode", "bump",
                                                "hat",    "random",   "file"};
    if (kinds.find(p.kind) == kinds.end()) {
      const Entry* e = raw.find(sec, "profile");
      throw ConfigError("config: unknown profile '" + p.kind + "' for [" + sec + "]" +
                        (e ? " (line " + std::to_string(e->line) + ")" : ""));
    }
    p.amplitude = get_double(sec, "amplitude", 1.0);
    p.mode = static_cast<int>(get_int(sec, "mode", 1));
    p.center = get_double_list(sec, "center", {});
    p.width = get_double(sec, "width", 0.0);
    p.decay = get_double(sec, "decay", 1.0);
    p.path = get_string(sec, "path", "");
    p.time_shape = get_string(sec, "time_shape", "constant");
    static const std::set<std::string> shapes = {"constant", "ramp", "sin"};
    if (shapes.find(p.time_shape) == shapes.end()) {
      const Entry* e = raw.find(sec, "time_shape");
      throw ConfigError("config: unknown time_shape '" + p.time_shape + "'" +
                        (e ? " (line " + std::to_string(e->line) + ")" : ""));
    }
    p.rate = get_double(sec, "rate", 1.0);
    p.frequency = get_double(sec, "frequency", 1.0);
    p.sample_dt = get_double(sec, "sample_dt", 0.0);
    if (p.kind == "file" && p.path.empty())
      throw ConfigError("config: [" + sec + "] profile 'file' needs a path");
    if (p.kind == "eigenmode" && p.mode < 1)
      throw ConfigError("config: [" + sec + "] mode must be >= 1");
    return p;
  };
  cfg.source = read_profile("source");
  cfg.source2 = read_profile("source2");
  cfg.obstacle = read_profile("obstacle");
  cfg.obstacle2 = read_profile("obstacle2");
  cfg.initial = read_profile("initial");
  cfg.initial2 = read_profile("initial2");
  cfg.fstar = read_profile("fstar");

  cfg.ext_levels = get_int_list("extension", "levels", cfg.ext_levels);
  cfg.ext_grading = get_double("extension", "grading", cfg.ext_grading);
  cfg.ext_height_factor = get_double("extension", "height_factor", cfg.ext_height_factor);
  for (int m : cfg.ext_levels)
    if (m < 8) throw ConfigError("config: extension.levels entries must be >= 8");
  if (!(cfg.ext_grading > 1.0) || !(cfg.ext_grading <= 2.0))
    throw ConfigError("config: extension.grading must lie in (1,2]");

  cfg.horizon = get_double("asymptotic", "horizon", cfg.horizon);
  cfg.step = get_double("asymptotic", "step", cfg.step);
  cfg.stop_tol = get_double("asymptotic", "stop_tol", cfg.stop_tol);
  cfg.asymp_tol = get_double("asymptotic", "tol", cfg.asymp_tol);

  cfg.out_dir = get_string("output", "dir", cfg.out_dir);

  // Command-specific requirements.
  const auto require = [&](bool ok, const std::string& what) {
    if (!ok)
      throw ConfigError("config: command '" + cfg.command + "' requires " + what);
  };
  if (cfg.command == "solve-poisson") require(cfg.source.present, "a [source] section");
  if (cfg.command == "solve-obstacle" || cfg.command == "verify-ls") {
    require(cfg.source.present, "a [source] section");
    require(cfg.obstacle.present, "an [obstacle] section");
  }
  if (cfg.command == "evolve") require(cfg.source.present, "a [source] section");
  if (cfg.command == "compare") {
    require(cfg.source.present, "a [source] section");
    require(cfg.obstacle.present, "an [obstacle] section");
    require(cfg.source2.present || cfg.obstacle2.present,
            "a [source2] or [obstacle2] section");
  }
  if (cfg.command == "asymptotic") {
    require(cfg.source.present, "a [source] section");
    if (cfg.source.time_shape != "constant")
      throw ConfigError("config: asymptotic runs need a time-constant source");
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace fraclap
