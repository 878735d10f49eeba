#include "carbuncle/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace carbuncle {

namespace {

std::string_view trim(std::string_view s) {
  const auto blank = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && blank(s.back())) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

template <typename T> T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("invalid value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string v = lower(text);
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError("invalid boolean '" + std::string(text) + "' for " + std::string(key));
}

template <typename T> std::string show(const T& v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct Setting {
  std::string_view section;
  std::string_view name;
  std::function<void(ExperimentConfig&, std::string_view key, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T> Setting number(std::string_view section, std::string_view name,
                                     T ExperimentConfig::*field) {
  return {section, name,
          [field](ExperimentConfig& c, std::string_view key, std::string_view v) {
            c.*field = parse_number<T>(key, v);
          },
          [field](const ExperimentConfig& c) { return show(c.*field); }};
}

const std::vector<Setting>& settings() {
  static const std::vector<Setting> table = {
      {"run", "experiment",
       [](ExperimentConfig& c, std::string_view, std::string_view v) { c.experiment = v; },
       [](const ExperimentConfig& c) { return c.experiment; }},
      number("run", "t_end", &ExperimentConfig::t_end),
      number("run", "snapshot_every", &ExperimentConfig::snapshot_every),
      number("run", "diag_every", &ExperimentConfig::diag_every),
      {"run", "out",
       [](ExperimentConfig& c, std::string_view, std::string_view v) { c.out_dir = v; },
       [](const ExperimentConfig& c) { return c.out_dir; }},
      number("grid", "nx", &ExperimentConfig::nx),
      number("grid", "ny", &ExperimentConfig::ny),
      number("grid", "dx", &ExperimentConfig::dx),
      number("grid", "dy", &ExperimentConfig::dy),
      {"scheme", "flux",
       [](ExperimentConfig& c, std::string_view key, std::string_view v) {
         try {
           c.scheme.flux = parse_flux_kind(lower(v));
         } catch (const std::invalid_argument&) {
           throw ConfigError("unknown flux '" + std::string(v) + "' for " + std::string(key));
         }
       },
       [](const ExperimentConfig& c) { return std::string(to_string(c.scheme.flux)); }},
      {"scheme", "cfl",
       [](ExperimentConfig& c, std::string_view key, std::string_view v) {
         c.scheme.cfl = parse_number<double>(key, v);
       },
       [](const ExperimentConfig& c) { return show(c.scheme.cfl); }},
      {"scheme", "splitting",
       [](ExperimentConfig& c, std::string_view, std::string_view v) {
         c.scheme.splitting = parse_splitting(lower(v));
       },
       [](const ExperimentConfig& c) { return std::string(to_string(c.scheme.splitting)); }},
      {"scheme", "entropy_fix",
       [](ExperimentConfig& c, std::string_view key, std::string_view v) {
         c.scheme.flux_options.roe_entropy_fix = parse_bool(key, v);
       },
       [](const ExperimentConfig& c) {
         return std::string(c.scheme.flux_options.roe_entropy_fix ? "true" : "false");
       }},
      {"scheme", "threads",
       [](ExperimentConfig& c, std::string_view key, std::string_view v) {
         c.scheme.threads = parse_number<int>(key, v);
       },
       [](const ExperimentConfig& c) { return show(c.scheme.threads); }},
      {"gas", "gamma",
       [](ExperimentConfig& c, std::string_view key, std::string_view v) {
         c.gas.gamma = parse_number<double>(key, v);
       },
       [](const ExperimentConfig& c) { return show(c.gas.gamma); }},
      {"gas", "R",
       [](ExperimentConfig& c, std::string_view key, std::string_view v) {
         c.gas.R = parse_number<double>(key, v);
       },
       [](const ExperimentConfig& c) { return show(c.gas.R); }},
      number("experiment", "mach", &ExperimentConfig::mach),
      number("experiment", "shock_speed", &ExperimentConfig::shock_speed),
      number("experiment", "perturb_amp", &ExperimentConfig::perturb_amp),
      number("experiment", "mollifier_width", &ExperimentConfig::mollifier_width),
      number("experiment", "seed", &ExperimentConfig::seed),
      {"experiment", "seed_mode",
       [](ExperimentConfig& c, std::string_view, std::string_view v) {
         c.seed_mode = parse_seed_mode(lower(v));
       },
       [](const ExperimentConfig& c) { return std::string(to_string(c.seed_mode)); }},
      {"experiment", "filament",
       [](ExperimentConfig& c, std::string_view key, std::string_view v) {
         c.filament = parse_bool(key, v);
       },
       [](const ExperimentConfig& c) { return std::string(c.filament ? "true" : "false"); }},
      {"experiment", "contact",
       [](ExperimentConfig& c, std::string_view key, std::string_view v) {
         c.contact = parse_bool(key, v);
       },
       [](const ExperimentConfig& c) { return std::string(c.contact ? "true" : "false"); }},
  };
  return table;
}

} // namespace

std::string_view to_string(SeedMode mode) {
  return mode == SeedMode::OddEven ? "odd-even" : "random";
}

SeedMode parse_seed_mode(std::string_view name) {
  if (name == "odd-even" || name == "field") return SeedMode::OddEven;
  if (name == "random") return SeedMode::Random;
  throw ConfigError("unknown seed mode '" + std::string(name) + "'");
}

Splitting parse_splitting(std::string_view name) {
  if (name == "unsplit") return Splitting::Unsplit;
  if (name == "strang") return Splitting::Strang;
  throw ConfigError("unknown splitting '" + std::string(name) + "'");
}

std::string_view to_string(Splitting splitting) {
  return splitting == Splitting::Unsplit ? "unsplit" : "strang";
}

void ExperimentConfig::validate() const {
  const auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (nx < 0 || ny < 0) fail("grid sizes must be non-negative");
  if (dx < 0.0 || dy < 0.0) fail("cell sizes must be non-negative");
  if (!(scheme.cfl > 0.0 && scheme.cfl <= 1.0)) fail("cfl must lie in (0, 1]");
  if (scheme.threads < 1) fail("threads must be at least 1");
  if (!(gas.gamma > 1.0) || !(gas.R > 0.0)) fail("gas requires gamma > 1 and R > 0");
  if (t_end < 0.0) fail("t_end must be non-negative");
  if (snapshot_every < 0 || diag_every < 0) fail("cadences must be non-negative");
  if (!(mach >= 1.0)) fail("mach must be at least 1");
  if (perturb_amp < 0.0) fail("perturb_amp must be non-negative");
  if (mollifier_width < 0.0) fail("mollifier_width must be non-negative");
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  std::string_view section;
  std::string_view name = key;
  if (const auto dot = key.find('.'); dot != std::string_view::npos) {
    section = key.substr(0, dot);
    name = key.substr(dot + 1);
  }
  for (const Setting& s : settings()) {
    if (s.name == name && (section.empty() || s.section == section)) {
      s.set(*this, key, trim(value));
      return;
    }
  }
  throw ConfigError("unknown setting '" + std::string(key) + "'");
}

std::string ExperimentConfig::echo() const {
  std::string out;
  for (const Setting& s : settings()) {
    out += std::string(s.section) + '.' + std::string(s.name) + " = " + s.get(*this) + '\n';
  }
  return out;
}

void load_config(std::istream& in, ExperimentConfig& cfg) {
  std::string line;
  std::string section;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view text = line;
    if (const auto c = text.find_first_of("#;"); c != std::string_view::npos) {
      text = text.substr(0, c);
    }
    text = trim(text);
    if (text.empty()) continue;
    const auto where = [&] { return "line " + std::to_string(number) + ": "; };
    if (text.front() == '[') {
      if (text.back() != ']' || text.size() < 3) {
        throw ConfigError(where() + "malformed section header");
      }
      section = trim(text.substr(1, text.size() - 2));
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where() + "expected 'key = value'");
    const std::string_view key = trim(text.substr(0, eq));
    const std::string_view value = trim(text.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError(where() + "empty key or value");
    const std::string qualified = section.empty() ? std::string(key) : section + '.' + std::string(key);
    try {
      cfg.set(qualified, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where() + e.what());
    }
  }
}

void load_config_file(const std::string& path, ExperimentConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  load_config(in, cfg);
}

} // namespace carbuncle
