#include "epsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "epsim/csv.hpp"

namespace epsim {

namespace {

using Setter = std::function<std::optional<std::string>(std::string_view, ExperimentConfig&)>;
using Printer = std::function<std::string(const ExperimentConfig&)>;

struct KeySpec {
  std::string section;
  std::string key;
  bool required;
  Setter set;
  Printer print;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<std::string> read_double(std::string_view v, double& out) {
  if (!parse_double(v, out) || !std::isfinite(out)) return "expected a finite number, got '" + std::string(v) + "'";
  return std::nullopt;
}

template <class Int>
std::optional<std::string> read_integer(std::string_view v, Int& out) {
  const char* first = v.data();
  const char* last = v.data() + v.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc{} || res.ptr != last || first == last) {
    return "expected an integer, got '" + std::string(v) + "'";
  }
  return std::nullopt;
}

std::optional<std::string> read_bool(std::string_view v, bool& out) {
  if (v == "true") {
    out = true;
  } else if (v == "false") {
    out = false;
  } else {
    return "expected true or false, got '" + std::string(v) + "'";
  }
  return std::nullopt;
}

Setter real(double ExperimentConfig::*field, std::function<bool(double)> ok, std::string range) {
  return [=](std::string_view v, ExperimentConfig& c) -> std::optional<std::string> {
    double x = 0.0;
    if (auto e = read_double(v, x)) return e;
    if (!ok(x)) return "value " + std::string(v) + " out of range (" + range + ")";
    c.*field = x;
    return std::nullopt;
  };
}

template <class Owner>
Setter nested_real(Owner ExperimentConfig::*owner, double Owner::*field, std::function<bool(double)> ok,
                   std::string range) {
  return [=](std::string_view v, ExperimentConfig& c) -> std::optional<std::string> {
    double x = 0.0;
    if (auto e = read_double(v, x)) return e;
    if (!ok(x)) return "value " + std::string(v) + " out of range (" + range + ")";
    (c.*owner).*field = x;
    return std::nullopt;
  };
}

template <class Owner>
Printer nested_real_print(Owner ExperimentConfig::*owner, double Owner::*field) {
  return [=](const ExperimentConfig& c) { return format_double((c.*owner).*field); };
}

Printer real_print(double ExperimentConfig::*field) {
  return [=](const ExperimentConfig& c) { return format_double(c.*field); };
}

bool positive(double x) { return x > 0.0; }
bool nonnegative(double x) { return x >= 0.0; }
bool any_value(double) { return true; }

std::string scheme_name(Scheme s) { return s == Scheme::rk2 ? "rk2" : "rk4"; }

std::string form_name(const std::optional<RhsForm>& f) {
  if (!f) return "auto";
  switch (*f) {
    case RhsForm::convective:
      return "convective";
    case RhsForm::conservative:
      return "conservative";
    case RhsForm::zero_alpha:
      return "zero_alpha";
  }
  return "auto";
}

bool is_name_token(std::string_view v) {
  return !v.empty() && std::all_of(v.begin(), v.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.' ||
           ch == '/';
  });
}

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = [] {
    std::vector<KeySpec> t;
    auto add = [&](std::string section, std::string key, bool required, Setter s, Printer p) {
      t.push_back(KeySpec{std::move(section), std::move(key), required, std::move(s), std::move(p)});
    };

    add("experiment", "name", false,
        [](std::string_view v, ExperimentConfig& c) -> std::optional<std::string> {
          if (!is_name_token(v)) return "name must be a non-empty token of [A-Za-z0-9_./-]";
          c.name = std::string(v);
          return std::nullopt;
        },
        [](const ExperimentConfig& c) { return c.name; });
    add("experiment", "dim", true,
        [](std::string_view v, ExperimentConfig& c) -> std::optional<std::string> {
          int d = 0;
          if (auto e = read_integer(v, d)) return e;
          if (d != 1 && d != 2) return "value " + std::string(v) + " out of range (1 or 2)";
          c.dim = d;
          return std::nullopt;
        },
        [](const ExperimentConfig& c) { return std::to_string(c.dim); });
    add("experiment", "points", true,
        [](std::string_view v, ExperimentConfig& c) -> std::optional<std::string> {
          std::size_t n = 0;
          if (auto e = read_integer(v, n)) return e;
          if (n < 8 || (n & (n - 1)) != 0) {
            return "value " + std::string(v) + " out of range (power of two >= 8)";
          }
          c.points = n;
          return std::nullopt;
        },
        [](const ExperimentConfig& c) { return std::to_string(c.points); });
    add("experiment", "length", false, real(&ExperimentConfig::length, positive, "> 0"),
        real_print(&ExperimentConfig::length));
    add("experiment", "alpha", true,
        [](std::string_view v, ExperimentConfig& c) -> std::optional<std::string> {
          std::vector<double> values;
          if (!v.empty() && v.front() == '[') {
            if (v.back() != ']') return "unterminated list '" + std::string(v) + "'";
            std::string_view body = trim(v.substr(1, v.size() - 2));
            while (!body.empty()) {
              const auto comma = body.find(',');
              const std::string_view item = trim(body.substr(0, comma));
              double x = 0.0;
              if (auto e = read_double(item, x)) return e;
              values.push_back(x);
              if (comma == std::string_view::npos) break;
              body = body.substr(comma + 1);
              if (trim(body).empty()) return "trailing comma in list";
            }
            if (values.empty()) return "alpha list must not be empty";
          } else {
            double x = 0.0;
            if (auto e = read_double(v, x)) return e;
            values.push_back(x);
          }
          for (double x : values) {
            if (x < 0.0) return "value " + format_double(x) + " out of range (>= 0)";
          }
          c.alpha = std::move(values);
          return std::nullopt;
        },
        [](const ExperimentConfig& c) {
          if (c.alpha.size() == 1) return format_double(c.alpha[0]);
          std::string s = "[";
          for (std::size_t i = 0; i < c.alpha.size(); ++i) {
            if (i) s += ", ";
            s += format_double(c.alpha[i]);
          }
          return s + "]";
        });
    add("experiment", "t_end", true, real(&ExperimentConfig::t_end, positive, "> 0"),
        real_print(&ExperimentConfig::t_end));
    add("experiment", "dt", true, real(&ExperimentConfig::dt, positive, "> 0"),
        real_print(&ExperimentConfig::dt));
    add("experiment", "output_dir", false,
        [](std::string_view v, ExperimentConfig& c) -> std::optional<std::string> {
          if (!is_name_token(v)) return "output_dir must be a path token of [A-Za-z0-9_./-]";
          c.output_dir = std::string(v);
          return std::nullopt;
        },
        [](const ExperimentConfig& c) { return c.output_dir; });
    add("experiment", "sample_stride", false,
        [](std::string_view v, ExperimentConfig& c) -> std::optional<std::string> {
          std::size_t n = 0;
          if (auto e = read_integer(v, n)) return e;
          if (n < 1) return "value " + std::string(v) + " out of range (>= 1)";
          c.sample_stride = n;
          return std::nullopt;
        },
        [](const ExperimentConfig& c) { return std::to_string(c.sample_stride); });

    add("initial_data", "kind", true,
        [](std::string_view v, ExperimentConfig& c) -> std::optional<std::string> {
          if (!parse_initial_data_kind(v, c.initial_data.kind)) {
            return "unknown initial data kind '" + std::string(v) +
                   "' (zero, gradient_cosine, odd_random, peakon, gaussian_shear)";
          }
          return std::nullopt;
        },
        [](const ExperimentConfig& c) { return std::string(to_string(c.initial_data.kind)); });
    add("initial_data", "amplitude", false,
        nested_real(&ExperimentConfig::initial_data, &InitialData::amplitude, any_value, "finite"),
        nested_real_print(&ExperimentConfig::initial_data, &InitialData::amplitude));
    add("initial_data", "width", false,
        nested_real(&ExperimentConfig::initial_data, &InitialData::width, positive, "> 0"),
        nested_real_print(&ExperimentConfig::initial_data, &InitialData::width));
    add("initial_data", "smoothing", false,
        nested_real(&ExperimentConfig::initial_data, &InitialData::smoothing, positive, "> 0"),
        nested_real_print(&ExperimentConfig::initial_data, &InitialData::smoothing));
    add("initial_data", "seed", false,
        [](std::string_view v, ExperimentConfig& c) {
          return read_integer(v, c.initial_data.seed);
        },
        [](const ExperimentConfig& c) { return std::to_string(c.initial_data.seed); });
    add("initial_data", "band", false,
        [](std::string_view v, ExperimentConfig& c) -> std::optional<std::string> {
          int b = 0;
          if (auto e = read_integer(v, b)) return e;
          if (b < 1) return "value " + std::string(v) + " out of range (>= 1)";
          c.initial_data.band = b;
          return std::nullopt;
        },
        [](const ExperimentConfig& c) { return std::to_string(c.initial_data.band); });

    add("integrator", "scheme", false,
        [](std::string_view v, ExperimentConfig& c) -> std::optional<std::string> {
          if (v == "rk4") {
            c.scheme = Scheme::rk4;
          } else if (v == "rk2") {
            c.scheme = Scheme::rk2;
          } else {
            return "unknown scheme '" + std::string(v) + "' (rk4, rk2)";
          }
          return std::nullopt;
        },
        [](const ExperimentConfig& c) { return scheme_name(c.scheme); });
    add("integrator", "adaptive", false,
        [](std::string_view v, ExperimentConfig& c) { return read_bool(v, c.adaptive); },
        [](const ExperimentConfig& c) { return std::string(c.adaptive ? "true" : "false"); });
    add("integrator", "cfl_safety", false,
        real(&ExperimentConfig::cfl_safety, [](double x) { return x > 0.0 && x <= 1.0; }, "(0, 1]"),
        real_print(&ExperimentConfig::cfl_safety));
    add("integrator", "blowup_growth", false,
        real(&ExperimentConfig::blowup_growth, [](double x) { return x > 1.0; }, "> 1"),
        real_print(&ExperimentConfig::blowup_growth));
    add("integrator", "dt_floor", false, real(&ExperimentConfig::dt_floor, nonnegative, ">= 0"),
        real_print(&ExperimentConfig::dt_floor));
    add("integrator", "dealias", false,
        [](std::string_view v, ExperimentConfig& c) { return read_bool(v, c.dealias); },
        [](const ExperimentConfig& c) { return std::string(c.dealias ? "true" : "false"); });
    add("integrator", "form", false,
        [](std::string_view v, ExperimentConfig& c) -> std::optional<std::string> {
          if (v == "auto") {
            c.form.reset();
          } else if (v == "convective") {
            c.form = RhsForm::convective;
          } else if (v == "conservative") {
            c.form = RhsForm::conservative;
          } else if (v == "zero_alpha") {
            c.form = RhsForm::zero_alpha;
          } else {
            return "unknown form '" + std::string(v) + "' (auto, convective, conservative, zero_alpha)";
          }
          return std::nullopt;
        },
        [](const ExperimentConfig& c) { return form_name(c.form); });

    auto check = [&](const char* key, double StudyChecks::*field) {
      add("checks", key, false, nested_real(&ExperimentConfig::checks, field, positive, "> 0"),
          nested_real_print(&ExperimentConfig::checks, field));
    };
    check("momentum_drift", &StudyChecks::momentum_drift);
    check("energy_drift", &StudyChecks::energy_drift);
    check("envelope_tol", &StudyChecks::envelope_tol);
    check("symmetry_tol", &StudyChecks::symmetry_tol);
    add("checks", "trip_margin", false,
        nested_real(&ExperimentConfig::checks, &StudyChecks::trip_margin, nonnegative, ">= 0"),
        nested_real_print(&ExperimentConfig::checks, &StudyChecks::trip_margin));
    add("checks", "refinement", false,
        [](std::string_view v, ExperimentConfig& c) { return read_bool(v, c.checks.refinement); },
        [](const ExperimentConfig& c) { return std::string(c.checks.refinement ? "true" : "false"); });
    check("refinement_tol", &StudyChecks::refinement_tol);
    add("checks", "slope_min", false,
        nested_real(&ExperimentConfig::checks, &StudyChecks::slope_min, any_value, "finite"),
        nested_real_print(&ExperimentConfig::checks, &StudyChecks::slope_min));
    add("checks", "slope_max", false,
        nested_real(&ExperimentConfig::checks, &StudyChecks::slope_max, any_value, "finite"),
        nested_real_print(&ExperimentConfig::checks, &StudyChecks::slope_max));
    check("speed_tol", &StudyChecks::speed_tol);
    check("shape_tol", &StudyChecks::shape_tol);
    return t;
  }();
  return table;
}

const KeySpec* find_key(const std::string& section, std::string_view key) {
  for (const auto& k : key_table()) {
    if (k.section == section && k.key == key) return &k;
  }
  return nullptr;
}

bool known_section(std::string_view s) {
  return s == "experiment" || s == "initial_data" || s == "integrator" || s == "checks";
}

}  // namespace

std::string ConfigError::describe() const {
  std::string s;
  if (line > 0) s += "line " + std::to_string(line) + ": ";
  if (!key.empty()) s += key + ": ";
  return s + message;
}

ConfigParseResult parse_config(std::string_view text) {
  ConfigParseResult result;
  ExperimentConfig cfg;
  std::map<std::string, std::size_t> seen;  // "section.key" -> line
  std::string section;
  auto error = [&](std::size_t line, std::string key, std::string msg) {
    result.errors.push_back(ConfigError{line, std::move(key), std::move(msg)});
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        error(line_no, "", "malformed section header");
        continue;
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_section(section)) {
        error(line_no, section, "unknown section (experiment, initial_data, integrator, checks)");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      error(line_no, "", "expected 'key = value'");
      continue;
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const std::string full = section + "." + std::string(key);
    if (section.empty()) {
      error(line_no, std::string(key), "key outside of any section");
      continue;
    }
    if (!known_section(section)) continue;  // already reported at the header
    const KeySpec* spec = find_key(section, key);
    if (spec == nullptr) {
      error(line_no, full, "unknown key");
      continue;
    }
    if (auto it = seen.find(full); it != seen.end()) {
      error(line_no, full, "duplicate key (first set on line " + std::to_string(it->second) + ")");
      continue;
    }
    seen.emplace(full, line_no);
    if (value.empty()) {
      error(line_no, full, "missing value");
      continue;
    }
    if (auto msg = spec->set(value, cfg)) error(line_no, full, *msg);
  }

  for (const auto& k : key_table()) {
    const std::string full = k.section + "." + k.key;
    if (k.required && !seen.count(full)) error(0, full, "missing required key");
  }

  auto line_of = [&](const std::string& key) {
    auto it = seen.find(key);
    return it == seen.end() ? std::size_t{0} : it->second;
  };
  if (result.errors.empty()) {
    if (cfg.dt > cfg.t_end) error(line_of("experiment.dt"), "experiment.dt", "dt must not exceed t_end");
    if (cfg.dt_floor >= cfg.dt) {
      error(line_of("integrator.dt_floor"), "integrator.dt_floor", "dt_floor must be below dt");
    }
    if (cfg.checks.slope_min >= cfg.checks.slope_max) {
      error(line_of("checks.slope_min"), "checks.slope_min", "slope_min must be below slope_max");
    }
    const auto kind = cfg.initial_data.kind;
    if (kind == InitialDataKind::odd_random &&
        static_cast<std::size_t>(cfg.initial_data.band) * 3 > cfg.points) {
      error(line_of("initial_data.band"), "initial_data.band",
            "band must not exceed points / 3 (dealias band)");
    }
    if (kind == InitialDataKind::peakon) {
      if (cfg.dim != 1) {
        error(line_of("initial_data.kind"), "initial_data.kind", "peakon data requires dim = 1");
      }
      if (std::any_of(cfg.alpha.begin(), cfg.alpha.end(), [](double a) { return a <= 0.0; })) {
        error(line_of("experiment.alpha"), "experiment.alpha", "peakon data requires alpha > 0");
      }
    }
    if (cfg.form == RhsForm::zero_alpha &&
        std::any_of(cfg.alpha.begin(), cfg.alpha.end(), [](double a) { return a != 0.0; })) {
      error(line_of("integrator.form"), "integrator.form", "zero_alpha form requires alpha = 0");
    }
  }

  if (result.errors.empty()) result.config = std::move(cfg);
  return result;
}

std::string print_config(const ExperimentConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& k : key_table()) {
    if (k.section != section) {
      if (!section.empty()) out += '\n';
      section = k.section;
      out += "[" + section + "]\n";
    }
    out += k.key + " = " + k.print(cfg) + "\n";
  }
  return out;
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : print_config(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ConfigException::ConfigException(std::vector<ConfigError> errs)
    : std::runtime_error([&] {
        std::string s = "invalid configuration";
        for (const auto& e : errs) s += "\n  " + e.describe();
        return s;
      }()),
      errors(std::move(errs)) {}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigException({ConfigError{0, "", "cannot read config file '" + path + "'"}});
  std::ostringstream ss;
  ss << in.rdbuf();
  ConfigParseResult r = parse_config(ss.str());
  if (!r.ok()) throw ConfigException(std::move(r.errors));
  return *r.config;
}

}  // namespace epsim
