#include "epsim/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "epsim/config.hpp"
#include "epsim/csv.hpp"
#include "epsim/field_io.hpp"
#include "epsim/invariants.hpp"

namespace epsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kSubcommands = {"run", "sweep-alpha", "blowup", "wave", "conserve", "check"};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json termination_json(const std::string& label, const TerminationReport& r) {
  json j;
  j["label"] = label;
  j["reason"] = std::string(to_string(r.reason));
  j["t_final"] = r.t_final;
  j["steps"] = r.steps;
  j["estimated_blowup_time"] = r.estimated_blowup_time ? json(*r.estimated_blowup_time) : json(nullptr);
  return j;
}

/// Collects the files of one run; every file is written by this object only.
class OutputSet {
 public:
  OutputSet(fs::path dir, std::string stem) : dir_(std::move(dir)), stem_(std::move(stem)) {
    fs::create_directories(dir_);
  }

  void write(const std::string& suffix, const std::function<void(std::ostream&)>& body) {
    const fs::path p = dir_ / (stem_ + suffix);
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    body(os);
    if (!os) throw std::runtime_error("write failed for " + p.string());
    files_.push_back(p.string());
  }

  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::string stem_;
  std::vector<std::string> files_;
};

using Summary = std::vector<std::pair<std::string, std::string>>;

void add_metric(Summary& s, const std::string& name, double v) { s.emplace_back(name, format_double(v)); }

void add_outcome(Summary& s, const StudyOutcome& o) { s.emplace_back("passed", o.passed ? "1" : "0"); }

void add_termination(Summary& s, const std::string& prefix, const TerminationReport& r) {
  s.emplace_back(prefix + "reason", std::string(to_string(r.reason)));
  add_metric(s, prefix + "t_final", r.t_final);
  add_metric(s, prefix + "steps", static_cast<double>(r.steps));
  if (r.estimated_blowup_time) add_metric(s, prefix + "estimated_blowup_time", *r.estimated_blowup_time);
}

void write_summary(std::ostream& os, const Summary& s) {
  os << "metric,value\n";
  for (const auto& [k, v] : s) os << k << ',' << v << '\n';
}

struct Outcome {
  bool passed = false;
  std::vector<std::string> failures;
  json terminations = json::array();
};

Outcome finish(const StudyOutcome& o) { return Outcome{o.passed, o.failures, json::array()}; }

Outcome dispatch(const std::string& sub, const ExperimentConfig& cfg, unsigned threads, OutputSet& files,
                 std::ostream& out) {
  Summary summary;
  Outcome result;
  auto diagnostics = [&](const std::string& suffix, const std::vector<DiagnosticRecord>& r) {
    files.write(suffix, [&](std::ostream& os) { write_diagnostics_csv(os, r); });
  };

  if (sub == "run") {
    const PlainRunReport r = run_plain(cfg);
    diagnostics("_diagnostics.csv", r.result.records);
    files.write("_final_field.csv", [&](std::ostream& os) { write_field_csv(os, r.result.state); });
    add_outcome(summary, r);
    add_termination(summary, "", r.result.report);
    result = finish(r);
    result.terminations.push_back(termination_json("run", r.result.report));
  } else if (sub == "conserve") {
    const ConservationReport r = run_conservation_suite(cfg);
    diagnostics("_diagnostics.csv", r.records);
    add_outcome(summary, r);
    add_metric(summary, "momentum_drift", r.momentum_drift);
    add_metric(summary, "energy_drift", r.energy_drift);
    add_metric(summary, "entropy_drift", r.entropy_drift);
    add_termination(summary, "", r.termination);
    result = finish(r);
    result.terminations.push_back(termination_json("conserve", r.termination));
  } else if (sub == "blowup") {
    const BlowupReport r = run_blowup_study(cfg);
    diagnostics("_diagnostics.csv", r.records);
    files.write("_envelope.csv", [&](std::ostream& os) {
      CsvWriter w(os, {"time", "div_origin", "envelope", "sup_grad_u", "symmetry_defect"});
      for (const auto& s : r.samples) {
        w.row({s.time, s.div_origin, s.envelope.value_or(-std::numeric_limits<double>::infinity()),
               s.sup_grad, s.symmetry_defect});
      }
    });
    add_outcome(summary, r);
    add_metric(summary, "d0", r.d0);
    add_metric(summary, "envelope_time", r.envelope_time);
    add_metric(summary, "trip_time", r.termination.t_final);
    add_metric(summary, "max_envelope_excess", r.max_envelope_excess);
    add_metric(summary, "max_symmetry_defect", r.max_symmetry_defect);
    if (r.refined_trip_time) add_metric(summary, "coarse_trip_time", *r.refined_trip_time);
    if (r.refinement_change) add_metric(summary, "refinement_change", *r.refinement_change);
    add_termination(summary, "", r.termination);
    result = finish(r);
    result.terminations.push_back(termination_json("blowup", r.termination));
  } else if (sub == "sweep-alpha") {
    const SweepResult r = run_alpha_sweep(cfg, threads);
    files.write("_sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, r); });
    diagnostics("_reference_diagnostics.csv", r.reference_records);
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      diagnostics("_alpha" + std::to_string(i) + "_diagnostics.csv", r.rows[i].records);
    }
    add_outcome(summary, r);
    add_metric(summary, "fitted_slope", r.fitted_slope);
    add_metric(summary, "fit_alpha_min", r.fit_window.first);
    add_metric(summary, "fit_alpha_max", r.fit_window.second);
    summary.emplace_back("monotone", r.monotone ? "1" : "0");
    summary.emplace_back("aborted", r.aborted ? "1" : "0");
    add_termination(summary, "reference_", r.reference);
    result = finish(r);
    result.terminations.push_back(termination_json("reference", r.reference));
    for (const auto& row : r.rows) {
      result.terminations.push_back(termination_json("alpha=" + format_double(row.alpha), row.termination));
    }
  } else if (sub == "wave") {
    const WaveReport r = run_traveling_wave(cfg);
    diagnostics("_diagnostics.csv", r.records);
    files.write("_trajectory.csv", [&](std::ostream& os) {
      CsvWriter w(os, {"time", "peak_position"});
      for (const auto& [t, p] : r.trajectory) w.row({t, p});
    });
    add_outcome(summary, r);
    add_metric(summary, "target_speed", r.target_speed);
    add_metric(summary, "measured_speed", r.measured_speed);
    add_metric(summary, "speed_error", r.speed_error);
    add_metric(summary, "shape_error", r.shape_error);
    add_termination(summary, "", r.termination);
    result = finish(r);
    result.terminations.push_back(termination_json("wave", r.termination));
  }
  files.write("_summary.csv", [&](std::ostream& os) { write_summary(os, summary); });
  for (const auto& [k, v] : summary) out << k << " = " << v << '\n';
  return result;
}

void check_alpha_count(const std::string& sub, const ExperimentConfig& cfg) {
  if (sub == "sweep-alpha") {
    if (cfg.alpha.size() < 2) throw std::invalid_argument("sweep-alpha needs an alpha list");
  } else if (cfg.alpha.size() != 1) {
    throw std::invalid_argument(sub + " needs a single alpha value");
  }
}

int run_check(std::uint64_t seed, std::ostream& out) {
  bool ok = true;
  for (const auto& c : run_invariant_suite(seed)) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " value=" << format_double(c.value)
        << " tol=" << format_double(c.tolerance) << '\n';
    ok = ok && c.passed;
  }
  return ok ? kExitPass : kExitFail;
}

}  // namespace

const std::vector<std::string>& diagnostics_columns() {
  static const std::vector<std::string> cols = {"time",       "mom_x",      "mom_y",
                                                "energy",     "entropy_l2", "sup_grad_u",
                                                "besov_proxy", "div_origin", "max_u"};
  return cols;
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols = {"alpha", "err_total", "err_l2", "err_grad"};
  return cols;
}

void write_diagnostics_csv(std::ostream& os, std::span<const DiagnosticRecord> records) {
  CsvWriter w(os, diagnostics_columns());
  for (const auto& r : records) {
    const double mx = r.momentum_integral.empty() ? 0.0 : r.momentum_integral[0];
    const double my = r.momentum_integral.size() > 1 ? r.momentum_integral[1] : 0.0;
    w.row({r.time, mx, my, r.energy, r.entropy_l2, r.sup_grad_u, r.besov_proxy_S, r.div_at_origin,
           r.max_abs_u});
  }
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
  CsvWriter w(os, sweep_columns());
  for (const auto& r : sweep.rows) w.row({r.alpha, r.err_total, r.err_l2, r.err_grad});
}

std::string usage_text() {
  return "usage: epsim <run|sweep-alpha|blowup|wave|conserve|check> --config <path> "
         "[--out <dir>] [--threads <n>] [--seed <u64>]\n"
         "  check needs no --config. EPSIM_OUT overrides --out.\n"
         "  exit status: 0 pass, 1 experiment failure, 2 usage or configuration error\n";
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudo-spectral Euler-Poincare experiment runner", "epsim"};
  std::string sub;
  std::string config_path;
  std::string out_dir;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::optional<std::uint64_t> seed;
  app.add_option("subcommand", sub, "run, sweep-alpha, blowup, wave, conserve or check")->required();
  app.add_option("--config", config_path, "experiment config file");
  app.add_option("--out", out_dir, "output directory (default: config output_dir)");
  app.add_option("--threads", threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "override the initial-data seed");
  app.set_version_flag("--version", std::string(EPSIM_VERSION));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help() << usage_text();
    return kExitPass;
  } catch (const CLI::CallForVersion&) {
    out << EPSIM_VERSION << '\n';
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << usage_text();
    return kExitUsage;
  }

  if (std::find(kSubcommands.begin(), kSubcommands.end(), sub) == kSubcommands.end()) {
    err << "error: unknown subcommand '" << sub << "'\n" << usage_text();
    return kExitUsage;
  }
  if (sub == "check") return run_check(seed.value_or(1), out);
  if (config_path.empty()) {
    err << "error: " << sub << " requires --config\n" << usage_text();
    return kExitUsage;
  }

  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path);
    if (seed) cfg.initial_data.seed = *seed;
    check_alpha_count(sub, cfg);
  } catch (const ConfigException& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::string dir = out_dir.empty() ? cfg.output_dir : out_dir;
  if (const char* env = std::getenv("EPSIM_OUT"); env != nullptr && *env != '\0') dir = env;

  json manifest;
  manifest["name"] = cfg.name;
  manifest["subcommand"] = sub;
  manifest["config_hash"] = config_hash(cfg);
  manifest["seed"] = cfg.initial_data.seed;
  manifest["version"] = EPSIM_VERSION;
  manifest["started_at"] = utc_timestamp();

  try {
    OutputSet files(dir, cfg.name);
    files.write("_config.txt", [&](std::ostream& os) { os << print_config(cfg); });
    const Outcome o = dispatch(sub, cfg, threads, files, out);
    manifest["finished_at"] = utc_timestamp();
    manifest["passed"] = o.passed;
    manifest["failures"] = o.failures;
    manifest["termination"] = o.terminations;
    std::vector<std::string> outputs = files.files();
    const fs::path manifest_path = fs::path(dir) / (cfg.name + "_manifest.json");
    outputs.push_back(manifest_path.string());
    manifest["outputs"] = outputs;
    std::ofstream os(manifest_path);
    os << manifest.dump(2) << '\n';
    if (!os) throw std::runtime_error("cannot write " + manifest_path.string());
    for (const auto& f : o.failures) err << "FAIL: " << f << '\n';
    out << (o.passed ? "PASS" : "FAIL") << ' ' << sub << ' ' << cfg.name << '\n';
    return o.passed ? kExitPass : kExitFail;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFail;
  }
}

}  // namespace epsim
