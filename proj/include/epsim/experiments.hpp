#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "epsim/initial_data.hpp"
#include "epsim/integrator.hpp"

namespace epsim {

/// Pass/fail thresholds for the studies.
struct StudyChecks {
  double momentum_drift = 1e-9;
  double energy_drift = 1e-6;
  double envelope_tol = 1e-3;
  double symmetry_tol = 1e-10;
  double trip_margin = 0.1;
  /// Blow-up study: repeat at points / 2 and compare trip times.
  bool refinement = false;
  double refinement_tol = 0.05;
  double slope_min = 0.85;
  double slope_max = 1.15;
  double speed_tol = 0.02;
  double shape_tol = 0.05;

  bool operator==(const StudyChecks&) const = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  int dim = 2;
  std::size_t points = 64;
  double length = 6.283185307179586;
  /// One value for a single run, several for a sweep.
  std::vector<double> alpha{0.0};
  double t_end = 1.0;
  double dt = 1e-3;
  InitialData initial_data;
  std::string output_dir = "out";
  std::size_t sample_stride = 10;

  Scheme scheme = Scheme::rk4;
  bool adaptive = false;
  double cfl_safety = 0.5;
  double blowup_growth = 10.0;
  double dt_floor = 1e-10;
  bool dealias = true;
  std::optional<RhsForm> form;

  StudyChecks checks;

  bool operator==(const ExperimentConfig&) const = default;
};

IntegratorConfig integrator_config(const ExperimentConfig& cfg);
GridPtr make_grid(const ExperimentConfig& cfg);
/// Initial state for alpha = cfg.alpha[index].
SimulationState initial_state(const ExperimentConfig& cfg, std::size_t alpha_index = 0);

struct StudyOutcome {
  bool passed = true;
  std::vector<std::string> failures;

  void require(bool ok, std::string message);
};

struct PlainRunReport : StudyOutcome {
  IntegrationResult result;
};

/// Single trajectory at cfg.alpha[0]; passes when it reaches t_end.
PlainRunReport run_plain(const ExperimentConfig& cfg);

struct ConservationReport : StudyOutcome {
  std::vector<DiagnosticRecord> records;
  TerminationReport termination;
  double momentum_drift = 0.0;  // max_t |int m(t) - int m(0)| / scale
  double energy_drift = 0.0;    // max_t |E(t) - E(0)| / E(0)
  double entropy_drift = 0.0;   // max_t |int |u|^2 (t) - (0)| / (0)
};

/// Momentum and energy drift at alpha > 0; momentum and entropy drift at
/// alpha = 0. The momentum scale is |int m(0)| unless that vanishes, then
/// the L1 norm of m(0). Zero ratios 0/0 count as zero drift.
ConservationReport run_conservation_suite(const ExperimentConfig& cfg);

struct BlowupSample {
  double time = 0.0;
  double div_origin = 0.0;
  std::optional<double> envelope;  // empty past the envelope singular time
  double sup_grad = 0.0;
  double symmetry_defect = 0.0;    // max|u(x) + u(-x)| / ||u||_inf
};

struct BlowupReport : StudyOutcome {
  double d0 = 0.0;
  double envelope_time = 0.0;  // 1 / |d0|
  TerminationReport termination;
  std::vector<BlowupSample> samples;
  std::vector<DiagnosticRecord> records;
  double max_envelope_excess = 0.0;
  double max_symmetry_defect = 0.0;
  std::optional<double> refined_trip_time;
  std::optional<double> refinement_change;
};

/// Requires alpha = 0 and reflection-odd data with div u0(0) < 0.
/// Throws std::invalid_argument otherwise.
BlowupReport run_blowup_study(const ExperimentConfig& cfg);

struct SweepRow {
  double alpha = 0.0;
  double err_total = 0.0;
  double err_l2 = 0.0;
  double err_grad = 0.0;
  TerminationReport termination;
  std::vector<DiagnosticRecord> records;
};

struct SweepResult : StudyOutcome {
  std::vector<SweepRow> rows;  // alpha descending
  double fitted_slope = 0.0;
  std::pair<double, double> fit_window{0.0, 0.0};
  TerminationReport reference;
  std::vector<DiagnosticRecord> reference_records;
  bool aborted = false;
  bool monotone = false;
};

/// Every alpha > 0 in cfg.alpha against an alpha = 0 reference on the same
/// grid and data. Members run on up to `threads` threads; results do not
/// depend on the thread count.
SweepResult run_alpha_sweep(const ExperimentConfig& cfg, unsigned threads = 1);

/// Least-squares slope of log(err) against log(alpha).
double loglog_slope(const std::vector<std::pair<double, double>>& alpha_err);

struct WaveReport : StudyOutcome {
  double target_speed = 0.0;
  double measured_speed = 0.0;
  double speed_error = 0.0;  // relative to |c|, absolute when c = 0
  double shape_error = 0.0;
  std::vector<std::pair<double, double>> trajectory;  // (t, peak position)
  TerminationReport termination;
  std::vector<DiagnosticRecord> records;
};

/// 1D peakon run; speed from a linear fit of the unwrapped peak position,
/// shape from ||u(. + ct, t) - u0|| / ||u0|| at t_end.
WaveReport run_traveling_wave(const ExperimentConfig& cfg);

/// Sub-grid location of the extremum of sign * u (parabolic refinement).
double peak_position(const ScalarField& u, double sign = 1.0);

/// u(x + shift) by a spectral phase shift (1D).
ScalarField shift_field(const ScalarField& u, double shift);

}  // namespace epsim
