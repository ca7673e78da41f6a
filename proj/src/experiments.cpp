#include "epsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <exception>
#include <stdexcept>
#include <thread>

#include "epsim/spectral.hpp"

namespace epsim {

namespace {

double relative(double diff, double scale) {
  if (diff == 0.0) return 0.0;
  return scale > 0.0 ? diff / scale : std::numeric_limits<double>::infinity();
}

double vector_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void require_termination(StudyOutcome& out, const TerminationReport& r) {
  out.require(r.reason == TerminationReason::completed,
              "guard tripped (" + std::string(to_string(r.reason)) + ") at t = " + fmt(r.t_final));
}

}  // namespace

void StudyOutcome::require(bool ok, std::string message) {
  if (ok) return;
  passed = false;
  failures.push_back(std::move(message));
}

IntegratorConfig integrator_config(const ExperimentConfig& cfg) {
  IntegratorConfig ic;
  ic.dt = cfg.dt;
  ic.scheme = cfg.scheme;
  ic.t_end = cfg.t_end;
  ic.cfl_safety = cfg.cfl_safety;
  ic.adaptive = cfg.adaptive;
  ic.blowup_growth = cfg.blowup_growth;
  ic.dt_floor = cfg.dt_floor;
  ic.dealias_products = cfg.dealias;
  ic.form = cfg.form;
  ic.sample_stride = cfg.sample_stride;
  return ic;
}

GridPtr make_grid(const ExperimentConfig& cfg) { return Grid::create(cfg.dim, cfg.points, cfg.length); }

SimulationState initial_state(const ExperimentConfig& cfg, std::size_t alpha_index) {
  if (alpha_index >= cfg.alpha.size()) throw std::out_of_range("initial_state: alpha index");
  const double alpha = cfg.alpha[alpha_index];
  const GridPtr grid = make_grid(cfg);
  return SimulationState{0.0, make_initial_velocity(cfg.initial_data, grid, alpha, cfg.dealias), alpha};
}

PlainRunReport run_plain(const ExperimentConfig& cfg) {
  PlainRunReport out{{}, integrate(initial_state(cfg), integrator_config(cfg))};
  require_termination(out, out.result.report);
  return out;
}

ConservationReport run_conservation_suite(const ExperimentConfig& cfg) {
  const SimulationState s0 = initial_state(cfg);
  ConservationReport out;
  IntegrationResult run = integrate(s0, integrator_config(cfg));
  out.termination = run.report;
  out.records = std::move(run.records);

  const DiagnosticRecord& first = out.records.front();
  double scale = vector_norm(first.momentum_integral);
  const MomentumField m0 = momentum_from_velocity(s0.velocity, s0.alpha);
  double m0_l1 = 0.0;
  for (const auto& c : m0.components()) m0_l1 += l1_norm(c);
  if (!(scale > 1e-12 * m0_l1)) scale = m0_l1;

  for (const auto& r : out.records) {
    std::vector<double> diff(r.momentum_integral.size());
    for (std::size_t i = 0; i < diff.size(); ++i) {
      diff[i] = r.momentum_integral[i] - first.momentum_integral[i];
    }
    out.momentum_drift = std::max(out.momentum_drift, relative(vector_norm(diff), scale));
    out.energy_drift =
        std::max(out.energy_drift, relative(std::abs(r.energy - first.energy), first.energy));
    out.entropy_drift = std::max(
        out.entropy_drift, relative(std::abs(r.entropy_l2 - first.entropy_l2), first.entropy_l2));
  }

  require_termination(out, out.termination);
  out.require(out.momentum_drift <= cfg.checks.momentum_drift,
              "momentum drift " + fmt(out.momentum_drift) + " > " + fmt(cfg.checks.momentum_drift));
  if (s0.alpha > 0.0) {
    out.require(out.energy_drift <= cfg.checks.energy_drift,
                "energy drift " + fmt(out.energy_drift) + " > " + fmt(cfg.checks.energy_drift));
  } else {
    out.require(out.entropy_drift <= cfg.checks.energy_drift,
                "entropy drift " + fmt(out.entropy_drift) + " > " + fmt(cfg.checks.energy_drift));
  }
  return out;
}

namespace {

struct BlowupRun {
  IntegrationResult result;
  std::vector<BlowupSample> samples;
};

BlowupRun blowup_trajectory(const ExperimentConfig& cfg, double d0) {
  std::vector<BlowupSample> samples;
  const SimulationState s0 = initial_state(cfg);
  const double t_env = 1.0 / std::abs(d0);
  const Observer obs = [&](const SimulationState& s, const DiagnosticRecord& r) {
    BlowupSample b;
    b.time = s.time;
    b.div_origin = r.div_at_origin;
    if (s.time < t_env) b.envelope = riccati_bound(d0, s.time);
    b.sup_grad = r.sup_grad_u;
    const double scale = sup_norm(s.velocity);
    b.symmetry_defect = scale > 0.0 ? reflection_defect(s.velocity) / scale : 0.0;
    samples.push_back(b);
  };
  IntegrationResult r = integrate(s0, integrator_config(cfg), std::span<const Observer>(&obs, 1));
  return BlowupRun{std::move(r), std::move(samples)};
}

}  // namespace

BlowupReport run_blowup_study(const ExperimentConfig& cfg) {
  if (cfg.alpha.size() != 1 || cfg.alpha[0] != 0.0) {
    throw std::invalid_argument("blow-up study requires alpha = 0");
  }
  const auto kind = cfg.initial_data.kind;
  if (kind != InitialDataKind::gradient_cosine && kind != InitialDataKind::odd_random) {
    throw std::invalid_argument("blow-up study requires reflection-odd initial data");
  }
  const SimulationState s0 = initial_state(cfg);
  BlowupReport out;
  out.d0 = divergence_at_origin(s0.velocity);
  if (!(out.d0 < 0.0)) throw std::invalid_argument("blow-up study requires div u0(0) < 0");
  out.envelope_time = 1.0 / std::abs(out.d0);

  BlowupRun run = blowup_trajectory(cfg, out.d0);
  out.termination = run.result.report;
  out.records = std::move(run.result.records);
  out.samples = std::move(run.samples);

  bool envelope_defined = true;
  for (const auto& s : out.samples) {
    out.max_symmetry_defect = std::max(out.max_symmetry_defect, s.symmetry_defect);
    if (!s.envelope) {
      envelope_defined = false;
      continue;
    }
    const double allowed = *s.envelope + cfg.checks.envelope_tol * (1.0 + std::abs(*s.envelope));
    out.max_envelope_excess = std::max(out.max_envelope_excess, s.div_origin - allowed);
  }

  const double t_trip = out.termination.t_final;
  out.require(out.termination.reason != TerminationReason::completed,
              "no blow-up detected by t = " + fmt(t_trip));
  out.require(out.termination.reason != TerminationReason::nan_detected,
              "non-finite state at t = " + fmt(t_trip));
  out.require(t_trip <= out.envelope_time * (1.0 + cfg.checks.trip_margin),
              "trip time " + fmt(t_trip) + " exceeds envelope time " + fmt(out.envelope_time) +
                  " plus margin");
  out.require(envelope_defined, "solution sampled past the envelope singular time");
  out.require(out.max_envelope_excess <= 0.0,
              "divergence at origin exceeds envelope by " + fmt(out.max_envelope_excess));
  out.require(out.max_symmetry_defect <= cfg.checks.symmetry_tol,
              "reflection defect " + fmt(out.max_symmetry_defect) + " > " +
                  fmt(cfg.checks.symmetry_tol));

  if (cfg.checks.refinement) {
    ExperimentConfig coarse = cfg;
    coarse.points = cfg.points / 2;
    const BlowupRun cr = blowup_trajectory(coarse, out.d0);
    out.refined_trip_time = cr.result.report.t_final;
    out.refinement_change = std::abs(t_trip - *out.refined_trip_time) / t_trip;
    out.require(cr.result.report.reason == TerminationReason::blowup_norm ||
                    cr.result.report.reason == TerminationReason::dt_underflow,
                "coarse run did not trip");
    out.require(*out.refinement_change < cfg.checks.refinement_tol,
                "trip time changed by " + fmt(*out.refinement_change) + " between N = " +
                    std::to_string(coarse.points) + " and N = " + std::to_string(cfg.points));
  }
  return out;
}

double loglog_slope(const std::vector<std::pair<double, double>>& alpha_err) {
  if (alpha_err.size() < 2) throw std::invalid_argument("loglog_slope: need two points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [a, e] : alpha_err) {
    if (!(a > 0.0) || !(e > 0.0)) throw std::invalid_argument("loglog_slope: values must be > 0");
    const double x = std::log(a);
    const double y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(alpha_err.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("loglog_slope: alphas must differ");
  return (n * sxy - sx * sy) / denom;
}

SweepResult run_alpha_sweep(const ExperimentConfig& cfg, unsigned threads) {
  std::vector<double> alphas;
  for (double a : cfg.alpha) {
    if (a > 0.0) alphas.push_back(a);
  }
  std::sort(alphas.begin(), alphas.end(), std::greater<>());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  if (alphas.size() < 2) throw std::invalid_argument("alpha sweep needs two distinct alpha > 0");

  const GridPtr grid = make_grid(cfg);
  const VelocityField u0 = make_initial_velocity(cfg.initial_data, grid, alphas.front(), cfg.dealias);
  IntegratorConfig ic = integrator_config(cfg);

  // Member 0 is the alpha = 0 reference.
  const std::size_t members = alphas.size() + 1;
  std::vector<IntegrationResult> results(members, IntegrationResult{SimulationState{0.0, u0, 0.0}, {}, {}});
  std::vector<std::exception_ptr> errors(members);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < members; i = next++) {
      try {
        const double a = i == 0 ? 0.0 : alphas[i - 1];
        IntegratorConfig mc = ic;
        mc.form = i == 0 ? std::optional<RhsForm>(RhsForm::zero_alpha) : cfg.form;
        if (mc.form == RhsForm::zero_alpha && a != 0.0) mc.form.reset();
        results[i] = integrate(SimulationState{0.0, u0, a}, mc);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n_threads =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(members)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SweepResult out;
  out.reference = results[0].report;
  out.reference_records = std::move(results[0].records);
  out.aborted = out.reference.reason != TerminationReason::completed;
  const VelocityField& limit = results[0].state.velocity;
  std::vector<std::pair<double, double>> fit;
  for (std::size_t i = 1; i < members; ++i) {
    SweepRow row;
    row.alpha = alphas[i - 1];
    row.termination = results[i].report;
    row.records = std::move(results[i].records);
    if (row.termination.reason != TerminationReason::completed) out.aborted = true;
    const ErrorNormParts parts = error_norm_parts(results[i].state.velocity, limit, row.alpha);
    row.err_total = parts.total();
    row.err_l2 = parts.l2;
    row.err_grad = parts.grad;
    fit.emplace_back(row.alpha, row.err_total);
    out.rows.push_back(std::move(row));
  }
  out.fit_window = {alphas.back(), alphas.front()};

  out.monotone = true;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    if (!(out.rows[i].err_total < out.rows[i - 1].err_total)) out.monotone = false;
  }
  bool positive = std::all_of(fit.begin(), fit.end(), [](const auto& p) { return p.second > 0.0; });
  out.fitted_slope = positive ? loglog_slope(fit) : std::numeric_limits<double>::quiet_NaN();

  out.require(!out.aborted, "a sweep member tripped a guard; results are partial");
  out.require(out.monotone, "error is not monotone in alpha");
  out.require(out.fitted_slope >= cfg.checks.slope_min && out.fitted_slope <= cfg.checks.slope_max,
              "fitted slope " + fmt(out.fitted_slope) + " outside [" + fmt(cfg.checks.slope_min) +
                  ", " + fmt(cfg.checks.slope_max) + "]");
  return out;
}

double peak_position(const ScalarField& u, double sign) {
  const Grid& g = u.grid();
  if (g.dim() != 1) throw std::invalid_argument("peak_position: requires dim = 1");
  const std::size_t n = g.points();
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (sign * u[i] > sign * u[best]) best = i;
  }
  const double ym = sign * u[(best + n - 1) % n];
  const double y0 = sign * u[best];
  const double yp = sign * u[(best + 1) % n];
  const double curv = ym - 2.0 * y0 + yp;
  double offset = 0.0;
  if (curv < 0.0) offset = std::clamp(0.5 * (ym - yp) / curv, -0.5, 0.5);
  return g.coordinate(best) + offset * g.spacing();
}

ScalarField shift_field(const ScalarField& u, double shift) {
  const Grid& g = u.grid();
  if (g.dim() != 1) throw std::invalid_argument("shift_field: requires dim = 1");
  Spectrum hat = forward(u);
  const auto k = g.wavenumbers();
  const std::size_t half = g.half_points();
  for (std::size_t s = 0; s < half; ++s) {
    if (s == g.points() / 2) {
      hat[s] = hat[s].real() * std::cos(k[s] * shift);
    } else {
      hat[s] *= std::polar(1.0, k[s] * shift);
    }
  }
  return inverse(hat);
}

WaveReport run_traveling_wave(const ExperimentConfig& cfg) {
  if (cfg.dim != 1) throw std::invalid_argument("traveling wave requires dim = 1");
  const SimulationState s0 = initial_state(cfg);
  const double c = cfg.initial_data.amplitude;
  const double sign = c < 0.0 ? -1.0 : 1.0;
  const double length = cfg.length;

  WaveReport out;
  out.target_speed = c;
  double unwrapped = 0.0;
  const Observer obs = [&](const SimulationState& s, const DiagnosticRecord&) {
    double p = peak_position(s.velocity[0], sign);
    if (!out.trajectory.empty()) p = unwrapped + std::remainder(p - unwrapped, length);
    unwrapped = p;
    out.trajectory.emplace_back(s.time, p);
  };
  IntegrationResult run = integrate(s0, integrator_config(cfg), std::span<const Observer>(&obs, 1));
  out.termination = run.report;
  out.records = std::move(run.records);

  // Linear fit of position against time.
  double st = 0.0, sp = 0.0, stt = 0.0, stp = 0.0;
  for (const auto& [t, p] : out.trajectory) {
    st += t;
    sp += p;
    stt += t * t;
    stp += t * p;
  }
  const double n = static_cast<double>(out.trajectory.size());
  const double denom = n * stt - st * st;
  out.measured_speed = denom > 0.0 ? (n * stp - st * sp) / denom : 0.0;
  const double dv = std::abs(out.measured_speed - c);
  out.speed_error = c != 0.0 ? dv / std::abs(c) : dv;

  const ScalarField& u0 = s0.velocity[0];
  const ScalarField back = shift_field(run.state.velocity[0], c * run.state.time);
  const double ref = l2_norm(u0);
  const double diff = l2_norm(back - u0);
  out.shape_error = ref > 0.0 ? diff / ref : diff;

  require_termination(out, out.termination);
  out.require(out.speed_error <= cfg.checks.speed_tol,
              "speed error " + fmt(out.speed_error) + " > " + fmt(cfg.checks.speed_tol));
  out.require(out.shape_error <= cfg.checks.shape_tol,
              "shape error " + fmt(out.shape_error) + " > " + fmt(cfg.checks.shape_tol));
  return out;
}

}  // namespace epsim
