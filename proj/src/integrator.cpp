#include "epsim/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "epsim/spectral.hpp"

namespace epsim {

namespace {

SpectralVector momentum_hat(const VelocityField& u, double alpha) {
  SpectralVector v = to_spectral(u.components());
  if (alpha != 0.0) {
    for (auto& c : v.components) apply_helmholtz(c, alpha);
  }
  return v;
}

VelocityField velocity_of(const SpectralVector& m_hat, double alpha) {
  SpectralVector u_hat = m_hat;
  if (alpha != 0.0) {
    for (auto& c : u_hat.components) invert_helmholtz(c, alpha);
  }
  return VelocityField(to_physical(u_hat));
}

Tendency guarded(Tendency rhs) {
  return [rhs](const SpectralVector& y) {
    SpectralVector k = rhs(y);
    if (!k.finite()) throw NonFiniteState("non-finite Runge-Kutta stage");
    return k;
  };
}

}  // namespace

Tendency make_tendency(double alpha, std::optional<RhsForm> form, bool dealias) {
  const RhsForm f = form.value_or(alpha == 0.0 ? RhsForm::zero_alpha : RhsForm::convective);
  if (f == RhsForm::zero_alpha && alpha != 0.0) {
    throw std::invalid_argument("zero_alpha form requires alpha = 0");
  }
  return [alpha, f, dealias](const SpectralVector& m_hat) {
    return momentum_tendency(m_hat, alpha, f, dealias);
  };
}

SimulationState rk4_step(const SimulationState& s, const Tendency& rhs, double dt) {
  if (dt == 0.0 || !std::isfinite(dt)) throw std::invalid_argument("rk4_step: dt must be nonzero");
  const SpectralVector y = momentum_hat(s.velocity, s.alpha);
  const SpectralVector next = runge_kutta_update(Scheme::rk4, y, guarded(rhs), dt);
  return SimulationState{s.time + dt, velocity_of(next, s.alpha), s.alpha};
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("integrator: dt must be > 0");
  if (!(t_end >= 0.0)) throw std::invalid_argument("integrator: t_end must be >= 0");
  if (dt > t_end && t_end > 0.0) throw std::invalid_argument("integrator: dt must be <= t_end");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) {
    throw std::invalid_argument("integrator: cfl_safety must lie in (0, 1]");
  }
  if (!(blowup_growth > 1.0)) throw std::invalid_argument("integrator: blowup_growth must be > 1");
  if (!(dt_floor >= 0.0 && dt_floor < dt)) {
    throw std::invalid_argument("integrator: dt_floor must satisfy 0 <= dt_floor < dt");
  }
  if (sample_stride == 0) throw std::invalid_argument("integrator: sample_stride must be >= 1");
}

std::string_view to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::completed:
      return "completed";
    case TerminationReason::blowup_norm:
      return "blowup_norm";
    case TerminationReason::dt_underflow:
      return "dt_underflow";
    case TerminationReason::nan_detected:
      return "nan_detected";
  }
  return "unknown";
}

IntegrationResult integrate(const SimulationState& s0, const IntegratorConfig& cfg,
                            std::span<const Observer> observers) {
  cfg.validate();
  if (!s0.velocity.finite()) throw std::invalid_argument("integrate: initial state not finite");

  const double alpha = s0.alpha;
  const Tendency rhs = guarded(make_tendency(alpha, cfg.form, cfg.dealias_products));
  const double k_max = s0.grid().k_max(cfg.dealias_products);

  IntegrationResult out{s0, {}, {}};
  auto emit = [&](const SimulationState& s) {
    out.records.push_back(compute_record(s));
    for (const auto& obs : observers) obs(s, out.records.back());
  };

  SpectralVector y = momentum_hat(s0.velocity, alpha);
  SimulationState current = s0;
  const double grad0 = sup_grad(current.velocity);
  const double threshold = grad0 > 0.0 ? cfg.blowup_growth * grad0
                                       : std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> growth{{current.time, grad0}};

  emit(current);
  bool last_emitted = true;
  std::size_t steps = 0;
  TerminationReason reason = TerminationReason::completed;
  const double t_stop = cfg.t_end;
  const double eps_t = 1e-12 * std::max(1.0, std::abs(t_stop));

  while (current.time < t_stop - eps_t) {
    double dt = cfg.dt;
    if (cfg.adaptive) {
      const double umax = sup_norm(current.velocity);
      if (umax > 0.0) dt = std::min(dt, cfg.cfl_safety / (umax * k_max));
    }
    if (dt < cfg.dt_floor) {
      reason = TerminationReason::dt_underflow;
      break;
    }
    dt = std::min(dt, t_stop - current.time);

    SpectralVector next;
    try {
      next = runge_kutta_update(cfg.scheme, y, rhs, dt);
    } catch (const NonFiniteState&) {
      reason = TerminationReason::nan_detected;
      break;
    }
    VelocityField u = velocity_of(next, alpha);
    if (!next.finite() || !u.finite()) {
      reason = TerminationReason::nan_detected;
      break;
    }
    const double grad = sup_grad(u);
    if (!std::isfinite(grad)) {
      reason = TerminationReason::nan_detected;
      break;
    }

    y = std::move(next);
    current = SimulationState{current.time + dt, std::move(u), alpha};
    ++steps;
    growth.emplace_back(current.time, grad);
    last_emitted = false;

    if (grad > threshold) {
      reason = TerminationReason::blowup_norm;
      break;
    }
    if (steps % cfg.sample_stride == 0) {
      emit(current);
      last_emitted = true;
    }
  }
  if (!last_emitted) emit(current);

  out.state = current;
  out.report.reason = reason;
  out.report.t_final = current.time;
  out.report.steps = steps;
  if (reason != TerminationReason::completed) {
    try {
      out.report.estimated_blowup_time = estimate_blowup_time(growth);
    } catch (const NoBlowupEstimate&) {
      out.report.estimated_blowup_time.reset();
    }
  }
  return out;
}

double estimate_blowup_time(std::span<const std::pair<double, double>> series) {
  const std::size_t n = series.size();
  if (n < 3) throw NoBlowupEstimate("need at least three samples");
  const std::size_t window = std::max<std::size_t>(3, n / 3);
  const auto tail = series.subspan(n - window);

  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (!(tail[i].second > 0.0) || !std::isfinite(tail[i].second)) {
      throw NoBlowupEstimate("series tail must be positive and finite");
    }
    if (i > 0 && !(tail[i].second > tail[i - 1].second && tail[i].first > tail[i - 1].first)) {
      throw NoBlowupEstimate("series tail is not strictly increasing");
    }
  }

  // 1/value = (T - t)/c = a + b t  =>  T = -a / b
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (const auto& [t, v] : tail) {
    const double y = 1.0 / v;
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  const double m = static_cast<double>(tail.size());
  const double denom = m * stt - st * st;
  if (denom == 0.0) throw NoBlowupEstimate("degenerate time samples");
  const double b = (m * sty - st * sy) / denom;
  const double a = (sy - b * st) / m;
  if (!(b < 0.0)) throw NoBlowupEstimate("fitted growth does not approach a singularity");
  return -a / b;
}

}  // namespace epsim
