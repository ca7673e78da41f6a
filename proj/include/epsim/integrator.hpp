#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "epsim/diagnostics.hpp"
#include "epsim/rhs.hpp"
#include "epsim/state.hpp"

namespace epsim {

enum class Scheme { rk4, rk2 };

/// Explicit Runge-Kutta update y + dt * Phi(y). V needs `V + V` and
/// `double * V`; works for SpectralVector as well as std::valarray.
template <class V, class F>
V runge_kutta_update(Scheme scheme, const V& y, F&& f, double dt) {
  if (scheme == Scheme::rk2) {
    const V k1 = f(y);
    const V k2 = f(y + (0.5 * dt) * k1);
    return y + dt * k2;
  }
  const V k1 = f(y);
  const V k2 = f(y + (0.5 * dt) * k1);
  const V k3 = f(y + (0.5 * dt) * k2);
  const V k4 = f(y + dt * k3);
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Thrown when a Runge-Kutta stage produces NaN or Inf.
struct NonFiniteState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown by estimate_blowup_time when the series does not end in strictly
/// increasing growth.
struct NoBlowupEstimate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Maps spectral momentum coefficients to their time derivative.
using Tendency = std::function<SpectralVector(const SpectralVector&)>;

/// Tendency for the given alpha. Without an explicit form the alpha = 0
/// system uses the zero_alpha route and alpha > 0 the convective route.
Tendency make_tendency(double alpha, std::optional<RhsForm> form = std::nullopt,
                       bool dealias = true);

/// One classical RK4 step of the spectral momentum (the velocity itself
/// when alpha = 0). dt may be negative for reversal checks but not zero.
/// Throws NonFiniteState if any stage is not finite.
SimulationState rk4_step(const SimulationState& s, const Tendency& rhs, double dt);

struct IntegratorConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::rk4;
  double t_end = 1.0;
  double cfl_safety = 0.5;
  /// Rescale dt each step to cfl_safety / (max|u| k_max), capped at dt.
  bool adaptive = false;
  /// Blow-up guard: trip once sup|grad u| exceeds this multiple of its
  /// initial value.
  double blowup_growth = 10.0;
  double dt_floor = 1e-10;
  bool dealias_products = true;
  std::optional<RhsForm> form;
  /// Diagnostics are recorded (and observers called) every this many steps,
  /// plus the initial and final states.
  std::size_t sample_stride = 1;

  /// Throws std::invalid_argument when the configuration is unusable.
  void validate() const;
};

enum class TerminationReason { completed, blowup_norm, dt_underflow, nan_detected };

std::string_view to_string(TerminationReason r);

struct TerminationReport {
  TerminationReason reason = TerminationReason::completed;
  double t_final = 0.0;
  std::size_t steps = 0;
  /// Fitted singular time; only attempted when reason != completed.
  std::optional<double> estimated_blowup_time;
};

using Observer = std::function<void(const SimulationState&, const DiagnosticRecord&)>;

struct IntegrationResult {
  SimulationState state;
  TerminationReport report;
  std::vector<DiagnosticRecord> records;
};

/// Advance s0 to cfg.t_end or until a guard trips. Guard trips end in a
/// TerminationReport rather than an exception; the returned state and every
/// state passed to an observer are finite.
IntegrationResult integrate(const SimulationState& s0, const IntegratorConfig& cfg,
                            std::span<const Observer> observers = {});

/// Fit value(t) ~ c / (T - t) on the trailing third of the series (at least
/// three points) by least squares on 1/value, which is linear in t, and
/// return T. Throws NoBlowupEstimate unless that tail is positive and
/// strictly increasing.
double estimate_blowup_time(std::span<const std::pair<double, double>> series);

}  // namespace epsim
