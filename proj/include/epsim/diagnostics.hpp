#pragma once

#include <vector>

#include "epsim/rhs.hpp"
#include "epsim/state.hpp"

namespace epsim {

/// One time-stamped row of monitored quantities.
struct DiagnosticRecord {
  double time = 0.0;
  std::vector<double> momentum_integral;  // int m dx, one entry per component
  double energy = 0.0;                    // int |u|^2 + alpha |grad u|^2 dx
  double entropy_l2 = 0.0;                // int |u|^2 dx
  double sup_grad_u = 0.0;                // max_ij ||d_j u_i||_inf
  double besov_proxy_S = 0.0;
  double div_at_origin = 0.0;
  double max_abs_u = 0.0;
};

DiagnosticRecord compute_record(const SimulationState& s);

std::vector<double> conserved_momentum(const SimulationState& s);
double conserved_energy(const SimulationState& s);
double entropy_l2(const VelocityField& u);
double sup_grad(const VelocityField& u);

/// S_ij = (d_i u_j + d_j u_i) / 2.
FieldMatrix deformation_tensor(const VelocityField& u);

/// Sharp-shell stand-in for the homogeneous Besov B^0_{inf,inf} norm:
/// the largest sup-norm of any dyadic shell of any tensor entry. A monitor,
/// not an equivalent norm.
double besov_proxy(const FieldMatrix& s);

/// (div u) sampled at the x = 0 node.
double divergence_at_origin(const VelocityField& u);

/// Riccati envelope d0 / (1 + d0 t) for d0 < 0. Throws std::domain_error
/// once t >= 1/|d0| (the envelope has already diverged) and
/// std::invalid_argument for d0 >= 0.
double riccati_bound(double d0, double t);

/// Pointwise left side of the divergence evolution identity of the
/// alpha = 0 system,
///   d_t(div u) + u.grad(div u) + 2 S:S + sum_j (Lap u_j) u_j + (div u)^2
///     + sum_ij (d_i d_j u_i) u_j,
/// with d_t u supplied. Products are 2/3-truncated when `dealias` is set so
/// the result is comparable with a truncated du_dt.
ScalarField divergence_evolution_residual(const VelocityField& u, const VelocityField& du_dt,
                                          bool dealias = true);

struct ErrorNormParts {
  double l2 = 0.0;    // ||u_a - u||_{L2}
  double grad = 0.0;  // ||grad (u_a - u)||_{L2}
  double alpha = 0.0;
  double total() const;
};

/// ||u_a - u||_{L2} + sqrt(alpha) ||grad(u_a - u)||_{L2}. Throws
/// std::invalid_argument when the grids differ.
double error_norm(const VelocityField& u_alpha, const VelocityField& u_limit, double alpha);
ErrorNormParts error_norm_parts(const VelocityField& u_alpha, const VelocityField& u_limit,
                                double alpha);

/// Residual forcing picked up by the alpha = 0 solution when it is inserted
/// into the alpha > 0 momentum equation:
///   -alpha { Lap u_t + div(u (x) Lap u) + (grad u)^T Lap u }.
VelocityField dispersion_truncation(const VelocityField& u, const VelocityField& du_dt,
                                    double alpha, bool dealias = true);

/// Stationary weak-form functional paired with test field phi:
///   sum_ij int Ta_ij d_j phi_i + alpha sum_ijk int u_j d_k u_i d_j d_k phi_i.
double weak_residual_stationary(const VelocityField& u, double alpha, const VelocityField& phi);

/// int (N+2)/2 |u|^2 + alpha N/2 |grad u|^2 dx.
double liouville_trace_functional(const VelocityField& u, double alpha);

/// Trapezoid accumulation of the blow-up criterion integral
/// int_0^t besov_proxy(S(tau)) dtau over observed records.
class BesovCriterionIntegral {
 public:
  void observe(const DiagnosticRecord& r);
  double value() const noexcept { return value_; }

 private:
  bool started_ = false;
  double last_time_ = 0.0;
  double last_value_ = 0.0;
  double value_ = 0.0;
};

}  // namespace epsim
