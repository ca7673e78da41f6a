#include "epsim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "epsim/spectral.hpp"

namespace epsim {

namespace {

double gradient_squared_integral(const FieldMatrix& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.rows(); ++j) s += inner(g(i, j), g(i, j));
  }
  return s;
}

double speed_squared_integral(const VelocityField& u) {
  double s = 0.0;
  for (const auto& c : u.components()) s += inner(c, c);
  return s;
}

FieldMatrix symmetric_part(const FieldMatrix& g) {
  const std::size_t d = g.rows();
  FieldMatrix s(g(0, 0).grid_ptr(), d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) s(i, j) = 0.5 * (g(j, i) + g(i, j));
  }
  return s;
}

double max_entry_sup(const FieldMatrix& g) {
  double m = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.rows(); ++j) m = std::max(m, sup_norm(g(i, j)));
  }
  return m;
}

ScalarField truncated(const ScalarField& f, bool dealias) { return dealias ? epsim::dealias(f) : f; }

}  // namespace

std::vector<double> conserved_momentum(const SimulationState& s) {
  const MomentumField m = momentum_from_velocity(s.velocity, s.alpha);
  std::vector<double> out;
  for (const auto& c : m.components()) out.push_back(integral(c));
  return out;
}

double conserved_energy(const SimulationState& s) {
  double e = speed_squared_integral(s.velocity);
  if (s.alpha != 0.0) e += s.alpha * gradient_squared_integral(velocity_gradient(s.velocity));
  return e;
}

double entropy_l2(const VelocityField& u) { return speed_squared_integral(u); }

double sup_grad(const VelocityField& u) { return max_entry_sup(velocity_gradient(u)); }

FieldMatrix deformation_tensor(const VelocityField& u) {
  // G(i, j) = d_j u_i, so S_ij = (G(j, i) + G(i, j)) / 2.
  return symmetric_part(velocity_gradient(u));
}

double besov_proxy(const FieldMatrix& s) {
  const Grid& grid = s.grid();
  const auto shells = nonempty_shells(grid);
  double best = 0.0;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    for (std::size_t j = i; j < s.rows(); ++j) {
      const Spectrum full = forward(s(i, j));
      for (int m : shells) {
        Spectrum band = full;
        apply_shell(band, m);
        best = std::max(best, sup_norm(inverse(band)));
      }
    }
  }
  return best;
}

double divergence_at_origin(const VelocityField& u) {
  const std::size_t o = u.grid().origin_index();
  double d = 0.0;
  for (std::size_t i = 0; i < u.dim(); ++i) {
    d += partial_derivative(u[i], static_cast<int>(i))[o];
  }
  return d;
}

double riccati_bound(double d0, double t) {
  if (!(d0 < 0.0)) throw std::invalid_argument("riccati_bound: requires d0 < 0");
  if (t >= 1.0 / std::abs(d0)) {
    throw std::domain_error("riccati_bound: t = " + std::to_string(t) +
                            " is past the envelope blow-up time " +
                            std::to_string(1.0 / std::abs(d0)));
  }
  return d0 / (1.0 + d0 * t);
}

ScalarField divergence_evolution_residual(const VelocityField& u, const VelocityField& du_dt,
                                          bool dealias) {
  require_same_grid(u.grid(), du_dt.grid(), "divergence_evolution_residual");
  const std::size_t d = u.dim();
  const GridPtr& grid = u.grid_ptr();
  const FieldMatrix g = velocity_gradient(u);
  const ScalarField div = divergence(u);
  const Spectrum div_hat = forward(div);

  ScalarField nonlinear(grid);
  for (std::size_t j = 0; j < d; ++j) {
    nonlinear += u[j] * derivative_of(div_hat, static_cast<int>(j));  // u.grad(div u)
  }
  const FieldMatrix s = symmetric_part(g);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) nonlinear += 2.0 * (s(i, j) * s(i, j));
  }
  for (std::size_t j = 0; j < d; ++j) {
    Spectrum lap = forward(u[j]);
    apply_laplacian(lap);
    nonlinear += inverse(lap) * u[j];
  }
  nonlinear += div * div;
  for (std::size_t i = 0; i < d; ++i) {
    const Spectrum ui = forward(u[i]);
    for (std::size_t j = 0; j < d; ++j) {
      Spectrum dij = ui;
      differentiate(dij, static_cast<int>(i));
      differentiate(dij, static_cast<int>(j));
      nonlinear += inverse(dij) * u[j];
    }
  }
  return divergence(du_dt) + truncated(nonlinear, dealias);
}

double ErrorNormParts::total() const { return l2 + std::sqrt(alpha) * grad; }

ErrorNormParts error_norm_parts(const VelocityField& u_alpha, const VelocityField& u_limit,
                                double alpha) {
  require_same_grid(u_alpha.grid(), u_limit.grid(), "error_norm");
  if (u_alpha.dim() != u_limit.dim()) throw std::invalid_argument("error_norm: dim mismatch");
  if (!(alpha >= 0.0)) throw std::invalid_argument("error_norm: alpha must be >= 0");
  std::vector<ScalarField> diff;
  for (std::size_t i = 0; i < u_alpha.dim(); ++i) diff.push_back(u_alpha[i] - u_limit[i]);
  const VelocityField e(std::move(diff));
  ErrorNormParts parts;
  parts.alpha = alpha;
  parts.l2 = std::sqrt(speed_squared_integral(e));
  parts.grad = std::sqrt(gradient_squared_integral(velocity_gradient(e)));
  return parts;
}

double error_norm(const VelocityField& u_alpha, const VelocityField& u_limit, double alpha) {
  return error_norm_parts(u_alpha, u_limit, alpha).total();
}

VelocityField dispersion_truncation(const VelocityField& u, const VelocityField& du_dt,
                                    double alpha, bool dealias) {
  require_same_grid(u.grid(), du_dt.grid(), "dispersion_truncation");
  if (!(alpha >= 0.0)) throw std::invalid_argument("dispersion_truncation: alpha must be >= 0");
  const std::size_t d = u.dim();
  const GridPtr& grid = u.grid_ptr();

  std::vector<ScalarField> lap_u;
  for (std::size_t j = 0; j < d; ++j) {
    Spectrum s = forward(u[j]);
    apply_laplacian(s);
    lap_u.push_back(inverse(s));
  }
  const FieldMatrix g = velocity_gradient(u);

  std::vector<ScalarField> out;
  for (std::size_t i = 0; i < d; ++i) {
    Spectrum acc = forward(du_dt[i]);
    apply_laplacian(acc);  // Lap u_t
    for (std::size_t j = 0; j < d; ++j) {
      // div(u (x) Lap u)_i = sum_j d_j (u_j Lap u_i)
      Spectrum flux = forward(u[j] * lap_u[i]);
      if (dealias) apply_dealias(flux);
      differentiate(flux, static_cast<int>(j));
      acc += flux;
    }
    ScalarField adj(grid);  // ((grad u)^T Lap u)_i = sum_j d_i u_j Lap u_j
    for (std::size_t j = 0; j < d; ++j) adj += g(j, i) * lap_u[j];
    acc += forward(truncated(adj, dealias));
    acc *= -alpha;
    out.push_back(inverse(acc));
  }
  return VelocityField(std::move(out));
}

double weak_residual_stationary(const VelocityField& u, double alpha, const VelocityField& phi) {
  require_same_grid(u.grid(), phi.grid(), "weak_residual_stationary");
  const std::size_t d = u.dim();
  const FieldMatrix ta = stress_symmetric(u, alpha);
  const FieldMatrix gu = velocity_gradient(u);
  const FieldMatrix gphi = velocity_gradient(phi);

  double total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) total += inner(ta(i, j), gphi(i, j));
  }
  if (alpha != 0.0) {
    for (std::size_t i = 0; i < d; ++i) {
      const Spectrum phi_i = forward(phi[i]);
      for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
          Spectrum hess = phi_i;
          differentiate(hess, static_cast<int>(j));
          differentiate(hess, static_cast<int>(k));
          total += alpha * inner(u[j] * gu(i, k), inverse(hess));
        }
      }
    }
  }
  return total;
}

double liouville_trace_functional(const VelocityField& u, double alpha) {
  const double n = static_cast<double>(u.dim());
  double f = 0.5 * (n + 2.0) * speed_squared_integral(u);
  if (alpha != 0.0) f += 0.5 * alpha * n * gradient_squared_integral(velocity_gradient(u));
  return f;
}

DiagnosticRecord compute_record(const SimulationState& s) {
  const VelocityField& u = s.velocity;
  const FieldMatrix g = velocity_gradient(u);
  DiagnosticRecord r;
  r.time = s.time;
  r.momentum_integral = conserved_momentum(s);
  r.entropy_l2 = speed_squared_integral(u);
  r.energy = r.entropy_l2 + (s.alpha != 0.0 ? s.alpha * gradient_squared_integral(g) : 0.0);
  r.sup_grad_u = max_entry_sup(g);
  r.besov_proxy_S = besov_proxy(symmetric_part(g));
  const std::size_t o = u.grid().origin_index();
  for (std::size_t i = 0; i < u.dim(); ++i) r.div_at_origin += g(i, i)[o];
  r.max_abs_u = sup_norm(u);
  return r;
}

void BesovCriterionIntegral::observe(const DiagnosticRecord& r) {
  if (started_) value_ += 0.5 * (r.time - last_time_) * (r.besov_proxy_S + last_value_);
  started_ = true;
  last_time_ = r.time;
  last_value_ = r.besov_proxy_S;
}

}  // namespace epsim
