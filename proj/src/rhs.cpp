#include "epsim/rhs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "epsim/spectral.hpp"

namespace epsim {

namespace {

/// Physical-space u, m and their gradients reconstructed from m-hat.
struct Kinematics {
  std::vector<ScalarField> u;
  std::vector<ScalarField> m;
  std::vector<ScalarField> grad_u;  // (i, j) -> d_j u_i at i * d + j
  std::vector<ScalarField> grad_m;
  std::size_t d;

  const ScalarField& du(std::size_t i, std::size_t j) const { return grad_u[i * d + j]; }
  const ScalarField& dm(std::size_t i, std::size_t j) const { return grad_m[i * d + j]; }
};

std::vector<ScalarField> gradients(const std::vector<Spectrum>& hat) {
  const std::size_t d = hat.size();
  std::vector<ScalarField> g;
  g.reserve(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) g.push_back(derivative_of(hat[i], static_cast<int>(j)));
  }
  return g;
}

std::vector<Spectrum> velocity_hat(const SpectralVector& m_hat, double alpha) {
  std::vector<Spectrum> u_hat = m_hat.components;
  if (alpha != 0.0) {
    for (auto& s : u_hat) invert_helmholtz(s, alpha);
  }
  return u_hat;
}

Kinematics kinematics(const SpectralVector& m_hat, double alpha, bool need_m_grad) {
  Kinematics k;
  k.d = m_hat.components.size();
  const auto u_hat = velocity_hat(m_hat, alpha);
  for (const auto& s : u_hat) k.u.push_back(inverse(s));
  k.grad_u = gradients(u_hat);
  if (alpha == 0.0) {
    k.m = k.u;
    if (need_m_grad) k.grad_m = k.grad_u;
  } else {
    for (const auto& s : m_hat.components) k.m.push_back(inverse(s));
    if (need_m_grad) k.grad_m = gradients(m_hat.components);
  }
  return k;
}

Spectrum transform(const ScalarField& f, bool dealias) {
  Spectrum s = forward(f);
  if (dealias) apply_dealias(s);
  return s;
}

void accumulate_derivative(Spectrum& acc, const Spectrum& f, int axis, double scale) {
  const auto k = f.grid().derivative_k(axis);
  for (std::size_t s = 0; s < f.size(); ++s) acc[s] += Complex(0.0, scale * k[s]) * f[s];
}

SpectralVector convective(const SpectralVector& m_hat, double alpha, bool dealias) {
  const Kinematics k = kinematics(m_hat, alpha, true);
  const std::size_t d = k.d;
  const GridPtr& grid = m_hat.components.front().grid_ptr();

  ScalarField div(grid);
  for (std::size_t i = 0; i < d; ++i) div += k.du(i, i);

  SpectralVector out;
  for (std::size_t i = 0; i < d; ++i) {
    ScalarField t(grid);
    auto tv = t.values();
    for (std::size_t p = 0; p < tv.size(); ++p) {
      double acc = div[p] * k.m[i][p];
      for (std::size_t j = 0; j < d; ++j) {
        acc += k.u[j][p] * k.dm(i, j)[p];  // (u.grad) m_i
        acc += k.du(j, i)[p] * k.m[j][p];  // ((grad u)^T m)_i = sum_j d_i u_j m_j
      }
      tv[p] = -acc;
    }
    out.components.push_back(transform(t, dealias));
  }
  return out;
}

SpectralVector conservative(const SpectralVector& m_hat, double alpha, bool dealias) {
  const Kinematics k = kinematics(m_hat, alpha, false);
  const std::size_t d = k.d;
  const GridPtr& grid = m_hat.components.front().grid_ptr();
  const VelocityField u(k.u);
  const FieldMatrix ta = stress_symmetric(u, alpha);

  SpectralVector out;
  for (std::size_t i = 0; i < d; ++i) {
    Spectrum acc(grid);
    for (std::size_t j = 0; j < d; ++j) {
      accumulate_derivative(acc, transform(ta(i, j), dealias), static_cast<int>(j), -1.0);
    }
    if (alpha != 0.0) {
      // -d_j Tb_ij = a d_j d_k (u_j d_k u_i)
      for (std::size_t j = 0; j < d; ++j) {
        const auto kj = grid->derivative_k(static_cast<int>(j));
        for (std::size_t kk = 0; kk < d; ++kk) {
          const auto kk_tab = grid->derivative_k(static_cast<int>(kk));
          const Spectrum inner = transform(k.u[j] * k.du(i, kk), dealias);
          for (std::size_t s = 0; s < inner.size(); ++s) {
            acc[s] += -alpha * kj[s] * kk_tab[s] * inner[s];
          }
        }
      }
    }
    out.components.push_back(std::move(acc));
  }
  return out;
}

SpectralVector zero_alpha(const SpectralVector& u_hat, bool dealias) {
  const std::size_t d = u_hat.components.size();
  const GridPtr& grid = u_hat.components.front().grid_ptr();
  std::vector<ScalarField> u;
  for (const auto& s : u_hat.components) u.push_back(inverse(s));

  ScalarField speed2(grid);
  for (const auto& c : u) speed2 += c * c;
  const Spectrum speed2_hat = transform(speed2, dealias);

  SpectralVector out;
  for (std::size_t i = 0; i < d; ++i) {
    Spectrum acc(grid);
    for (std::size_t j = 0; j < d; ++j) {
      accumulate_derivative(acc, transform(u[i] * u[j], dealias), static_cast<int>(j), -1.0);
    }
    accumulate_derivative(acc, speed2_hat, static_cast<int>(i), -0.5);
    out.components.push_back(std::move(acc));
  }
  return out;
}

SpectralVector spectral_of(const std::vector<ScalarField>& c) { return to_spectral(c); }

}  // namespace

FieldMatrix velocity_gradient(const VelocityField& u) {
  const std::size_t d = u.dim();
  FieldMatrix g(u.grid_ptr(), d);
  for (std::size_t i = 0; i < d; ++i) {
    const Spectrum ui = forward(u[i]);
    for (std::size_t j = 0; j < d; ++j) g(i, j) = derivative_of(ui, static_cast<int>(j));
  }
  return g;
}

ScalarField divergence(const VelocityField& u) {
  ScalarField div(u.grid_ptr());
  for (std::size_t i = 0; i < u.dim(); ++i) div += partial_derivative(u[i], static_cast<int>(i));
  return div;
}

SpectralVector momentum_tendency(const SpectralVector& momentum_hat, double alpha, RhsForm form,
                                 bool dealias) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("momentum_tendency: alpha must be >= 0");
  if (momentum_hat.components.empty()) throw std::invalid_argument("momentum_tendency: empty");
  switch (form) {
    case RhsForm::convective:
      return convective(momentum_hat, alpha, dealias);
    case RhsForm::conservative:
      return conservative(momentum_hat, alpha, dealias);
    case RhsForm::zero_alpha:
      if (alpha != 0.0) throw std::invalid_argument("zero_alpha form requires alpha = 0");
      return zero_alpha(momentum_hat, dealias);
  }
  throw std::invalid_argument("momentum_tendency: unknown form");
}

MomentumField rhs_convective(const SimulationState& s, bool dealias) {
  const MomentumField m = momentum_from_velocity(s.velocity, s.alpha);
  const auto t =
      momentum_tendency(spectral_of(m.components()), s.alpha, RhsForm::convective, dealias);
  return MomentumField(to_physical(t), s.alpha);
}

MomentumField rhs_conservative(const SimulationState& s, bool dealias) {
  const MomentumField m = momentum_from_velocity(s.velocity, s.alpha);
  const auto t =
      momentum_tendency(spectral_of(m.components()), s.alpha, RhsForm::conservative, dealias);
  return MomentumField(to_physical(t), s.alpha);
}

VelocityField rhs_zero_alpha(const VelocityField& u, bool dealias) {
  const auto t = momentum_tendency(spectral_of(u.components()), 0.0, RhsForm::zero_alpha, dealias);
  return VelocityField(to_physical(t));
}

FieldMatrix stress_symmetric(const VelocityField& u, double alpha) {
  const std::size_t d = u.dim();
  const FieldMatrix g = velocity_gradient(u);
  const Grid& grid = u.grid();
  FieldMatrix t(u.grid_ptr(), d);

  ScalarField iso(u.grid_ptr());  // (|u|^2 + a |grad u|^2) / 2
  for (std::size_t p = 0; p < grid.size(); ++p) {
    double s = 0.0;
    double gg = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      s += u[i][p] * u[i][p];
      for (std::size_t j = 0; j < d; ++j) gg += g(i, j)[p] * g(i, j)[p];
    }
    iso[p] = 0.5 * (s + alpha * gg);
  }

  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      ScalarField& e = t(i, j);
      for (std::size_t p = 0; p < grid.size(); ++p) {
        double row = 0.0;  // (grad u grad u^T)_ij = sum_k d_k u_i d_k u_j
        double col = 0.0;  // (grad u^T grad u)_ij = sum_k d_i u_k d_j u_k
        for (std::size_t k = 0; k < d; ++k) {
          row += g(i, k)[p] * g(j, k)[p];
          col += g(k, i)[p] * g(k, j)[p];
        }
        double v = u[i][p] * u[j][p] + alpha * (row - col);
        if (i == j) v += iso[p];
        e[p] = v;
      }
      if (j != i) t(j, i) = e;
    }
  }
  return t;
}

const ScalarField& StressTensor::inner(std::size_t i, std::size_t j, std::size_t k) const {
  const std::size_t d = symmetric_part.rows();
  return remainder_inner.at((i * d + j) * d + k);
}

StressTensor stress_tensor(const VelocityField& u, double alpha) {
  const std::size_t d = u.dim();
  const FieldMatrix g = velocity_gradient(u);
  std::vector<ScalarField> inner;
  inner.reserve(d * d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) inner.push_back(u[j] * g(i, k));
    }
  }
  return StressTensor{stress_symmetric(u, alpha), std::move(inner), alpha};
}

namespace {

double check_flux_args(std::span<const double> u, std::span<const double> e) {
  if (u.empty() || u.size() > 3 || e.size() != u.size()) {
    throw std::invalid_argument("flux_jacobian: u and e must share a dimension in 1..3");
  }
  double n2 = 0.0;
  for (double v : e) n2 += v * v;
  if (std::abs(std::sqrt(n2) - 1.0) > 1e-12) {
    throw std::invalid_argument("flux_jacobian: direction e must be a unit vector");
  }
  double ue = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) ue += u[i] * e[i];
  return ue;
}

}  // namespace

Eigen::MatrixXd flux_jacobian(std::span<const double> u, std::span<const double> e) {
  const double ue = check_flux_args(u, e);
  const auto d = static_cast<Eigen::Index>(u.size());
  Eigen::MatrixXd a(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      a(i, j) = e[i] * u[j] + u[i] * e[j] + (i == j ? ue : 0.0);
    }
  }
  return a;
}

std::vector<double> flux_eigenvalues(std::span<const double> u, std::span<const double> e) {
  const double ue = check_flux_args(u, e);
  if (u.size() == 1) return {3.0 * ue};
  double speed = 0.0;
  for (double v : u) speed += v * v;
  speed = std::sqrt(speed);
  std::vector<double> ev(u.size() - 2, ue);
  ev.push_back(2.0 * ue - speed);
  ev.push_back(2.0 * ue + speed);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace epsim
