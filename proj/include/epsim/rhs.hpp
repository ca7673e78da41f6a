#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "epsim/state.hpp"

namespace epsim {

/// Algebraic route used to evaluate the momentum tendency dm/dt.
enum class RhsForm {
  /// -(u.grad)m - (grad u)^T m - (div u) m
  convective,
  /// -sum_j d_j (Ta_ij + Tb_ij)
  conservative,
  /// -div(u (x) u) - grad|u|^2 / 2; only valid at alpha = 0 where m = u.
  zero_alpha,
};

/// Velocity gradient G(i, j) = d_j u_i.
FieldMatrix velocity_gradient(const VelocityField& u);
ScalarField divergence(const VelocityField& u);

/// Tendency of the spectral momentum coefficients. Products are formed in
/// physical space and, when `dealias` is set, truncated by the 2/3 rule
/// before any further differentiation.
SpectralVector momentum_tendency(const SpectralVector& momentum_hat, double alpha, RhsForm form,
                                 bool dealias = true);

MomentumField rhs_convective(const SimulationState& s, bool dealias = true);
MomentumField rhs_conservative(const SimulationState& s, bool dealias = true);
VelocityField rhs_zero_alpha(const VelocityField& u, bool dealias = true);

/// Symmetric part of the momentum flux,
///   u (x) u + a grad u grad u^T - a grad u^T grad u + (|u|^2 + a|grad u|^2)/2 Id,
/// evaluated pointwise (no truncation).
FieldMatrix stress_symmetric(const VelocityField& u, double alpha);

/// Both pieces of the momentum flux. The remainder is stored through its
/// inner tensor u_j d_k u_i, whose scaled divergence -a sum_k d_k(.) is Tb_ij.
struct StressTensor {
  FieldMatrix symmetric_part;
  std::vector<ScalarField> remainder_inner;  // index (i * d + j) * d + k
  double alpha;

  const ScalarField& inner(std::size_t i, std::size_t j, std::size_t k) const;
};

StressTensor stress_tensor(const VelocityField& u, double alpha);

/// Flux matrix of the alpha = 0 system along unit direction e:
/// A = (u.e) Id + e u^T + u e^T. Accepts 1 <= dim <= 3; throws
/// std::invalid_argument for mismatched sizes or |e| != 1.
Eigen::MatrixXd flux_jacobian(std::span<const double> u, std::span<const double> e);

/// Closed-form spectrum of flux_jacobian, ascending: u.e with multiplicity
/// d - 2 together with 2 u.e +- |u| (d = 1 gives the single value 3 u e).
std::vector<double> flux_eigenvalues(std::span<const double> u, std::span<const double> e);

}  // namespace epsim
