#pragma once

#include <cstddef>
#include <vector>

#include "epsim/field.hpp"

namespace epsim {

/// Components u_1..u_d of the velocity on a common grid.
class VelocityField {
 public:
  /// Zero velocity with grid.dim() components.
  explicit VelocityField(const GridPtr& grid);
  /// Throws std::invalid_argument unless there are dim components on one grid.
  explicit VelocityField(std::vector<ScalarField> components);

  const Grid& grid() const noexcept { return components_.front().grid(); }
  const GridPtr& grid_ptr() const noexcept { return components_.front().grid_ptr(); }
  std::size_t dim() const noexcept { return components_.size(); }
  ScalarField& operator[](std::size_t i) { return components_[i]; }
  const ScalarField& operator[](std::size_t i) const { return components_[i]; }
  const std::vector<ScalarField>& components() const noexcept { return components_; }

  bool finite() const noexcept;

 private:
  std::vector<ScalarField> components_;
};

/// m = (1 - alpha Laplacian) u, tagged with the alpha it was built for.
/// Also used for momentum tendencies dm/dt.
class MomentumField {
 public:
  MomentumField(std::vector<ScalarField> components, double alpha);

  const Grid& grid() const noexcept { return components_.front().grid(); }
  const GridPtr& grid_ptr() const noexcept { return components_.front().grid_ptr(); }
  std::size_t dim() const noexcept { return components_.size(); }
  double alpha() const noexcept { return alpha_; }
  ScalarField& operator[](std::size_t i) { return components_[i]; }
  const ScalarField& operator[](std::size_t i) const { return components_[i]; }
  const std::vector<ScalarField>& components() const noexcept { return components_; }

 private:
  std::vector<ScalarField> components_;
  double alpha_;
};

struct SimulationState {
  double time = 0.0;
  VelocityField velocity;
  double alpha = 0.0;

  const Grid& grid() const noexcept { return velocity.grid(); }
};

MomentumField momentum_from_velocity(const VelocityField& u, double alpha);
VelocityField velocity_from_momentum(const MomentumField& m);

/// Odd part under the reflection x -> -x, u -> -u(-x):
/// returns (u(x) - u(-x)) / 2 componentwise.
VelocityField reflect_symmetrize(const VelocityField& u);
/// max_x |u(x) + u(-x)| over all components; zero for reflection-odd fields.
double reflection_defect(const VelocityField& u);

double sup_norm(const VelocityField& u);
double l2_norm(const VelocityField& u);

/// Spectral coefficients of a vector field; the prognostic variable of the
/// time integrator. Forms a vector space under + and scalar *.
struct SpectralVector {
  std::vector<Spectrum> components;

  SpectralVector& operator+=(const SpectralVector& rhs);
  SpectralVector& operator*=(double s) noexcept;
  bool finite() const noexcept;
};

SpectralVector operator+(SpectralVector a, const SpectralVector& b);
SpectralVector operator-(SpectralVector a, const SpectralVector& b);
SpectralVector operator*(double s, SpectralVector a);

SpectralVector to_spectral(const std::vector<ScalarField>& components);
std::vector<ScalarField> to_physical(const SpectralVector& v);

}  // namespace epsim
