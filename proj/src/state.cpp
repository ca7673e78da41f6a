#include "epsim/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "epsim/spectral.hpp"

namespace epsim {

namespace {

void check_components(const std::vector<ScalarField>& c, const char* what) {
  if (c.empty()) throw std::invalid_argument(std::string(what) + ": no components");
  const Grid& g = c.front().grid();
  if (c.size() != static_cast<std::size_t>(g.dim())) {
    throw std::invalid_argument(std::string(what) + ": component count must equal grid dim");
  }
  for (const auto& f : c) require_same_grid(g, f.grid(), what);
}

}  // namespace

VelocityField::VelocityField(const GridPtr& grid) {
  components_.reserve(static_cast<std::size_t>(grid->dim()));
  for (int i = 0; i < grid->dim(); ++i) components_.emplace_back(grid);
}

VelocityField::VelocityField(std::vector<ScalarField> components)
    : components_(std::move(components)) {
  check_components(components_, "VelocityField");
}

bool VelocityField::finite() const noexcept {
  return std::all_of(components_.begin(), components_.end(),
                     [](const ScalarField& f) { return all_finite(f.values()); });
}

MomentumField::MomentumField(std::vector<ScalarField> components, double alpha)
    : components_(std::move(components)), alpha_(alpha) {
  check_components(components_, "MomentumField");
  if (!(alpha >= 0.0)) throw std::invalid_argument("MomentumField: alpha must be >= 0");
}

MomentumField momentum_from_velocity(const VelocityField& u, double alpha) {
  std::vector<ScalarField> m;
  m.reserve(u.dim());
  for (const auto& c : u.components()) m.push_back(helmholtz_apply(c, alpha));
  return MomentumField(std::move(m), alpha);
}

VelocityField velocity_from_momentum(const MomentumField& m) {
  std::vector<ScalarField> u;
  u.reserve(m.dim());
  for (const auto& c : m.components()) u.push_back(helmholtz_invert(c, m.alpha()));
  return VelocityField(std::move(u));
}

VelocityField reflect_symmetrize(const VelocityField& u) {
  const Grid& g = u.grid();
  std::vector<ScalarField> out;
  out.reserve(u.dim());
  for (const auto& c : u.components()) {
    ScalarField r(c.grid_ptr());
    for (std::size_t i = 0; i < g.size(); ++i) r[i] = 0.5 * (c[i] - c[g.reflect_index(i)]);
    out.push_back(std::move(r));
  }
  return VelocityField(std::move(out));
}

double reflection_defect(const VelocityField& u) {
  const Grid& g = u.grid();
  double d = 0.0;
  for (const auto& c : u.components()) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      d = std::max(d, std::abs(c[i] + c[g.reflect_index(i)]));
    }
  }
  return d;
}

double sup_norm(const VelocityField& u) {
  double m = 0.0;
  for (const auto& c : u.components()) m = std::max(m, sup_norm(c));
  return m;
}

double l2_norm(const VelocityField& u) {
  double s = 0.0;
  for (const auto& c : u.components()) s += inner(c, c);
  return std::sqrt(s);
}

SpectralVector& SpectralVector::operator+=(const SpectralVector& rhs) {
  if (rhs.components.size() != components.size()) {
    throw std::invalid_argument("SpectralVector: component count mismatch");
  }
  for (std::size_t i = 0; i < components.size(); ++i) components[i] += rhs.components[i];
  return *this;
}

SpectralVector& SpectralVector::operator*=(double s) noexcept {
  for (auto& c : components) c *= s;
  return *this;
}

bool SpectralVector::finite() const noexcept {
  return std::all_of(components.begin(), components.end(),
                     [](const Spectrum& s) { return all_finite(s.coeffs()); });
}

SpectralVector operator+(SpectralVector a, const SpectralVector& b) { return a += b; }

SpectralVector operator-(SpectralVector a, const SpectralVector& b) {
  for (std::size_t i = 0; i < a.components.size(); ++i) a.components[i] -= b.components[i];
  return a;
}

SpectralVector operator*(double s, SpectralVector a) { return a *= s; }

SpectralVector to_spectral(const std::vector<ScalarField>& components) {
  SpectralVector v;
  v.components.reserve(components.size());
  for (const auto& c : components) v.components.push_back(forward(c));
  return v;
}

std::vector<ScalarField> to_physical(const SpectralVector& v) {
  std::vector<ScalarField> out;
  out.reserve(v.components.size());
  for (const auto& c : v.components) out.push_back(inverse(c));
  return out;
}

}  // namespace epsim
