#include "epsim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace epsim {

namespace {

void check_alpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be finite and >= 0");
  }
}

}  // namespace

void differentiate(Spectrum& f, int axis) {
  const auto k = f.grid().derivative_k(axis);
  for (std::size_t s = 0; s < f.size(); ++s) f[s] *= Complex(0.0, k[s]);
}

void apply_laplacian(Spectrum& f) {
  const auto k2 = f.grid().k_squared();
  for (std::size_t s = 0; s < f.size(); ++s) f[s] *= -k2[s];
}

void apply_helmholtz(Spectrum& f, double alpha) {
  check_alpha(alpha);
  const auto k2 = f.grid().k_squared();
  for (std::size_t s = 0; s < f.size(); ++s) f[s] *= 1.0 + alpha * k2[s];
}

void invert_helmholtz(Spectrum& f, double alpha) {
  check_alpha(alpha);
  const auto k2 = f.grid().k_squared();
  for (std::size_t s = 0; s < f.size(); ++s) f[s] /= 1.0 + alpha * k2[s];
}

void apply_dealias(Spectrum& f) {
  const auto mask = f.grid().dealias_mask();
  for (std::size_t s = 0; s < f.size(); ++s) {
    if (!mask[s]) f[s] = Complex{};
  }
}

int shell_index(double k_magnitude) {
  // 2^(m-1) <= |k| < 2^m  <=>  m = floor(log2 |k|) + 1
  int e = 0;
  std::frexp(k_magnitude, &e);  // |k| = f * 2^e with f in [0.5, 1)
  return e;
}

void apply_shell(Spectrum& f, int m) {
  const auto k2 = f.grid().k_squared();
  for (std::size_t s = 0; s < f.size(); ++s) {
    if (k2[s] == 0.0 || shell_index(std::sqrt(k2[s])) != m) f[s] = Complex{};
  }
}

std::vector<int> nonempty_shells(const Grid& grid) {
  std::set<int> shells;
  for (double k2 : grid.k_squared()) {
    if (k2 > 0.0) shells.insert(shell_index(std::sqrt(k2)));
  }
  return {shells.begin(), shells.end()};
}

ScalarField derivative_of(const Spectrum& f, int axis) {
  Spectrum d = f;
  differentiate(d, axis);
  return inverse(d);
}

ScalarField partial_derivative(const ScalarField& f, int axis) {
  if (axis < 0 || axis >= f.grid().dim()) {
    throw std::invalid_argument("partial_derivative: axis out of range");
  }
  return derivative_of(forward(f), axis);
}

ScalarField helmholtz_apply(const ScalarField& f, double alpha) {
  check_alpha(alpha);
  Spectrum s = forward(f);
  apply_helmholtz(s, alpha);
  return inverse(s);
}

ScalarField helmholtz_invert(const ScalarField& f, double alpha) {
  check_alpha(alpha);
  Spectrum s = forward(f);
  invert_helmholtz(s, alpha);
  return inverse(s);
}

ScalarField dealias(const ScalarField& f) {
  Spectrum s = forward(f);
  apply_dealias(s);
  return inverse(s);
}

ScalarField shell_filter(const ScalarField& f, int m) {
  Spectrum s = forward(f);
  apply_shell(s, m);
  return inverse(s);
}

}  // namespace epsim
