#pragma once

#include <vector>

#include "epsim/field.hpp"

namespace epsim {

// Physical-space entry points. Each is a diagonal Fourier multiplier.

/// Exact spectral derivative along `axis`; Nyquist mode zeroed.
/// Throws std::invalid_argument for an axis outside [0, dim).
ScalarField partial_derivative(const ScalarField& f, int axis);
/// (1 - alpha Laplacian) f. Throws std::invalid_argument for alpha < 0.
ScalarField helmholtz_apply(const ScalarField& f, double alpha);
/// (1 - alpha Laplacian)^{-1} f. Throws std::invalid_argument for alpha < 0.
ScalarField helmholtz_invert(const ScalarField& f, double alpha);
/// 2/3-rule truncation: zero every mode with some |n| > N/3.
ScalarField dealias(const ScalarField& f);
/// Sharp dyadic shell projection onto 2^(m-1) <= |k| < 2^m.
ScalarField shell_filter(const ScalarField& f, int m);

// In-place spectral counterparts used on hot paths.

void differentiate(Spectrum& f, int axis);
void apply_laplacian(Spectrum& f);
void apply_helmholtz(Spectrum& f, double alpha);
void invert_helmholtz(Spectrum& f, double alpha);
void apply_dealias(Spectrum& f);
void apply_shell(Spectrum& f, int m);

/// Shell index containing wavenumber magnitude |k| > 0.
int shell_index(double k_magnitude);
/// Every shell index m that contains at least one nonzero mode of `grid`,
/// in increasing order.
std::vector<int> nonempty_shells(const Grid& grid);

/// Derivative of a spectrum along `axis`, returned in physical space.
ScalarField derivative_of(const Spectrum& f, int axis);

}  // namespace epsim
