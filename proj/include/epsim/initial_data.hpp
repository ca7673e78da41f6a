#pragma once

#include <cstdint>
#include <string_view>

#include "epsim/state.hpp"

namespace epsim {

enum class InitialDataKind {
  zero,
  /// u0 = grad(A cos kx1 cos kx2) with k = 2 pi / L (1D: -A sin kx). Odd
  /// under reflection, div u0(0) = -2 A k in 2D.
  gradient_cosine,
  /// Random band-limited field projected onto its reflection-odd part and
  /// scaled to sup-norm A.
  odd_random,
  /// 1D peakon c exp(-|x| / sqrt(alpha)) smoothed by a Gaussian of width
  /// eps, then rescaled to carry the exact peakon energy 2 c^2 sqrt(alpha).
  peakon,
  /// A (g(x2), g(x1) / 2) with g(s) = exp(-s^2 / (2 sigma^2)); 1D: A g(x).
  gaussian_shear,
};

std::string_view to_string(InitialDataKind k);
/// Returns false for an unknown name.
bool parse_initial_data_kind(std::string_view name, InitialDataKind& out);

struct InitialData {
  InitialDataKind kind = InitialDataKind::gradient_cosine;
  double amplitude = 0.5;   // A, or the peakon speed c
  double width = 0.4;       // gaussian_shear sigma
  double smoothing = 0.05;  // peakon eps
  std::uint64_t seed = 1;   // odd_random
  int band = 4;             // odd_random: largest |n| per axis

  bool operator==(const InitialData&) const = default;
};

/// Sample the initial velocity on `grid`. With `band_limit` set the result
/// is projected onto the 2/3 dealias band. Throws std::invalid_argument for
/// parameter combinations outside their documented range (peakon needs
/// dim 1 and alpha > 0, widths must be positive, band >= 1).
VelocityField make_initial_velocity(const InitialData& data, const GridPtr& grid, double alpha,
                                    bool band_limit = true);

/// Sum of random cosine/sine modes with every axis mode number |n| <= band,
/// scaled to sup-norm `amplitude`. Deterministic in `seed` on one platform.
VelocityField random_band_limited(const GridPtr& grid, std::uint64_t seed, int band,
                                  double amplitude = 1.0);

}  // namespace epsim
