#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace epsim {

using Complex = std::complex<double>;

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Periodic tensor-product grid on [-L/2, L/2)^dim with its Fourier tables.
///
/// Physical values are stored row-major with axis 0 slowest. Spectral
/// coefficients use the real-to-complex half layout: the last axis keeps
/// modes 0..N/2, every other axis keeps the full FFT ordering. Point index
/// N/2 on each axis sits at coordinate 0, so the reflection x -> -x maps
/// index i to (N - i) mod N.
class Grid {
 public:
  /// Throws std::invalid_argument unless dim is 1 or 2, points is a power
  /// of two >= 8 and length > 0.
  static GridPtr create(int dim, std::size_t points, double length);

  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;
  ~Grid();

  int dim() const noexcept { return dim_; }
  std::size_t points() const noexcept { return points_; }
  double length() const noexcept { return length_; }
  std::size_t size() const noexcept { return size_; }
  std::size_t spectral_size() const noexcept { return spectral_size_; }
  std::size_t half_points() const noexcept { return points_ / 2 + 1; }

  double spacing() const noexcept { return length_ / static_cast<double>(points_); }
  double cell_volume() const noexcept;
  double volume() const noexcept;

  /// Coordinate of point index i along any axis.
  double coordinate(std::size_t i) const noexcept;
  /// Flat index of the node at x = 0.
  std::size_t origin_index() const noexcept;
  /// Flat index of the node at -x.
  std::size_t reflect_index(std::size_t flat) const noexcept;
  /// Per-axis point indices of a flat index.
  std::vector<std::size_t> unflatten(std::size_t flat) const;

  /// Signed mode number of FFT-ordered index i, with the Nyquist index
  /// reported as -N/2.
  long mode_number(std::size_t i) const noexcept;
  /// Full per-axis wavenumber table k_n = 2 pi n / L in FFT order (Nyquist
  /// stored as -pi N / L).
  std::span<const double> wavenumbers() const noexcept { return axis_k_; }

  /// Derivative multiplier k_axis for every spectral index; zero on the
  /// Nyquist index of that axis.
  std::span<const double> derivative_k(int axis) const;
  /// |k|^2 for every spectral index (Nyquist included with |k| = pi N / L).
  std::span<const double> k_squared() const noexcept { return k2_; }
  /// True where every axis mode satisfies |n| <= N/3.
  std::span<const unsigned char> dealias_mask() const noexcept { return mask_; }
  /// Weight of each half-spectrum coefficient in a full-spectrum sum
  /// (2 for coefficients standing in for a conjugate pair, else 1).
  std::span<const double> hermitian_weight() const noexcept { return weight_; }

  /// Largest resolved wavenumber used for the advective CFL limit.
  double k_max(bool dealiased) const noexcept;

  /// Unnormalized forward transform of size() reals into spectral_size()
  /// coefficients.
  void forward(std::span<const double> in, std::span<Complex> out) const;
  /// Normalized inverse transform. `in` is left untouched.
  void inverse(std::span<const Complex> in, std::span<double> out) const;

  bool same_as(const Grid& other) const noexcept;

 private:
  struct Plans;
  Grid(int dim, std::size_t points, double length);

  int dim_;
  std::size_t points_;
  double length_;
  std::size_t size_;
  std::size_t spectral_size_;
  std::vector<double> axis_k_;
  std::vector<std::vector<double>> deriv_k_;
  std::vector<double> k2_;
  std::vector<unsigned char> mask_;
  std::vector<double> weight_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace epsim
