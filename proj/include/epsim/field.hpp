#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "epsim/grid.hpp"

namespace epsim {

/// Real values on a grid. Value-semantic; the grid itself is shared.
class ScalarField {
 public:
  explicit ScalarField(GridPtr grid);
  ScalarField(GridPtr grid, std::vector<double> values);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  ScalarField& operator+=(const ScalarField& rhs);
  ScalarField& operator-=(const ScalarField& rhs);
  ScalarField& operator*=(double s) noexcept;
  /// Pointwise product.
  ScalarField& operator*=(const ScalarField& rhs);

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
ScalarField operator-(ScalarField a);

/// Half-layout Fourier coefficients of a real field (unnormalized forward
/// convention: coefficient = sum over grid points).
class Spectrum {
 public:
  explicit Spectrum(GridPtr grid);
  Spectrum(GridPtr grid, std::vector<Complex> coeffs);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  std::span<Complex> coeffs() noexcept { return coeffs_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  Complex& operator[](std::size_t i) noexcept { return coeffs_[i]; }
  const Complex& operator[](std::size_t i) const noexcept { return coeffs_[i]; }

  Spectrum& operator+=(const Spectrum& rhs);
  Spectrum& operator-=(const Spectrum& rhs);
  Spectrum& operator*=(double s) noexcept;

 private:
  GridPtr grid_;
  std::vector<Complex> coeffs_;
};

Spectrum operator+(Spectrum a, const Spectrum& b);
Spectrum operator-(Spectrum a, const Spectrum& b);
Spectrum operator*(double s, Spectrum a);

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& f);

/// d x d matrix of fields, row-major. Used for gradients, the deformation
/// tensor and the symmetric stress.
class FieldMatrix {
 public:
  FieldMatrix(GridPtr grid, std::size_t rows);

  std::size_t rows() const noexcept { return rows_; }
  const Grid& grid() const noexcept { return entries_.front().grid(); }
  ScalarField& operator()(std::size_t i, std::size_t j) { return entries_[i * rows_ + j]; }
  const ScalarField& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * rows_ + j];
  }
  ScalarField trace() const;

 private:
  std::size_t rows_;
  std::vector<ScalarField> entries_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* what);

/// Torus quadrature: sum times cell volume (spectrally exact for
/// band-limited integrands).
double integral(const ScalarField& f);
double mean(const ScalarField& f);
double inner(const ScalarField& a, const ScalarField& b);
double l2_norm(const ScalarField& f);
double sup_norm(const ScalarField& f);
double l1_norm(const ScalarField& f);
bool all_finite(std::span<const double> values) noexcept;
bool all_finite(std::span<const Complex> values) noexcept;

/// ||f||_{L2}^2 evaluated from the Fourier side.
double l2_norm_squared_spectral(const Spectrum& f);

}  // namespace epsim
