#include "epsim/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace epsim {

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!a.same_as(b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

ScalarField::ScalarField(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("ScalarField: null grid");
  values_.assign(grid_->size(), 0.0);
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("ScalarField: null grid");
  if (values_.size() != grid_->size()) throw std::invalid_argument("ScalarField: size mismatch");
}

ScalarField& ScalarField::operator+=(const ScalarField& rhs) {
  require_same_grid(*grid_, rhs.grid(), "ScalarField +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += rhs.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& rhs) {
  require_same_grid(*grid_, rhs.grid(), "ScalarField -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= rhs.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) noexcept {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField& ScalarField::operator*=(const ScalarField& rhs) {
  require_same_grid(*grid_, rhs.grid(), "ScalarField *=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= rhs.values_[i];
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, const ScalarField& b) { return a *= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }
ScalarField operator-(ScalarField a) { return a *= -1.0; }

Spectrum::Spectrum(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("Spectrum: null grid");
  coeffs_.assign(grid_->spectral_size(), Complex{});
}

Spectrum::Spectrum(GridPtr grid, std::vector<Complex> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (!grid_) throw std::invalid_argument("Spectrum: null grid");
  if (coeffs_.size() != grid_->spectral_size()) {
    throw std::invalid_argument("Spectrum: size mismatch");
  }
}

Spectrum& Spectrum::operator+=(const Spectrum& rhs) {
  require_same_grid(*grid_, rhs.grid(), "Spectrum +=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

Spectrum& Spectrum::operator-=(const Spectrum& rhs) {
  require_same_grid(*grid_, rhs.grid(), "Spectrum -=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

Spectrum& Spectrum::operator*=(double s) noexcept {
  for (Complex& c : coeffs_) c *= s;
  return *this;
}

Spectrum operator+(Spectrum a, const Spectrum& b) { return a += b; }
Spectrum operator-(Spectrum a, const Spectrum& b) { return a -= b; }
Spectrum operator*(double s, Spectrum a) { return a *= s; }

Spectrum forward(const ScalarField& f) {
  Spectrum out(f.grid_ptr());
  f.grid().forward(f.values(), out.coeffs());
  return out;
}

ScalarField inverse(const Spectrum& f) {
  ScalarField out(f.grid_ptr());
  f.grid().inverse(f.coeffs(), out.values());
  return out;
}

FieldMatrix::FieldMatrix(GridPtr grid, std::size_t rows) : rows_(rows) {
  entries_.reserve(rows * rows);
  for (std::size_t i = 0; i < rows * rows; ++i) entries_.emplace_back(grid);
}

ScalarField FieldMatrix::trace() const {
  ScalarField t = (*this)(0, 0);
  for (std::size_t i = 1; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double integral(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.grid().cell_volume();
}

double mean(const ScalarField& f) { return integral(f) / f.grid().volume(); }

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "inner");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid().cell_volume();
}

double l2_norm(const ScalarField& f) { return std::sqrt(inner(f, f)); }

double sup_norm(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double l1_norm(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += std::abs(v);
  return s * f.grid().cell_volume();
}

bool all_finite(std::span<const double> values) noexcept {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

bool all_finite(std::span<const Complex> values) noexcept {
  return std::all_of(values.begin(), values.end(), [](const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

double l2_norm_squared_spectral(const Spectrum& f) {
  const Grid& g = f.grid();
  const auto w = g.hermitian_weight();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * std::norm(f[i]);
  const double n = static_cast<double>(g.size());
  return s * g.volume() / (n * n);
}

}  // namespace epsim
