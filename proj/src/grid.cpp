#include "epsim/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace epsim {

namespace {

// The FFTW planner is not thread-safe; execution with the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

struct Grid::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  Plans(int dim, int n) {
    std::lock_guard lock(planner_mutex());
    const std::size_t real_size = dim == 1 ? n : static_cast<std::size_t>(n) * n;
    const std::size_t spec_size =
        dim == 1 ? n / 2 + 1 : static_cast<std::size_t>(n) * (n / 2 + 1);
    double* r = fftw_alloc_real(real_size);
    fftw_complex* c = fftw_alloc_complex(spec_size);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (dim == 1) {
      r2c = fftw_plan_dft_r2c_1d(n, r, c, flags);
      c2r = fftw_plan_dft_c2r_1d(n, c, r, flags);
    } else {
      r2c = fftw_plan_dft_r2c_2d(n, n, r, c, flags);
      c2r = fftw_plan_dft_c2r_2d(n, n, c, r, flags);
    }
    fftw_free(r);
    fftw_free(c);
    if (r2c == nullptr || c2r == nullptr) throw std::runtime_error("FFTW planning failed");
  }

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
  }
};

GridPtr Grid::create(int dim, std::size_t points, double length) {
  return GridPtr(new Grid(dim, points, length));
}

Grid::Grid(int dim, std::size_t points, double length)
    : dim_(dim), points_(points), length_(length) {
  if (dim != 1 && dim != 2) {
    throw std::invalid_argument("grid dim must be 1 or 2, got " + std::to_string(dim));
  }
  if (points < 8 || !is_power_of_two(points)) {
    throw std::invalid_argument("grid points must be a power of two >= 8, got " +
                                std::to_string(points));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("grid length must be positive and finite");
  }

  const std::size_t n = points_;
  const std::size_t nh = n / 2 + 1;
  size_ = dim_ == 1 ? n : n * n;
  spectral_size_ = dim_ == 1 ? nh : n * nh;

  const double k0 = 2.0 * std::numbers::pi / length_;
  axis_k_.resize(n);
  for (std::size_t i = 0; i < n; ++i) axis_k_[i] = k0 * static_cast<double>(mode_number(i));

  const auto nyquist = static_cast<long>(n / 2);
  auto in_band = [n](long mode) { return 3 * std::labs(mode) <= static_cast<long>(n); };

  deriv_k_.assign(dim_, std::vector<double>(spectral_size_, 0.0));
  k2_.resize(spectral_size_);
  mask_.resize(spectral_size_);
  weight_.resize(spectral_size_);

  if (dim_ == 1) {
    for (std::size_t s = 0; s < nh; ++s) {
      const auto mode = static_cast<long>(s);
      const double k = k0 * static_cast<double>(mode);
      deriv_k_[0][s] = mode == nyquist ? 0.0 : k;
      k2_[s] = k * k;
      mask_[s] = in_band(mode) ? 1 : 0;
      weight_[s] = (s == 0 || mode == nyquist) ? 1.0 : 2.0;
    }
  } else {
    for (std::size_t i0 = 0; i0 < n; ++i0) {
      const long m0 = mode_number(i0);
      const double kx = k0 * static_cast<double>(m0);
      for (std::size_t i1 = 0; i1 < nh; ++i1) {
        const std::size_t s = i0 * nh + i1;
        const auto m1 = static_cast<long>(i1);
        const double ky = k0 * static_cast<double>(m1);
        deriv_k_[0][s] = (m0 == -nyquist) ? 0.0 : kx;
        deriv_k_[1][s] = (m1 == nyquist) ? 0.0 : ky;
        k2_[s] = kx * kx + ky * ky;
        mask_[s] = (in_band(m0) && in_band(m1)) ? 1 : 0;
        weight_[s] = (i1 == 0 || m1 == nyquist) ? 1.0 : 2.0;
      }
    }
  }

  plans_ = std::make_unique<Plans>(dim_, static_cast<int>(n));
}

Grid::~Grid() = default;

double Grid::cell_volume() const noexcept { return std::pow(spacing(), dim_); }

double Grid::volume() const noexcept { return std::pow(length_, dim_); }

double Grid::coordinate(std::size_t i) const noexcept {
  return -0.5 * length_ + static_cast<double>(i) * spacing();
}

std::size_t Grid::origin_index() const noexcept {
  const std::size_t c = points_ / 2;
  return dim_ == 1 ? c : c * points_ + c;
}

std::size_t Grid::reflect_index(std::size_t flat) const noexcept {
  const std::size_t n = points_;
  auto mirror = [n](std::size_t i) { return (n - i) % n; };
  if (dim_ == 1) return mirror(flat);
  return mirror(flat / n) * n + mirror(flat % n);
}

std::vector<std::size_t> Grid::unflatten(std::size_t flat) const {
  if (dim_ == 1) return {flat};
  return {flat / points_, flat % points_};
}

long Grid::mode_number(std::size_t i) const noexcept {
  const auto n = static_cast<long>(points_);
  const auto idx = static_cast<long>(i);
  return idx < n / 2 ? idx : idx - n;
}

std::span<const double> Grid::derivative_k(int axis) const {
  if (axis < 0 || axis >= dim_) {
    throw std::invalid_argument("axis " + std::to_string(axis) + " out of range for dim " +
                                std::to_string(dim_));
  }
  return deriv_k_[static_cast<std::size_t>(axis)];
}

double Grid::k_max(bool dealiased) const noexcept {
  const double k = std::numbers::pi / length_ * static_cast<double>(points_);
  return dealiased ? k * (2.0 / 3.0) : k;
}

void Grid::forward(std::span<const double> in, std::span<Complex> out) const {
  if (in.size() != size_ || out.size() != spectral_size_) {
    throw std::invalid_argument("forward transform size mismatch");
  }
  // r2c does not modify its input.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void Grid::inverse(std::span<const Complex> in, std::span<double> out) const {
  if (in.size() != spectral_size_ || out.size() != size_) {
    throw std::invalid_argument("inverse transform size mismatch");
  }
  // c2r destroys its input.
  std::vector<Complex> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  const double scale = 1.0 / static_cast<double>(size_);
  for (double& v : out) v *= scale;
}

bool Grid::same_as(const Grid& other) const noexcept {
  return this == &other ||
         (dim_ == other.dim_ && points_ == other.points_ && length_ == other.length_);
}

}  // namespace epsim
