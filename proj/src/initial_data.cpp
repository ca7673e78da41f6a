#include "epsim/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

#include "epsim/diagnostics.hpp"
#include "epsim/spectral.hpp"

namespace epsim {

std::string_view to_string(InitialDataKind k) {
  switch (k) {
    case InitialDataKind::zero:
      return "zero";
    case InitialDataKind::gradient_cosine:
      return "gradient_cosine";
    case InitialDataKind::odd_random:
      return "odd_random";
    case InitialDataKind::peakon:
      return "peakon";
    case InitialDataKind::gaussian_shear:
      return "gaussian_shear";
  }
  return "unknown";
}

bool parse_initial_data_kind(std::string_view name, InitialDataKind& out) {
  for (auto k : {InitialDataKind::zero, InitialDataKind::gradient_cosine,
                 InitialDataKind::odd_random, InitialDataKind::peakon,
                 InitialDataKind::gaussian_shear}) {
    if (name == to_string(k)) {
      out = k;
      return true;
    }
  }
  return false;
}

namespace {

template <class F>
ScalarField sample(const GridPtr& grid, F&& f) {
  ScalarField out(grid);
  const std::size_t n = grid->points();
  if (grid->dim() == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(grid->coordinate(i), 0.0);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] = f(grid->coordinate(i), grid->coordinate(j));
    }
  }
  return out;
}

void rescale_sup(VelocityField& u, double amplitude) {
  const double s = sup_norm(u);
  if (s == 0.0) return;
  for (std::size_t i = 0; i < u.dim(); ++i) u[i] *= amplitude / s;
}

VelocityField gradient_cosine(const GridPtr& grid, double a) {
  const double k = 2.0 * std::numbers::pi / grid->length();
  if (grid->dim() == 1) {
    return VelocityField({sample(grid, [=](double x, double) { return -a * std::sin(k * x); })});
  }
  auto u1 = sample(grid, [=](double x, double y) { return -a * std::sin(k * x) * std::cos(k * y); });
  auto u2 = sample(grid, [=](double x, double y) { return -a * std::cos(k * x) * std::sin(k * y); });
  return VelocityField({std::move(u1), std::move(u2)});
}

VelocityField gaussian_shear(const GridPtr& grid, double a, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_shear: width must be > 0");
  auto g = [sigma](double s) { return std::exp(-s * s / (2.0 * sigma * sigma)); };
  if (grid->dim() == 1) {
    return VelocityField({sample(grid, [=](double x, double) { return a * g(x); })});
  }
  auto u1 = sample(grid, [=](double, double y) { return a * g(y); });
  auto u2 = sample(grid, [=](double x, double) { return 0.5 * a * g(x); });
  return VelocityField({std::move(u1), std::move(u2)});
}

VelocityField peakon(const GridPtr& grid, double c, double eps, double alpha) {
  if (grid->dim() != 1) throw std::invalid_argument("peakon initial data requires dim = 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("peakon initial data requires alpha > 0");
  if (!(eps > 0.0)) throw std::invalid_argument("peakon: smoothing must be > 0");
  // Continuous transform of c exp(-|x|/sqrt(a)) times the Gaussian kernel,
  // sampled on the torus. The (-1)^n factor moves the peak to x = 0.
  const double width = std::sqrt(alpha);
  const double scale = static_cast<double>(grid->points()) / grid->length();
  Spectrum hat(grid);
  const std::size_t half = grid->half_points();
  for (std::size_t s = 0; s < half; ++s) {
    const double k = 2.0 * std::numbers::pi * static_cast<double>(s) / grid->length();
    const double sign = (s % 2 == 0) ? 1.0 : -1.0;
    hat[s] = sign * scale * 2.0 * c * width / (1.0 + alpha * k * k) *
             std::exp(-0.5 * eps * eps * k * k);
  }
  return VelocityField({inverse(hat)});
}

void normalize_peakon_energy(VelocityField& u, double c, double alpha) {
  const double e = conserved_energy(SimulationState{0.0, u, alpha});
  if (e == 0.0) return;
  const double target = 2.0 * c * c * std::sqrt(alpha);
  u[0] *= std::sqrt(target / e);
}

}  // namespace

VelocityField random_band_limited(const GridPtr& grid, std::uint64_t seed, int band,
                                  double amplitude) {
  if (band < 1) throw std::invalid_argument("random_band_limited: band must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double k0 = 2.0 * std::numbers::pi / grid->length();
  const int dim = grid->dim();

  std::vector<ScalarField> comps;
  for (int c = 0; c < dim; ++c) {
    ScalarField f(grid);
    // Half the mode lattice: (n0, n1) with n1 > 0, or n1 == 0 and n0 >= 0.
    for (int n0 = -band; n0 <= band; ++n0) {
      const int n1_lo = dim == 1 ? 0 : -band;
      const int n1_hi = dim == 1 ? 0 : band;
      for (int n1 = n1_lo; n1 <= n1_hi; ++n1) {
        const bool upper = dim == 1 ? n0 >= 0 : (n1 > 0 || (n1 == 0 && n0 >= 0));
        if (!upper) continue;
        const double a = normal(rng);
        const double b = (n0 == 0 && n1 == 0) ? 0.0 : normal(rng);
        const double decay = 1.0 / (1.0 + n0 * n0 + n1 * n1);
        const double kx = k0 * n0;
        const double ky = k0 * n1;
        f += sample(grid, [=](double x, double y) {
          const double phase = kx * x + ky * y;
          return decay * (a * std::cos(phase) + b * std::sin(phase));
        });
      }
    }
    comps.push_back(std::move(f));
  }
  VelocityField u(std::move(comps));
  rescale_sup(u, amplitude);
  return u;
}

VelocityField make_initial_velocity(const InitialData& data, const GridPtr& grid, double alpha,
                                    bool band_limit) {
  VelocityField u(grid);
  switch (data.kind) {
    case InitialDataKind::zero:
      break;
    case InitialDataKind::gradient_cosine:
      u = gradient_cosine(grid, data.amplitude);
      break;
    case InitialDataKind::odd_random:
      u = reflect_symmetrize(random_band_limited(grid, data.seed, data.band));
      rescale_sup(u, data.amplitude);
      break;
    case InitialDataKind::peakon:
      u = peakon(grid, data.amplitude, data.smoothing, alpha);
      break;
    case InitialDataKind::gaussian_shear:
      u = gaussian_shear(grid, data.amplitude, data.width);
      break;
  }
  if (band_limit) {
    for (std::size_t i = 0; i < u.dim(); ++i) u[i] = dealias(u[i]);
  }
  if (data.kind == InitialDataKind::peakon) normalize_peakon_energy(u, data.amplitude, alpha);
  return u;
}

}  // namespace epsim
