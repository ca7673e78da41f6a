#include "epsim/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "epsim/diagnostics.hpp"
#include "epsim/initial_data.hpp"
#include "epsim/rhs.hpp"
#include "epsim/spectral.hpp"

namespace epsim {

namespace {

constexpr std::size_t kPoints = 64;
constexpr int kBand = 8;
constexpr double kAlpha = 0.5;

double relative_l2_difference(const MomentumField& a, const MomentumField& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = l2_norm(a[i] - b[i]);
    const double r = l2_norm(b[i]);
    num += d * d;
    den += r * r;
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

InvariantCheck make(std::string name, double value, double tol) {
  return InvariantCheck{std::move(name), value, tol, value <= tol};
}

}  // namespace

std::vector<InvariantCheck> run_invariant_suite(std::uint64_t seed, std::size_t fields) {
  const GridPtr grid = Grid::create(2, kPoints, 2.0 * std::acos(-1.0));
  double forms = 0.0, trace = 0.0, helmholtz = 0.0, div_identity = 0.0, energy = 0.0;

  for (std::size_t f = 0; f < fields; ++f) {
    VelocityField u = random_band_limited(grid, seed + f, kBand);
    for (std::size_t i = 0; i < u.dim(); ++i) u[i] = dealias(u[i]);
    const SimulationState s{0.0, u, kAlpha};

    const MomentumField conv = rhs_convective(s);
    forms = std::max(forms, relative_l2_difference(conv, rhs_conservative(s)));

    // Trace of the symmetric stress against (d+2)/2 |u|^2 + a d/2 |grad u|^2.
    const FieldMatrix t = stress_symmetric(u, kAlpha);
    const FieldMatrix g = velocity_gradient(u);
    const double d = static_cast<double>(u.dim());
    ScalarField speed2(grid), grad2(grid);
    for (std::size_t i = 0; i < u.dim(); ++i) {
      speed2 += u[i] * u[i];
      for (std::size_t j = 0; j < u.dim(); ++j) grad2 += g(i, j) * g(i, j);
    }
    const ScalarField expected = 0.5 * (d + 2.0) * speed2 + (0.5 * kAlpha * d) * grad2;
    trace = std::max(trace, sup_norm(t.trace() - expected) / sup_norm(expected));

    for (std::size_t i = 0; i < u.dim(); ++i) {
      const ScalarField back = helmholtz_invert(helmholtz_apply(u[i], kAlpha), kAlpha);
      helmholtz = std::max(helmholtz, sup_norm(back - u[i]) / sup_norm(u[i]));
    }

    const VelocityField du = rhs_zero_alpha(u);
    const ScalarField res = divergence_evolution_residual(u, du);
    div_identity = std::max(div_identity, sup_norm(res) / sup_norm(divergence(du)));

    // The tendency does no work: int u . dm/dt = 0.
    double work = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < u.dim(); ++i) {
      work += inner(u[i], conv[i]);
      scale += l2_norm(u[i]) * l2_norm(conv[i]);
    }
    energy = std::max(energy, std::abs(work) / scale);
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double eig = 0.0;
  for (int n = 0; n < 100; ++n) {
    std::vector<double> uv(3), ev(3);
    double norm = 0.0;
    for (int i = 0; i < 3; ++i) {
      uv[i] = normal(rng);
      ev[i] = normal(rng);
      norm += ev[i] * ev[i];
    }
    for (double& x : ev) x /= std::sqrt(norm);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(flux_jacobian(uv, ev));
    const auto closed = flux_eigenvalues(uv, ev);
    for (int i = 0; i < 3; ++i) eig = std::max(eig, std::abs(solver.eigenvalues()(i) - closed[i]));
  }

  return {
      make("form_equivalence", forms, 1e-10),
      make("trace_identity", trace, 1e-12),
      make("helmholtz_round_trip", helmholtz, 1e-12),
      make("divergence_identity", div_identity, 1e-8),
      make("energy_neutral_tendency", energy, 1e-10),
      make("flux_eigenvalues", eig, 1e-10),
  };
}

}  // namespace epsim
