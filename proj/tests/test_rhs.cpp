#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "epsim/initial_data.hpp"
#include "epsim/rhs.hpp"
#include "epsim/spectral.hpp"

using namespace epsim;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class F>
ScalarField sample(const GridPtr& g, F&& f) {
  ScalarField out(g);
  const std::size_t n = g->points();
  for (std::size_t flat = 0; flat < g->size(); ++flat) {
    const double x = g->coordinate(g->dim() == 1 ? flat : flat / n);
    const double y = g->dim() == 1 ? 0.0 : g->coordinate(flat % n);
    out[flat] = f(x, y);
  }
  return out;
}

VelocityField band_limited(const GridPtr& g, std::uint64_t seed, int band = 6) {
  auto u = random_band_limited(g, seed, band);
  for (std::size_t i = 0; i < u.dim(); ++i) u[i] = dealias(u[i]);
  return u;
}

double relative_l2(const MomentumField& a, const MomentumField& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    num += std::pow(l2_norm(a[i] - b[i]), 2);
    den += std::pow(l2_norm(b[i]), 2);
  }
  return std::sqrt(num / den);
}

double sup_all(const MomentumField& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) s = std::max(s, sup_norm(m[i]));
  return s;
}

}  // namespace

TEST(Rhs, ZeroAndConstantFieldsGiveZero) {
  const auto g = Grid::create(2, 16, kTwoPi);
  const VelocityField zero(g);
  const VelocityField constant({sample(g, [](double, double) { return 1.3; }),
                                sample(g, [](double, double) { return -0.4; })});
  for (const auto* u : {&zero, &constant}) {
    for (double a : {0.0, 0.7}) {
      const SimulationState s{0.0, *u, a};
      EXPECT_LT(sup_all(rhs_convective(s)), 1e-14);
      EXPECT_LT(sup_all(rhs_conservative(s)), 1e-14);
    }
    const auto z = rhs_zero_alpha(*u);
    EXPECT_LT(std::max(sup_norm(z[0]), sup_norm(z[1])), 1e-14);
  }
}

// Zero-alpha system in 1D on u = sin x: -d(u^2) - d(u^2)/2 = -3 sin x cos x.
TEST(Rhs, ZeroAlphaSineClosedForm) {
  const auto g = Grid::create(1, 32, kTwoPi);
  const VelocityField u({sample(g, [](double x, double) { return std::sin(x); })});
  const auto expected = sample(g, [](double x, double) { return -3.0 * std::sin(x) * std::cos(x); });
  EXPECT_LT(sup_norm(rhs_zero_alpha(u)[0] - expected), 1e-13);
  EXPECT_LT(sup_norm(rhs_convective(SimulationState{0.0, u, 0.0})[0] - expected), 1e-13);
}

// 1D with alpha = 1 and u = sin x: m = 2 sin x, so
// -(u m_x + 2 u_x m) = -(2 sin x cos x + 4 sin x cos x) = -6 sin x cos x.
TEST(Rhs, OneDimensionalAlphaClosedForm) {
  const auto g = Grid::create(1, 32, kTwoPi);
  const SimulationState s{0.0, VelocityField({sample(g, [](double x, double) { return std::sin(x); })}), 1.0};
  const auto expected = sample(g, [](double x, double) { return -6.0 * std::sin(x) * std::cos(x); });
  EXPECT_LT(sup_norm(rhs_convective(s)[0] - expected), 1e-12);
  EXPECT_LT(sup_norm(rhs_conservative(s)[0] - expected), 1e-12);
}

// u = (sin y, 0), alpha = 1: m = (2 sin y, 0); only the transpose-gradient
// term survives, giving dm/dt = (0, -2 sin y cos y).
TEST(Rhs, ShearClosedForm) {
  const auto g = Grid::create(2, 32, kTwoPi);
  const SimulationState s{0.0,
                          VelocityField({sample(g, [](double, double y) { return std::sin(y); }),
                                         ScalarField(g)}),
                          1.0};
  const auto expected = sample(g, [](double, double y) { return -2.0 * std::sin(y) * std::cos(y); });
  for (const auto& r : {rhs_convective(s), rhs_conservative(s)}) {
    EXPECT_LT(sup_norm(r[0]), 1e-13);
    EXPECT_LT(sup_norm(r[1] - expected), 1e-13);
  }
}

TEST(Rhs, ConvectiveMatchesConservativeOnRandomFields) {
  for (int dim : {1, 2}) {
    const auto g = Grid::create(dim, 64, kTwoPi);
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      const SimulationState s{0.0, band_limited(g, seed, 10), 0.1 * static_cast<double>(seed)};
      EXPECT_LE(relative_l2(rhs_conservative(s), rhs_convective(s)), 1e-10) << dim << " " << seed;
    }
  }
}

TEST(Rhs, ZeroAlphaConsistency) {
  const auto g = Grid::create(2, 64, 5.0);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto u = band_limited(g, seed, 8);
    const auto conv = rhs_convective(SimulationState{0.0, u, 0.0});
    const auto z = rhs_zero_alpha(u);
    const MomentumField zm(z.components(), 0.0);
    EXPECT_LE(relative_l2(conv, zm), 1e-10);
  }
}

TEST(Rhs, EnergyAndEntropyNeutral) {
  const auto g = Grid::create(2, 64, kTwoPi);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto u = band_limited(g, seed, 9);
    const auto z = rhs_zero_alpha(u);
    const auto c = rhs_convective(SimulationState{0.0, u, 0.4});
    double entropy = 0.0, energy = 0.0, es = 0.0, cs = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      entropy += inner(u[i], z[i]);
      energy += inner(u[i], c[i]);
      es += l2_norm(u[i]) * l2_norm(z[i]);
      cs += l2_norm(u[i]) * l2_norm(c[i]);
    }
    EXPECT_LT(std::abs(entropy) / es, 1e-12);
    EXPECT_LT(std::abs(energy) / cs, 1e-12);
  }
}

TEST(Stress, OneDimensionalClosedForm) {
  const auto g = Grid::create(1, 32, kTwoPi);
  const VelocityField u({sample(g, [](double x, double) { return std::sin(x); })});
  const auto t0 = stress_symmetric(u, 0.0);
  EXPECT_LT(sup_norm(t0(0, 0) - sample(g, [](double x, double) { return 1.5 * std::sin(x) * std::sin(x); })),
            1e-14);
  // With alpha the gradient products cancel except the isotropic part.
  const auto t1 = stress_symmetric(u, 2.0);
  const auto expected = sample(g, [](double x, double) {
    return 1.5 * std::sin(x) * std::sin(x) + std::cos(x) * std::cos(x);
  });
  EXPECT_LT(sup_norm(t1(0, 0) - expected), 1e-13);
}

TEST(Stress, SymmetricTraceIdentityAndRemainder) {
  const auto g = Grid::create(2, 32, kTwoPi);
  const auto u = band_limited(g, 5, 6);
  const double a = 0.3;
  const StressTensor st = stress_tensor(u, a);
  const auto& t = st.symmetric_part;
  double scale = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) scale = std::max(scale, sup_norm(t(i, j)));
  }
  EXPECT_LE(sup_norm(t(0, 1) - t(1, 0)), 1e-12 * scale);

  // Gradient taken component by component, independent of velocity_gradient.
  ScalarField speed2(g), grad2(g);
  for (std::size_t i = 0; i < 2; ++i) {
    speed2 += u[i] * u[i];
    for (int k = 0; k < 2; ++k) {
      const auto d = partial_derivative(u[i], k);
      grad2 += d * d;
    }
  }
  const ScalarField expected = 2.0 * speed2 + a * grad2;  // (d+2)/2 = 2, a d / 2 = a
  EXPECT_LE(sup_norm(t.trace() - expected), 1e-12 * sup_norm(expected));

  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t k = 0; k < 2; ++k) {
        const auto direct = u[j] * partial_derivative(u[i], static_cast<int>(k));
        EXPECT_LT(sup_norm(st.inner(i, j, k) - direct), 1e-13);
      }
    }
  }
  EXPECT_EQ(st.alpha, a);
}

TEST(Stress, ZeroFieldGivesZeroMatrix) {
  const auto g = Grid::create(2, 16, kTwoPi);
  const auto t = stress_symmetric(VelocityField(g), 1.0);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(sup_norm(t(i, j)), 0.0);
  }
}

TEST(FluxJacobian, ReferenceMatrix) {
  const std::vector<double> u{1.0, 0.0, 0.0}, e{1.0, 0.0, 0.0};
  const Eigen::MatrixXd a = flux_jacobian(u, e);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3, 3);
  expected(0, 0) = 3.0;
  expected(1, 1) = 1.0;
  expected(2, 2) = 1.0;
  EXPECT_EQ(a, expected);
  const auto ev = flux_eigenvalues(u, e);
  EXPECT_EQ(ev, (std::vector<double>{1.0, 1.0, 3.0}));
}

TEST(FluxJacobian, ZeroVelocity) {
  const std::vector<double> u{0.0, 0.0, 0.0}, e{0.0, 1.0, 0.0};
  EXPECT_EQ(flux_jacobian(u, e), Eigen::MatrixXd::Zero(3, 3));
  for (double v : flux_eigenvalues(u, e)) EXPECT_EQ(v, 0.0);
}

TEST(FluxJacobian, RandomMatchesEigensolver) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int d = 1; d <= 3; ++d) {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> u(d), e(d);
      double norm = 0.0;
      for (int i = 0; i < d; ++i) {
        u[i] = n(rng);
        e[i] = n(rng);
        norm += e[i] * e[i];
      }
      for (double& x : e) x /= std::sqrt(norm);
      const Eigen::MatrixXd a = flux_jacobian(u, e);
      EXPECT_EQ(a, a.transpose());
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
      const auto closed = flux_eigenvalues(u, e);
      ASSERT_EQ(closed.size(), static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) EXPECT_NEAR(solver.eigenvalues()(i), closed[i], 1e-10);
    }
  }
}

TEST(FluxJacobian, RejectsBadInput) {
  const std::vector<double> u{1.0, 2.0, 3.0};
  EXPECT_THROW(flux_jacobian(u, std::vector<double>{1.0, 1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(flux_jacobian(u, std::vector<double>{1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(flux_jacobian(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(flux_jacobian(std::vector<double>(4, 0.0), std::vector<double>{1.0, 0.0, 0.0, 0.0}),
               std::invalid_argument);
}
