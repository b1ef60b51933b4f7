#include <gtest/gtest.h>

#include "bdsmp/builders.hpp"
#include "bdsmp/diffusion.hpp"
#include "bdsmp/stationary.hpp"

TEST(Diffusion, LogisticCarryingCapacity) {
  const auto d = bdsmp::logistic_drift(0.5, 1.0 / 3.0, 100, [](double) { return 2.0 / 3.0; });
  const auto k = bdsmp::carrying_capacity(d);
  EXPECT_NEAR(k.x, 1.0 / 3.0, 1e-11);
  EXPECT_NEAR(k.K, 100.0 / 3.0, 1e-9);
  const auto g = bdsmp::gaussian_quasi_approx(d, 0.0);
  EXPECT_NEAR(g.mean, 100.0 / 3.0, 1e-9);
  EXPECT_NEAR(g.variance, 200.0 / 3.0, 1e-6);
  EXPECT_NEAR(std::sqrt(g.variance), 8.165, 5e-4);
  const auto d2 = bdsmp::logistic_drift(0.5, 1.0 / 3.0, 200, [](double) { return 2.0 / 3.0; });
  const auto g2 = bdsmp::gaussian_quasi_approx(d2, 0.0);
  EXPECT_NEAR(g2.variance, 2 * g.variance, 1e-6);
  EXPECT_NEAR(g2.mean, 2 * g.mean, 1e-8);
}

TEST(Diffusion, SISDriftMatchesHandForm) {
  const auto d = bdsmp::sis_drift({100, 1.5, 1.0});
  for (double x : {0.1, 0.4, 0.9}) EXPECT_NEAR(d.m(x, 0.0), 0.5 * x * (1 - 3 * x), 1e-15);
  EXPECT_NEAR(d.v(1.0 / 3.0, 0.0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(bdsmp::carrying_capacity(d).K, 100.0 / 3.0, 1e-9);
}

TEST(Diffusion, ThetaLogistic) {
  bdsmp::PopDynParams p;
  p.N = 100;
  p.lambda = 2.0;
  p.alpha1 = 0.4;
  p.alpha2 = 0.6;
  p.theta1 = p.theta3 = 1.7;
  const auto d = bdsmp::population_drift(p);
  const double want = std::pow((2.0 - 1) / (0.4 * 2.0 + 0.6), 1 / 1.7);
  EXPECT_NEAR(bdsmp::carrying_capacity(d).x, want, 1e-11);
  double prev = 1.0;
  for (double eps : {0.5, 0.1, 0.01, 0.0}) {
    const double x = bdsmp::carrying_capacity(d, eps).x;
    EXPECT_LE(x, prev + 1e-12);
    EXPECT_GE(x, want - 1e-11);
    prev = x;
  }
}

TEST(Diffusion, NoSignChange) {
  const auto d = bdsmp::sis_drift({100, 0.5, 1.0});
  EXPECT_THROW(bdsmp::carrying_capacity(d), bdsmp::Error);
}

TEST(Diffusion, GaussianApproachesExactQuasi) {
  auto tv_at = [](int N) {
    const auto im = bdsmp::sis_model({N, 1.5, 1.0});
    const auto lim = bdsmp::limiting_conditional_quasi_stationary(bdsmp::from_linear_intensities(im, 0));
    const auto g = bdsmp::gaussian_quasi_approx(bdsmp::sis_drift({N, 1.5, 1.0}), 0.0);
    const auto bins = bdsmp::discretized_normal(g, N);
    double mass = 0.0, tv = 0.0;
    for (int i = 0; i <= N; ++i) {
      mass += bins[static_cast<std::size_t>(i)];
      tv += std::abs(bins[static_cast<std::size_t>(i)] - (i ? lim.at(i) : 0.0));
    }
    EXPECT_GE(mass, 0.999);
    return 0.5 * tv;
  };
  const double a = tv_at(100), b = tv_at(400), c = tv_at(1600);
  EXPECT_LT(b, a);
  EXPECT_LT(c, b);
  EXPECT_LE(c, 0.05);
}

TEST(Diffusion, LogSeries) {
  const auto q = bdsmp::log_series_quasi_approx(0.5, 100);
  double s = 0.0;
  for (double v : q) s += v;
  EXPECT_NEAR(s, 1.0, 1e-12);
  EXPECT_NEAR(q[0], 0.5 / std::log(2.0), 1e-15);
  EXPECT_THROW(bdsmp::log_series_quasi_approx(1.2, 10), bdsmp::Error);
}

TEST(Diffusion, MoranDensityShapes) {
  const auto uni = bdsmp::moran_diffusion_density({100, 1, 1, 0, 0, 0, 0}, 0.0, 100);
  for (double x : {0.05, 0.5, 0.93}) EXPECT_NEAR(uni.density(x), 1.0, 1e-10);
  const auto beta = bdsmp::moran_diffusion_density({100, 5, 5, 0, 0, 0, 0}, 0.0, 100);
  // Beta(5,5) density 630 x^4 (1-x)^4
  for (double x : {0.1, 0.3, 0.5, 0.77}) EXPECT_NEAR(beta.density(x), 630 * std::pow(x, 4) * std::pow(1 - x, 4), 1e-6);
  // singular ends still integrate to one
  const auto sing = bdsmp::moran_diffusion_density({100, 0.3, 0.6, 0, 0, 0, 0}, 0.0, 200);
  EXPECT_NEAR(sing.mass(0.0, 1.0), 1.0, 1e-12);
  const double beta_mass = std::tgamma(0.9) / (std::tgamma(0.3) * std::tgamma(0.6));
  EXPECT_NEAR(sing.density(0.25), beta_mass * std::pow(0.25, -0.4) * std::pow(0.75, -0.7), 1e-4);
  // selection S1 = 10, S2 = -10 moves mass to the right
  const auto neutral = bdsmp::moran_diffusion_density({100, 2, 2, 0, 0, 0, 0}, 0.0, 100);
  const auto skew = bdsmp::moran_diffusion_density({100, 2, 2, 0, 0, 10, -10}, 0.0, 100);
  EXPECT_GT(skew.mass(0.5, 1.0), neutral.mass(0.5, 1.0) + 0.1);
  double total = 0.0;
  for (double b : skew.bins(100)) total += b;
  EXPECT_NEAR(total, 1.0, 1e-9);
  EXPECT_THROW(bdsmp::moran_diffusion_density({100, 0, 0, 0, 0, 0, 0}, 0.0, 10), bdsmp::Error);
}

TEST(Diffusion, Fixation) {
  bdsmp::MoranParams p{100, 0, 0, 100, 100, 0, 0};
  EXPECT_DOUBLE_EQ(bdsmp::fixation_probabilities(p, 50).PN, 0.5);
  for (int i : {0, 1, 17, 100}) EXPECT_EQ(bdsmp::fixation_probabilities(p, i).PN, i / 100.0);
  EXPECT_DOUBLE_EQ(bdsmp::fixation_probabilities(p, 50).piN, 0.5);
  // multiplicative fitness (1 + s1)(1 + s2) = 1, N = 2, s2 = 1
  bdsmp::MoranParams mult{2, 0, 0, 1, 1, -1, 2};
  EXPECT_NEAR(bdsmp::fixation_probabilities(mult, 1).PN, 1.0 / 3.0, 1e-15);
  // tiny s2 stays accurate
  const double s2 = 1e-6;
  bdsmp::MoranParams tiny{100, 0, 0, 1, 1, 100 * (1 / (1 + s2) - 1), 100 * s2};
  const double pn = bdsmp::fixation_probabilities(tiny, 30).PN;
  const double want = std::expm1(30 * std::log1p(s2)) / std::expm1(100 * std::log1p(s2));
  EXPECT_NEAR(pn, want, 1e-14);
  EXPECT_NEAR(pn, 0.3, 2e-5);
  EXPECT_THROW(bdsmp::fixation_probabilities({100, 0, 0, 1, 1, 3, 3}, 10), bdsmp::Error);
  EXPECT_THROW(bdsmp::fixation_probabilities({100, 1, 0, 1, 1, 0, 0}, 10), bdsmp::Error);
}

TEST(Diffusion, FixationSplitMatchesExpansion) {
  for (auto [s1, s2] : {std::pair{0.0, 0.0}, {10.0, -10.0}, {10.0, 10.0}, {-10.0, -10.0}}) {
    const auto p = bdsmp::fig3_params(s1, s2);
    const auto d = bdsmp::stationary_expansion(bdsmp::from_linear_intensities(bdsmp::moran_model(p), 0), 0);
    const double piN = bdsmp::limiting_fixation_split(p);
    // closed form uses the exp(-(S1 - S2)/2) large-N weight
    EXPECT_NEAR(d.per_state.at(100).at(0), piN, 0.05) << s1 << "," << s2;
  }
  EXPECT_DOUBLE_EQ(bdsmp::limiting_fixation_split({100, 0, 0, 50, 50, 3, 3}), 0.5);
}

TEST(Diffusion, BoundaryOccupancy) {
  const auto m = bdsmp::from_linear_intensities(bdsmp::sis_model({20, 0.5, 1.0}), 0);
  double prev = 0.0;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-5}) {
    const double p0 = bdsmp::boundary_occupancy_first_order(m, eps);
    EXPECT_GT(p0, prev);
    prev = p0;
  }
  EXPECT_NEAR(prev, 1.0, 1e-3);
  // slope (1 - pi_0)/eps -> g1 E_10(0)
  const double eps = 1e-6;
  const double slope = (1 - bdsmp::exact_distributions(m, eps).stationary.per_state.at(0)) / eps;
  const double want = 20 * bdsmp::expected_absorption_from_one(m, 1e-12);
  EXPECT_NEAR(slope, want, 0.05 * want);
  const auto big = bdsmp::from_linear_intensities(bdsmp::sis_model({100, 1.5, 1.0}), 0);
  EXPECT_LT(bdsmp::boundary_occupancy_first_order(big, 1e-3), 0.05);
  EXPECT_GT(bdsmp::boundary_occupancy_first_order(big, 1e-6), 0.9);
}
