#pragma once

// Large-N approximations: carrying capacities, Gaussian quasi-stationary
// approximations, Moran diffusion densities and fixation probabilities.

#include <cmath>
#include <functional>
#include <vector>

#include "bdsmp/builders.hpp"
#include "bdsmp/error.hpp"
#include "bdsmp/model.hpp"
#include "bdsmp/reduction.hpp"

namespace bdsmp {

// Rescaled drift m(x, eps) and variance v(x, eps) of i/N.
struct DriftSpec {
  std::function<double(double, double)> m;
  std::function<double(double, double)> v;
  int N = 100;
};

inline DriftSpec population_drift(const PopDynParams& p) {
  if (p.perturbation != PopPerturbation::nu_is_eps) fail(Errc::invalid_argument, "drift form assumes immigration nu = eps");
  auto birth = [p](double x, double eps) {
    return p.lambda * x * (1 - p.alpha1 * std::pow(x, p.theta1)) + eps / p.N * (1 - std::pow(x, p.theta2));
  };
  auto death = [p](double x, double) { return p.mu * x * (1 + p.alpha2 * std::pow(x, p.theta3)); };
  return {[=](double x, double e) { return birth(x, e) - death(x, e); },
          [=](double x, double e) { return birth(x, e) + death(x, e); }, p.N};
}

inline DriftSpec sis_drift(const SISParams& p) {
  auto birth = [p](double x, double eps) { return p.lambda * x * (1 - x) + eps * (1 - x); };
  auto death = [p](double x, double) { return p.mu * x; };
  return {[=](double x, double e) { return birth(x, e) - death(x, e); },
          [=](double x, double e) { return birth(x, e) + death(x, e); }, p.N};
}

// m(x) = r x (1 - x / x0) with a user variance function.
inline DriftSpec logistic_drift(double r, double x0, int N, std::function<double(double)> v) {
  return {[=](double x, double) { return r * x * (1 - x / x0); }, [v](double x, double) { return v(x); }, N};
}

struct CarryingCapacity {
  double x = 0.0;
  double K = 0.0;
};

inline CarryingCapacity carrying_capacity(const DriftSpec& d, double eps = 0.0) {
  double lo = 1e-10, hi = 1.0;
  if (!(d.m(lo, eps) > 0.0) || !(d.m(hi, eps) < 0.0)) fail(Errc::no_sign_change, "drift does not change sign on (0,1)");
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (d.m(mid, eps) > 0.0 ? lo : hi) = mid;
  }
  const double x = 0.5 * (lo + hi);
  return {x, d.N * x};
}

struct GaussianApprox {
  double mean = 0.0;
  double variance = 0.0;
};

inline GaussianApprox gaussian_quasi_approx(const DriftSpec& d, double eps) {
  const double x = carrying_capacity(d, eps).x;
  const double h = 1e-6 * std::max(1.0, std::abs(x));
  const double slope = (d.m(x + h, eps) - d.m(x - h, eps)) / (2 * h);
  if (std::abs(slope) < 1e-10) fail(Errc::degenerate_derivative, "drift derivative vanishes at the carrying capacity");
  return {d.N * x, d.N * d.v(x, eps) / (2 * std::abs(slope))};
}

// Normal mass on the bins [max(0,i-1/2), min(N,i+1/2)] for i = 0..N.
inline std::vector<double> discretized_normal(const GaussianApprox& g, int N) {
  const double sd = std::sqrt(g.variance);
  auto cdf = [&](double y) { return 0.5 * std::erfc(-(y - g.mean) / (sd * std::sqrt(2.0))); };
  std::vector<double> out;
  for (int i = 0; i <= N; ++i) out.push_back(cdf(std::min<double>(N, i + 0.5)) - cdf(std::max(0.0, i - 0.5)));
  return out;
}

// Log-series shape of the quasi-stationary distribution when R0 < 1, states 1..N.
inline std::vector<double> log_series_quasi_approx(double R0, int N) {
  if (!(R0 > 0 && R0 < 1)) fail(Errc::invalid_argument, "log-series form needs 0 < R0 < 1");
  std::vector<double> out;
  const double c = 1.0 / std::abs(std::log(1 - R0));
  for (int i = 1; i <= N; ++i) out.push_back(c * std::pow(R0, i) / i);
  return out;
}

// Stationary diffusion density of the Moran allele frequency,
// f(x) ~ (1-x)^(U1-1) x^(U2-1) exp(S/2 x^2 - S2 x) with S = S1 + S2.
class MoranDensity {
 public:
  MoranDensity(const MoranParams& p, double eps, int grid)
      : U1_(p.C1 + p.D1 * eps), U2_(p.C2 + p.D2 * eps), S1_(p.S1), S2_(p.S2), panels_(10 * std::max(grid, 1)) {
    if (!(U1_ > 0.0) || !(U2_ > 0.0)) fail(Errc::non_integrable, "density needs U1, U2 > 0");
    norm_ = integrate_raw(0.0, 1.0);
  }

  double U1() const { return U1_; }
  double U2() const { return U2_; }
  double density(double x) const { return raw(x) / norm_; }
  double mass(double a, double b) const { return integrate_raw(a, b) / norm_; }

  // Masses of the bins [max(0,(i-1/2)/N), min(1,(i+1/2)/N)].
  std::vector<double> bins(int N) const {
    std::vector<double> out;
    for (int i = 0; i <= N; ++i) out.push_back(mass(std::max(0.0, (i - 0.5) / N), std::min(1.0, (i + 0.5) / N)));
    return out;
  }

  // Density on the interior grid points j / grid.
  std::vector<std::pair<double, double>> table(int grid) const {
    std::vector<std::pair<double, double>> out;
    for (int j = 1; j < grid; ++j) out.emplace_back(static_cast<double>(j) / grid, density(static_cast<double>(j) / grid));
    return out;
  }

 private:
  double tilt(double x) const { return std::exp(0.5 * (S1_ + S2_) * x * x - S2_ * x); }
  double raw(double x) const { return std::pow(1 - x, U1_ - 1) * std::pow(x, U2_ - 1) * tilt(x); }

  template <class F>
  double simpson(F f, double a, double b) const {
    if (b <= a) return 0.0;
    const int n = panels_ % 2 ? panels_ + 1 : panels_;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int j = 1; j < n; ++j) s += (j % 2 ? 4.0 : 2.0) * f(a + j * h);
    return s * h / 3.0;
  }

  double integrate_raw(double a, double b) const {
    double total = 0.0;
    const double mid = 0.5;
    if (a < mid) {
      const double hi = std::min(b, mid);
      if (U2_ < 1.0) {
        // x = t^(1/U2) absorbs the x^(U2-1) singularity
        auto g = [&](double t) {
          const double x = std::pow(t, 1.0 / U2_);
          return std::pow(1 - x, U1_ - 1) * tilt(x) / U2_;
        };
        total += simpson(g, std::pow(a, U2_), std::pow(hi, U2_));
      } else {
        total += simpson([&](double x) { return raw(x); }, a, hi);
      }
    }
    if (b > mid) {
      const double lo = std::max(a, mid);
      if (U1_ < 1.0) {
        auto g = [&](double s) {
          const double x = 1 - std::pow(s, 1.0 / U1_);
          return std::pow(x, U2_ - 1) * tilt(x) / U1_;
        };
        total += simpson(g, std::pow(1 - b, U1_), std::pow(1 - lo, U1_));
      } else {
        total += simpson([&](double x) { return raw(x); }, lo, b);
      }
    }
    return total;
  }

  double U1_, U2_, S1_, S2_;
  int panels_;
  double norm_ = 1.0;
};

inline MoranDensity moran_diffusion_density(const MoranParams& p, double eps, int grid) { return MoranDensity(p, eps, grid); }

// pi_N(0) = 1 - pi_0(0) for mutation-free Moran limits.
inline double limiting_fixation_split(const MoranParams& p) {
  return p.D2 / (std::exp(-0.5 * (p.S1 - p.S2)) * p.D1 + p.D2);
}

struct FixationProbabilities {
  double P0 = 0.0, PN = 0.0;
  double pi0 = 0.0, piN = 0.0;
};

inline FixationProbabilities fixation_probabilities(const MoranParams& p, int i) {
  if (p.C1 != 0.0 || p.C2 != 0.0) fail(Errc::wrong_scenario, "fixation needs a mutation-free limit (C1 = C2 = 0)");
  if (i < 0 || i > p.N) fail(Errc::invalid_argument, "start state out of range");
  const double s1 = p.S1 / p.N, s2 = p.S2 / p.N;
  FixationProbabilities r;
  if (s1 == 0.0 && s2 == 0.0) {
    r.PN = static_cast<double>(i) / p.N;
  } else if (std::abs((1 + s1) * (1 + s2) - 1) <= 1e-12) {
    const double lg = std::log1p(s2);
    r.PN = std::expm1(i * lg) / std::expm1(p.N * lg);
  } else {
    fail(Errc::formula_not_applicable, "closed form exists only for neutral or multiplicative fitness");
  }
  r.P0 = 1 - r.PN;
  r.piN = limiting_fixation_split(p);
  r.pi0 = 1 - r.piN;
  return r;
}

// pi_0(eps) ~ (1/(g1 eps)) / (1/(g1 eps) + E_10(eps)), ignoring 0 -> 0 moves.
inline double boundary_occupancy_first_order(const BirthDeathSMP& m, double eps) {
  if (m.scenario.tag != ScenarioTag::H2 || m.scenario.mirrored) fail(Errc::wrong_scenario, "needs state 0 asymptotically absorbing");
  if (!m.source) fail(Errc::invalid_argument, "needs an intensity source");
  const auto& g = m.source->g_plus[0];
  if (g.g0 != 0.0 || !(g.g1 > 0.0)) fail(Errc::wrong_scenario, "needs lambda_{0,+}(eps) = g1 eps with g1 > 0");
  const double stay = 1.0 / (g.g1 * eps);
  return stay / (stay + expected_absorption_from_one(m, eps));
}

}  // namespace bdsmp
