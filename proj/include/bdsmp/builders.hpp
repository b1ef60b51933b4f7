#pragma once

// Intensity models for population dynamics, SIS epidemics and the Moran model.

#include <cmath>
#include <string>
#include <vector>

#include "bdsmp/error.hpp"
#include "bdsmp/model.hpp"

namespace bdsmp {

enum class PopPerturbation { nu_is_eps, lambda_is_eps };

struct PopDynParams {
  int N = 100;
  double lambda = 1.0, mu = 1.0, nu = 0.0;
  double alpha1 = 1.0, alpha2 = 0.0;
  double theta1 = 1.0, theta2 = 1.0, theta3 = 1.0;
  PopPerturbation perturbation = PopPerturbation::nu_is_eps;
};

struct SISParams {
  int N = 100;
  double lambda = 1.5;
  double mu = 1.0;
};

struct MoranParams {
  int N = 100;
  double C1 = 0.0, C2 = 0.0;
  double D1 = 0.0, D2 = 0.0;
  double S1 = 0.0, S2 = 0.0;
};

namespace detail {

inline IntensityModel finish(IntensityModel m) {
  m.eps0 = admissible_eps0(m, 1.0);
  if (!(m.eps0 > 0.0)) fail(Errc::invariant_violation, "no admissible perturbation range");
  validate(m);
  return m;
}

inline IntensityModel blank(int N, SojournFamily f) {
  IntensityModel m;
  m.N = N;
  m.family = f;
  m.g_plus.resize(static_cast<std::size_t>(N + 1));
  m.g_minus.resize(static_cast<std::size_t>(N + 1));
  return m;
}

}  // namespace detail

inline IntensityModel population_dynamics_model(const PopDynParams& p, SojournFamily family = SojournFamily::exponential) {
  if (p.N < 1) fail(Errc::invariant_violation, "N must be at least 1");
  if (p.lambda < 0 || p.mu < 0 || p.nu < 0) fail(Errc::invariant_violation, "rates must be nonnegative");
  if (p.alpha1 > 1 || p.alpha1 < 0 || p.alpha2 < 0 || (p.alpha1 == 0 && p.alpha2 == 0))
    fail(Errc::invariant_violation, "need 0 <= alpha1 <= 1, alpha2 >= 0, one of them positive");
  if (!(p.theta1 > 0 && p.theta2 > 0 && p.theta3 > 0)) fail(Errc::invariant_violation, "exponents must be positive");
  IntensityModel m = detail::blank(p.N, family);
  for (int i = 0; i <= p.N; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const double x = static_cast<double>(i) / p.N;
    const double births = i * (1.0 - p.alpha1 * std::pow(x, p.theta1));
    const double immigration = 1.0 - std::pow(x, p.theta2);
    if (p.perturbation == PopPerturbation::nu_is_eps)
      m.g_plus[u] = {p.lambda * births, immigration};
    else
      m.g_plus[u] = {p.nu * immigration, births};
    m.g_minus[u] = {p.mu * i * (1.0 + p.alpha2 * std::pow(x, p.theta3)), 0.0};
  }
  // Empty population under nu = eps: the leaving rate alone would vanish at eps = 0.
  if (p.perturbation == PopPerturbation::nu_is_eps) m.g_minus[0] = {1.0, 0.0};
  return detail::finish(m);
}

inline IntensityModel sis_model(const SISParams& p, SojournFamily family = SojournFamily::exponential) {
  if (p.N < 1 || !(p.lambda > 0) || !(p.mu > 0)) fail(Errc::invariant_violation, "SIS needs N >= 1 and positive rates");
  IntensityModel m = detail::blank(p.N, family);
  for (int i = 0; i <= p.N; ++i) {
    const auto u = static_cast<std::size_t>(i);
    m.g_plus[u] = {p.lambda * i * (1.0 - static_cast<double>(i) / p.N), static_cast<double>(p.N - i)};
    m.g_minus[u] = {p.mu * i, 0.0};
  }
  m.g_minus[0] = {1.0, 0.0};
  return detail::finish(m);
}

// Allele frequency after selection, before mutation.
inline double moran_selected(const MoranParams& p, double x) {
  const double s1 = p.S1 / p.N, s2 = p.S2 / p.N;
  const double num = (1 + s1) * x * x + x * (1 - x);
  return num / (num + x * (1 - x) + (1 + s2) * (1 - x) * (1 - x));
}

inline IntensityModel moran_model(const MoranParams& p, SojournFamily family = SojournFamily::geometric) {
  if (p.N < 2 || p.N % 2 != 0) fail(Errc::invariant_violation, "Moran model needs an even N >= 2");
  if (p.C1 < 0 || p.C2 < 0 || p.D1 < 0 || p.D2 < 0) fail(Errc::invariant_violation, "mutation constants must be nonnegative");
  if (!(p.D1 + p.D2 > 0)) fail(Errc::invariant_violation, "one of D1, D2 must be positive");
  if (p.C1 > p.N || p.C2 > p.N) fail(Errc::invariant_violation, "mutation probabilities C/N must not exceed 1");
  if (1 + p.S1 / p.N < 0 || 1 + p.S2 / p.N < 0) fail(Errc::invariant_violation, "fitness 1 + S/N must be nonnegative");
  IntensityModel m = detail::blank(p.N, family);
  const double n = p.N;
  for (int i = 0; i <= p.N; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const double x = i / n;
    const double xs = moran_selected(p, x);
    // x** = (1 - u1) x* + u2 (1 - x*), affine in eps through u_k = (C_k + D_k eps) / N
    const double y0 = xs + p.C2 / n * (1 - xs) - p.C1 / n * xs;
    const double y1 = p.D2 / n * (1 - xs) - p.D1 / n * xs;
    if (i == 0) {
      m.g_plus[u] = {y0, y1};
      m.g_minus[u] = {1 - y0, -y1};
    } else if (i == p.N) {
      m.g_minus[u] = {1 - y0, -y1};
      m.g_plus[u] = {y0, y1};
    } else {
      m.g_plus[u] = {y0 * (1 - x), y1 * (1 - x)};
      m.g_minus[u] = {(1 - y0) * x, -y1 * x};
    }
  }
  return detail::finish(m);
}

struct SurvivalWeights {
  double a1a1, a1a2, a2a2;
};

inline SurvivalWeights genotype_survival_weights(const MoranParams& p) {
  const double s1 = p.S1 / p.N, s2 = p.S2 / p.N, z = 3 + s1 + s2;
  return {(1 + s1) / z, 1 / z, (1 + s2) / z};
}

inline MoranParams fig1_params() { return {100, 5, 5, 0, 100, 0, 0}; }
inline MoranParams fig3_params(double S1 = 0, double S2 = 0) { return {100, 0, 0, 100, 100, S1, S2}; }
inline SISParams fig5_params(double lambda) { return {100, lambda, 1.0}; }

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig1", "fig2", "fig3", "fig4a", "fig4b", "fig4c", "fig4d",
                                              "fig5a", "fig5b", "fig6", "fig7a", "fig7b"};
  return names;
}

inline IntensityModel preset_model(const std::string& name) {
  if (name == "fig1" || name == "fig2") return moran_model(fig1_params());
  if (name == "fig3" || name == "fig4a") return moran_model(fig3_params());
  if (name == "fig4b") return moran_model(fig3_params(10, -10));
  if (name == "fig4c") return moran_model(fig3_params(10, 10));
  if (name == "fig4d") return moran_model(fig3_params(-10, -10));
  if (name == "fig5a" || name == "fig7a") return sis_model(fig5_params(0.5));
  if (name == "fig5b" || name == "fig6" || name == "fig7b") return sis_model(fig5_params(1.5));
  fail(Errc::invalid_argument, "unknown preset '" + name + "'");
}

}  // namespace bdsmp
