#pragma once

// Stationary and conditional quasi-stationary distributions: expansions in
// eps, closed-form first and second coefficients, and exact values at fixed eps.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bdsmp/laurent.hpp"
#include "bdsmp/model.hpp"
#include "bdsmp/numeric.hpp"
#include "bdsmp/reduction.hpp"

namespace bdsmp {

enum class DistKind { stationary, quasi_h2, quasi_h3 };

inline const char* kind_name(DistKind k) {
  switch (k) {
    case DistKind::stationary: return "stationary";
    case DistKind::quasi_h2: return "quasi_H2";
    case DistKind::quasi_h3: return "quasi_H3";
  }
  return "?";
}

struct DistributionExpansion {
  DistKind kind = DistKind::stationary;
  int L = 0;
  std::map<int, Laurent> per_state;
  std::map<int, int> shifts;
};

// Lower order of pi_i: 1 for states that keep only O(eps) mass, else 0.
inline int stationary_shift(const BirthDeathSMP& m, int i) {
  return absorbing_states(m.scenario, m.N).empty() || is_absorbing(m.scenario, m.N, i) ? 0 : 1;
}

inline std::vector<int> quasi_support(const BirthDeathSMP& m) {
  std::vector<int> s;
  for (int i = 0; i <= m.N; ++i)
    if (!is_absorbing(m.scenario, m.N, i)) s.push_back(i);
  return s;
}

// E_ii for every state via one low-side and one high-side sweep; the same
// operations as reducing each window <i,i> separately, low side first.
inline std::vector<Laurent> return_time_expansions(const BirthDeathSMP& m) {
  const auto n = static_cast<std::size_t>(m.N + 1);
  std::vector<Laurent> low(n), high(n), out;
  low[0] = m.pair(0).e_minus;
  for (int i = 1; i <= m.N; ++i) {
    const Laurent prev_total = add(low[static_cast<std::size_t>(i - 1)], m.pair(i - 1).e_plus);
    low[static_cast<std::size_t>(i)] = add(m.pair(i).e_minus, multiply(prev_total, divide(m.pair(i).p_minus, m.pair(i - 1).p_plus)));
  }
  high[n - 1] = m.pair(m.N).e_plus;
  for (int i = m.N - 1; i >= 0; --i) {
    const Laurent next_total = add(m.pair(i + 1).e_minus, high[static_cast<std::size_t>(i + 1)]);
    high[static_cast<std::size_t>(i)] = add(m.pair(i).e_plus, multiply(next_total, divide(m.pair(i).p_plus, m.pair(i + 1).p_minus)));
  }
  for (std::size_t i = 0; i < n; ++i) out.push_back(add(low[i], high[i]));
  return out;
}

namespace detail {

inline std::vector<Laurent> raw_stationary(const BirthDeathSMP& m) {
  const auto E = return_time_expansions(m);
  std::vector<Laurent> pi;
  for (int i = 0; i <= m.N; ++i) pi.push_back(divide(m.e_total(i), E[static_cast<std::size_t>(i)]));
  return pi;
}

// Orders from..from+L of x, refusing to pad beyond the guaranteed window.
inline Laurent window(const Laurent& x, int from, int L, int state) {
  if (x.k() < from + L)
    fail(Errc::insufficient_precision, "state " + std::to_string(state) + ": requested order " + std::to_string(from + L) +
                                           " but only order " + std::to_string(x.k()) + " is guaranteed");
  std::vector<double> c;
  for (int l = from; l <= from + L; ++l) c.push_back(x.at(l));
  return Laurent(from, std::move(c));
}

}  // namespace detail

inline DistributionExpansion stationary_expansion(const BirthDeathSMP& m, int L) {
  if (L < 0) fail(Errc::invalid_argument, "L must be nonnegative");
  const auto pi = detail::raw_stationary(m);
  DistributionExpansion out{DistKind::stationary, L, {}, {}};
  for (int i = 0; i <= m.N; ++i) {
    const int s = stationary_shift(m, i);
    out.shifts[i] = s;
    out.per_state.emplace(i, detail::window(pi[static_cast<std::size_t>(i)], s, L, i));
  }
  return out;
}

namespace detail {

// Power series with lower order 0 in extended precision.
using WideSeries = std::vector<long double>;

inline WideSeries wide(const Laurent& x, int k) {
  WideSeries w;
  for (int l = 0; l <= k; ++l) w.push_back(x.at(l));
  return w;
}

inline WideSeries wide_mul(const WideSeries& a, const WideSeries& b) {
  WideSeries c(a.size(), 0.0L);
  for (std::size_t r = 0; r < c.size(); ++r)
    for (std::size_t l = 0; l <= r; ++l) c[r] += a[l] * b[r - l];
  return c;
}

inline WideSeries wide_div(const WideSeries& a, const WideSeries& b) {
  WideSeries f(a.size(), 0.0L);
  for (std::size_t r = 0; r < f.size(); ++r) {
    long double s = a[r];
    for (std::size_t l = 1; l <= r; ++l) s -= b[l] * f[r - l];
    f[r] = s / b[0];
  }
  return f;
}

}  // namespace detail

// Quasi weights come from ratios inside the support, w_i = e_i Gamma_{a,i-1,+} / Gamma_{a+1,i,-}.
// Every factor starts at order 0, so no eps^-1 terms cancel, and the short
// series are carried in extended precision.
inline DistributionExpansion conditional_quasi_stationary_expansion(const BirthDeathSMP& m, int L) {
  if (m.scenario.tag == ScenarioTag::H1)
    fail(Errc::wrong_scenario, "conditional quasi-stationary distributions need an asymptotically absorbing boundary");
  if (L < 0) fail(Errc::invalid_argument, "L must be nonnegative");
  const auto support = quasi_support(m);
  if (support.empty()) fail(Errc::window_too_small, "no states outside the absorbing boundary");
  const int k = m.L;
  for (int i : support) {
    const auto& t = m.pair(i);
    if (t.e_total().h() != 0 || !t.e_total().pivotal() || (i > support.front() && (t.p_minus.h() != 0 || m.pair(i - 1).p_plus.h() != 0)))
      fail(Errc::non_pivotal, "quasi weights need order-0 transitions inside the support (state " + std::to_string(i) + ")");
  }
  std::vector<detail::WideSeries> w;
  detail::WideSeries ratio(static_cast<std::size_t>(k + 1), 0.0L), mass(static_cast<std::size_t>(k + 1), 0.0L);
  ratio[0] = 1.0L;
  for (int i : support) {
    if (i > support.front())
      ratio = detail::wide_mul(ratio, detail::wide_div(detail::wide(m.pair(i - 1).p_plus, k), detail::wide(m.pair(i).p_minus, k)));
    w.push_back(detail::wide_mul(detail::wide(m.e_total(i), k), ratio));
    for (std::size_t r = 0; r <= static_cast<std::size_t>(k); ++r) mass[r] += w.back()[r];
  }
  DistributionExpansion out{m.scenario.tag == ScenarioTag::H2 ? DistKind::quasi_h2 : DistKind::quasi_h3, L, {}, {}};
  for (std::size_t u = 0; u < support.size(); ++u) {
    const detail::WideSeries q = detail::wide_div(w[u], mass);
    out.shifts[support[u]] = 0;
    out.per_state.emplace(support[u], detail::window(Laurent(0, std::vector<double>(q.begin(), q.end())), 0, L, support[u]));
  }
  return out;
}

// Two leading coefficients of an expansion whose lower order is `order`.
struct TwoTerm {
  int order = 0;
  double c0 = 0.0, c1 = 0.0;
  double at(int o) const {
    if (o < order) return 0.0;
    if (o == order) return c0;
    if (o == order + 1) return c1;
    fail(Errc::insufficient_precision, "closed form only carries two coefficients");
  }
};

struct SecondOrder {
  DistributionExpansion stationary;
  std::optional<DistributionExpansion> quasi;
};

namespace detail {

// Closed-form first and second coefficients built from the raw input
// coefficients a_{i,+-}[l], b_i[l]; no Laurent arithmetic involved.
struct ClosedForm {
  const BirthDeathSMP& m;
  bool low_abs, high_abs;

  int gamma(int i) const { return low_abs && i == 0 ? 1 : 0; }
  int beta(int i) const { return high_abs && i == m.N ? 1 : 0; }
  double a(int i, bool plus, int l) const { return (plus ? m.pair(i).p_plus : m.pair(i).p_minus).at(l); }
  double b(int i, int l) const { return m.pair(i).e_minus.at(l) + m.pair(i).e_plus.at(l); }

  // A_{i,j,+-}: product p_{i,+-} ... p_{j,+-}
  TwoTerm A(int i, int j, bool plus) const {
    if (i > j) return {0, 1.0, 0.0};
    auto s = [&](int q) { return plus ? gamma(q) : beta(q); };
    TwoTerm t{0, 1.0, 0.0};
    for (int q = i; q <= j; ++q) t.order += s(q);
    for (int q = i; q <= j; ++q) t.c0 *= a(q, plus, s(q));
    for (int q = i; q <= j; ++q) {
      double term = a(q, plus, s(q) + 1);
      for (int u = i; u <= j; ++u)
        if (u != q) term *= a(u, plus, s(u));
      t.c1 += term;
    }
    return t;
  }

  static TwoTerm quotient(const TwoTerm& n, const TwoTerm& d) {
    return {n.order - d.order, n.c0 / d.c0, (n.c1 * d.c0 - n.c0 * d.c1) / (d.c0 * d.c0)};
  }

  // A*_{k,i}: Gamma_{k+1,i,-}/Gamma_{k,i-1,+} for k < i, Gamma_{i,k-1,+}/Gamma_{i+1,k,-} for k > i
  TwoTerm Astar(int k, int i) const {
    return k < i ? quotient(A(k + 1, i, false), A(k, i - 1, true)) : quotient(A(i, k - 1, true), A(i + 1, k, false));
  }

  // B_ii: E_ii = e_i + sum_k e_k A*_{k,i}
  TwoTerm B(int i) const {
    std::vector<TwoTerm> stars;
    int lead = 0;
    for (int k = 0; k <= m.N; ++k) {
      if (k == i) continue;
      stars.push_back(Astar(k, i));
      lead = std::min(lead, stars.back().order);
    }
    TwoTerm out{lead, 0.0, 0.0};
    for (int o = lead; o <= lead + 1; ++o) {
      double v = o >= 0 ? b(i, o) : 0.0;
      std::size_t s = 0;
      for (int k = 0; k <= m.N; ++k) {
        if (k == i) continue;
        const TwoTerm& t = stars[s++];
        for (int u = 0; u <= o - t.order; ++u) v += b(k, u) * t.at(o - u);
      }
      (o == lead ? out.c0 : out.c1) = v;
    }
    return out;
  }
};

}  // namespace detail

inline SecondOrder second_order_closed_form(const BirthDeathSMP& model) {
  if (model.L < 1) fail(Errc::insufficient_precision, "closed forms need input expansions of length at least 1");
  if (model.scenario.mirrored) {
    SecondOrder r = second_order_closed_form(mirror(model));
    auto flip = [&](DistributionExpansion& d) {
      DistributionExpansion f{d.kind, d.L, {}, {}};
      for (auto& [i, x] : d.per_state) f.per_state.emplace(model.N - i, x);
      for (auto& [i, s] : d.shifts) f.shifts[model.N - i] = s;
      d = std::move(f);
    };
    flip(r.stationary);
    if (r.quasi) flip(*r.quasi);
    return r;
  }
  const bool low_abs = model.scenario.tag != ScenarioTag::H1;
  const bool high_abs = model.scenario.tag == ScenarioTag::H3;
  detail::ClosedForm cf{model, low_abs, high_abs};
  SecondOrder out;
  out.stationary = DistributionExpansion{DistKind::stationary, 1, {}, {}};
  std::vector<TwoTerm> c(static_cast<std::size_t>(model.N + 1));
  for (int i = 0; i <= model.N; ++i) {
    const TwoTerm B = cf.B(i);
    const double b0 = cf.b(i, 0), b1 = cf.b(i, 1);
    TwoTerm& ci = c[static_cast<std::size_t>(i)];
    ci = {-B.order, b0 / B.c0, (b1 * B.c0 - b0 * B.c1) / (B.c0 * B.c0)};
    out.stationary.shifts[i] = ci.order;
    out.stationary.per_state.emplace(i, Laurent(ci.order, {ci.c0, ci.c1}));
  }
  if (low_abs) {
    DistributionExpansion q{high_abs ? DistKind::quasi_h3 : DistKind::quasi_h2, 1, {}, {}};
    double d1 = 0.0, d2 = 0.0;
    for (int j : quasi_support(model)) {
      d1 += c[static_cast<std::size_t>(j)].at(1);
      d2 += c[static_cast<std::size_t>(j)].at(2);
    }
    for (int i : quasi_support(model)) {
      const double c1 = c[static_cast<std::size_t>(i)].at(1), c2 = c[static_cast<std::size_t>(i)].at(2);
      q.shifts[i] = 0;
      q.per_state.emplace(i, Laurent(0, {c1 / d1, (c2 * d1 - c1 * d2) / (d1 * d1)}));
    }
    out.quasi = std::move(q);
  }
  return out;
}

struct ExactDistribution {
  double eps = 0.0;
  std::map<int, double> per_state;
};

struct ExactResult {
  ExactDistribution stationary;
  std::optional<ExactDistribution> quasi;
};

namespace detail {

inline ExactDistribution restricted(double eps, int first, const std::vector<double>& w) {
  ExactDistribution d{eps, {}};
  for (std::size_t u = 0; u < w.size(); ++u) d.per_state[first + static_cast<int>(u)] = w[u];
  return d;
}

// Weights proportional to lambda_{first,+} ... lambda_{i-1,+} / (lambda_{first+1,-} ... lambda_{i,-}).
inline std::vector<double> product_weights(const IntensityModel& s, double eps, int first, int last) {
  std::vector<double> ratio(static_cast<std::size_t>(last - first + 1), 1.0);
  for (int i = first + 1; i <= last; ++i) ratio[static_cast<std::size_t>(i - first)] = s.lambda_plus(i - 1, eps) / s.lambda_minus(i, eps);
  return normalized_chain(ratio);
}

inline std::pair<int, int> support_range(const BirthDeathSMP& m) {
  const auto s = quasi_support(m);
  return {s.front(), s.back()};
}

}  // namespace detail

// Birth-death product formula; requires exact intensities.
inline ExactResult exact_by_products(const BirthDeathSMP& m, double eps) {
  if (!m.source) fail(Errc::invalid_argument, "product formula needs an intensity source");
  evaluate_at(m, eps);
  ExactResult r;
  r.stationary = detail::restricted(eps, 0, detail::product_weights(*m.source, eps, 0, m.N));
  if (m.scenario.tag != ScenarioTag::H1) {
    const auto [a, b] = detail::support_range(m);
    r.quasi = detail::restricted(eps, a, detail::product_weights(*m.source, eps, a, b));
  }
  return r;
}

// pi_i = e_i / E_ii with E_ii from the explicit formula at fixed eps.
inline ExactResult exact_by_return_times(const BirthDeathSMP& m, double eps) {
  const NumericChain c = evaluate_at(m, eps).chain;
  std::vector<double> pi;
  for (int i = 0; i <= m.N; ++i) pi.push_back(c.e(i) / return_time_numeric(c, i));
  const double total = compensated_sum(pi);
  for (double& x : pi) x /= total;
  ExactResult r;
  r.stationary = detail::restricted(eps, 0, pi);
  if (m.scenario.tag != ScenarioTag::H1) {
    const auto [a, b] = detail::support_range(m);
    std::vector<double> q(pi.begin() + a, pi.begin() + b + 1);
    const double mass = compensated_sum(q);
    for (double& x : q) x /= mass;
    r.quasi = detail::restricted(eps, a, q);
  }
  return r;
}

inline ExactResult exact_distributions(const BirthDeathSMP& m, double eps) {
  return m.source ? exact_by_products(m, eps) : exact_by_return_times(m, eps);
}

inline std::map<int, double> limiting_conditional_quasi_stationary(const BirthDeathSMP& m) {
  if (m.scenario.tag == ScenarioTag::H1) fail(Errc::wrong_scenario, "no absorbing boundary under H1");
  if (!m.source) fail(Errc::invalid_argument, "limiting product formula needs an intensity source");
  const auto [a, b] = detail::support_range(m);
  return detail::restricted(0.0, a, detail::product_weights(*m.source, 0.0, a, b)).per_state;
}

}  // namespace bdsmp
