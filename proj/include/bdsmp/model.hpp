#pragma once

// Perturbed birth-death semi-Markov models on {0, ..., N}.
//
// State i jumps down ("-") or up ("+"). At state 0 the "-" transition is a
// self-loop, at state N the "+" transition is a self-loop.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "bdsmp/error.hpp"
#include "bdsmp/laurent.hpp"

namespace bdsmp {

enum class SojournFamily { geometric, exponential };

inline const char* family_name(SojournFamily f) {
  return f == SojournFamily::geometric ? "geometric" : "exponential";
}

// lambda(eps) = g0 + g1 * eps
struct LinearRate {
  double g0 = 0.0;
  double g1 = 0.0;
  double at(double eps) const { return g0 + g1 * eps; }
  bool vanishes() const { return g0 == 0.0 && g1 == 0.0; }
};

struct IntensityModel {
  int N = 1;
  std::vector<LinearRate> g_plus;
  std::vector<LinearRate> g_minus;
  SojournFamily family = SojournFamily::exponential;
  double eps0 = 1.0;

  double lambda_plus(int i, double eps) const { return g_plus[static_cast<std::size_t>(i)].at(eps); }
  double lambda_minus(int i, double eps) const { return g_minus[static_cast<std::size_t>(i)].at(eps); }
  double lambda(int i, double eps) const { return lambda_plus(i, eps) + lambda_minus(i, eps); }
};

// Largest eps in (0, cap] at which every rate stays nonnegative and, for
// geometric sojourns, every total rate stays at most 1. Rates are affine, so
// the constraints are linear in eps.
inline double admissible_eps0(const IntensityModel& m, double cap = 1.0) {
  double hi = cap;
  auto limit = [&](double value0, double slope, double bound) {
    // keep value0 + slope * eps <= bound
    if (slope > 0.0) hi = std::min(hi, (bound - value0) / slope);
  };
  for (int i = 0; i <= m.N; ++i) {
    const auto& gp = m.g_plus[static_cast<std::size_t>(i)];
    const auto& gm = m.g_minus[static_cast<std::size_t>(i)];
    limit(-gp.g0, -gp.g1, 0.0);
    limit(-gm.g0, -gm.g1, 0.0);
    if (m.family == SojournFamily::geometric) limit(gp.g0 + gm.g0, gp.g1 + gm.g1, 1.0);
  }
  return hi;
}

inline void validate(const IntensityModel& m) {
  if (m.N < 1) fail(Errc::invariant_violation, "N must be at least 1");
  const auto n = static_cast<std::size_t>(m.N + 1);
  if (m.g_plus.size() != n || m.g_minus.size() != n)
    fail(Errc::length_mismatch, "need N+1 intensity pairs per direction");
  if (!(m.eps0 > 0.0)) fail(Errc::invariant_violation, "eps0 must be positive");
  for (int i = 0; i <= m.N; ++i) {
    const auto& gp = m.g_plus[static_cast<std::size_t>(i)];
    const auto& gm = m.g_minus[static_cast<std::size_t>(i)];
    for (double v : {gp.g0, gp.g1, gm.g0, gm.g1})
      if (!std::isfinite(v)) fail(Errc::invariant_violation, "non-finite intensity coefficient");
    if (gp.g0 < 0.0 || gm.g0 < 0.0) fail(Errc::invariant_violation, "negative unperturbed intensity at state " + std::to_string(i));
    if (gp.g0 + gm.g0 <= 0.0) fail(Errc::invariant_violation, "g_-[0] + g_+[0] must be positive at state " + std::to_string(i));
    for (double e : {0.0, m.eps0}) {
      if (gp.at(e) < 0.0 || gm.at(e) < 0.0)
        fail(Errc::invariant_violation, "negative intensity on (0, eps0] at state " + std::to_string(i));
      if (m.family == SojournFamily::geometric && gp.at(e) + gm.at(e) > 1.0 + 1e-12)
        fail(Errc::invariant_violation, "geometric sojourn needs total rate <= 1 at state " + std::to_string(i));
    }
  }
}

struct TransitionPair {
  Laurent p_minus, p_plus;
  Laurent e_minus, e_plus;
  int l_minus = 0;
  int l_plus = 0;

  Laurent e_total() const { return add(e_minus, e_plus); }
};

enum class ScenarioTag { H1, H2, H3 };

inline const char* scenario_name(ScenarioTag t) {
  switch (t) {
    case ScenarioTag::H1: return "H1";
    case ScenarioTag::H2: return "H2";
    case ScenarioTag::H3: return "H3";
  }
  return "?";
}

struct Scenario {
  ScenarioTag tag = ScenarioTag::H1;
  // H2 reached by relabeling i -> N - i: the absorbing boundary is N, not 0.
  bool mirrored = false;
};

struct BirthDeathSMP {
  int N = 1;
  int L = 0;
  std::vector<TransitionPair> pairs;
  Scenario scenario;
  std::optional<IntensityModel> source;
  double eps0 = 1.0;

  const TransitionPair& pair(int i) const { return pairs.at(static_cast<std::size_t>(i)); }
  Laurent e_total(int i) const { return pair(i).e_total(); }
};

// States whose stationary mass vanishes as eps -> 0.
inline std::vector<int> absorbing_states(const Scenario& s, int N) {
  switch (s.tag) {
    case ScenarioTag::H1: return {};
    case ScenarioTag::H2: return {s.mirrored ? N : 0};
    case ScenarioTag::H3: return {0, N};
  }
  return {};
}

inline bool is_absorbing(const Scenario& s, int N, int i) {
  for (int a : absorbing_states(s, N))
    if (a == i) return true;
  return false;
}

inline Scenario classify_scenario(const BirthDeathSMP& m) {
  const bool low_open = m.pair(0).l_plus == 0;
  const bool high_open = m.pair(m.N).l_minus == 0;
  if (low_open && high_open) return {ScenarioTag::H1, false};
  if (!low_open && high_open) return {ScenarioTag::H2, false};
  if (low_open && !high_open) return {ScenarioTag::H2, true};
  return {ScenarioTag::H3, false};
}

namespace detail {

// Self-loop directions may vanish identically: they never enter hitting times.
inline bool is_self_loop(int N, int i, bool plus) { return plus ? i == N : i == 0; }

inline void check_direction(int N, int i, bool plus, const Laurent& p, const Laurent& e, int l) {
  const std::string where = "state " + std::to_string(i) + (plus ? " (+)" : " (-)");
  const bool boundary = i == 0 || i == N;
  if (p.is_zero() && is_self_loop(N, i, plus)) {
    if (!e.is_zero()) fail(Errc::violates_g, "vanishing self-loop probability with nonzero expectation at " + where);
    if (l != 0 || p.h() != 0 || e.h() != 0) fail(Errc::violates_d, "vanishing self-loop must sit at order 0 at " + where);
    return;
  }
  if (l != 0 && l != 1) fail(Errc::violates_d, "order shift must be 0 or 1 at " + where);
  if (!boundary && l != 0) fail(Errc::violates_d, "interior order shift must be 0 at " + where);
  if (p.h() != l || !p.pivotal() || p.lead() <= 0.0)
    fail(Errc::violates_d, "probability must start at order " + std::to_string(l) + " with a positive coefficient at " + where);
  if (e.h() != l) {
    if (boundary) fail(Errc::violates_g, "expectation and probability leading orders differ at " + where);
    fail(Errc::violates_e, "expectation must start at order 0 at " + where);
  }
  if (!e.pivotal() || e.lead() <= 0.0) fail(Errc::violates_e, "expectation needs a positive leading coefficient at " + where);
}

}  // namespace detail

inline BirthDeathSMP from_expansions(int N, std::vector<TransitionPair> pairs) {
  if (N < 1) fail(Errc::invalid_argument, "N must be at least 1");
  if (pairs.size() != static_cast<std::size_t>(N + 1)) fail(Errc::length_mismatch, "need N+1 transition pairs");
  const int L = pairs[0].p_minus.k() - pairs[0].p_minus.h();
  for (int i = 0; i <= N; ++i) {
    const auto& t = pairs[static_cast<std::size_t>(i)];
    for (const Laurent* x : {&t.p_minus, &t.p_plus, &t.e_minus, &t.e_plus})
      if (x->k() - x->h() != L) fail(Errc::length_mismatch, "all expansions must have length " + std::to_string(L) + " (state " + std::to_string(i) + ")");
    detail::check_direction(N, i, false, t.p_minus, t.e_minus, t.l_minus);
    detail::check_direction(N, i, true, t.p_plus, t.e_plus, t.l_plus);
    const int top = L + std::min(t.l_minus, t.l_plus);
    for (int l = 0; l <= top; ++l) {
      const double a = t.p_minus.at(l), b = t.p_plus.at(l);
      const double target = l == 0 ? 1.0 : 0.0;
      if (std::abs(a + b - target) > 1e-10 * std::max({1.0, std::abs(a), std::abs(b)}))
        fail(Errc::violates_f, "probability coefficients of order " + std::to_string(l) + " at state " + std::to_string(i) + " sum to " + std::to_string(a + b));
    }
  }
  if (pairs[0].p_plus.is_zero() || pairs[static_cast<std::size_t>(N)].p_minus.is_zero())
    fail(Errc::violates_d, "boundary states must be able to leave");
  BirthDeathSMP m;
  m.N = N;
  m.L = L;
  m.pairs = std::move(pairs);
  m.scenario = classify_scenario(m);
  return m;
}

// Build a pair from four expansions, inferring order shifts from the lower orders.
inline TransitionPair make_pair(Laurent p_minus, Laurent p_plus, Laurent e_minus, Laurent e_plus) {
  TransitionPair t{std::move(p_minus), std::move(p_plus), std::move(e_minus), std::move(e_plus), 0, 0};
  t.l_minus = t.p_minus.is_zero() ? 0 : t.p_minus.h();
  t.l_plus = t.p_plus.is_zero() ? 0 : t.p_plus.h();
  return t;
}

namespace detail {

// Exact linear rate as an expansion with top order k, re-anchored when g0 = 0.
inline Laurent rate_expansion(const LinearRate& g, int k) {
  if (g.g0 != 0.0) return Laurent::polynomial({g.g0, g.g1}, k);
  if (g.g1 != 0.0) {
    std::vector<double> c(static_cast<std::size_t>(k), 0.0);
    c[0] = g.g1;
    return Laurent(1, std::move(c));
  }
  return Laurent::zero(0, k - 1);
}

}  // namespace detail

inline BirthDeathSMP from_linear_intensities(const IntensityModel& m, int L) {
  validate(m);
  if (L < 0) fail(Errc::invalid_argument, "L must be nonnegative");
  std::vector<TransitionPair> pairs;
  pairs.reserve(static_cast<std::size_t>(m.N + 1));
  for (int i = 0; i <= m.N; ++i) {
    const auto& gp = m.g_plus[static_cast<std::size_t>(i)];
    const auto& gm = m.g_minus[static_cast<std::size_t>(i)];
    const LinearRate total{gp.g0 + gm.g0, gp.g1 + gm.g1};
    // Numerators carry L+1 orders above their lower order, the divisor L+1 orders.
    const Laurent lam = Laurent::polynomial({total.g0, total.g1}, L + 1);
    const Laurent num_m = detail::rate_expansion(gm, L + 1);
    const Laurent num_p = detail::rate_expansion(gp, L + 1);
    auto prob = [&](const Laurent& num) {
      const Laurent q = divide(num, lam);
      return q.truncate(q.h() + L);
    };
    const Laurent p_m = prob(num_m), p_p = prob(num_p);
    auto expect = [&](const Laurent& p) {
      const Laurent q = divide(p, lam);
      return q.truncate(q.h() + L);
    };
    pairs.push_back(make_pair(p_m, p_p, expect(p_m), expect(p_p)));
  }
  BirthDeathSMP out = from_expansions(m.N, std::move(pairs));
  out.source = m;
  out.eps0 = m.eps0;
  return out;
}

// Fixed-eps numeric chain. States are offset, offset+1, ..., offset+size-1; the
// lowest state's "-" and the highest state's "+" transitions are self-loops.
struct NumericChain {
  int offset = 0;
  std::vector<double> p_minus, p_plus, e_minus, e_plus;

  int size() const { return static_cast<int>(p_minus.size()); }
  int first() const { return offset; }
  int last() const { return offset + size() - 1; }
  std::size_t idx(int i) const { return static_cast<std::size_t>(i - offset); }
  double pm(int i) const { return p_minus[idx(i)]; }
  double pp(int i) const { return p_plus[idx(i)]; }
  double em(int i) const { return e_minus[idx(i)]; }
  double ep(int i) const { return e_plus[idx(i)]; }
  double e(int i) const { return em(i) + ep(i); }
};

struct EvaluatedModel {
  double eps = 0.0;
  NumericChain chain;
  std::optional<std::vector<double>> lambda_minus, lambda_plus;
};

inline EvaluatedModel evaluate_at(const BirthDeathSMP& m, double eps) {
  if (!(eps > 0.0) || eps > m.eps0 * (1 + 1e-15))
    fail(Errc::range_error, "eps=" + std::to_string(eps) + " outside (0, eps0=" + std::to_string(m.eps0) + "]");
  EvaluatedModel out;
  out.eps = eps;
  const auto n = static_cast<std::size_t>(m.N + 1);
  NumericChain& c = out.chain;
  c.p_minus.resize(n);
  c.p_plus.resize(n);
  c.e_minus.resize(n);
  c.e_plus.resize(n);
  if (m.source) {
    const auto& s = *m.source;
    out.lambda_minus.emplace(n);
    out.lambda_plus.emplace(n);
    for (int i = 0; i <= m.N; ++i) {
      const auto u = static_cast<std::size_t>(i);
      const double lm = s.lambda_minus(i, eps), lp = s.lambda_plus(i, eps), lam = lm + lp;
      if (!(lam > 0.0)) fail(Errc::range_error, "total intensity vanishes at state " + std::to_string(i));
      (*out.lambda_minus)[u] = lm;
      (*out.lambda_plus)[u] = lp;
      c.p_minus[u] = lm / lam;
      c.p_plus[u] = lp / lam;
      c.e_minus[u] = c.p_minus[u] / lam;
      c.e_plus[u] = c.p_plus[u] / lam;
    }
  } else {
    for (int i = 0; i <= m.N; ++i) {
      const auto u = static_cast<std::size_t>(i);
      const auto& t = m.pair(i);
      c.p_minus[u] = t.p_minus.evaluate(eps);
      c.p_plus[u] = t.p_plus.evaluate(eps);
      c.e_minus[u] = t.e_minus.evaluate(eps);
      c.e_plus[u] = t.e_plus.evaluate(eps);
    }
  }
  for (int i = 0; i <= m.N; ++i) {
    const auto u = static_cast<std::size_t>(i);
    for (double p : {c.p_minus[u], c.p_plus[u]})
      if (p < -1e-9 || p > 1.0 + 1e-9)
        fail(Errc::range_error, "probability " + std::to_string(p) + " at state " + std::to_string(i) + " outside [0,1]");
    if (!(c.e_minus[u] + c.e_plus[u] > 0.0)) fail(Errc::range_error, "nonpositive mean sojourn at state " + std::to_string(i));
    for (int d = 0; d < 2; ++d) {
      const double p = d ? c.p_plus[u] : c.p_minus[u];
      const double e = d ? c.e_plus[u] : c.e_minus[u];
      if (p > 0.0 && !(e > 0.0)) fail(Errc::range_error, "nonpositive expectation at state " + std::to_string(i));
    }
  }
  return out;
}

// Relabel i -> N - i.
inline IntensityModel mirror(const IntensityModel& m) {
  IntensityModel r = m;
  for (int i = 0; i <= m.N; ++i) {
    r.g_plus[static_cast<std::size_t>(i)] = m.g_minus[static_cast<std::size_t>(m.N - i)];
    r.g_minus[static_cast<std::size_t>(i)] = m.g_plus[static_cast<std::size_t>(m.N - i)];
  }
  return r;
}

inline BirthDeathSMP mirror(const BirthDeathSMP& m) {
  std::vector<TransitionPair> pairs;
  for (int i = 0; i <= m.N; ++i) {
    const auto& t = m.pair(m.N - i);
    pairs.push_back(TransitionPair{t.p_plus, t.p_minus, t.e_plus, t.e_minus, t.l_plus, t.l_minus});
  }
  BirthDeathSMP out = from_expansions(m.N, std::move(pairs));
  if (m.source) out.source = mirror(*m.source);
  out.eps0 = m.eps0;
  return out;
}

}  // namespace bdsmp
