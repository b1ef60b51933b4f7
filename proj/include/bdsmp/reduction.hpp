#pragma once

// Sequential exclusion of boundary states and expected return times E_ii.

#include <vector>

#include "bdsmp/laurent.hpp"
#include "bdsmp/model.hpp"

namespace bdsmp {

// Remaining window <k, r> with the current transition data for states k..r.
struct ReducedModel {
  int k = 0;
  int r = 0;
  std::vector<TransitionPair> pairs;

  const TransitionPair& at(int i) const { return pairs.at(static_cast<std::size_t>(i - k)); }
  int size() const { return r - k + 1; }
};

enum class Side { low, high };

inline ReducedModel full_window(const BirthDeathSMP& m) { return ReducedModel{0, m.N, m.pairs}; }

inline ReducedModel reduce_boundary(const ReducedModel& m, Side side) {
  if (m.size() < 2) fail(Errc::window_too_small, "cannot exclude a state from a single-state window");
  ReducedModel out;
  if (side == Side::low) {
    const auto& gone = m.at(m.k);
    const auto& next = m.at(m.k + 1);
    out = ReducedModel{m.k + 1, m.r, std::vector<TransitionPair>(m.pairs.begin() + 1, m.pairs.end())};
    out.pairs.front().e_minus = add(next.e_minus, multiply(gone.e_total(), divide(next.p_minus, gone.p_plus)));
  } else {
    const auto& gone = m.at(m.r);
    const auto& prev = m.at(m.r - 1);
    out = ReducedModel{m.k, m.r - 1, std::vector<TransitionPair>(m.pairs.begin(), m.pairs.end() - 1)};
    out.pairs.back().e_plus = add(prev.e_plus, multiply(gone.e_total(), divide(prev.p_plus, gone.p_minus)));
  }
  return out;
}

inline ReducedModel reduce_to(const BirthDeathSMP& m, int k, int r) {
  if (k < 0 || r > m.N || k > r) fail(Errc::invalid_argument, "bad reduction window");
  ReducedModel w = full_window(m);
  while (w.k < k) w = reduce_boundary(w, Side::low);
  while (w.r > r) w = reduce_boundary(w, Side::high);
  return w;
}

inline Laurent return_time_expansion(const BirthDeathSMP& m, int i) {
  if (i < 0 || i > m.N) fail(Errc::invalid_argument, "state out of range");
  return reduce_to(m, i, i).at(i).e_total();
}

// Gamma_{i,j,+} = p_{i,+} ... p_{j,+}, likewise for "-".
inline Laurent gamma_product(const BirthDeathSMP& m, int i, int j, bool plus) {
  std::vector<Laurent> f;
  for (int q = i; q <= j; ++q) f.push_back(plus ? m.pair(q).p_plus : m.pair(q).p_minus);
  return multi_product(f);
}

inline Laurent return_time_explicit(const BirthDeathSMP& m, int i) {
  if (i < 0 || i > m.N) fail(Errc::invalid_argument, "state out of range");
  std::vector<Laurent> terms{m.e_total(i)};
  for (int k = 0; k < i; ++k)
    terms.push_back(multiply(m.e_total(k), divide(gamma_product(m, k + 1, i, false), gamma_product(m, k, i - 1, true))));
  for (int k = i + 1; k <= m.N; ++k)
    terms.push_back(multiply(m.e_total(k), divide(gamma_product(m, i, k - 1, true), gamma_product(m, i + 1, k, false))));
  return multi_sum(terms);
}

// Fixed-eps counterpart of the explicit formula. Gamma ratios are built as
// running products of single-step ratios so long chains stay in range.
inline double return_time_numeric(const NumericChain& c, int i) {
  double total = c.e(i);
  double ratio = 1.0;
  for (int k = i - 1; k >= c.first(); --k) {
    ratio *= c.pm(k + 1) / c.pp(k);
    total += c.e(k) * ratio;
  }
  ratio = 1.0;
  for (int k = i + 1; k <= c.last(); ++k) {
    ratio *= c.pp(k - 1) / c.pm(k);
    total += c.e(k) * ratio;
  }
  return total;
}

inline NumericChain reduce_numeric(const NumericChain& c, Side side) {
  if (c.size() < 2) fail(Errc::window_too_small, "cannot exclude a state from a single-state window");
  NumericChain out = c;
  auto drop = [](std::vector<double>& v, bool front) { front ? (void)v.erase(v.begin()) : v.pop_back(); };
  if (side == Side::low) {
    const int k = c.first();
    const double add_e = c.e(k) * c.pm(k + 1) / c.pp(k);
    for (auto* v : {&out.p_minus, &out.p_plus, &out.e_minus, &out.e_plus}) drop(*v, true);
    out.offset = k + 1;
    out.e_minus[0] += add_e;
  } else {
    const int r = c.last();
    const double add_e = c.e(r) * c.pp(r - 1) / c.pm(r);
    for (auto* v : {&out.p_minus, &out.p_plus, &out.e_minus, &out.e_plus}) drop(*v, false);
    out.e_plus.back() += add_e;
  }
  return out;
}

inline NumericChain reduce_numeric_to(NumericChain c, int k, int r) {
  if (k < c.first() || r > c.last() || k > r) fail(Errc::invalid_argument, "bad reduction window");
  while (c.first() < k) c = reduce_numeric(c, Side::low);
  while (c.last() > r) c = reduce_numeric(c, Side::high);
  return c;
}

// E_10(eps) = (E_00 - e_0) / p_{0,+}. The difference is expanded term by term,
// with p_{0,+} cancelled analytically, so small p_{0,+} loses no digits.
inline double expected_absorption_from_one(const BirthDeathSMP& m, double eps) {
  const NumericChain c = evaluate_at(m, eps).chain;
  if (!(c.pp(0) > 0.0)) fail(Errc::range_error, "p_{0,+} vanishes at this eps");
  double total = 0.0, ratio = 1.0;
  for (int k = 1; k <= c.last(); ++k) {
    ratio *= (k == 1 ? 1.0 : c.pp(k - 1)) / c.pm(k);
    total += c.e(k) * ratio;
  }
  return total;
}

}  // namespace bdsmp
