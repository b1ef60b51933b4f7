#pragma once

// Random expansion-level models for property tests.

#include <random>
#include <vector>

#include "bdsmp/model.hpp"

namespace testing_support {

enum class Shape { open, absorbing, open_no_loop };

inline std::vector<double> jitter(std::mt19937_64& rng, double lead, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c{lead};
  for (int l = 1; l < n; ++l) c.push_back(u(rng));
  return c;
}

inline std::vector<double> complement(const std::vector<double>& p) {
  std::vector<double> q;
  for (std::size_t l = 0; l < p.size(); ++l) q.push_back(l == 0 ? 1.0 - p[0] : -p[l]);
  return q;
}

// A pair at an interior state, or at a boundary with the given shape. `low`
// selects which boundary; the self-loop is then the "-" (low) or "+" (high) side.
inline bdsmp::TransitionPair random_pair(std::mt19937_64& rng, int L, bool boundary, bool low, Shape shape) {
  using bdsmp::Laurent;
  std::uniform_real_distribution<double> lead(0.2, 0.8), elead(0.5, 2.0);
  const int n = L + 1;
  Laurent out_p, loop_p, out_e, loop_e;
  if (!boundary || shape == Shape::open) {
    const auto p = jitter(rng, lead(rng), n);
    out_p = Laurent(0, p);
    loop_p = Laurent(0, complement(p));
    out_e = Laurent(0, jitter(rng, elead(rng), n));
    loop_e = Laurent(0, jitter(rng, elead(rng), n));
  } else if (shape == Shape::open_no_loop) {
    out_p = Laurent::polynomial({1.0}, L);
    loop_p = Laurent::zero(0, L);
    out_e = Laurent(0, jitter(rng, elead(rng), n));
    loop_e = Laurent::zero(0, L);
  } else {
    // leaving probability of order eps
    const auto p = jitter(rng, lead(rng), n);
    out_p = Laurent(1, p);
    std::vector<double> q{1.0};
    for (int l = 1; l <= L; ++l) q.push_back(-p[static_cast<std::size_t>(l - 1)]);
    loop_p = Laurent(0, q);
    out_e = Laurent(1, jitter(rng, elead(rng), n));
    loop_e = Laurent(0, jitter(rng, elead(rng), n));
  }
  if (!boundary) {
    // interior: "-" and "+" are both real moves
    return bdsmp::make_pair(loop_p, out_p, loop_e, out_e);
  }
  return low ? bdsmp::make_pair(loop_p, out_p, loop_e, out_e) : bdsmp::make_pair(out_p, loop_p, out_e, loop_e);
}

// scenario: 0 = H1, 1 = H2 (low absorbing), 2 = H2 mirrored, 3 = H3.
inline bdsmp::BirthDeathSMP random_model(std::mt19937_64& rng, int N, int L, int scenario) {
  std::bernoulli_distribution coin(0.3);
  auto open_shape = [&] { return coin(rng) ? Shape::open_no_loop : Shape::open; };
  const Shape low = scenario == 1 || scenario == 3 ? Shape::absorbing : open_shape();
  const Shape high = scenario == 2 || scenario == 3 ? Shape::absorbing : open_shape();
  std::vector<bdsmp::TransitionPair> pairs;
  for (int i = 0; i <= N; ++i) {
    if (i == 0)
      pairs.push_back(random_pair(rng, L, true, true, low));
    else if (i == N)
      pairs.push_back(random_pair(rng, L, true, false, high));
    else
      pairs.push_back(random_pair(rng, L, false, false, Shape::open));
  }
  return bdsmp::from_expansions(N, std::move(pairs));
}

// Random intensity model: birth/death rates with linear eps dependence.
inline bdsmp::IntensityModel random_intensities(std::mt19937_64& rng, int N, int scenario) {
  std::uniform_real_distribution<double> r(0.5, 2.0), s(0.0, 1.0);
  bdsmp::IntensityModel m;
  m.N = N;
  for (int i = 0; i <= N; ++i) {
    m.g_plus.push_back({i == N ? 0.0 : r(rng), s(rng)});
    m.g_minus.push_back({i == 0 ? 0.0 : r(rng), s(rng)});
  }
  // self loops at the ends keep the boundary leaving rate positive
  m.g_minus[0] = {r(rng), 0.0};
  m.g_plus[static_cast<std::size_t>(N)] = {r(rng), 0.0};
  if (scenario == 1 || scenario == 3) m.g_plus[0] = {0.0, r(rng)};
  if (scenario == 2 || scenario == 3) m.g_minus[static_cast<std::size_t>(N)] = {0.0, r(rng)};
  m.eps0 = bdsmp::admissible_eps0(m, 1.0);
  return m;
}

}  // namespace testing_support
