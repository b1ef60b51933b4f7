#pragma once

// Monte Carlo trajectories of birth-death semi-Markov chains at fixed eps.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bdsmp/error.hpp"
#include "bdsmp/model.hpp"

namespace bdsmp {

// Philox4x32-10. Key = seed, counter = (block, stream).
class Philox {
 public:
  using block = std::array<std::uint32_t, 4>;

  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  static block generate(block ctr, std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      if (round) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(0xD2511F53u) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(0xCD9E8D57u) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

  std::uint64_t next_u64() {
    if (pos_ == 2) {
      buf_ = generate({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                       static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
                      key_);
      ++counter_;
      pos_ = 0;
    }
    const std::uint64_t v = (static_cast<std::uint64_t>(buf_[2 * pos_ + 1]) << 32) | buf_[2 * pos_];
    ++pos_;
    return v;
  }

  // Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  block buf_{};
  int pos_ = 2;
};

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
  long count = 0;
};

struct SimulationResult {
  std::vector<double> occupation;
  std::vector<double> occupation_se;
  std::vector<Estimate> mean_return;
  Estimate mean_hit_0_from_1;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  long jumps = 0;
};

// Numeric chain plus sojourn family. The sojourn before a "+-" move has mean
// e_{i,+-} / p_{i,+-}.
struct SimChain {
  NumericChain chain;
  SojournFamily family = SojournFamily::exponential;
};

inline SimChain sim_chain(const IntensityModel& m, double eps) {
  validate(m);
  if (!(eps > 0.0) || eps > m.eps0 * (1 + 1e-15)) fail(Errc::range_error, "eps outside (0, eps0]");
  NumericChain c;
  for (int i = 0; i <= m.N; ++i) {
    const double lm = m.lambda_minus(i, eps), lp = m.lambda_plus(i, eps), lam = lm + lp;
    if (!(lam > 0.0) || lm < 0.0 || lp < 0.0) fail(Errc::range_error, "invalid intensities at state " + std::to_string(i));
    c.p_minus.push_back(lm / lam);
    c.p_plus.push_back(lp / lam);
    c.e_minus.push_back(lm / lam / lam);
    c.e_plus.push_back(lp / lam / lam);
  }
  return {c, m.family};
}

namespace detail {

struct Kahan {
  double s = 0.0, c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

struct Moments {
  double sum = 0.0, sumsq = 0.0;
  long n = 0;
  void add(double x) {
    sum += x;
    sumsq += x * x;
    ++n;
  }
  Estimate estimate() const {
    if (n == 0) return {};
    const double mean = sum / n;
    const double var = n > 1 ? std::max(0.0, (sumsq - n * mean * mean) / (n - 1)) : 0.0;
    return {mean, std::sqrt(var / n), n};
  }
};

struct Step {
  int next;
  double sojourn;
};

inline Step step(const SimChain& sc, int i, Philox& rng) {
  const NumericChain& c = sc.chain;
  const bool down = rng.uniform() < c.pm(i);
  const double p = down ? c.pm(i) : c.pp(i);
  const double mean = (down ? c.em(i) : c.ep(i)) / p;
  double t;
  const double u = rng.uniform();
  if (sc.family == SojournFamily::exponential) {
    t = -std::log(u) * mean;
  } else {
    if (mean < 1.0 - 1e-12) fail(Errc::range_error, "geometric sojourn needs mean >= 1");
    const double q = 1.0 / mean;
    t = q >= 1.0 ? 1.0 : 1.0 + std::floor(std::log(u) / std::log1p(-q));
  }
  int next = down ? i - 1 : i + 1;
  if (next < c.first() || next > c.last()) next = i;
  return {next, t};
}

}  // namespace detail

inline SimulationResult simulate_chain(const SimChain& sc, double horizon, std::uint64_t seed, int start) {
  if (!(horizon > 0.0)) fail(Errc::invalid_argument, "horizon must be positive");
  const NumericChain& c = sc.chain;
  if (start < c.first() || start > c.last()) fail(Errc::invalid_argument, "start state out of range");
  constexpr int batches = 20;
  const auto n = static_cast<std::size_t>(c.size());
  const double batch_len = horizon / batches;
  std::vector<detail::Kahan> occ(n);
  std::vector<std::vector<detail::Kahan>> batch(batches, std::vector<detail::Kahan>(n));
  std::vector<detail::Moments> ret(n);
  std::vector<double> last_entry(n, -1.0);
  detail::Moments hit01;
  double hit_start = -1.0;
  Philox rng(seed, 0);
  SimulationResult r;
  r.horizon = horizon;
  r.seed = seed;
  int i = start;
  double t = 0.0;
  last_entry[c.idx(i)] = 0.0;
  while (t < horizon) {
    const detail::Step s = detail::step(sc, i, rng);
    double from = t;
    const double to = std::min(horizon, t + s.sojourn);
    while (from < to) {
      const int b = std::min(batches - 1, static_cast<int>(from / batch_len));
      const double end = std::min(to, (b + 1) * batch_len);
      batch[static_cast<std::size_t>(b)][c.idx(i)].add(end - from);
      occ[c.idx(i)].add(end - from);
      from = end;
    }
    t += s.sojourn;
    if (t >= horizon) break;
    ++r.jumps;
    const std::size_t u = c.idx(s.next);
    if (last_entry[u] >= 0.0) ret[u].add(t - last_entry[u]);
    last_entry[u] = t;
    if (c.first() == 0 && c.last() >= 1) {
      if (i == 0 && s.next == 1) hit_start = t;
      if (s.next == 0 && hit_start >= 0.0) {
        hit01.add(t - hit_start);
        hit_start = -1.0;
      }
    }
    i = s.next;
  }
  double total = 0.0;
  for (const auto& k : occ) total += k.s;
  for (std::size_t u = 0; u < n; ++u) {
    r.occupation.push_back(occ[u].s / total);
    detail::Moments bm;
    for (int b = 0; b < batches; ++b) bm.add(batch[static_cast<std::size_t>(b)][u].s / batch_len);
    r.occupation_se.push_back(bm.estimate().se);
    r.mean_return.push_back(ret[u].estimate());
  }
  r.mean_hit_0_from_1 = hit01.estimate();
  return r;
}

inline SimulationResult simulate_path(const IntensityModel& m, double eps, double horizon, std::uint64_t seed, int start = 0) {
  return simulate_chain(sim_chain(m, eps), horizon, seed, start);
}

inline std::vector<double> occupation_estimate(const SimulationResult& r) { return r.occupation; }

// Mean first passage time from `from` to `to` (at least one step), one RNG
// stream per replication.
inline Estimate hitting_estimate(const SimChain& sc, int from, int to, int replications, std::uint64_t seed) {
  if (replications < 1) fail(Errc::invalid_argument, "need at least one replication");
  const NumericChain& c = sc.chain;
  if (from < c.first() || from > c.last() || to < c.first() || to > c.last()) fail(Errc::invalid_argument, "state out of range");
  detail::Moments mom;
  for (int rep = 0; rep < replications; ++rep) {
    Philox rng(seed, static_cast<std::uint64_t>(rep) + 1);
    int i = from;
    double t = 0.0;
    do {
      const detail::Step s = detail::step(sc, i, rng);
      t += s.sojourn;
      i = s.next;
    } while (i != to);
    mom.add(t);
  }
  return mom.estimate();
}

inline Estimate hitting_estimate(const IntensityModel& m, double eps, int from, int to, int replications, std::uint64_t seed) {
  return hitting_estimate(sim_chain(m, eps), from, to, replications, seed);
}

}  // namespace bdsmp
