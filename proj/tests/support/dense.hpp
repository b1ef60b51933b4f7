#pragma once

// Mean first-passage times of a numeric chain by a dense linear solve.

#include <Eigen/Dense>

#include "bdsmp/model.hpp"

namespace testing_support {

// E_from tau_to with tau_to the first visit to `to` after time 0 (a return when from == to).
inline double dense_hitting_time(const bdsmp::NumericChain& c, int from, int to) {
  const int n = c.size();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd e(n);
  for (int i = c.first(); i <= c.last(); ++i) {
    const int u = static_cast<int>(c.idx(i));
    P(u, i == c.first() ? u : u - 1) += c.pm(i);
    P(u, i == c.last() ? u : u + 1) += c.pp(i);
    e(u) = c.e(i);
  }
  const int t = static_cast<int>(c.idx(to));
  // h = e + P h with h_t := 0 inside the sum
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - P;
  A.col(t).setZero();
  A(t, t) = 1.0;
  Eigen::VectorXd rhs = e;
  rhs(t) = 0.0;
  const Eigen::VectorXd h = A.fullPivLu().solve(rhs);
  if (from != to) return h(static_cast<int>(c.idx(from)));
  double r = e(t);
  for (int j = 0; j < n; ++j)
    if (j != t) r += P(t, j) * h(j);
  return r;
}

}  // namespace testing_support
