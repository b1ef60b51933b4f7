#pragma once

// Truncated Laurent expansions in a small parameter eps:
//   A(eps) = sum_{l=h}^{k} a[l-h] eps^l + o(eps^k).
// Every operation propagates the guaranteed precision window [h, k].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "bdsmp/error.hpp"

namespace bdsmp {

inline constexpr double zero_rel_tol = 1e-12;

// A computed coefficient that cancels down to rounding level of its terms is exactly zero.
inline double flush(double s, double magnitude) { return std::abs(s) <= zero_rel_tol * magnitude ? 0.0 : s; }

class Laurent {
 public:
  Laurent() : h_(0), c_{0.0} {}

  Laurent(int h, std::vector<double> coeffs) : h_(h), c_(std::move(coeffs)) {
    if (c_.empty()) fail(Errc::invalid_argument, "expansion needs at least one coefficient");
    for (double v : c_)
      if (!std::isfinite(v)) fail(Errc::invalid_argument, "non-finite coefficient");
  }

  static Laurent zero(int h, int k) {
    if (k < h) fail(Errc::precision_window, "empty window");
    return Laurent(h, std::vector<double>(static_cast<std::size_t>(k - h + 1), 0.0));
  }

  // Exact polynomial c0 + c1 eps + ... padded with zeros up to order k.
  static Laurent polynomial(std::vector<double> c, int k) {
    if (k < 0) fail(Errc::precision_window, "negative top order for a polynomial");
    c.resize(static_cast<std::size_t>(k + 1), 0.0);
    return Laurent(0, std::move(c));
  }

  int h() const { return h_; }
  int k() const { return h_ + static_cast<int>(c_.size()) - 1; }
  std::size_t size() const { return c_.size(); }
  const std::vector<double>& coeffs() const { return c_; }
  double operator[](std::size_t r) const { return c_.at(r); }
  double lead() const { return c_.front(); }

  // Coefficient of eps^order; zero below the window, error above it.
  double at(int order) const {
    if (order < h_) return 0.0;
    if (order > k()) fail(Errc::insufficient_precision, "order " + std::to_string(order) + " beyond window top " + std::to_string(k()));
    return c_[static_cast<std::size_t>(order - h_)];
  }

  double scale() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  bool is_zero_coeff(std::size_t r) const { return c_[r] == 0.0; }

  bool is_zero() const { return scale() == 0.0; }
  bool pivotal() const { return !is_zero_coeff(0); }

  double evaluate(double eps) const {
    double acc = 0.0;
    for (std::size_t r = c_.size(); r-- > 0;) acc = acc * eps + c_[r];
    return h_ == 0 ? acc : acc * std::pow(eps, h_);
  }

  // Keep orders up to k_new (k_new <= k()).
  Laurent truncate(int k_new) const {
    if (k_new > k()) fail(Errc::insufficient_precision, "cannot truncate above the window top");
    if (k_new < h_) fail(Errc::precision_window, "truncation below the lower order");
    return Laurent(h_, std::vector<double>(c_.begin(), c_.begin() + (k_new - h_ + 1)));
  }

  // Drop leading zero coefficients; the top order is unchanged.
  Laurent reanchor() const {
    std::size_t r = 0;
    while (r + 1 < c_.size() && is_zero_coeff(r)) ++r;
    if (r == c_.size() - 1 && is_zero_coeff(r)) return *this;
    return Laurent(h_ + static_cast<int>(r), std::vector<double>(c_.begin() + static_cast<long>(r), c_.end()));
  }

  std::string str() const {
    std::ostringstream os;
    os.precision(17);
    os << "{h=" << h_ << ", k=" << k() << ", [";
    for (std::size_t r = 0; r < c_.size(); ++r) os << (r ? ", " : "") << c_[r];
    os << "]}";
    return os.str();
  }

  friend bool operator==(const Laurent&, const Laurent&) = default;

 private:
  int h_;
  std::vector<double> c_;
};

inline Laurent scale(const Laurent& a, double c) {
  std::vector<double> out(a.coeffs());
  for (double& v : out) v *= c;
  return Laurent(a.h(), std::move(out));
}

inline Laurent add(const Laurent& a, const Laurent& b) {
  const int h = std::min(a.h(), b.h());
  const int k = std::min(a.k(), b.k());
  if (k < h) fail(Errc::precision_window, "sum has an empty window");
  std::vector<double> out(static_cast<std::size_t>(k - h + 1));
  for (int l = h; l <= k; ++l)
    out[static_cast<std::size_t>(l - h)] = flush(a.at(l) + b.at(l), std::abs(a.at(l)) + std::abs(b.at(l)));
  return Laurent(h, std::move(out));
}

inline Laurent subtract(const Laurent& a, const Laurent& b) { return add(a, scale(b, -1.0)); }

inline Laurent multiply(const Laurent& a, const Laurent& b) {
  const int h = a.h() + b.h();
  const int k = std::min(a.k() + b.h(), b.k() + a.h());
  const std::size_t n = static_cast<std::size_t>(k - h + 1);
  std::vector<double> out(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0.0, mag = 0.0;
    for (std::size_t l = 0; l <= r; ++l) {
      s += a[l] * b[r - l];
      mag += std::abs(a[l] * b[r - l]);
    }
    out[r] = flush(s, mag);
  }
  return Laurent(h, std::move(out));
}

inline Laurent divide(const Laurent& a, const Laurent& b) {
  if (!b.pivotal()) fail(Errc::non_pivotal, "divisor " + b.str() + " has a vanishing leading coefficient");
  const int h = a.h() - b.h();
  const int k = std::min(a.k() - b.h(), b.k() - 2 * b.h() + a.h());
  const std::size_t n = static_cast<std::size_t>(k - h + 1);
  std::vector<double> f(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    double s = a[r], mag = std::abs(a[r]);
    for (std::size_t l = 1; l <= r; ++l) {
      s -= b[l] * f[r - l];
      mag += std::abs(b[l] * f[r - l]);
    }
    f[r] = flush(s, mag) / b[0];
  }
  return Laurent(h, std::move(f));
}

inline Laurent multi_sum(const std::vector<Laurent>& terms) {
  if (terms.empty()) fail(Errc::invalid_argument, "sum of an empty list");
  int h = terms.front().h(), k = terms.front().k();
  for (const auto& t : terms) {
    h = std::min(h, t.h());
    k = std::min(k, t.k());
  }
  std::vector<double> out(static_cast<std::size_t>(k - h + 1), 0.0);
  for (int l = h; l <= k; ++l) {
    double s = 0.0, mag = 0.0;
    for (const auto& t : terms) {
      s += t.at(l);
      mag += std::abs(t.at(l));
    }
    out[static_cast<std::size_t>(l - h)] = flush(s, mag);
  }
  return Laurent(h, std::move(out));
}

inline Laurent multi_product(const std::vector<Laurent>& factors) {
  if (factors.empty()) fail(Errc::invalid_argument, "product of an empty list");
  int hsum = 0;
  for (const auto& f : factors) {
    if (!f.pivotal()) fail(Errc::non_pivotal, "factor " + f.str() + " is not pivotal");
    hsum += f.h();
  }
  int k = factors.front().k() + hsum - factors.front().h();
  for (const auto& f : factors) k = std::min(k, f.k() + hsum - f.h());
  const std::size_t n = static_cast<std::size_t>(k - hsum + 1);
  std::vector<double> acc(n, 0.0);
  acc[0] = 1.0;
  for (const auto& f : factors) {
    std::vector<double> next(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      double mag = 0.0;
      for (std::size_t l = 0; l <= r && l < f.size(); ++l) {
        next[r] += f[l] * acc[r - l];
        mag += std::abs(f[l] * acc[r - l]);
      }
      next[r] = flush(next[r], mag);
    }
    acc.swap(next);
  }
  return Laurent(hsum, std::move(acc));
}

inline Laurent operator+(const Laurent& a, const Laurent& b) { return add(a, b); }
inline Laurent operator-(const Laurent& a, const Laurent& b) { return subtract(a, b); }
inline Laurent operator*(const Laurent& a, const Laurent& b) { return multiply(a, b); }
inline Laurent operator/(const Laurent& a, const Laurent& b) { return divide(a, b); }
inline Laurent operator*(double c, const Laurent& a) { return scale(a, c); }

}  // namespace bdsmp
