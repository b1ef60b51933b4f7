#include <random>

#include <gtest/gtest.h>

#include "bdsmp/laurent.hpp"
#include "support/series_oracle.hpp"

using bdsmp::Laurent;

namespace {

void expect_coeffs(const Laurent& x, int h, std::vector<double> c, double tol = 1e-15) {
  ASSERT_EQ(x.h(), h) << x.str();
  ASSERT_EQ(x.size(), c.size()) << x.str();
  for (std::size_t r = 0; r < c.size(); ++r) EXPECT_NEAR(x[r], c[r], tol) << "r=" << r << " " << x.str();
}

Laurent random_laurent(std::mt19937_64& rng, bool pivotal_lead) {
  std::uniform_int_distribution<int> h(-2, 2), len(1, 5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> c(static_cast<std::size_t>(len(rng)));
  for (double& v : c) v = u(rng);
  if (pivotal_lead && std::abs(c[0]) < 0.1) c[0] = 0.5;
  return Laurent(h(rng), c);
}

}  // namespace

TEST(Laurent, ScaleExamples) {
  const Laurent a(-1, {3, 4});
  EXPECT_EQ(bdsmp::scale(a, 1.0), a);
  expect_coeffs(bdsmp::scale(Laurent(0, {1, 1}), 2.0), 0, {2, 2});
  const Laurent z = bdsmp::scale(a, 0.0);
  expect_coeffs(z, -1, {0, 0});
  EXPECT_FALSE(z.pivotal());
}

TEST(Laurent, AddExamples) {
  const Laurent s = bdsmp::add(Laurent(-1, {1, 2}), Laurent(0, {3, 4}));
  expect_coeffs(s, -1, {1, 5});
  EXPECT_EQ(s.k(), 0);
  const Laurent a(0, {0.3, -1.7, 2.9});
  const Laurent z = bdsmp::add(a, bdsmp::scale(a, -1.0));
  expect_coeffs(z, 0, {0, 0, 0});
  EXPECT_FALSE(z.pivotal());
  EXPECT_TRUE(z.is_zero());
  expect_coeffs(Laurent(0, {1, 1, 1}) + Laurent(0, {2, 0, 0}), 0, {3, 1, 1});
}

TEST(Laurent, MultiplyExamples) {
  const Laurent p = bdsmp::multiply(Laurent(0, {1, 1}), Laurent(0, {1, -1}));
  expect_coeffs(p, 0, {1, 0});
  EXPECT_EQ(p.k(), 1);
  expect_coeffs(Laurent(-1, {1}) * Laurent(1, {1}), 0, {1});
  const Laurent a(-1, {2, -3, 5, 7});
  const Laurent one = Laurent::polynomial({1}, 2);
  const Laurent r = a * one;
  EXPECT_EQ(r.k(), std::min(a.k(), one.k() + a.h()));
  expect_coeffs(r, -1, {2, -3, 5});
}

TEST(Laurent, DivideExamples) {
  expect_coeffs(bdsmp::divide(Laurent(0, {1, 0, 0}), Laurent(0, {1, 1, 0})), 0, {1, -1, 1});
  expect_coeffs(bdsmp::divide(Laurent(1, {2, 2}), Laurent(0, {2, 0})), 1, {1, 1});
  const Laurent a(1, {0.7, -0.2, 1.3});
  const Laurent q = a / a;
  EXPECT_EQ(q.h(), 0);
  EXPECT_EQ(q.k(), 2);  // min(k_A - h_B, k_B - 2 h_B + h_A) with h = 1, k = 3
  for (std::size_t r = 0; r < q.size(); ++r) EXPECT_NEAR(q[r], r == 0 ? 1.0 : 0.0, 1e-15);
}

TEST(Laurent, DivideRejectsNonPivotal) {
  try {
    bdsmp::divide(Laurent(0, {1}), Laurent(0, {0, 1}));
    FAIL();
  } catch (const bdsmp::Error& e) {
    EXPECT_EQ(e.code(), bdsmp::Errc::non_pivotal);
  }
}

TEST(Laurent, MultiSumExamples) {
  const Laurent a(2, {1.5, -2});
  EXPECT_EQ(bdsmp::multi_sum({a}), a);
  expect_coeffs(bdsmp::multi_sum(std::vector<Laurent>(7, Laurent(0, {1}))), 0, {7});
  const Laurent s = bdsmp::multi_sum({Laurent(0, {1, 1}), Laurent(1, {1}), Laurent(-1, {1, 0, 0})});
  expect_coeffs(s, -1, {1, 1, 2});
  EXPECT_EQ(s.k(), 1);
}

TEST(Laurent, MultiProductExamples) {
  expect_coeffs(bdsmp::multi_product(std::vector<Laurent>(3, Laurent(0, {1, 1}))), 0, {1, 3});
  expect_coeffs(bdsmp::multi_product({Laurent(1, {1}), Laurent(1, {1})}), 2, {1});
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const Laurent a = random_laurent(rng, true), b = random_laurent(rng, true);
    const Laurent p = bdsmp::multi_product({a, b}), q = a * b;
    ASSERT_EQ(p.h(), q.h());
    ASSERT_EQ(p.k(), q.k());
    for (std::size_t r = 0; r < p.size(); ++r) EXPECT_NEAR(p[r], q[r], 1e-12 * (1 + std::abs(q[r])));
  }
}

TEST(Laurent, WindowsAndAccess) {
  const Laurent a(-1, {1, 2, 3});
  EXPECT_EQ(a.k(), 1);
  EXPECT_EQ(a.at(-3), 0.0);
  EXPECT_EQ(a.at(1), 3.0);
  EXPECT_THROW(a.at(2), bdsmp::Error);
  EXPECT_THROW(Laurent(0, {}), bdsmp::Error);
  EXPECT_THROW(a.truncate(2), bdsmp::Error);
  expect_coeffs(a.truncate(0), -1, {1, 2});
  expect_coeffs(Laurent(0, {0, 0, 5, 6}).reanchor(), 2, {5, 6});
  const Laurent z = Laurent::zero(1, 3);
  EXPECT_EQ(z.reanchor(), z);
  EXPECT_DOUBLE_EQ(Laurent(1, {2, 3}).evaluate(0.5), 2 * 0.5 + 3 * 0.25);
  EXPECT_DOUBLE_EQ(Laurent(-1, {2}).evaluate(0.25), 8.0);
}

// Pivotality must not depend on how fast higher coefficients grow.
TEST(Laurent, PivotalityIgnoresCoefficientGrowth) {
  const Laurent a(1, {7e4, -5e9, 4e14, -3e19});
  EXPECT_TRUE(a.pivotal());
  EXPECT_NO_THROW(bdsmp::divide(Laurent(0, {1, 0, 0, 0}), a));
}

TEST(Laurent, RandomOpsMatchRationalOracle) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> op(0, 3);
  for (int t = 0; t < 500; ++t) {
    const Laurent a = random_laurent(rng, true), b = random_laurent(rng, true);
    const auto A = oracle::Series::from(a), B = oracle::Series::from(b);
    Laurent got;
    oracle::Series want;
    switch (op(rng)) {
      case 0: got = a + b; want = oracle::add(A, B); break;
      case 1: got = a - b; want = oracle::add(A, oracle::negate(B)); break;
      case 2: got = a * b; want = oracle::multiply(A, B); break;
      default: got = a / b; want = oracle::divide(A, B); break;
    }
    ASSERT_EQ(got.h(), want.h);
    ASSERT_EQ(got.k(), want.k);
    for (int l = want.h; l <= want.k; ++l) {
      const double w = static_cast<double>(want.at(l));
      EXPECT_LE(std::abs(got.at(l) - w), 1e-10 * std::abs(w)) << "l=" << l;
    }
  }
}
