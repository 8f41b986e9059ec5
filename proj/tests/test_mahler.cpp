#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "torsionlab/cyclotomic.hpp"
#include "torsionlab/mahler.hpp"

using namespace torsionlab;
using namespace testing_support;

namespace {

LaurentPoly P(std::initializer_list<long> c, std::int64_t lo = 0) { return LaurentPoly::from_coeffs(c, lo); }

const LaurentPoly kLehmer = LaurentPoly::from_coeffs({1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1});

// Jensen for a quadratic a t^2 + b t + c from the quadratic formula.
double quadratic_measure(double a, double b, double c) {
  const std::complex<double> disc = std::sqrt(std::complex<double>(b * b - 4 * a * c));
  const std::complex<double> r1 = (-b + disc) / (2 * a), r2 = (-b - disc) / (2 * a);
  return std::log(std::abs(a)) + std::log(std::max(1.0, std::abs(r1))) + std::log(std::max(1.0, std::abs(r2)));
}

}  // namespace

TEST(MahlerMeasure, SpecExamples) {
  const auto phi12 = mahler_measure(P({1, 0, -1, 0, 1}));
  EXPECT_EQ(phi12.log_measure, 0.0);
  EXPECT_EQ(phi12.method, MahlerMethod::kronecker_exact_zero);

  EXPECT_NEAR(mahler_measure(P({-1, -1, 1})).log_measure, std::log((1 + std::sqrt(5.0)) / 2), 1e-12);
  EXPECT_NEAR(mahler_measure(P({-1, -1, 1})).log_measure, quadratic_measure(1, -1, -1), 1e-12);
  EXPECT_NEAR(mahler_measure(P({-1, 2})).log_measure, std::log(2.0), 1e-12);
  EXPECT_NEAR(mahler_measure(P({-2, 1})).log_measure, std::log(2.0), 1e-12);
  // high-precision reference for Lehmer's polynomial (mpmath, 50 digits)
  EXPECT_NEAR(mahler_measure(kLehmer).log_measure, 0.16235761200773814, 1e-12);
}

TEST(MahlerMeasure, ResultCarriesRootsAndLeadingCoefficient) {
  const auto r = mahler_measure(P({3, 0, 0, 2}, -2));
  EXPECT_EQ(r.leading_coeff, 2);
  EXPECT_EQ(r.roots.size(), 3u);
  EXPECT_EQ(r.method, MahlerMethod::root_product);
  double expect = std::log(2.0);
  for (const auto& z : r.roots) expect += std::log(std::max(1.0, std::abs(z)));
  EXPECT_NEAR(r.log_measure, expect, 1e-12);
}

TEST(MahlerMeasure, QuadraticsAgainstTheQuadraticFormula) {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const long a = static_cast<long>(uniform(rng, 1, 9)) * (uniform(rng, 0, 1) ? 1 : -1);
    const long b = static_cast<long>(uniform(rng, -20, 20));
    const long c = static_cast<long>(uniform(rng, 1, 9)) * (uniform(rng, 0, 1) ? 1 : -1);
    EXPECT_NEAR(mahler_measure(P({c, b, a})).log_measure, quadratic_measure(a, b, c), 1e-10) << a << " " << b << " " << c;
  }
}

TEST(MahlerMeasure, RepeatedUnitCircleRootsAreHandledExactly) {
  // (t - 1)^3 (t^2 + 1)^2 (t - 3)
  const auto p = P({-1, 1}) * P({-1, 1}) * P({-1, 1}) * P({1, 0, 1}) * P({1, 0, 1}) * P({-3, 1});
  EXPECT_NEAR(mahler_measure(p).log_measure, std::log(3.0), 1e-12);
  EXPECT_NEAR(mahler_measure_roots(p).log_measure, std::log(3.0), 1e-12);
}

TEST(MahlerMeasure, ZeroPolynomialIsAnError) {
  try {
    mahler_measure(LaurentPoly{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ZeroPolynomial);
  }
  EXPECT_THROW(kronecker_zero_test(LaurentPoly{}), Error);
}

TEST(MahlerMeasure, UnitInvarianceIsExact) {
  Rng rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_laurent(rng, 5, -4, 4, 6);
    if (p.is_zero()) continue;
    const double m = mahler_measure(p).log_measure;
    const auto k = uniform(rng, -10, 10);
    EXPECT_EQ(mahler_measure(p.shifted(k)).log_measure, m);
    EXPECT_EQ(mahler_measure(-p.shifted(k)).log_measure, m);
  }
}

TEST(MahlerMeasure, MultiplicativeOnRandomPairs) {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = poly::from_dense([&] {
      poly::Dense d;
      for (long c : random_dense(rng, static_cast<int>(uniform(rng, 1, 12)), 6)) d.emplace_back(c);
      return d;
    }());
    const auto b = poly::from_dense([&] {
      poly::Dense d;
      for (long c : random_dense(rng, static_cast<int>(uniform(rng, 1, 12)), 6)) d.emplace_back(c);
      return d;
    }());
    const double lhs = mahler_measure(a * b).log_measure;
    const double rhs = mahler_measure(a).log_measure + mahler_measure(b).log_measure;
    ASSERT_NEAR(lhs, rhs, 1e-8) << a.to_string() << " * " << b.to_string();
    ASSERT_GE(lhs, -1e-12);
  }
}

TEST(Kronecker, SpecExamples) {
  const auto a = kronecker_zero_test(P({-1, 0, 0, 1}));
  ASSERT_TRUE(a);
  EXPECT_EQ(a->k_exponent, 0);
  EXPECT_EQ(a->cyclotomic_indices, (std::vector<std::int64_t>{1, 3}));
  EXPECT_FALSE(kronecker_zero_test(P({-2, 1})));
  const auto c = kronecker_zero_test(-(LaurentPoly::t(2) * P({1, 0, 1})));
  ASSERT_TRUE(c);
  EXPECT_EQ(c->k_exponent, 2);
  EXPECT_EQ(c->sign, -1);
  EXPECT_EQ(c->cyclotomic_indices, (std::vector<std::int64_t>{4}));
}

TEST(Kronecker, FactorizationReconstructsTheInput) {
  Rng rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    LaurentPoly p = LaurentPoly::t(uniform(rng, -5, 5));
    if (uniform(rng, 0, 1)) p = -p;
    const int factors = static_cast<int>(uniform(rng, 0, 5));
    for (int k = 0; k < factors; ++k) p *= cyclotomic(uniform(rng, 1, 40));
    const auto f = kronecker_zero_test(p);
    ASSERT_TRUE(f) << p.to_string();
    LaurentPoly rebuilt = LaurentPoly::t(f->k_exponent) * LaurentPoly::constant(f->sign);
    for (auto m : f->cyclotomic_indices) rebuilt *= cyclotomic(m);
    ASSERT_EQ(rebuilt, p);
  }
}

TEST(Kronecker, IndicesWithSmallTotientAboveTheNaiveBound) {
  // Phi_8, Phi_10 and Phi_12 have degree 4 although totient(7) = 6 > 4.
  for (std::int64_t m : {8, 10, 12}) {
    const auto f = kronecker_zero_test(cyclotomic(m) * cyclotomic(5));
    ASSERT_TRUE(f) << m;
    EXPECT_EQ(f->cyclotomic_indices.size(), 2u);
  }
}

TEST(Kronecker, NearMissesAreRejected) {
  // reciprocal, monic, all coefficients small, but with roots off the circle
  EXPECT_FALSE(kronecker_zero_test(kLehmer));
  EXPECT_FALSE(kronecker_zero_test(P({1, -3, 1})));
  EXPECT_FALSE(kronecker_zero_test(cyclotomic(7) * P({1, -3, 1})));
  EXPECT_FALSE(kronecker_zero_test(cyclotomic(7) * P({2})));
}

TEST(Kronecker, ConsistentWithRootMeasureOnSmallGrid) {
  // exhaustive over degree <= 4 with coefficients in [-2, 2]; the acceptance
  // suite covers degree <= 6
  int checked = 0;
  for (int deg = 1; deg <= 4; ++deg) {
    std::vector<long> coeffs(static_cast<std::size_t>(deg + 1), -2);
    while (true) {
      if (coeffs.back() != 0 && coeffs.front() != 0) {
        poly::Dense d;
        for (long x : coeffs) d.emplace_back(x);
        const auto p = poly::from_dense(d);
        const bool zero = kronecker_zero_test(p).has_value();
        const double m = mahler_measure_roots(p).log_measure;
        ASSERT_EQ(zero, m < 1e-6) << p.to_string() << " m=" << m;
        ++checked;
      }
      std::size_t k = 0;
      while (k < coeffs.size() && ++coeffs[k] > 2) coeffs[k++] = -2;
      if (k == coeffs.size()) break;
    }
  }
  EXPECT_GT(checked, 2000);
}

TEST(KAlpha, SpecExamples) {
  const auto small = build_K_alpha(1.0, 10);
  EXPECT_TRUE(small.contains(1));
  EXPECT_TRUE(small.contains(2));
  EXPECT_TRUE(small.tail_assumed);
  // direct scan oracle at alpha = 1, m <= 10
  for (std::int64_t m = 3; m <= 10; ++m) {
    const bool small_totient = static_cast<double>(totient(m)) <= std::sqrt(static_cast<double>(m));
    const double eta = std::sqrt(static_cast<double>(m)) / std::log(static_cast<double>(m)) - 1;
    const bool big = static_cast<double>(cyclotomic(m).height().get_si()) > std::pow(static_cast<double>(m), eta);
    EXPECT_EQ(small.contains(m), small_totient || big) << m;
  }
  EXPECT_EQ(build_K_alpha(100.0, 50).list(), (std::vector<std::int64_t>{1, 2, 4, 6}));
  EXPECT_EQ(build_K_alpha(1.0, 1).list(), (std::vector<std::int64_t>{1, 2}));
}

TEST(KAlpha, MonotoneInAlpha) {
  const std::vector<double> alphas{0.05, 0.1, 0.2, 0.5, 1.0, 2.0};
  for (std::size_t i = 0; i + 1 < alphas.size(); ++i) {
    const auto big = build_K_alpha(alphas[i], 150).list();
    const auto small = build_K_alpha(alphas[i + 1], 150).list();
    EXPECT_TRUE(std::includes(big.begin(), big.end(), small.begin(), small.end())) << alphas[i];
  }
  EXPECT_GT(build_K_alpha(0.05, 150).list().size(), build_K_alpha(2.0, 150).list().size());
}

TEST(KAlpha, RejectsBadParameters) {
  EXPECT_THROW(build_K_alpha(0.0, 10), Error);
  EXPECT_THROW(build_K_alpha(1.0, 0), Error);
}

TEST(ConstraintCheck, SpecExamples) {
  ConstraintParams params;
  params.K = {1, 2};
  params.d_mu = 2;
  params.g = 3;
  const auto hit = constraint_check(P({-1, 0, 0, 1}), params, 1);
  EXPECT_EQ(hit.kind, VerdictKind::cyclotomic_hit);
  EXPECT_EQ(hit.k, 1);
  EXPECT_EQ(constraint_check(P({-2, 1}), params, 1).kind, VerdictKind::not_mahler_zero);

  params.alpha = 50;
  const auto p = cyclotomic(5) * cyclotomic(7);
  const auto v = constraint_check(p, params, 3);
  EXPECT_EQ(v.kind, VerdictKind::small_everywhere);
  // oracle: max |p| on the same 1024-point grid
  double max_abs = 0;
  for (int j = 0; j < 1024; ++j)
    max_abs = std::max(max_abs, static_cast<double>(std::abs(evaluate_at_root_of_unity(p, j, 1024))));
  EXPECT_NEAR(v.max_log_abs, std::log(max_abs), 1e-12);
  EXPECT_DOUBLE_EQ(v.log_bound, 50.0 / (2 * 2) * 10);
}

TEST(ConstraintCheck, DegreeBoundIsEnforced) {
  ConstraintParams params;
  params.d_mu = 1;
  params.g = 3;
  try {
    constraint_check(cyclotomic(7), params, 2);  // deg 6 > 2 * 1 * 2
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DegreeBoundViolated);
  }
}

TEST(ConstraintCheck, SmallAlphaExposesAMissedIndex) {
  ConstraintParams params;
  params.alpha = 1e-3;
  params.K = {1, 2};
  params.d_mu = 4;
  params.g = 3;
  EXPECT_EQ(constraint_check(cyclotomic(5) * cyclotomic(5), params, 2).kind, VerdictKind::bound_exceeded);
}
