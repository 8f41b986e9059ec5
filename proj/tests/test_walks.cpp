#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>

#include "test_support.hpp"
#include "torsionlab/json_io.hpp"
#include "torsionlab/mahler.hpp"
#include "torsionlab/walks.hpp"

using namespace torsionlab;
using namespace testing_support;

namespace {

WalkConfig identity_config(int g) {
  return uniform_config(g, {LaurentFormMatrix::identity(SurfaceModel(g), LaurentRing{})});
}

WalkConfig small_bundled(std::int64_t trials, std::int64_t steps) {
  auto c = bundled_config(3);
  c.n_trials = trials;
  c.n_steps = steps;
  return c;
}

/// Real orthogonal matrix in Sp: [[c I, s I], [-s I, c I]].
Eigen::MatrixXcd rotation(int g, double theta) {
  const auto h = static_cast<Eigen::Index>(g - 1);
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(2 * h, 2 * h);
  for (Eigen::Index i = 0; i < h; ++i) {
    r(i, i) = std::cos(theta);
    r(h + i, h + i) = std::cos(theta);
    r(i, h + i) = std::sin(theta);
    r(h + i, i) = -std::sin(theta);
  }
  return r;
}

Eigen::MatrixXcd diagonal(std::initializer_list<double> d) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index k = 0;
  for (const double x : d) v(k++) = x;
  return v.asDiagonal();
}

}  // namespace

TEST(WalkSchedule, PowersOfTwo) {
  EXPECT_EQ(walk_schedule(64), (std::vector<std::int64_t>{2, 4, 8, 16, 32, 64}));
  EXPECT_EQ(walk_schedule(10), (std::vector<std::int64_t>{2, 4, 8, 10}));
  EXPECT_EQ(walk_schedule(1), (std::vector<std::int64_t>{1}));
}

TEST(TrialStream, DeterministicAndSeparated) {
  TrialStream a(7, 3, 0), b(7, 3, 0), c(7, 3, 1), d(7, 4, 0);
  const auto x = a.next();
  EXPECT_EQ(x, b.next());
  EXPECT_NE(x, c.next());
  EXPECT_NE(x, d.next());
  for (int k = 0; k < 1000; ++k) {
    const auto s = a.symmetric(3);
    EXPECT_GE(s, -3);
    EXPECT_LE(s, 3);
    EXPECT_LT(a.below(7), 7u);
  }
}

TEST(SampleWord, IdentitySupport) {
  const auto c = identity_config(3);
  const auto id = LaurentFormMatrix::identity(SurfaceModel(3), LaurentRing{});
  for (std::int64_t n : {1, 5, 40}) EXPECT_EQ(sample_word(c, 0, n), id);
}

TEST(SampleWord, ProductInWalkOrder) {
  const auto c = bundled_config(3);
  for (std::int64_t trial = 0; trial < 10; ++trial) {
    const auto letters = sample_letters(c, trial, 12);
    auto expected = LaurentFormMatrix::identity(c.model(), LaurentRing{});
    for (const auto i : letters) expected = c.generators[i] * expected;
    EXPECT_EQ(sample_word(c, trial, 12), expected);
  }
}

TEST(SampleWord, SingleLetterFrequencies) {
  const auto gens = torelli_like_generators(3);
  auto c = uniform_config(3, {gens[0], gens[2], gens[4]});
  c.probabilities = {mpq_class(1, 2), mpq_class(1, 3), mpq_class(1, 6)};
  const int trials = 10000;
  std::vector<int> counts(3, 0);
  for (int t = 0; t < trials; ++t) {
    const auto w = sample_word(c, t, 1);
    int hit = -1;
    for (int i = 0; i < 3; ++i)
      if (w == c.generators[static_cast<std::size_t>(i)]) hit = i;
    ASSERT_GE(hit, 0);
    ++counts[static_cast<std::size_t>(hit)];
  }
  for (std::size_t i = 0; i < 3; ++i) {
    const double p = c.probabilities[i].get_d();
    const double sigma = std::sqrt(trials * p * (1 - p));
    EXPECT_LT(std::abs(counts[i] - trials * p), 3 * sigma) << i;
  }
}

TEST(SampleWord, IndependentOfThreadCount) {
  const auto c = bundled_config(3);
  std::vector<LaurentFormMatrix> serial(16, LaurentFormMatrix::identity(c.model(), LaurentRing{}));
  auto parallel = serial;
  parallel_for(serial.size(), 1, [&](std::size_t t) { serial[t] = sample_word(c, static_cast<std::int64_t>(t), 20); });
  parallel_for(parallel.size(), 4, [&](std::size_t t) { parallel[t] = sample_word(c, static_cast<std::int64_t>(t), 20); });
  for (std::size_t t = 0; t < serial.size(); ++t) EXPECT_EQ(serial[t], parallel[t]);
}

TEST(SampleWord, TwistOnlyChangesTheUnit) {
  auto plain = bundled_config(4);
  auto twisted = plain;
  twisted.twist = UnitTwist{99, 3};
  for (std::int64_t trial = 0; trial < 20; ++trial) {
    const auto a = sample_word(plain, trial, 10);
    const auto b = sample_word(twisted, trial, 10);
    std::int64_t total = 0;
    for (const auto k : sample_twists(twisted, trial, 10)) total += k;
    EXPECT_EQ(a.times_unit(total), b);
    const auto da = determinant(bottom_left_block(a));
    const auto db = determinant(bottom_left_block(b));
    EXPECT_EQ(da.is_zero(), db.is_zero());
    if (!da.is_zero()) EXPECT_EQ(kronecker_zero_test(da).has_value(), kronecker_zero_test(db).has_value());
    EXPECT_EQ(da.span(), db.span());
  }
}

TEST(Validate, Errors) {
  auto expect_code = [](const WalkConfig& c, Errc code) {
    try {
      validate(c);
      ADD_FAILURE() << "expected an error";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code);
    }
  };
  WalkConfig empty;
  expect_code(empty, Errc::EmptyGeneratorSet);

  auto c = bundled_config(3);
  c.probabilities.back() += mpq_class(1, 1000);
  expect_code(c, Errc::InvalidInput);

  c = bundled_config(3);
  c.probabilities[0] = 0;
  c.probabilities[1] *= 2;
  expect_code(c, Errc::InvalidInput);

  c = bundled_config(3);
  c.q_list = {2};
  expect_code(c, Errc::InvalidModulus);

  c = bundled_config(3);
  c.q_list = {6};
  c.root_index = 2;
  expect_code(c, Errc::NonPrimitiveRoot);

  c = bundled_config(3);
  c.generators[0].entries(0, 0) = LaurentPoly::constant(2);
  expect_code(c, Errc::InvalidInput);

  c = bundled_config(3);
  c.generators[0] = LaurentFormMatrix::identity(SurfaceModel(4), LaurentRing{});
  expect_code(c, Errc::InvalidInput);

  EXPECT_NO_THROW(validate(bundled_config(3)));
  EXPECT_NO_THROW(validate(bundled_config(4)));
}

TEST(BundledGenerators, ShapeAndInverses) {
  const auto g3 = torelli_like_generators(3);
  const auto g4 = torelli_like_generators(4);
  EXPECT_EQ(g3.size(), 16u);
  EXPECT_EQ(g4.size(), 26u);
  for (const auto* set : {&g3, &g4}) {
    for (const auto& m : *set) {
      EXPECT_TRUE(m.form_preserved());
      EXPECT_TRUE(is_torelli_like(m));
    }
    EXPECT_TRUE(generators_without_inverse(*set).empty());
  }
  EXPECT_EQ(generators_without_inverse({g3[0]}), std::vector<std::size_t>{0});
  EXPECT_TRUE(generators_without_inverse({g3[0].times_unit(2), g3[1].times_unit(-1)}).empty());
  EXPECT_THROW(torelli_like_generators(5), Error);
}

TEST(ExteriorPropagator, DiagonalLetterGrowsAtLogTwo) {
  const ExteriorMarking marking(3);
  ExteriorPropagator prop({diagonal({2, 1, 0.5, 1})}, 3);
  EXPECT_LT(unitary_form_residual(SurfaceModel(3), diagonal({2, 1, 0.5, 1})), 1e-15);
  for (int n = 1; n <= 50; ++n) {
    ASSERT_TRUE(prop.step(0));
    EXPECT_NEAR(prop.log_norm() / n, std::log(2.0), 1e-14);
    EXPECT_NEAR(prop.f_ratio(), 0.0, 1e-15);
  }
  ExteriorPropagator prop6({diagonal({3, 2, 1.0 / 3, 0.5})}, 3, true);
  for (int n = 1; n <= 20; ++n) prop6.step(0);
  EXPECT_NEAR(prop6.log_norm() / 20, std::log(6.0), 1e-13);
}

TEST(ExteriorPropagator, IdentityLetterStaysPut) {
  ExteriorPropagator prop({Eigen::MatrixXcd::Identity(6, 6)}, 4);
  for (int n = 0; n < 10; ++n) prop.step(0);
  EXPECT_EQ(prop.log_norm(), 0.0);
  EXPECT_EQ(prop.f_ratio(), 0.0);
}

TEST(ExteriorPropagator, DegenerateVectorIsReported) {
  ExteriorPropagator prop({Eigen::MatrixXcd::Zero(4, 4)}, 3);
  EXPECT_FALSE(prop.step(0));
  EXPECT_TRUE(prop.degenerate());
  EXPECT_FALSE(prop.step(0));
  ExteriorPropagator frame({Eigen::MatrixXcd::Zero(4, 4)}, 3, true);
  EXPECT_FALSE(frame.step(0));
  EXPECT_TRUE(frame.degenerate());
}

TEST(ExteriorPropagator, AttractingLineOffTheHyperplane) {
  // A = R D R^T: the top eigenvector of wedge^2 A is wedge^2 R applied to e
  const double theta = 0.3;
  const auto r = rotation(3, theta);
  const Eigen::MatrixXcd a = r * diagonal({3, 2, 1.0 / 3, 0.5}) * r.adjoint();
  ASSERT_LT(unitary_form_residual(SurfaceModel(3), a), 1e-12);
  const ExteriorMarking marking(3);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(exterior_power(a, marking));
  Eigen::Index top = 0;
  solver.eigenvalues().cwiseAbs().maxCoeff(&top);
  const Eigen::VectorXcd v = solver.eigenvectors().col(top).normalized();
  const double expected = std::abs(v(static_cast<Eigen::Index>(marking.f_index)));
  EXPECT_NEAR(expected, std::pow(std::sin(theta), 2), 1e-12);

  for (const bool frame : {false, true}) {
    ExteriorPropagator prop({a}, 3, frame);
    for (int n = 0; n < 40; ++n) prop.step(0);
    EXPECT_NEAR(prop.f_ratio(), expected, 1e-10);
    EXPECT_NEAR(prop.log_norm() / 40, std::log(6.0), 0.05);
  }
}

TEST(ExteriorPropagator, WedgeFrameAndGramAgree) {
  Rng rng(41);
  for (const int g : {3, 4}) {
    auto c = bundled_config(g);
    for (const std::int64_t q : {3, 5, 7}) {
      const auto letters = complex_letters(c, q);
      for (int trial = 0; trial < 10; ++trial) {
        ExteriorPropagator wedge(letters, g), frame(letters, g, true);
        ASSERT_TRUE(wedge.uses_wedge());
        ASSERT_FALSE(frame.uses_wedge());
        Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(2 * (g - 1), 2 * (g - 1));
        for (int s = 0; s < 12; ++s) {
          const auto i = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(letters.size()) - 1));
          wedge.step(i);
          frame.step(i);
          prod = letters[i] * prod;
        }
        const ExteriorMarking marking(g);
        const double gram = std::log(exterior_norm_of_e(prod, marking));
        const double brute = std::log(exterior_power(prod, marking).col(static_cast<Eigen::Index>(marking.e_index)).norm());
        EXPECT_NEAR(wedge.log_norm(), brute, 1e-8);
        EXPECT_NEAR(frame.log_norm(), brute, 1e-8);
        EXPECT_NEAR(gram, brute, 1e-6);  // the Gram determinant squares the conditioning
        const double ratio = std::abs(exterior_coefficient(prod, marking)) / std::exp(brute);
        EXPECT_NEAR(wedge.f_ratio(), ratio, 1e-8);
        EXPECT_NEAR(frame.f_ratio(), ratio, 1e-8);
      }
    }
  }
}

TEST(ExteriorPropagator, MatchesExactBlockDeterminantOfSampledWords) {
  const auto c = bundled_config(3);
  const auto letters = complex_letters(c, 5);
  const ExteriorMarking marking(3);
  for (std::int64_t trial = 0; trial < 10; ++trial) {
    const auto idx = sample_letters(c, trial, 16);
    ExteriorPropagator prop(letters, 3);
    for (const auto i : idx) prop.step(i);
    const auto w = sample_word(c, trial, 16);
    const double exact = std::abs(iota(reduce_mod_q(determinant(bottom_left_block(w)), 5), 1));
    EXPECT_NEAR(prop.f_ratio() * std::exp(prop.log_norm()), exact, 1e-8 * std::max(1.0, exact));
  }
}

TEST(RunWalk, IdentitySupport) {
  auto c = identity_config(3);
  c.n_trials = 20;
  c.n_steps = 16;
  c.q_list = {3, 5};
  const auto r = run_walk(c);
  for (const auto& b : r.mahler) {
    EXPECT_EQ(b.fraction_positive(), 0.0);
    EXPECT_EQ(b.zero_det, b.total);
  }
  for (const auto& s : r.series) {
    EXPECT_EQ(s.lambda_hat, 0.0);
    for (const auto& p : s.points) {
      EXPECT_EQ(p.mean, 0.0);
      for (const double f : p.fraction_below) EXPECT_EQ(f, 1.0);
    }
  }
  EXPECT_TRUE(r.inverses_present);
  const auto probe = proximality_probe(c);
  for (const auto& p : probe) EXPECT_FALSE(p.report.witness.has_value());
}

TEST(RunWalk, DeterministicAcrossThreadCounts) {
  auto c = small_bundled(60, 16);
  c.q_list = {3, 7};
  c.threads = 1;
  const auto one = json_io::to_json(run_walk(c)).dump();
  c.threads = 4;
  EXPECT_EQ(json_io::to_json(run_walk(c)).dump(), one);
  EXPECT_EQ(json_io::to_json(run_walk(c)).dump(), one);
  c.master_seed = 2;
  EXPECT_NE(json_io::to_json(run_walk(c)).dump(), one);
}

TEST(RunWalk, TwistedLettersGiveIdenticalReport) {
  auto c = small_bundled(60, 16);
  c.q_list = {3, 5};
  const auto base = json_io::to_json(run_walk(c)).dump();
  for (const std::uint64_t seed : {1u, 17u}) {
    c.twist = UnitTwist{seed, 4};
    EXPECT_EQ(json_io::to_json(run_walk(c)).dump(), base);
  }
}

TEST(RunWalk, DegreeLedgerHoldsOnEveryWord) {
  for (const int g : {3, 4}) {
    auto c = bundled_config(g);
    std::vector<LaurentFormMatrix> lifted;
    for (const auto& m : c.generators) lifted.push_back(canonical_lift(m));
    const auto d_mu = std::max<std::int64_t>(1, degree_bound(lifted));
    for (std::int64_t trial = 0; trial < 30; ++trial)
      for (const std::int64_t n : {1, 4, 16}) {
        const auto det = determinant(bottom_left_block(sample_word(c, trial, n)));
        EXPECT_LE(det.span(), (g - 1) * d_mu * n);
      }
    c.n_trials = 30;
    c.n_steps = 16;
    const auto r = run_walk(c);
    EXPECT_EQ(r.d_mu, d_mu);
    for (std::size_t k = 0; k < r.schedule.size(); ++k) EXPECT_LE(r.mahler[k].max_det_span, r.mahler[k].det_span_bound);
  }
}

TEST(RunWalk, TrendsAtGenusThree) {
  auto c = small_bundled(500, 32);
  const auto r = run_walk(c);
  ASSERT_EQ(r.series.size(), 1u);
  const auto& pts = r.series[0].points;
  for (std::size_t k = 1; k < pts.size(); ++k) EXPECT_LT(pts[k].variance, pts[k - 1].variance) << pts[k].n;
  // hyperplane fraction at delta = 1e-2 after a burn-in, allowing 3 sigma of noise
  for (std::size_t k = 2; k < pts.size(); ++k) {
    const double p = pts[k - 1].fraction_below[1];
    const double noise = 3 * std::sqrt(std::max(p * (1 - p), 1e-4) / static_cast<double>(pts[k].count));
    EXPECT_LE(pts[k].fraction_below[1], p + noise) << pts[k].n;
  }
  EXPECT_GT(r.mahler.back().fraction_positive(), r.mahler.front().fraction_positive());
  EXPECT_GT(r.mahler.back().fraction_positive(), 0.9);
  EXPECT_EQ(r.series[0].degenerate_trials, 0);
  EXPECT_GT(r.series[0].lambda_hat, 0.0);
}

TEST(Proximality, DiagonalLetterHasWitnessAtLengthOne) {
  const auto rep = proximality_probe({Eigen::MatrixXcd::Identity(4, 4), diagonal({3, 2, 1.0 / 3, 0.5})}, 3);
  ASSERT_TRUE(rep.witness.has_value());
  EXPECT_EQ(rep.witness->word, std::vector<std::size_t>{1});
  EXPECT_NEAR(rep.witness->gap_ratio, 6.0 / 1.5, 1e-9);
  EXPECT_EQ(rep.words_examined, 2u);
}

TEST(Proximality, IdentityHasNoWitness) {
  const auto rep = proximality_probe({Eigen::MatrixXcd::Identity(4, 4)}, 3, 5);
  EXPECT_FALSE(rep.witness.has_value());
  EXPECT_EQ(rep.words_examined, 5u);
  EXPECT_FALSE(rep.budget_exhausted);
  const auto capped = proximality_probe({Eigen::MatrixXcd::Identity(4, 4), Eigen::MatrixXcd::Identity(4, 4)}, 3, 8, 10);
  EXPECT_TRUE(capped.budget_exhausted);
  EXPECT_EQ(capped.words_examined, 10u);
}

TEST(Proximality, WitnessImpliesPositiveExponent) {
  auto c = small_bundled(100, 32);
  const auto probe = proximality_probe(c);
  ASSERT_EQ(probe.size(), 1u);
  ASSERT_TRUE(probe[0].report.witness.has_value());
  EXPECT_GT(probe[0].report.witness->gap_ratio, 1 + 1e-3);
  EXPECT_GT(run_walk(c).series[0].lambda_hat, 0.0);
}
