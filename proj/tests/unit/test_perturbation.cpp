#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <dobrushin/linalg.hpp>
#include <dobrushin/perturbation.hpp>
#include <dobrushin/qubit_example.hpp>
#include <dobrushin/sampling.hpp>

#include "dob_properties.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dobrushin;

namespace {

Semigroup random_chain(int n, sampling::Rng& rng) {
  return Semigroup::continuous(StateSpace::classical(n), sampling::random_rate_matrix(n, rng));
}

Semigroup random_invariant(const MarkovProjection& p, sampling::Rng& rng) {
  return Semigroup::continuous(p.space(), sampling::random_invariant_generator(p, rng), p);
}

}  // namespace

TEST(Perturb, ClosedFormOnFrozenBase) {
  const auto c3 = StateSpace::classical(3);
  Vector w1(3), w2(3);
  w1 << 0.3, 0.7, 0;
  w2 << 0, 0, 1;
  const auto p = block_projection(c3, {{0, 1}, {2}}, {w1, w2});
  const auto base = fixture::frozen(3).with_projection(p);
  for (double lambda : {0.5, 2.0}) {
    const PerturbedSemigroup s = perturb(base, p.op(), lambda);
    ASSERT_TRUE(s.semigroup().commuting_projection().has_value());
    for (double t : {0.0, 0.3, 1.0, 4.0}) {
      const double e = std::exp(-lambda * t);
      const Matrix expected = e * Matrix::Identity(3, 3) + (1 - e) * p.matrix();
      EXPECT_LE(linalg::max_abs_diff(s.evaluate(t).matrix(), expected), 1e-14);
      EXPECT_TRUE(validate_markov(s.evaluate(t)).is_markov());
    }
  }
}

TEST(Perturb, VanishingLambda) {
  sampling::Rng rng(61);
  const Semigroup s = random_chain(4, rng);
  const PerturbedSemigroup ps = perturb(s, MarkovOperator(s.space(), sampling::random_markov(4, rng)), 1e-12);
  EXPECT_LE(oracle::one_norm(ps.evaluate(1).matrix() - s.evaluate(1).matrix()), 1e-9);
  EXPECT_FALSE(ps.semigroup().commuting_projection().has_value());
}

TEST(Perturb, KeepsMarkovAndCommutation) {
  sampling::Rng rng(62);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = props::nontrivial_projection(2 + trial % 5, rng);
    const Semigroup s = random_invariant(p, rng);
    const PerturbedSemigroup ps = perturb(s, p.op(), 0.7);
    ASSERT_TRUE(ps.semigroup().commuting_projection().has_value());
    EXPECT_LE(linalg::max_abs_diff(ps.generator(), s.matrix() + 0.7 * (p.matrix() - Matrix::Identity(p.space().dim(), p.space().dim()))), 1e-15);
    for (double t : {0.5, 2.0, 8.0}) {
      const Matrix tt = ps.evaluate(t).matrix();
      ASSERT_TRUE(validate_markov(ps.evaluate(t)).is_markov());
      ASSERT_LE(linalg::max_abs_diff(tt * p.matrix(), p.matrix()), 1e-10);
      ASSERT_LE(linalg::max_abs_diff(p.matrix() * tt, p.matrix()), 1e-10);
      // delta_P(T^{lambda,P-I}_t) <= exp(-lambda t)
      ASSERT_LE(delta_exact(tt, p).value(), std::exp(-0.7 * t) + 1e-12);
    }
  }
}

TEST(Perturb, Errors) {
  const auto s = fixture::two_state();
  const auto q = fixture::uniform_projection(2).op();
  EXPECT_THROW(perturb(s, q, 0.0), PreconditionError);
  EXPECT_THROW(perturb(s, q, -1.0), PreconditionError);
  Matrix bad(2, 2);
  bad << 1.2, 0, -0.2, 1;
  EXPECT_THROW(perturb(s, MarkovOperator(StateSpace::classical(2), bad), 1.0), PreconditionError);
  EXPECT_THROW(perturb(s, MarkovOperator::identity(StateSpace::classical(3)), 1.0), DimensionError);
  const Semigroup d = Semigroup::discrete(example_phi().op());
  EXPECT_THROW(perturb(d, example_projection().op(), 1.0), PreconditionError);
}

TEST(Dyson, ZerothOrder) {
  sampling::Rng rng(63);
  const Semigroup s = random_chain(3, rng);
  const MarkovOperator q(s.space(), sampling::random_markov(3, rng));
  const DysonResult r = dyson_eval(s, q, 1.3, 0.8, 0);
  const double e = std::exp(-1.3 * 0.8);
  EXPECT_LE(linalg::max_abs_diff(r.matrix, e * s.evaluate(0.8).matrix()), 1e-15);
  EXPECT_NEAR(r.tail_bound, e * (std::exp(1.3 * 0.8) - 1), 1e-15);
  EXPECT_TRUE(r.consistent);
  EXPECT_THROW(dyson_eval(s, q, 1.0, 1.0, -1), PreconditionError);
}

TEST(Dyson, PoissonTail) {
  EXPECT_NEAR(poisson_tail(2.0, 0), 1 - std::exp(-2.0), 1e-15);
  double direct = 0.0;
  for (int k = 21; k < 80; ++k) direct += std::exp(-1.0) / oracle::factorial(k);
  EXPECT_NEAR(poisson_tail(1.0, 20), direct, 1e-30);
  EXPECT_LT(poisson_tail(1.0, 20), 1e-19);
  EXPECT_EQ(poisson_tail(0.0, 3), 0.0);
}

TEST(Dyson, AgreesWithClosedForm) {
  sampling::Rng rng(64);
  for (int trial = 0; trial < 3; ++trial) {
    const int n = 2 + trial;
    const Semigroup s = random_chain(n, rng);
    const MarkovOperator q(s.space(), sampling::random_markov(n, rng));
    for (double lambda : {0.5, 1.0, 2.0}) {
      for (double t : {0.5, 1.0, 2.0}) {
        const Matrix closed_t = oracle::expm_taylor(t * (s.matrix() + lambda * (q.matrix() - Matrix::Identity(n, n))));
        for (int k : {5, 10, 20}) {
          const DysonResult r = dyson_eval(s, q, lambda, t, k);
          ASSERT_LE(oracle::one_norm(r.matrix - closed_t), r.tail_bound + 1e-8)
              << "lambda=" << lambda << " t=" << t << " K=" << k;
          ASSERT_TRUE(r.consistent);
        }
      }
    }
  }
}

TEST(Dyson, MassLadder) {
  sampling::Rng rng(65);
  std::exponential_distribution<double> e;
  const Semigroup s = random_chain(4, rng);
  const MarkovOperator q(s.space(), sampling::random_markov(4, rng));
  for (double t : {0.5, 1.0, 2.5}) {
    const std::vector<Matrix> terms = dyson_terms(s, q, t, 5);
    ASSERT_EQ(terms.size(), 6u);
    for (int k = 0; k <= 5; ++k) {
      Vector x(4);
      for (int i = 0; i < 4; ++i) x(i) = e(rng);
      x /= x.sum();
      const double mass = (terms[k] * x).sum();
      ASSERT_NEAR(mass, std::pow(t, k) / oracle::factorial(k), 1e-9) << "k=" << k << " t=" << t;
      ASSERT_GE((terms[k] * x).minCoeff(), -1e-12);
    }
  }
}

TEST(RhoR, Examples) {
  const auto p = fixture::uniform_projection(2);
  const auto frozen = fixture::frozen(2);
  EXPECT_EQ(rho_r(frozen, frozen, 1.0).value, 0.0);
  // |I - P|_{1->1} = 1 for the rank-one average on two states.
  EXPECT_NEAR(oracle::one_norm(Matrix::Identity(2, 2) - p.matrix()), 1.0, 1e-15);
  for (double lambda : {0.3, 1.0, 4.0}) {
    const PerturbedSemigroup ps = perturb(frozen, p.op(), lambda);
    const MetricValue m = rho_r(frozen, ps.semigroup(), 1.0);
    EXPECT_LE(m.certified_error, 1e-7);
    EXPECT_NEAR(m.value, 1 - std::exp(-lambda), 1e-7 + m.certified_error);
    EXPECT_LE(m.value, 2 * (1 - std::exp(-lambda)));
    EXPECT_EQ(m.parameter, 1.0);
  }
  EXPECT_THROW(rho_r(frozen, frozen, 0.0), PreconditionError);
  EXPECT_THROW(rho_r(frozen, fixture::frozen(3), 1.0), DimensionError);
}

TEST(RhoR, DensityBoundOnInvariantClass) {
  sampling::Rng rng(66);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = props::nontrivial_projection(2 + trial % 5, rng);
    const Semigroup s = random_invariant(p, rng);
    const double lambda = 0.1 + 0.3 * trial;
    const MetricValue m = rho_r(s, perturb(s, p.op(), lambda).semigroup(), 1.0);
    ASSERT_LE(m.value, 2 * (1 - std::exp(-lambda)) + 1e-12);
  }
}

TEST(RhoR, MetricAxioms) {
  sampling::Rng rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 4;
    const Semigroup a = random_chain(n, rng), b = random_chain(n, rng), c = random_chain(n, rng);
    const MetricValue ab = rho_r(a, b, 1.5), ba = rho_r(b, a, 1.5);
    EXPECT_EQ(ab.value, ba.value);
    const MetricValue bc = rho_r(b, c, 1.5), ac = rho_r(a, c, 1.5);
    const double slack = 2 * (ab.certified_error + bc.certified_error + ac.certified_error);
    EXPECT_LE(ac.value, ab.value + bc.value + slack);
    EXPECT_GE(ab.value, 0.0);
    // Grid lower bound from an independent evaluation.
    double grid = 0.0;
    for (int k = 0; k <= 150; ++k) {
      const double t = 1.5 * k / 150;
      grid = std::max(grid, oracle::one_norm(oracle::expm_taylor(t * a.matrix()) -
                                             oracle::expm_taylor(t * b.matrix())));
    }
    EXPECT_GE(ab.value + ab.certified_error, grid - 1e-12);
    EXPECT_LE(ab.value, grid + 1e-3);
  }
}

TEST(RhoFull, Examples) {
  sampling::Rng rng(68);
  const Semigroup a = random_chain(3, rng), b = random_chain(3, rng);
  EXPECT_EQ(rho_full(a, a, 10).value, 0.0);
  const MetricValue m20 = rho_full(a, b, 20);
  const MetricValue m40 = rho_full(a, b, 40);
  EXPECT_LT(m20.value, 1.0);
  EXPECT_LE(std::abs(m40.value - m20.value), std::ldexp(1.0, -20) + m20.certified_error + m40.certified_error);
  EXPECT_GE(m20.certified_error, std::ldexp(1.0, -20));
  EXPECT_THROW(rho_full(a, b, 0), PreconditionError);
}

TEST(Ergodize, LambdaChoice) {
  EXPECT_NEAR(ergodize_lambda(0.5), -std::log(0.75) * (1 - 1e-6), 1e-15);
  EXPECT_NEAR(ergodize_lambda(0.5), 0.287682, 1e-6);
  EXPECT_EQ(ergodize_lambda(2.0), 10.0);
  EXPECT_EQ(ergodize_lambda(5.0), 10.0);
  EXPECT_THROW(ergodize_lambda(0.0), PreconditionError);
}

TEST(Ergodize, Contract) {
  sampling::Rng rng(69);
  for (int trial = 0; trial < 6; ++trial) {
    const auto p = props::nontrivial_projection(2 + trial % 4, rng);
    const Semigroup s = random_invariant(p, rng);
    for (double eps : {0.1, 0.5, 1.0}) {
      const ErgodizeResult r = ergodize(s, p, eps);
      ASSERT_LT(r.closeness.value + r.closeness.certified_error, eps);
      ASSERT_LE(r.closeness.certified_error, 1e-6);
      ASSERT_TRUE(r.closeness_ok);
      ASSERT_TRUE(r.apriori_ok);
      ASSERT_LE(r.certificate.q, std::exp(-r.lambda * r.certificate.t0) + 1e-9);
      ASSERT_EQ(r.certificate.lambda, r.lambda);
      ASSERT_EQ(r.certificate.epsilon, eps);
    }
  }
}

TEST(Ergodize, FrozenAndAlreadyErgodic) {
  const auto p = fixture::uniform_projection(3);
  const ErgodizeResult f = ergodize(fixture::frozen(3), p, 0.5);
  // |I - P| = 4/3 for the uniform average on three states.
  EXPECT_NEAR(f.closeness.value, 4.0 / 3.0 * (1 - std::exp(-f.lambda)), 1e-7);
  const ErgodizeResult e = ergodize(fixture::two_state(), fixture::uniform_projection(2), 0.5);
  EXPECT_LE(e.certificate.q,
            std::exp(-e.lambda * e.certificate.t0) * std::exp(-2.0 * e.certificate.t0) + 1e-12);
}

TEST(Ergodize, Errors) {
  const Semigroup d = Semigroup::discrete(example_phi().op(), example_projection());
  EXPECT_THROW(ergodize(d, example_projection(), 0.5), PreconditionError);
  Matrix a(2, 2);
  a << -1, 2, 1, -2;
  EXPECT_THROW(ergodize(Semigroup::continuous(StateSpace::classical(2), a),
                        fixture::uniform_projection(2), 0.5),
               PreconditionError);
}

TEST(Openness, RadiusFormula) {
  const auto c = *certify_uniform(fixture::two_state(), fixture::uniform_projection(2)).certificate;
  const OpennessRadius r = openness_radius(c);
  EXPECT_EQ(r.N, 2);
  EXPECT_NEAR(r.radius, (1 - std::exp(-2.0)) / 4, 1e-15);
  EXPECT_NEAR(r.radius, 0.216166, 1e-6);
  ErgodicityCertificate near_one = c;
  double last = r.radius;
  for (double q : {0.9, 0.99, 0.999999}) {
    near_one.q = q;
    const double rad = openness_radius(near_one).radius;
    EXPECT_LT(rad, last);
    last = rad;
  }
  EXPECT_LT(last, 1e-6);
  ErgodicityCertificate mean = c;
  mean.mode = CertificateMode::UniformMean;
  EXPECT_THROW(openness_radius(mean), PreconditionError);
}

TEST(Openness, NeighborProbe) {
  sampling::Rng rng(70);
  const auto s = fixture::two_state();
  const auto p = fixture::uniform_projection(2);
  const auto c = *certify_uniform(s, p).certificate;
  for (int k = 0; k < 3; ++k) {
    const Matrix b = sampling::random_invariant_generator(p, rng) + 0.5 * (p.matrix() - Matrix::Identity(2, 2));
    const NeighborProbe r = probe_neighbor(s, p, c, b);
    EXPECT_TRUE(r.inside);
    EXPECT_TRUE(r.certified);
    EXPECT_LE(r.delta.value(), r.bound + 1e-9);
    EXPECT_NEAR(r.distance.value, 0.9 * openness_radius(c).radius, 0.02 * 0.9 * openness_radius(c).radius + 1e-3 * openness_radius(c).radius);
  }
}
