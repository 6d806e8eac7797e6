#include <cmath>

#include "doctest.h"
#include "memstate/algebra.hpp"
#include "memstate/errors.hpp"
#include "support.hpp"

using namespace memstate;
using testing_support::draw_states;
using testing_support::kN;

TEST_CASE("random_qstate examples") {
  RngStream rng(11);
  CHECK(random_qstate(kN, 0.0, rng).popcount() == 0);
  CHECK(random_qstate(kN, 1.0, rng) == one_vector(kN));
  const State x = random_qstate(kN, 1.0 / 3.0, rng);
  CHECK(std::abs(mean_activity(x) - 1.0 / 3.0) <= 0.015);
  const State y = random_qstate(kN, 1.0 / 3.0, rng);
  CHECK(std::abs(distance(x, y) - 4.0 / 9.0) <= 0.015);
  CHECK_THROWS_AS(random_qstate(0, 0.5, rng), std::invalid_argument);
  CHECK_THROWS_AS(random_qstate(10, 1.5, rng), std::invalid_argument);
}

TEST_CASE("random_qstate is a pure function of the stream") {
  RngStream a(3, 4);
  RngStream b(3, 4);
  CHECK(random_qstate(kN, 0.3, a) == random_qstate(kN, 0.3, b));
  RngStream other(3, 5);
  CHECK_FALSE(random_qstate(kN, 0.3, a) == random_qstate(kN, 0.3, other));
}

TEST_CASE("one_vector, complement and mean_activity") {
  CHECK(one_vector(8).to_string() == "11111111");
  CHECK(mean_activity(one_vector(77)) == 1.0);
  CHECK(mean_activity(State::zeros(77)) == 0.0);
  CHECK(mean_activity(State::from_string("101000")) == 1.0 / 3.0);
  CHECK(complement(State::from_string("1100")).to_string() == "0011");
  CHECK_THROWS(one_vector(0));
}

TEST_CASE("bind examples") {
  CHECK(bind(State::from_string("1010"), State::from_string("1100")).to_string() == "1001");
  RngStream rng(5);
  const State x = random_qstate(kN, 1.0 / 3.0, rng);
  const State y = random_qstate(kN, 1.0 / 3.0, rng);
  CHECK(bind(x, x) == one_vector(kN));
  CHECK(bind(x, one_vector(kN)) == x);
  CHECK(std::abs(mean_activity(bind(x, y)) - (1.0 - 4.0 / 9.0)) <= 0.015);
  CHECK_THROWS_AS(bind(State::zeros(4), State::zeros(5)), DimensionMismatch);
}

TEST_CASE("distance examples") {
  RngStream rng(6);
  const State x = random_qstate(kN, 1.0 / 3.0, rng);
  const State y = random_qstate(kN, 1.0 / 3.0, rng);
  CHECK(distance(x, x) == 0.0);
  CHECK(distance(x, complement(x)) == 1.0);
  CHECK(std::abs(distance(x, bind(x, y)) - 2.0 / 3.0) <= 0.015);
  CHECK_THROWS_AS(distance(State::zeros(4), State::zeros(5)), DimensionMismatch);
}

TEST_CASE("bundle endpoints are AND and OR") {
  // A mixed site becomes 1 with probability theta, so theta = 0 keeps only
  // agreeing ones and theta = 1 keeps every one.
  RngStream rng(1);
  const State a = State::from_string("0011");
  const State b = State::from_string("0101");
  CHECK(bundle(a, b, 0.0, rng).to_string() == "0001");
  CHECK(bundle(a, b, 1.0, rng).to_string() == "0111");
}

TEST_CASE("bundle errors") {
  RngStream rng(1);
  CHECK_THROWS_AS(bundle(State::zeros(4), State::zeros(5), 0.5, rng), DimensionMismatch);
  CHECK_THROWS_AS(bundle(State::zeros(4), State::zeros(4), 1.5, rng), std::invalid_argument);
  CHECK_THROWS_AS(bundle(State::zeros(4), State::zeros(4), -0.1, rng), std::invalid_argument);
}

TEST_CASE("bundle draws fresh noise per call and replays per stream") {
  RngStream rng(2);
  const State x = random_qstate(kN, 0.5, rng);
  const State y = random_qstate(kN, 0.5, rng);
  RngStream s1(9);
  const State first = bundle(x, y, 0.5, s1);
  const State second = bundle(x, y, 0.5, s1);
  CHECK_FALSE(first == second);
  RngStream s2(9);
  CHECK(bundle(x, y, 0.5, s2) == first);
}

TEST_CASE("bundle distance follows the literal rule") {
  // d(x, x + y) = q(1-q) per mixed-site count; it coincides with
  // 2q(1-q)(1-theta) only at theta = 1/2.
  const double q = 1.0 / 3.0;
  RngStream rng(21);
  for (const double theta : {0.5, 0.75}) {
    double sum = 0.0;
    for (int t = 0; t < 10; ++t) {
      const State x = random_qstate(kN, q, rng);
      const State y = random_qstate(kN, q, rng);
      sum += distance(x, bundle(x, y, theta, rng));
    }
    CHECK(std::abs(sum / 10 - q * (1 - q)) <= 0.015);
  }
}

TEST_CASE("perturb examples and errors") {
  RngStream rng(8);
  const State x = random_qstate(kN, 0.5, rng);
  CHECK(perturb(x, 0.0, rng) == x);
  CHECK(perturb(x, 1.0, rng) == complement(x));
  CHECK(std::abs(distance(x, perturb(x, 0.3, rng)) - 0.3) <= 0.015);
  CHECK_THROWS_AS(perturb(x, 1.1, rng), std::invalid_argument);
  CHECK_THROWS_AS(perturb(x, -0.5, rng), std::invalid_argument);
}

TEST_CASE("params validation") {
  AlgebraParams p;
  CHECK_NOTHROW(p.validate());
  CHECK_NOTHROW(p.validate_experiment_range());
  p.q = 1.5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  try {
    p.validate_experiment_range();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("(0, 1/2]") != std::string::npos);
  }
  p.q = 0.0;
  CHECK_THROWS_AS(p.validate_experiment_range(), ConfigError);
  p.q = 0.5;
  p.theta = 1.0;
  CHECK_NOTHROW(p.validate());
  CHECK_THROWS_AS(p.validate_experiment_range(), ConfigError);
  p.theta = 0.4;
  CHECK_THROWS_AS(p.validate_experiment_range(), ConfigError);
  p.theta = 0.5;
  p.dimension = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

// ---- algebraic properties on random states ----

TEST_CASE("distance identity holds bit-exactly") {
  RngStream rng(100);
  for (int t = 0; t < 50; ++t) {
    const std::uint32_t dim = 1 + static_cast<std::uint32_t>(rng.next_u64() % 3000);
    const double q = rng.next_unit();
    const State x = random_qstate(dim, q, rng);
    const State y = random_qstate(dim, rng.next_unit(), rng);
    REQUIRE(distance(x, y) == 1.0 - mean_activity(bind(x, y)));
  }
}

TEST_CASE("bind is commutative, associative and self-inverse with identity 1") {
  RngStream rng(101);
  for (int t = 0; t < 30; ++t) {
    const std::uint32_t dim = 1 + static_cast<std::uint32_t>(rng.next_u64() % 5000);
    const auto s = draw_states(3, dim, rng.next_unit(), rng);
    const State& x = s[0];
    const State& y = s[1];
    const State& z = s[2];
    REQUIRE(bind(x, y) == bind(y, x));
    REQUIRE(bind(bind(x, y), z) == bind(x, bind(y, z)));
    REQUIRE(bind(x, bind(y, x)) == y);
    REQUIRE(bind(x, one_vector(dim)) == x);
  }
}

TEST_CASE("bundle is idempotent for every theta") {
  RngStream rng(102);
  for (const double theta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const State x = random_qstate(kN, 0.4, rng);
    REQUIRE(bundle(x, x, theta, rng) == x);
  }
}

TEST_CASE("bundle at the endpoints is deterministic, commutative and associative") {
  RngStream rng(103);
  for (const double theta : {0.0, 1.0}) {
    for (int t = 0; t < 10; ++t) {
      const auto s = draw_states(3, 3001, 0.4, rng);
      RngStream n1(t);
      RngStream n2(t + 1000);
      REQUIRE(bundle(s[0], s[1], theta, n1) == bundle(s[1], s[0], theta, n2));
      const State left = bundle(bundle(s[0], s[1], theta, n1), s[2], theta, n1);
      const State right = bundle(s[0], bundle(s[1], s[2], theta, n2), theta, n2);
      REQUIRE(left == right);
    }
  }
}

TEST_CASE("bundle is commutative in distribution") {
  RngStream rng(104);
  const auto s = draw_states(2, kN, 0.5, rng);
  double xy = 0.0;
  double yx = 0.0;
  for (int t = 0; t < 10; ++t) {
    xy += mean_activity(bundle(s[0], s[1], 0.3, rng));
    yx += mean_activity(bundle(s[1], s[0], 0.3, rng));
  }
  CHECK(std::abs(xy - yx) / 10 <= 0.01);
}

TEST_CASE("bundling is not associative at theta = 1/2") {
  RngStream rng(105);
  const auto s = draw_states(3, kN, 0.5, rng);
  const State left = bundle(bundle(s[0], s[1], 0.5, rng), s[2], 0.5, rng);
  const State right = bundle(s[0], bundle(s[1], s[2], 0.5, rng), 0.5, rng);
  CHECK(distance(left, right) > 0.01);
}

TEST_CASE("addition creates similarity, multiplication dissimilarity") {
  RngStream rng(106);
  for (const double q : {0.1, 1.0 / 3.0, 0.5}) {
    CAPTURE(q);
    const auto s = draw_states(2, kN, q, rng);
    const double added = distance(bundle(s[0], s[1], 0.5, rng), s[0]);
    const double apart = distance(s[0], s[1]);
    const double bound = distance(bind(s[0], s[1]), s[0]);
    CHECK(added <= apart + 0.015);
    CHECK(apart <= bound + 0.015);
  }
}

TEST_CASE("binding distributes over bundling approximately") {
  const double q = 1.0 / 3.0;
  RngStream rng(107);
  double sum = 0.0;
  for (int t = 0; t < 10; ++t) {
    const auto s = draw_states(3, kN, q, rng);
    const State lhs = bind(s[0], bundle(s[1], s[2], 0.5, rng));
    const State rhs = bundle(bind(s[0], s[1]), bind(s[0], s[2]), 0.5, rng);
    sum += distance(lhs, rhs);
  }
  CHECK(std::abs(sum / 10 - q * (1 - q)) <= 0.02);
}

// ---- sparsity predictions ----

TEST_CASE("expected_bundle_activity against an iterated oracle") {
  // Bundling a dense item onto an accumulator of activity Q gives
  // Q/2 (both on) + theta * 1/2 (mixed), independent of the closed form.
  for (const double theta : {0.0, 0.5, 0.6, 0.75, 0.9, 1.0}) {
    double oracle = 0.5;
    for (unsigned k = 1; k <= 40; ++k) {
      CHECK(expected_bundle_activity(k, theta) == doctest::Approx(oracle).epsilon(1e-12));
      oracle = oracle * 0.5 + theta * 0.5;
    }
  }
  CHECK(expected_bundle_activity(1, 0.9) == 0.5);
  CHECK(expected_bundle_activity(60, 0.75) == doctest::Approx(0.75));
  CHECK(expected_bundle_activity(7, 0.5) == 0.5);
  CHECK_THROWS_AS(expected_bundle_activity(0, 0.5), std::invalid_argument);
}

TEST_CASE("measured sparsity follows the recursion") {
  RngStream rng(108);
  for (const double theta : {0.5, 0.6, 0.75, 0.9}) {
    State acc = random_qstate(kN, 0.5, rng);
    for (unsigned k = 1; k <= 12; ++k) {
      CAPTURE(theta);
      CAPTURE(k);
      CHECK(std::abs(mean_activity(acc) - expected_bundle_activity(k, theta)) <= 0.02);
      acc = bundle(acc, random_qstate(kN, 0.5, rng), theta, rng);
    }
  }
}

TEST_CASE("asymptotic_activity against an iterated oracle") {
  // Fixed point of Q' = Q q + theta (Q (1-q) + q (1-Q)).
  for (const double q : {0.1, 1.0 / 3.0, 0.5}) {
    for (const double theta : {0.5, 0.6, 0.75, 0.9}) {
      double Q = q;
      for (int i = 0; i < 2000; ++i) Q = Q * q + theta * (Q * (1 - q) + q * (1 - Q));
      CHECK(asymptotic_activity(q, theta) == doctest::Approx(Q).epsilon(1e-9));
    }
  }
  CHECK(asymptotic_activity(1.0 / 3.0, 0.5) == doctest::Approx(1.0 / 3.0));
  CHECK(asymptotic_activity(0.5, 0.75) == doctest::Approx(0.75));
  CHECK(asymptotic_activity(0.5, 0.5) == doctest::Approx(0.5));
  CHECK_THROWS_AS(asymptotic_activity(0.0, 1.0), std::domain_error);
}

TEST_CASE("the asymptote can exceed q above theta = 1/2") {
  // A sparsity bound Q <= q does not follow from the fixed point.
  CHECK(asymptotic_activity(1.0 / 3.0, 0.75) == doctest::Approx(0.6));
  CHECK(asymptotic_activity(1.0 / 3.0, 0.75) > 1.0 / 3.0);
}

TEST_CASE("measured k = 50 activity reaches the asymptote") {
  RngStream rng(109);
  const double q = 1.0 / 3.0;
  for (const double theta : {0.5, 0.75}) {
    State acc = random_qstate(kN, q, rng);
    for (int k = 1; k < 50; ++k) acc = bundle(acc, random_qstate(kN, q, rng), theta, rng);
    CHECK(std::abs(mean_activity(acc) - asymptotic_activity(q, theta)) <= 0.02);
  }
}
