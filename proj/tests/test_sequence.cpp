#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "memstate/errors.hpp"
#include "memstate/info.hpp"
#include "memstate/sequence.hpp"
#include "memstate/stats.hpp"
#include "support.hpp"

using namespace memstate;
using testing_support::draw_states;
using testing_support::kN;

namespace {

constexpr double kQ = 1.0 / 3.0;

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

// Per-position MI of L and R with their items, averaged over trials.
std::pair<std::vector<double>, std::vector<double>> gradients(std::size_t length, int trials,
                                                             std::uint64_t seed) {
  std::vector<double> l(length, 0.0), r(length, 0.0);
  AlgebraParams params{kN, kQ, 0.5, seed};
  for (int t = 0; t < trials; ++t) {
    RngStream rng(seed, t);
    const auto items = draw_states(length, kN, kQ, rng);
    const State eta = random_qstate(kN, kQ, rng);
    const MemoryState m = memory_state(items, eta, params, rng.child(99));
    for (std::size_t i = 0; i < length; ++i) {
      l[i] += mutual_information_exact(m.l, items[i]) / trials;
      r[i] += mutual_information_exact(m.r, items[i]) / trials;
    }
  }
  return {l, r};
}

}  // namespace

TEST_CASE("single item: both folds compute eta + a") {
  RngStream rng(1);
  const auto items = draw_states(1, kN, kQ, rng);
  const State eta = random_qstate(kN, kQ, rng);
  RngStream a(5), b(5), c(5);
  const State l = l_state(items, eta, 0.5, a);
  CHECK(l == r_state(items, eta, 0.5, b));
  CHECK(l == bundle(eta, items[0], 0.5, c));
}

TEST_CASE("endpoint thresholds collapse L and R") {
  RngStream rng(2);
  for (const double theta : {0.0, 1.0}) {
    for (std::size_t len = 1; len <= 20; ++len) {
      const auto items = draw_states(len, 2000, 0.4, rng);
      const State eta = random_qstate(2000, 0.4, rng);
      const MemoryState m = memory_state(items, eta, AlgebraParams{2000, 0.4, theta, 0}, rng);
      REQUIRE(m.l == m.r);
      REQUIRE(m.l.dimension() == m.r.dimension());
    }
  }
}

TEST_CASE("fold errors") {
  RngStream rng(3);
  const State eta = State::zeros(8);
  const std::vector<State> none;
  CHECK_THROWS_AS(l_state(none, eta, 0.5, rng), std::invalid_argument);
  CHECK_THROWS_AS(r_state(none, eta, 0.5, rng), std::invalid_argument);
  CHECK_THROWS_AS(memory_state(none, eta, AlgebraParams{8, 0.5, 0.5, 0}, rng), std::invalid_argument);
  const std::vector<State> mixed{State::zeros(8), State::zeros(9)};
  CHECK_THROWS_AS(l_state(mixed, eta, 0.5, rng), DimensionMismatch);
  CHECK_THROWS_AS(r_state(mixed, eta, 0.5, rng), DimensionMismatch);
  CHECK(parse_fold("left") == Fold::left);
  CHECK(parse_fold("right") == Fold::right);
  CHECK_THROWS_AS(parse_fold("middle"), ConfigError);
}

TEST_CASE("streaming left fold replays l_state") {
  RngStream rng(4);
  const auto items = draw_states(7, kN, kQ, rng);
  const State eta = random_qstate(kN, kQ, rng);
  RngStream s(8);
  const State batch = l_state(items, eta, 0.5, s);
  LeftFold fold(eta, 0.5, RngStream(8));
  for (const auto& item : items) fold.append(item);
  CHECK(fold.size() == 7);
  CHECK(fold.state() == batch);
  CHECK_THROWS_AS(LeftFold(eta, 2.0, RngStream(1)), std::invalid_argument);
}

TEST_CASE("appending to an L fold is one more bundle in distribution") {
  // Profiles after appending x match the profiles of bundle(l_state(items), x).
  RngStream rng(5);
  const auto items = draw_states(6, kN, kQ, rng);
  const State eta = random_qstate(kN, kQ, rng);
  RngStream s1(10), s2(11);
  const std::span<const State> first5(items.data(), 5);
  const State stepped = bundle(l_state(first5, eta, 0.5, s1), items[5], 0.5, s1);
  const State whole = l_state(items, eta, 0.5, s2);
  for (std::size_t i = 0; i < items.size(); ++i) {
    const double a = mutual_information_exact(stepped, items[i]);
    const double b = mutual_information_exact(whole, items[i]);
    CHECK(std::abs(a - b) <= 0.01);
  }
}

TEST_CASE("recency and primacy gradients over a 10-item sequence") {
  const auto [l, r] = gradients(10, 30, 7);
  CHECK(spearman_with_position(l) >= 0.9);
  CHECK(spearman_with_position(r) <= -0.9);
}

TEST_CASE("6-item sequence: L favours the last item, R the first") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto [l, r] = gradients(6, 1, seed);
    CHECK(argmax(l) == 5);
    CHECK(argmax(r) == 0);
  }
}

TEST_CASE("L and R decorrelate as the list grows") {
  AlgebraParams params{kN, kQ, 0.5, 0};
  double short_mi = 0.0, long_mi = 0.0;
  for (int t = 0; t < 5; ++t) {
    RngStream rng(12, t);
    const State eta = random_qstate(kN, kQ, rng);
    const auto a = draw_states(3, kN, kQ, rng);
    const auto b = draw_states(20, kN, kQ, rng);
    const MemoryState ms = memory_state(a, eta, params, rng.child(1));
    const MemoryState ml = memory_state(b, eta, params, rng.child(2));
    short_mi += mutual_information_exact(ms.l, ms.r) / 5;
    long_mi += mutual_information_exact(ml.l, ml.r) / 5;
  }
  CHECK(long_mi < short_mi);
  CHECK(long_mi < 0.05);
}

TEST_CASE("similarity transfer follows the correlation scaling") {
  // Flipping a fraction eps of D scales its covariance with L by (1 - 2 eps)
  // and raises its variance, so at small MI
  //   MI(L, F) / MI(L, D) ~ (1 - 2 eps)^2 q (1 - q) / (q_F (1 - q_F)),
  // with q_F = q (1 - eps) + (1 - q) eps.
  const double eps = 0.1;
  const double q_f = kQ * (1 - eps) + (1 - kQ) * eps;
  const double predicted = (1 - 2 * eps) * (1 - 2 * eps) * kQ * (1 - kQ) / (q_f * (1 - q_f));
  double mi_d = 0.0, mi_f = 0.0, mi_new = 0.0;
  const int trials = 40;
  for (int t = 0; t < trials; ++t) {
    RngStream rng(13, t);
    const auto items = draw_states(5, kN, kQ, rng);
    const State eta = random_qstate(kN, kQ, rng);
    const State f = perturb(items[3], eps, rng);
    const State unseen = random_qstate(kN, kQ, rng);
    const State l = l_state(items, eta, 0.5, rng);
    mi_d += mutual_information_exact(l, items[3]);
    mi_f += mutual_information_exact(l, f);
    mi_new += mutual_information_exact(l, unseen);
  }
  const double ratio = mi_f / mi_d;
  CHECK(std::abs(ratio - predicted) <= 0.06);
  // The similar item stays far above an unseen one.
  CHECK(mi_f > 20 * mi_new);
}

TEST_CASE("position markers: cue b recovers marker 2") {
  const double q = 0.5;
  RngStream rng(14);
  for (const Fold fold : {Fold::left, Fold::right}) {
    const auto items = draw_states(5, kN, q, rng);
    const State eta = random_qstate(kN, q, rng);
    auto markers = make_markers(5, kN, q, rng);
    const EncodedSequence y = encode_position_markers(items, markers, eta, 0.5, rng, fold);
    REQUIRE(y.marker_states.has_value());
    CHECK(y.scheme == Scheme::position_marker);
    CHECK(y.item_labels == default_labels(5));
    std::vector<LabelledState> cands;
    for (std::size_t i = 0; i < 5; ++i) cands.push_back({y.item_labels[i], (*y.marker_states)[i]});
    const MIProfile present = mi_profile(cue(y.state, items[1]), cands);
    CHECK(present.top().label == "2");

    const State absent_item = random_qstate(kN, q, rng);
    const MIProfile absent = mi_profile(cue(y.state, absent_item), cands);
    CHECK(absent.top().mi < 0.2 * present.top().mi);
  }
}

TEST_CASE("position markers: single item and errors") {
  RngStream rng(15);
  const auto items = draw_states(1, 1000, 0.5, rng);
  const State eta = random_qstate(1000, 0.5, rng);
  const auto markers = make_markers(1, 1000, 0.5, rng);
  RngStream a(1), b(1), c(1);
  const auto l = encode_position_markers(items, markers, eta, 0.5, a, Fold::left);
  const auto r = encode_position_markers(items, markers, eta, 0.5, b, Fold::right);
  CHECK(l.state == r.state);
  CHECK(l.state == bundle(eta, bind(items[0], markers[0]), 0.5, c));
  const auto two = draw_states(2, 1000, 0.5, rng);
  CHECK_THROWS_AS(encode_position_markers(two, markers, eta, 0.5, rng, Fold::left),
                  std::invalid_argument);
}

TEST_CASE("chaining: cue b peaks at its neighbours") {
  const double q = 0.5;
  RngStream rng(16);
  for (const Fold fold : {Fold::left, Fold::right}) {
    const auto items = draw_states(5, kN, q, rng);
    const State eta = random_qstate(kN, q, rng);
    const std::vector<std::string> labels{"a", "b", "c", "d", "e"};
    const EncodedSequence z = encode_chaining(items, eta, 0.5, rng, fold, labels);
    CHECK_FALSE(z.marker_states.has_value());
    std::vector<LabelledState> cands;
    for (std::size_t i = 0; i < 5; ++i) cands.push_back({labels[i], items[i]});
    const MIProfile p = mi_profile(cue(z.state, items[1]), cands);
    const double a = p.value_of("a");
    const double c = p.value_of("c");
    for (const char* other : {"b", "d", "e"}) {
      CHECK(a >= 2 * p.value_of(other));
      CHECK(c >= 2 * p.value_of(other));
    }
  }
}

TEST_CASE("chaining: single item and errors") {
  RngStream rng(17);
  const auto items = draw_states(1, 1000, 0.5, rng);
  const State eta = random_qstate(1000, 0.5, rng);
  RngStream a(2), c(2);
  CHECK(encode_chaining(items, eta, 0.5, a, Fold::left).state ==
        bundle(eta, bind(items[0], eta), 0.5, c));
  CHECK_THROWS_AS(encode_chaining(std::vector<State>{}, eta, 0.5, rng, Fold::left),
                  std::invalid_argument);
  CHECK_THROWS_AS(encode_chaining(items, eta, 0.5, rng, Fold::left, {"x", "y"}),
                  std::invalid_argument);
}

TEST_CASE("bound context: cueing by l exposes b and d, d stronger under L") {
  const double q = 0.5;
  RngStream rng(18);
  const auto items = draw_states(5, kN, q, rng);     // a..e
  const auto contexts = draw_states(4, kN, q, rng);  // k, l, m, n
  const State eta = random_qstate(kN, q, rng);
  const std::array<int, 5> ctx{0, 1, 2, 1, 3};
  std::vector<State> terms;
  for (std::size_t i = 0; i < 5; ++i) terms.push_back(bind(items[i], contexts[ctx[i]]));
  const std::vector<std::string> labels{"a", "b", "c", "d", "e"};
  std::vector<LabelledState> cands;
  for (std::size_t i = 0; i < 5; ++i) cands.push_back({labels[i], items[i]});

  const State x = l_state(terms, eta, 0.5, rng);
  const MIProfile p = mi_profile(cue(x, contexts[1]), cands);
  CHECK(p.entries[0].label == "d");
  CHECK(p.entries[1].label == "b");
}

TEST_CASE("cue recovers bound partners") {
  RngStream rng(19);
  const auto s = draw_states(2, kN, kQ, rng);
  CHECK(cue(bind(s[0], s[1]), s[1]) == s[0]);
  CHECK(cue(s[0], one_vector(kN)) == s[0]);
  CHECK_THROWS_AS(cue(s[0], State::zeros(3)), DimensionMismatch);
}
