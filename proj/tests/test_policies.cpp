#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "duelsim/env.hpp"
#include "duelsim/policies.hpp"
#include "duelsim/theory.hpp"

using namespace duelsim;

TEST_CASE("ucb_index matches the frozen evaluation") {
  // 0.75 + sqrt(3 ln 100 / 4), evaluated with 50-digit arithmetic
  CHECK(ucb_index(3, 4, 100, 3.0) ==
        doctest::Approx(2.6084610944249192).epsilon(1e-12));
  // both quotients fall back to 1 on zero visits
  CHECK(ucb_index(0, 0, 3, 3.0) == 2.0);
  CHECK(ucb_index(0, 0, 1, 17.0) == 2.0);
}

TEST_CASE("ucb_index monotonicity") {
  // fixed ratio w/n: nonincreasing in n
  double prev = ucb_index(1, 2, 50, 3.0);
  for (long n = 4; n <= 512; n *= 2) {
    const double cur = ucb_index(n / 2, n, 50, 3.0);
    CHECK(cur <= prev);
    prev = cur;
  }
  // strictly increasing in t for n >= 1
  CHECK(ucb_index(2, 5, 10, 3.0) < ucb_index(2, 5, 11, 3.0));
}

TEST_CASE("index width identity") {
  DuelStats stats(2);
  for (int i = 0; i < 7; ++i) stats.record(0, 1, i % 2);
  const long n = stats.visits(0, 1);
  for (long t : {2L, 10L, 1000L}) {
    const double u01 = ucb_index(stats.wins(0, 1), n, t, 3.0);
    const double u10 = ucb_index(stats.wins(1, 0), n, t, 3.0);
    CHECK(u01 - (1.0 - u10) ==
          doctest::Approx(2.0 * std::sqrt(3.0 * std::log(double(t)) / n))
              .epsilon(1e-12));
  }
}

TEST_CASE("fill_ucb pins the diagonal") {
  DuelStats stats(3);
  stats.record(0, 0, 1);
  stats.record(1, 1, 0);
  std::vector<double> u;
  fill_ucb(stats, 100, 3.0, u);
  for (int i = 0; i < 3; ++i) CHECK(u[i * 3 + i] == 0.5);
}

namespace {

std::vector<double> matrix3(double u01, double u02, double u10, double u12,
                            double u20, double u21) {
  return {0.5, u01, u02, u10, 0.5, u12, u20, u21, 0.5};
}

}  // namespace

TEST_CASE("selection rule: two arms, one champion, self-duel") {
  // u01 = 0.6 >= 0.5 everywhere -> champion {0}; opponent column for arm 0 is
  // (u00, u10) = (0.5, 0.3), maximized by arm 0 itself -> draw (0,0).
  const std::vector<double> u = {0.5, 0.6, 0.3, 0.5};
  Stream rng(1);
  const RucbChoice c = rucb_choose(u, 2, std::nullopt, {}, rng);
  CHECK(c.first == 0);
  CHECK(c.second == 0);
  CHECK(c.candidate.has_value());  // champions set became a singleton
  CHECK(*c.candidate == 0);
  CHECK(c.max_other_index == 0.3);
}

TEST_CASE("selection rule: cold start treats every arm as champion") {
  DuelStats stats(4);
  std::vector<double> u;
  fill_ucb(stats, 1, 3.0, u);
  std::set<int> firsts;
  for (std::uint64_t s = 0; s < 64; ++s) {
    Stream rng(s);
    const RucbChoice c = rucb_choose(u, 4, std::nullopt, {}, rng)
        ;
    firsts.insert(c.first);
    CHECK(c.second != c.first);  // every other arm outranks u_ff = 0.5
    CHECK_FALSE(c.champions_empty);
  }
  CHECK(firsts.size() == 4);  // uniform over the champion set reaches all arms
}

TEST_CASE("selection rule: empty champion set falls back to uniform") {
  const auto u = matrix3(0.4, 0.9, 0.9, 0.4, 0.4, 0.9);
  std::set<int> firsts;
  for (std::uint64_t s = 0; s < 64; ++s) {
    Stream rng(s);
    const RucbChoice c = rucb_choose(u, 3, 1, {}, rng);
    CHECK(c.champions_empty);
    CHECK_FALSE(c.candidate.has_value());  // candidate dropped with the set
    firsts.insert(c.first);
  }
  CHECK(firsts.size() == 3);
}

TEST_CASE("selection rule: candidate kept only while champion") {
  const auto u = matrix3(0.6, 0.6, 0.55, 0.6, 0.3, 0.3);
  // champions = {0, 1}; candidate 1 stays
  Stream rng(3);
  CHECK(*rucb_choose(u, 3, 1, {}, rng).candidate == 1);
  // candidate 2 is not a champion and is dropped; set is not singleton
  Stream rng2(3);
  CHECK_FALSE(rucb_choose(u, 3, 2, {}, rng2).candidate.has_value());
}

TEST_CASE("selection rule: recommendations override the candidate") {
  const auto u = matrix3(0.6, 0.6, 0.55, 0.6, 0.3, 0.3);
  Stream rng(5);
  const RucbChoice c = rucb_choose(u, 3, 0, {1}, rng);
  REQUIRE(c.candidate.has_value());
  CHECK(*c.candidate == 1);
  CHECK(c.first == 1);
  // recommendation outside the champion set is ignored
  Stream rng2(5);
  const RucbChoice d = rucb_choose(u, 3, 0, {2}, rng2);
  CHECK(*d.candidate == 0);
}

TEST_CASE("selection rule: opponent ties break among the maximizers") {
  // column for arm 0: u10 = u20 = 0.8 -> opponent uniformly in {1, 2}
  const auto u = matrix3(0.6, 0.6, 0.8, 0.3, 0.8, 0.3);
  std::set<int> seconds;
  for (std::uint64_t s = 0; s < 64; ++s) {
    Stream rng(s);
    const RucbChoice c = rucb_choose(u, 3, 0, {}, rng);
    CHECK(c.first == 0);
    seconds.insert(c.second);
  }
  CHECK(seconds == std::set<int>{1, 2});
}

TEST_CASE("empirical divergence") {
  DuelStats stats(3);
  SUBCASE("zero when nothing beats the arm") {
    stats.record(0, 1, 1);
    stats.record(0, 2, 1);
    CHECK(empirical_divergence(stats, 0) == 0.0);
  }
  SUBCASE("single superior, frozen value") {
    for (int i = 0; i < 3; ++i) stats.record(0, 1, 1);
    for (int i = 0; i < 7; ++i) stats.record(0, 1, 0);
    // 10 * KL(0.3, 0.5), evaluated with 50-digit arithmetic
    CHECK(empirical_divergence(stats, 0) ==
          doctest::Approx(0.82282878505051846).epsilon(1e-12));
  }
  SUBCASE("an exact tie contributes nothing") {
    for (int i = 0; i < 5; ++i) stats.record(0, 1, 1);
    for (int i = 0; i < 5; ++i) stats.record(0, 1, 0);
    CHECK(empirical_divergence(stats, 0) == 0.0);
  }
}

TEST_CASE("rucb policy candidate fallback") {
  RucbPolicy policy(4, 3.0);
  CHECK_FALSE(policy.hypothesized_best().has_value());
  std::set<int> arms;
  for (std::uint64_t s = 0; s < 64; ++s) {
    Stream rng(s);
    arms.insert(policy.cw_candidate(rng));
  }
  CHECK(arms.size() == 4);  // uniform fallback reaches every arm
  CHECK_THROWS_AS(RucbPolicy(3, 1.0), BadAlphaError);
}

TEST_CASE("divergence policy: deterministic tie-break and initial phase") {
  Rmed2fhPolicy policy(3, 10000);
  Stream rng(1);
  CHECK(policy.cw_candidate(rng) == 0);  // all divergences zero: lowest index
  CHECK(policy.in_initial_phase());

  // the initial phase sweeps every unordered pair the same number of times
  std::map<std::pair<int, int>, int> seen;
  long t = 0;
  while (policy.in_initial_phase()) {
    ++t;
    const auto pair = policy.select_pair(t, rng);
    CHECK(pair.first < pair.second);
    seen[pair] += 1;
    policy.observe(pair.first, pair.second, static_cast<int>(t % 2));
  }
  CHECK(seen.size() == 3);
  const int passes = seen.begin()->second;
  for (const auto& [pair, count] : seen) CHECK(count == passes);
}

TEST_CASE("divergence policy: unique zero-divergence arm becomes candidate") {
  Rmed2fhPolicy policy(3, 1000);
  // feed a history where arm 1 beats everything and others lose to it
  for (int rep = 0; rep < 10; ++rep) {
    policy.observe(0, 1, 0);  // 1 beats 0
    policy.observe(1, 2, 1);  // 1 beats 2
    policy.observe(0, 2, 1);
  }
  Stream rng(1);
  CHECK(policy.cw_candidate(rng) == 1);
}

TEST_CASE("divergence policy: winner frequency over the final stretch") {
  const PreferenceMatrix q = example_matrix_q3();
  const long horizon = 10000;
  long correct = 0, queried = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rmed2fhPolicy policy(3, horizon);
    Stream play = make_stream(seed, 0, StreamRole::play);
    Stream cand = make_stream(seed, 0, StreamRole::candidate);
    for (long t = 1; t <= horizon; ++t) {
      const auto [i, j] = policy.select_pair(t, play);
      policy.observe(i, j, sample_duel(q, i, j, play));
      if (t > horizon - horizon / 10) {
        ++queried;
        if (policy.cw_candidate(cand) == 0) ++correct;
      }
    }
  }
  CHECK(static_cast<double>(correct) / queried >= 0.95);
}

TEST_CASE("rucb policy: candidate frequency at the horizon") {
  const PreferenceMatrix q = example_matrix_q3();
  const long horizon = 10000;
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RucbPolicy policy(3, 3.0);
    Stream play = make_stream(seed, 0, StreamRole::play);
    Stream cand = make_stream(seed, 0, StreamRole::candidate);
    for (long t = 1; t <= horizon; ++t) {
      const auto [i, j] = policy.select_pair(t, play);
      policy.observe(i, j, sample_duel(q, i, j, play));
    }
    if (policy.cw_candidate(cand) == 0) ++hits;
  }
  CHECK(hits >= 19);  // >= 0.95 over 20 seeds
}

TEST_CASE("rucb candidate is returned verbatim once hypothesized") {
  const PreferenceMatrix q = example_matrix_q3();
  RucbPolicy policy(3, 3.0);
  Stream play = make_stream(123, 0, StreamRole::play);
  for (long t = 1; t <= 3000; ++t) {
    const auto [i, j] = policy.select_pair(t, play);
    policy.observe(i, j, sample_duel(q, i, j, play));
  }
  REQUIRE(policy.hypothesized_best().has_value());
  Stream cand(0);
  for (int rep = 0; rep < 5; ++rep) {
    CHECK(policy.cw_candidate(cand) == *policy.hypothesized_best());
  }
}
