#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fastrec/metrics.hpp"
#include "fastrec/simulator.hpp"
#include "fastrec/strategies.hpp"
#include "test_util.hpp"

using namespace fastrec;
using fastrec::test::all_users;
using fastrec::test::make_dataset;
using fastrec::test::random_instance;

namespace {

void check_contract(const Dataset& ds, const RoundOutcome& out) {
  for (int j = 0; j < ds.catalog.size(); ++j) {
    CHECK(out.consumed[j] <= ds.catalog.capacity(j));
  }
  for (size_t k = 0; k < out.users.size(); ++k) {
    const int u = out.users[k];
    const auto& list = out.lists[k];
    // no duplicates
    std::vector<int> sorted = list;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    // retained top-window services keep their relative order
    int last_pos = 0;
    for (int j : list) {
      auto it = ds.lists.position[u].find(j);
      if (it == ds.lists.position[u].end()) continue;
      CHECK(it->second > last_pos);
      last_pos = it->second;
    }
  }
}

}  // namespace

TEST_CASE("f-fast keeps an unconflicted list intact") {
  auto ds = make_dataset({{1, 3}, {2, 3}}, {{0, 1, 5.0}, {0, 2, 4.0}}, 2);
  FairnessLedger ledger(1);
  const auto users = all_users(ds);
  RoundContext ctx{ds.lists, ds.catalog, ds.ratings, ledger, users};
  const auto out = f_fast_round(ctx);
  CHECK(out.lists[0] == std::vector<int>{ds.catalog.index_of(1),
                                         ds.catalog.index_of(2)});
}

TEST_CASE("f-fast round-robins a capacity-1 service over three users") {
  auto ds = make_dataset({{1, 1}},
                         {{0, 1, 5.0}, {1, 1, 4.0}, {2, 1, 3.0}}, 1);
  const int s = ds.catalog.index_of(1);
  ScenarioConfig config;
  config.strategy = "f-fast";
  config.rounds = 3;
  FairnessLedger ledger;
  run_scenario(config, ds, &ledger);
  // each user served exactly once over the first full cycle
  for (int u = 0; u < 3; ++u) {
    CHECK(ledger.appearance_count(u, s) == 1);
    CHECK(std::abs(ledger.stored_fairness[u]) < 1e-12);
  }
}

TEST_CASE("two users alternating on one capacity-1 slot") {
  auto ds = make_dataset({{1, 1}}, {{0, 1, 5.0}, {1, 1, 4.0}}, 1);
  ScenarioConfig config;
  config.strategy = "f-fast";
  config.rounds = 8;
  config.metric_cadence = 1;
  Dataset dataset = ds;
  FairnessLedger ledger(2);
  const auto users = all_users(ds);
  RoundContext ctx{ds.lists, ds.catalog, ds.ratings, ledger, users};
  double prev_abs = -1.0;
  for (int t = 1; t <= 8; ++t) {
    const auto out = f_fast_round(ctx);
    commit_round(ledger, ds.lists, out);
    double sum = ledger.stored_fairness[0] + ledger.stored_fairness[1];
    CHECK(std::abs(sum) < 1e-12);
    if (t % 2 == 0) {  // |F| strictly decreasing across even rounds
      const double cur = std::abs(ledger.stored_fairness[0]);
      if (prev_abs >= 0.0 && prev_abs > 0.0) CHECK(cur < prev_abs);
      prev_abs = cur;
    }
  }
}

TEST_CASE("interim fairness update") {
  auto ds = make_dataset({{1, 1}}, {{0, 1, 5.0}, {1, 1, 4.0}}, 1);
  const int s = ds.catalog.index_of(1);
  SUBCASE("first round: all probabilities neutral, fairness stays zero") {
    FairnessLedger ledger(2);
    std::vector<double> p(ds.catalog.size(), 0.0);
    CHECK(interim_fairness(ds.lists, ledger, p, 0, std::vector<int>{s}) ==
          0.0);
  }
  SUBCASE("conflicted placement lifts the term from -1 to 0") {
    FairnessLedger ledger(2);
    ledger.round = 1;
    ledger.participation = {1, 1};
    ledger.appearances[1][s] = 1;  // user 1 won round one
    std::vector<double> p(ds.catalog.size(), 0.0);
    p[s] = 0.5;
    const double before = interim_fairness(ds.lists, ledger, p, 0, {});
    // interim p_0s = 1/2 with the placement counted
    const double after =
        interim_fairness(ds.lists, ledger, p, 0, std::vector<int>{s});
    CHECK(before == doctest::Approx(-1.0));
    CHECK(after == doctest::Approx(0.0));
  }
  SUBCASE("unconflicted service leaves fairness unchanged") {
    FairnessLedger ledger(2);
    ledger.round = 1;
    ledger.participation = {1, 1};
    ledger.appearances[0][s] = 1;
    ledger.appearances[1][s] = 1;
    std::vector<double> p(ds.catalog.size(), 0.0);
    p[s] = 1.0;
    const double f =
        interim_fairness(ds.lists, ledger, p, 0, std::vector<int>{s});
    CHECK(f == doctest::Approx(0.0));
  }
}

TEST_CASE("d-fast preparation") {
  SUBCASE("full fixed participation yields zero adjustment") {
    FairnessLedger ledger(3);
    ledger.stored_fairness = {0.2, -0.1, -0.1};
    ledger.avg_at_last_round = {0.0, 0.0, 0.0};
    std::vector<int> everyone{0, 1, 2};
    const auto adj = d_fast_prepare(ledger, everyone);
    CHECK(adj.avg_now == doctest::Approx(0.0));
    for (int u : everyone) {
      CHECK(adj.adjusted[u] == doctest::Approx(ledger.stored_fairness[u]));
    }
  }
  SUBCASE("new user starts at minus the current average") {
    FairnessLedger ledger(3);
    ledger.stored_fairness = {0.3, 0.3, 0.0};  // user 2 is new
    ledger.avg_at_last_round = {0.2, 0.2, 0.0};
    std::vector<int> everyone{0, 1, 2};
    const auto adj = d_fast_prepare(ledger, everyone);
    CHECK(adj.avg_now == doctest::Approx(0.2));
    CHECK(adj.adjusted[2] == doctest::Approx(-0.2));
  }
  SUBCASE("equal averages across halves cancel") {
    FairnessLedger ledger(4);
    ledger.stored_fairness = {0.1, -0.1, 0.1, -0.1};
    ledger.avg_at_last_round = {0.0, 0.0, 0.0, 0.0};
    std::vector<int> half{0, 1};
    const auto adj = d_fast_prepare(ledger, half);
    CHECK(adj.shift[0] == doctest::Approx(0.0));
    CHECK(adj.shift[1] == doctest::Approx(0.0));
  }
}

TEST_CASE("d-fast equals f-fast on a fixed full-participation set") {
  std::mt19937_64 rng(71);
  Dataset ds = random_instance(rng, 12, 5, 2, 2);
  ScenarioConfig f, d;
  f.strategy = "f-fast";
  d.strategy = "d-fast";
  f.rounds = d.rounds = 40;
  FairnessLedger fl(0), dl(0);
  const auto flog = run_scenario(f, ds, &fl);
  const auto dlog = run_scenario(d, ds, &dl);
  REQUIRE(flog.rows.size() == dlog.rows.size());
  for (std::size_t i = 0; i < flog.rows.size(); ++i) {
    CHECK(flog.rows[i].variance == dlog.rows[i].variance);
    CHECK(flog.rows[i].total_quality == dlog.rows[i].total_quality);
  }
  CHECK(fl.stored_fairness == dl.stored_fairness);
}

TEST_CASE("quality-max argmax per service") {
  SUBCASE("no conflicts keeps every list") {
    auto ds = make_dataset({{1, 5}, {2, 5}},
                           {{0, 1, 5.0}, {0, 2, 4.0}, {1, 1, 3.0}}, 2);
    FairnessLedger ledger(2);
    const auto users = all_users(ds);
  RoundContext ctx{ds.lists, ds.catalog, ds.ratings, ledger, users};
    const auto out = quality_max_round(ctx);
    CHECK(out.lists[0].size() == 2);
    CHECK(out.lists[1].size() == 1);
  }
  SUBCASE("higher contribution wins the contested slot") {
    // A ranks s1 first (contribution 1.0); B ranks s1 second behind s2.
    auto ds = make_dataset({{1, 1}, {2, 5}},
                           {{0, 1, 5.0}, {1, 2, 5.0}, {1, 1, 4.0}}, 2);
    FairnessLedger ledger(2);
    const auto users = all_users(ds);
  RoundContext ctx{ds.lists, ds.catalog, ds.ratings, ledger, users};
    const auto out = quality_max_round(ctx);
    const int s1 = ds.catalog.index_of(1);
    CHECK(std::count(out.lists[0].begin(), out.lists[0].end(), s1) == 1);
    CHECK(std::count(out.lists[1].begin(), out.lists[1].end(), s1) == 0);
  }
}

TEST_CASE("exhaustive search matches the per-service greedy") {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 50; ++trial) {
    Dataset ds = random_instance(rng, 2 + static_cast<int>(rng() % 4),
                                 2 + static_cast<int>(rng() % 3), 2, 2);
    FairnessLedger ledger(ds.ratings.user_count());
    const auto users = all_users(ds);
  RoundContext ctx{ds.lists, ds.catalog, ds.ratings, ledger, users};
    const auto greedy = quality_max_round(ctx);
    const auto exact = exhaustive_opt_round(ctx);
    check_contract(ds, greedy);
    check_contract(ds, exact);
    CHECK(outcome_quality(ctx, greedy) ==
          doctest::Approx(outcome_quality(ctx, exact)).epsilon(1e-12));
  }
}

TEST_CASE("exhaustive search refuses oversized instances") {
  std::mt19937_64 rng(13);
  Dataset ds = random_instance(rng, 30, 8, 3, 3);
  FairnessLedger ledger(ds.ratings.user_count());
  const auto users = all_users(ds);
  RoundContext ctx{ds.lists, ds.catalog, ds.ratings, ledger, users};
  CHECK_THROWS_AS(exhaustive_opt_round(ctx, 20), GuardError);
}

TEST_CASE("exhaustive search takes the whole list when capacity allows") {
  auto ds = make_dataset({{1, 5}, {2, 5}}, {{0, 1, 5.0}, {0, 2, 4.0}}, 2);
  FairnessLedger ledger(1);
  const auto users = all_users(ds);
  RoundContext ctx{ds.lists, ds.catalog, ds.ratings, ledger, users};
  const auto out = exhaustive_opt_round(ctx);
  CHECK(out.lists[0].size() == 2);
}

TEST_CASE("random strategy") {
  auto ds = make_dataset({{1, 1}},
                         {{0, 1, 5.0}, {1, 1, 4.0}, {2, 1, 3.0}, {3, 1, 2.0}},
                         1);
  const int s = ds.catalog.index_of(1);
  FairnessLedger ledger(4);
  const auto users = all_users(ds);
  RoundContext ctx{ds.lists, ds.catalog, ds.ratings, ledger, users};

  SUBCASE("ample capacity serves every demander") {
    auto ds2 = make_dataset({{1, 9}}, {{0, 1, 5.0}, {1, 1, 4.0}}, 1);
    FairnessLedger ledger2(2);
    const auto users2 = all_users(ds2);
    RoundContext ctx2{ds2.lists, ds2.catalog, ds2.ratings, ledger2, users2};
    std::mt19937_64 rng(3);
    const auto out = random_round(ctx2, rng);
    CHECK(out.lists[0].size() == 1);
    CHECK(out.lists[1].size() == 1);
  }
  SUBCASE("uniform selection, chi-square over 10000 rounds") {
    std::mt19937_64 rng(7);
    std::vector<int> hits(4, 0);
    const int rounds = 10000;
    for (int t = 0; t < rounds; ++t) {
      const auto out = random_round(ctx, rng);
      for (size_t k = 0; k < out.users.size(); ++k) {
        if (!out.lists[k].empty() && out.lists[k][0] == s) {
          ++hits[out.users[k]];
        }
      }
    }
    const double expected = rounds / 4.0;
    double chi2 = 0.0;
    for (int h : hits) chi2 += (h - expected) * (h - expected) / expected;
    // 3 degrees of freedom; chi2 < 11.34 <=> p > 0.01
    CHECK(chi2 < 11.34);
  }
  SUBCASE("same seed reproduces the outcome") {
    std::mt19937_64 a(42), b(42);
    const auto out1 = random_round(ctx, a);
    const auto out2 = random_round(ctx, b);
    CHECK(out1.lists == out2.lists);
    CHECK(out1.consumed == out2.consumed);
  }
}

TEST_CASE("strategy contract holds on random instances") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    Dataset ds = random_instance(rng, 15, 6, 2, 3);
    FairnessLedger ledger(ds.ratings.user_count());
    const auto users = all_users(ds);
  RoundContext ctx{ds.lists, ds.catalog, ds.ratings, ledger, users};
    std::mt19937_64 srng(trial);
    check_contract(ds, f_fast_round(ctx));
    check_contract(ds, quality_max_round(ctx));
    check_contract(ds, random_round(ctx, srng));
  }
}

TEST_CASE("degenerate inputs yield an empty outcome") {
  auto ds = make_dataset({{1, 1}}, {{0, 1, 5.0}}, 1);
  FairnessLedger ledger(1);
  std::vector<int> nobody;
  RoundContext ctx{ds.lists, ds.catalog, ds.ratings, ledger, nobody};
  const auto out = f_fast_round(ctx);
  CHECK(out.users.empty());
  CHECK(out.lists.empty());
}
