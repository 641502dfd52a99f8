#include <doctest.h>

#include <random>

#include "fastrec/core.hpp"
#include "test_util.hpp"

using namespace fastrec;
using fastrec::test::make_dataset;
using fastrec::test::random_instance;

TEST_CASE("original lists sort by descending rating") {
  auto ds = make_dataset({{1, 5}, {2, 5}, {3, 5}},
                         {{0, 1, 5.0}, {0, 2, 3.0}, {0, 3, 4.0}}, 2);
  const int s1 = ds.catalog.index_of(1), s3 = ds.catalog.index_of(3);
  REQUIRE(ds.lists.top[0] == std::vector<int>{s1, s3});
  CHECK(ds.lists.position[0].at(s1) == 1);
  CHECK(ds.lists.position[0].at(s3) == 2);
}

TEST_CASE("demand set collects all users ranking the service first") {
  auto ds = make_dataset({{7, 1}, {8, 1}},
                         {{0, 7, 5.0}, {0, 8, 1.0}, {1, 7, 4.0}, {1, 8, 2.0}},
                         1);
  const int s7 = ds.catalog.index_of(7);
  CHECK(ds.lists.demand[s7] == std::vector<int>{0, 1});
  CHECK(ds.lists.demand[ds.catalog.index_of(8)].empty());
}

TEST_CASE("rating ties break by ascending service id") {
  auto ds = make_dataset({{1, 5}, {2, 5}}, {{0, 2, 4.0}, {0, 1, 4.0}}, 2);
  CHECK(ds.lists.top[0] ==
        std::vector<int>{ds.catalog.index_of(1), ds.catalog.index_of(2)});
}

TEST_CASE("non-positive ratings are rejected") {
  CHECK_THROWS_AS(RatingMatrix::from_entries({{0, 0, 0.0}}), DataError);
  CHECK_THROWS_AS(RatingMatrix::from_entries({{0, 0, -1.5}}), DataError);
}

TEST_CASE("short lists truncate to the rated services") {
  auto ds = make_dataset({{1, 5}, {2, 5}}, {{0, 1, 2.0}}, 5);
  CHECK(ds.lists.top[0].size() == 1);
  CHECK(ds.lists.full[0].size() == 1);
}

TEST_CASE("catalog rejects non-positive capacity and duplicate ids") {
  CHECK_THROWS_AS(ServiceCatalog::from_entries({{1, 0}}), DataError);
  CHECK_THROWS_AS(ServiceCatalog::from_entries({{1, 2}, {1, 3}}), DataError);
}

TEST_CASE("demand sets round-trip from top windows") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto ds = random_instance(rng, 12, 8, 4, 3);
    std::vector<std::vector<int>> rebuilt(ds.catalog.size());
    for (int u = 0; u < ds.ratings.user_count(); ++u) {
      for (int j : ds.lists.top[u]) rebuilt[j].push_back(u);
    }
    CHECK(rebuilt == ds.lists.demand);
  }
}

TEST_CASE("positions are a bijection onto 1..|top window|") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto ds = random_instance(rng, 10, 6, 3, 4);
    for (int u = 0; u < ds.ratings.user_count(); ++u) {
      std::vector<char> seen(ds.lists.top[u].size() + 1, 0);
      for (const auto& [j, pos] : ds.lists.position[u]) {
        REQUIRE(pos >= 1);
        REQUIRE(pos <= static_cast<int>(ds.lists.top[u].size()));
        REQUIRE(!seen[pos]);
        seen[pos] = 1;
        CHECK(ds.lists.top[u][pos - 1] == j);
      }
      CHECK(ds.lists.position[u].size() == ds.lists.top[u].size());
    }
  }
}
