// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <limits>
#include <random>

#include "divsel/distance.hpp"
#include "doctest.h"
#include "helpers.hpp"

using divsel::CachePolicy;
using divsel::DistanceOracle;
using divsel::FeatureCatalog;
using divsel::GenreCatalog;

TEST_SUITE_BEGIN("distance");

TEST_CASE("euclidean distances match a dense reference") {
  const auto rows = oracle::random_rows(30, 4, 11);
  const auto ref = oracle::euclidean_matrix(rows);
  const auto plain = testing::euclidean(rows);
  const auto cached = testing::euclidean(rows, CachePolicy::kFullMatrix);
  CHECK(cached.cache_policy() == CachePolicy::kFullMatrix);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(plain(i, i) == 0.0);
    for (std::size_t j = 0; j < rows.size(); ++j) {
      CHECK(plain(i, j) == doctest::Approx(ref[i][j]).epsilon(1e-12));
      CHECK(plain(i, j) == plain(j, i));
      CHECK(plain(i, j) == cached(i, j));
    }
  }
}

TEST_CASE("triangle inequality holds for euclidean and jaccard") {
  const auto e = testing::euclidean(oracle::random_rows(15, 3, 5));
  std::mt19937 gen(3);
  std::vector<std::vector<std::string>> sets;
  for (int i = 0; i < 15; ++i) {
    std::vector<std::string> s;
    for (const char* g : {"a", "b", "c", "d", "e"}) {
      if (gen() % 2) s.push_back(g);
    }
    if (s.empty()) s.push_back("a");
    sets.push_back(s);
  }
  const auto j = DistanceOracle::jaccard(GenreCatalog(sets));
  for (const DistanceOracle* o : {&e, &j}) {
    for (std::size_t a = 0; a < 15; ++a) {
      for (std::size_t b = 0; b < 15; ++b) {
        for (std::size_t c = 0; c < 15; ++c) CHECK((*o)(a, c) <= (*o)(a, b) + (*o)(b, c) + 1e-12);
      }
    }
  }
}

TEST_CASE("cosine distance on simple vectors") {
  const auto o = DistanceOracle::cosine(FeatureCatalog::from_rows({{1, 0}, {2, 0}, {0, 3}, {-1, 0}}));
  CHECK(o(0, 1) == doctest::Approx(0.0));
  CHECK(o(0, 2) == doctest::Approx(1.0));
  CHECK(o(0, 3) == doctest::Approx(2.0));
  CHECK(o(0, 1) >= 0.0);
  CHECK_THROWS_AS(DistanceOracle::cosine(FeatureCatalog::from_rows({{1, 0}, {0, 0}})), divsel::DataError);
}

TEST_CASE("jaccard distance is a pseudometric on genre sets") {
  const auto o = DistanceOracle::jaccard(GenreCatalog({{"action", "comedy"}, {"comedy", "drama"}, {"drama"},
                                                       {"comedy", "action"}, {"action", "action"}}));
  CHECK(o(0, 1) == doctest::Approx(1.0 - 1.0 / 3.0));
  CHECK(o(1, 2) == doctest::Approx(0.5));
  CHECK(o(0, 2) == 1.0);
  CHECK(o(0, 3) == 0.0);  // identical sets, distinct items
  CHECK(o(0, 4) == doctest::Approx(0.5));  // duplicate tokens collapse
}

TEST_CASE("genre catalog builds a sorted vocabulary") {
  GenreCatalog g({{"b", "a"}, {"c"}});
  CHECK(g.vocabulary() == std::vector<std::string>{"a", "b", "c"});
  CHECK(g.genre_names(0) == std::vector<std::string>{"a", "b"});
  CHECK_THROWS_AS(GenreCatalog({{"a"}, {}}), divsel::DataError);
  CHECK_THROWS_AS(GenreCatalog({{"a"}}), divsel::DataError);
}

TEST_CASE("catalog validation rejects bad input") {
  CHECK_THROWS_AS(FeatureCatalog(1, 2, {0.0, 1.0}), divsel::DataError);
  CHECK_THROWS_AS(FeatureCatalog(2, 0, {}), divsel::DataError);
  CHECK_THROWS_AS(FeatureCatalog(2, 1, {0.0}), divsel::DataError);
  CHECK_THROWS_AS(FeatureCatalog(2, 1, {0.0, std::numeric_limits<double>::quiet_NaN()}), divsel::DataError);
  CHECK_THROWS_AS(FeatureCatalog::from_rows({{1.0, 2.0}, {1.0}}), divsel::DataError);
}

TEST_CASE("checked access and scaling") {
  const auto o = testing::euclidean({{0, 0}, {3, 4}, {6, 8}});
  CHECK(o.distance(0, 1) == doctest::Approx(5.0));
  CHECK_THROWS_AS(o.distance(0, 3), std::out_of_range);
  const auto s = o.scaled(0.5);
  CHECK(s(0, 2) == doctest::Approx(5.0));
  CHECK(s.scale() == 0.5);
  const auto sc = testing::euclidean({{0, 0}, {3, 4}, {6, 8}}, CachePolicy::kFullMatrix).scaled(2.0);
  CHECK(sc(1, 2) == doctest::Approx(10.0));
  CHECK_THROWS(o.scaled(0.0));
}

TEST_CASE("diameter is the largest pairwise distance") {
  const auto rows = oracle::random_rows(25, 2, 8);
  const auto ref = oracle::euclidean_matrix(rows);
  double best = 0.0;
  for (const auto& r : ref) {
    for (double v : r) best = std::max(best, v);
  }
  const auto o = testing::euclidean(rows);
  CHECK(divsel::diameter(o) == doctest::Approx(best).epsilon(1e-14));
  const std::vector<divsel::ItemId> two{3, 7};
  CHECK(divsel::diameter(o, two) == o(3, 7));
  const std::vector<divsel::ItemId> one{3};
  CHECK_THROWS_AS(divsel::diameter(o, one), std::invalid_argument);
}

TEST_CASE("metric names round trip") {
  for (auto m : {divsel::Metric::kEuclidean, divsel::Metric::kCosine, divsel::Metric::kJaccard}) {
    CHECK(divsel::parse_metric(divsel::to_string(m)) == m);
  }
  CHECK_THROWS_AS(divsel::parse_metric("manhattan"), std::invalid_argument);
}

TEST_SUITE_END();
