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
#include <map>
#include <set>

#include "divsel/datagen.hpp"
#include "divsel/objectives.hpp"
#include "doctest.h"

using divsel::FeatureCatalog;

TEST_SUITE_BEGIN("datagen");

TEST_CASE("two circles: membership and an even split") {
  const auto c = divsel::gen_two_circles(1000, 3);
  REQUIRE(c.size() == 1000);
  std::size_t left = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    const auto r = c.row(i);
    const double cx = i < 500 ? -0.75 : 0.75;
    CHECK(std::hypot(r[0] - cx, r[1]) <= 0.25 + 1e-15);
    left += r[0] < 0 ? 1 : 0;
  }
  CHECK(left == 500);
  CHECK(divsel::gen_two_circles(7, 1).row(3)[0] < 0.0);
  CHECK(divsel::gen_two_circles(7, 1).row(4)[0] > 0.0);
}

TEST_CASE("ellipse: membership and rough moments") {
  const auto c = divsel::gen_ellipse(4000, 11);
  double sx = 0, sy = 0, sxx = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto r = c.row(i);
    CHECK(r[0] * r[0] + 16.0 * r[1] * r[1] <= 1.0 + 1e-12);
    sx += r[0];
    sy += r[1];
    sxx += r[0] * r[0];
  }
  // Uniform on an ellipse: E[x] = 0 and E[x^2] = a^2 / 4.
  CHECK(std::abs(sx / 4000) < 0.03);
  CHECK(std::abs(sy / 4000) < 0.01);
  CHECK(sxx / 4000 == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("claim32 geometry") {
  for (double eps : {0.01, 0.3}) {
    const auto c = divsel::gen_claim32(8, eps);
    CHECK(c.dim() == 10);
    const auto o = divsel::DistanceOracle::euclidean(c);
    for (divsel::ItemId i = 0; i < 8; ++i) {
      double norm = 0;
      for (double v : c.row(i)) norm += v * v;
      CHECK(norm == doctest::Approx(0.5));
      for (divsel::ItemId j = i + 1; j < 8; ++j) {
        const bool same = (i < 4) == (j < 4);
        CHECK(o.distance(i, j) == doctest::Approx(same ? eps : 1.0).epsilon(1e-12));
      }
    }
  }
  CHECK_THROWS_AS(divsel::gen_claim32(6, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(divsel::gen_claim32(8, 1.0), std::invalid_argument);
}

TEST_CASE("claim33 values") {
  const auto c = divsel::gen_claim33(6);
  REQUIRE(c.size() == 10);
  std::multiset<double> values(c.values().begin(), c.values().end());
  CHECK(values == std::multiset<double>{1, 1, 1, 6, 6, 6, 2, 3, 4, 5});
  // n = 4: {1, 1, 4, 4, 2, 3}; the best 4-set is {1, 1, 4, 4} with ILD 2.
  const auto small = divsel::DistanceOracle::euclidean(divsel::gen_claim33(4));
  const std::vector<divsel::ItemId> ends{0, 1, 2, 3};
  CHECK(divsel::ild(small, ends).value == doctest::Approx(2.0));
  CHECK_THROWS_AS(divsel::gen_claim33(5), std::invalid_argument);
}

TEST_CASE("generators are deterministic in the seed") {
  CHECK(divsel::gen_ellipse(50, 4).values() == divsel::gen_ellipse(50, 4).values());
  CHECK(divsel::gen_ellipse(50, 4).values() != divsel::gen_ellipse(50, 5).values());
  CHECK(divsel::gen_two_circles(50, 4).values() == divsel::gen_two_circles(50, 4).values());
  CHECK(divsel::gen_uniform_cube(20, 3, 1).values() == divsel::gen_uniform_cube(20, 3, 1).values());
  divsel::SyntheticSpec spec;
  spec.kind = divsel::parse_synthetic_kind("two_circles");
  spec.n = 30;
  spec.seed = 9;
  CHECK(divsel::generate(spec).values() == divsel::gen_two_circles(30, 9).values());
  CHECK_THROWS_AS(divsel::parse_synthetic_kind("spiral"), std::invalid_argument);
}

TEST_CASE("rec task structure") {
  divsel::RecTaskSpec spec;
  const auto task = divsel::gen_rec_task(spec);
  CHECK(task.feedback.users() == 200);
  CHECK(task.feedback.items() == 300);
  CHECK(task.genres.size() == 300);

  // Palettes are disjoint across blocks; sets have 1..3 genres.
  std::map<std::vector<std::string>, std::size_t> owner;
  for (std::size_t i = 0; i < 300; ++i) {
    CHECK(task.genres[i].size() >= 1);
    CHECK(task.genres[i].size() <= 3);
    const auto [it, fresh] = owner.emplace(task.genres[i], task.item_block[i]);
    if (!fresh) CHECK(it->second == task.item_block[i]);
  }
  CHECK(owner.size() <= 5 * 15);
  CHECK(owner.size() < 300);

  std::size_t in = 0, out = 0;
  for (const auto& [u, i] : task.feedback.entries()) (task.user_block[u] == task.item_block[i] ? in : out)++;
  // 60 in-block items per user; the binomial spread is well inside 10% / 25%.
  CHECK(in == doctest::Approx(200 * 60 * spec.p_in).epsilon(0.1));
  CHECK(out == doctest::Approx(200 * 240 * spec.p_out).epsilon(0.25));
  CHECK(divsel::gen_rec_task(spec).feedback == task.feedback);
}

TEST_SUITE_END();
