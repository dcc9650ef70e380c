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

#include "divsel/datagen.hpp"
#include "divsel/objectives.hpp"
#include "divsel/verify.hpp"
#include "doctest.h"
#include "helpers.hpp"

using divsel::CachePolicy;
using divsel::DistanceOracle;

TEST_SUITE_BEGIN("verify");

TEST_CASE("greedy half holds on random instances") {
  divsel::TheoremReport all;
  all.name = "greedy_half";
  all.instances_checked = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto o = DistanceOracle::euclidean(divsel::gen_uniform_cube(10, 2, s));
    const auto r = divsel::check_greedy_half(o, 4);
    CHECK(r.passed);
    CHECK(r.quantities.at("greedy_ild") >= 0.5 * r.quantities.at("opt_ild"));
    CHECK(r.quantities.at("greedy_disp") <= r.quantities.at("opt_disp") + 1e-12);
    all.merge(r);
  }
  CHECK(all.instances_checked == 10);
  CHECK(all.passed);
  CHECK(all.worst_margin >= 0.0);
}

TEST_CASE("dispersion optima keep a share of the best ild") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto o = DistanceOracle::euclidean(divsel::gen_uniform_cube(10, 2, 50 + s));
    for (std::size_t k : {3, 5}) {
      const auto r = divsel::check_theorem_31(o, k);
      CHECK(r.passed);
      const double spread = r.quantities.at("opt_disp") / r.quantities.at("diameter");
      CHECK(r.quantities.at("ild_worst_disp_optimum") / r.quantities.at("opt_ild") >= spread - 1e-12);
      CHECK(r.quantities.at("ild_greedy_disp") / r.quantities.at("opt_ild") >=
            std::max(spread / 2, 1.0 / static_cast<double>(k)) - 1e-12);
    }
  }
}

TEST_CASE("two-group construction") {
  for (double eps : {0.01, 0.1}) {
    const auto r = divsel::check_claim_32(8, eps);
    CHECK(r.passed);
    // k = 4: OPT_ILD = (4 + 2 eps) / 6 and greedy dispersion gives (3 + 3 eps) / 6.
    CHECK(r.quantities.at("opt_ild") == doctest::Approx((4 + 2 * eps) / 6));
    CHECK(r.quantities.at("ild_greedy_disp") == doctest::Approx((3 + 3 * eps) / 6));
    CHECK(r.quantities.at("ratio_optimal") <= 2 * eps);
  }
  CHECK_THROWS_AS(divsel::check_claim_32(8, 0.1, 3), std::invalid_argument);
}

TEST_CASE("one-dimensional construction") {
  for (std::size_t n : {4, 6, 8}) {
    const auto r = divsel::check_claim_33(n);
    CHECK(r.passed);
    CHECK(r.quantities.at("disp_of_ild_optimum") == 0.0);
    CHECK(r.quantities.at("disp_of_greedy_ild") == 0.0);
    CHECK(r.quantities.at("opt_disp") == doctest::Approx(1.0));
  }
}

TEST_CASE("a failed margin fails the report") {
  divsel::TheoremReport r;
  r.add_margin(0.5);
  r.add_margin(-1e-12);
  CHECK(r.passed);
  r.add_margin(-1e-3);
  CHECK_FALSE(r.passed);
  CHECK(r.worst_margin == doctest::Approx(-1e-3));
}

TEST_CASE("gild limits converge on random sets") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto o = DistanceOracle::euclidean(divsel::gen_uniform_cube(12, 2, 300 + s), CachePolicy::kFullMatrix);
    const std::vector<divsel::ItemId> items{0, 1, 2, 3, 4, 5, 6, 7};
    const auto r = divsel::check_gild_limits(o, items);
    CHECK(r.converged);
    CHECK(r.large_monotone);
    CHECK(r.large_error <= 1e-5);
    CHECK(r.small_error <= 1e-3);
    CHECK(r.pairs == 28);
    CHECK(r.ild == doctest::Approx(divsel::ild(o, items).value));
    CHECK(r.disp == doctest::Approx(divsel::dispersion(o, items).value));
    // The literal coefficient is off by sqrt(2).
    CHECK(r.small.back().literal_ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-2));
    for (std::size_t t = 1; t < r.large.size(); ++t) {
      CHECK(std::abs(r.large[t].ratio - 1) <= std::abs(r.large[t - 1].ratio - 1) + 1e-15);
    }
  }
}

TEST_CASE("equal distances are flagged degenerate") {
  // Equilateral triangle.
  const auto o = testing::euclidean({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}});
  const std::vector<divsel::ItemId> items{0, 1, 2};
  const auto r = divsel::check_gild_limits(o, items);
  CHECK(r.degenerate);
  CHECK(r.min_pairs == 3);
  CHECK_THROWS_AS(divsel::check_gild_limits(o, std::vector<divsel::ItemId>{0, 1}), std::invalid_argument);
}

TEST_CASE("reports serialize") {
  const auto j = divsel::to_json(divsel::check_claim_33(4));
  CHECK(j.at("name") == "claim_33");
  CHECK(j.at("passed") == true);
  CHECK(j.contains("quantities"));
}

TEST_SUITE_END();
