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
#include <random>

#include "divsel/objectives.hpp"
#include "doctest.h"
#include "helpers.hpp"

using divsel::Bandwidth;
using divsel::ItemId;
using divsel::ObjectiveSpec;

namespace {

std::vector<ItemId> random_subset(std::size_t n, std::size_t k, std::mt19937& gen) {
  std::vector<ItemId> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), gen);
  all.resize(k);
  return all;
}

}  // namespace

TEST_SUITE_BEGIN("objectives");

TEST_CASE("ild, dispersion and gild agree with the reference on random subsets") {
  const auto rows = oracle::random_rows(40, 3, 21);
  const auto ref = oracle::euclidean_matrix(rows);
  const auto o = testing::euclidean(rows);
  std::mt19937 gen(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_subset(40, 2 + trial % 10, gen);
    const auto ss = testing::ids(s);
    CHECK(divsel::ild(o, s).value == doctest::Approx(oracle::ild(ref, ss)).epsilon(1e-12));
    CHECK(divsel::dispersion(o, s).value == doctest::Approx(oracle::disp(ref, ss)).epsilon(1e-12));
    for (double sigma : {0.05, 0.3, 2.0}) {
      CHECK(divsel::gild(o, s, sigma).value == doctest::Approx(oracle::gild(ref, ss, sigma)).epsilon(1e-10));
    }
    if (s.size() >= 3) {
      for (bool med : {false, true}) {
        const auto scheme = med ? Bandwidth::kAdjustedMed : Bandwidth::kAdjustedMin;
        const double sigma = oracle::adjusted_sigma(ref, ss, med);
        CHECK(*divsel::adjusted_sigma(o, s, scheme) == doctest::Approx(sigma).epsilon(1e-12));
        CHECK(divsel::evaluate(o, s, ObjectiveSpec::gild_adjusted(scheme)).value ==
              doctest::Approx(oracle::gild(ref, ss, sigma)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("objectives are undefined below two items") {
  const auto o = testing::euclidean({{0.0}, {1.0}, {3.0}});
  const std::vector<ItemId> one{1};
  CHECK_FALSE(divsel::ild(o, one).defined);
  CHECK_FALSE(divsel::dispersion(o, one).defined);
  CHECK_FALSE(divsel::gild(o, one, 1.0).defined);
  const std::vector<ItemId> two{0, 2};
  CHECK(divsel::ild(o, two).defined);
  CHECK(divsel::ild(o, two).value == 3.0);
  CHECK_FALSE(divsel::adjusted_sigma(o, two, Bandwidth::kAdjustedMin).has_value());
  CHECK_FALSE(divsel::evaluate(o, two, ObjectiveSpec::gild_adjusted(Bandwidth::kAdjustedMed)).defined);
}

TEST_CASE("kernel distance limits and shape") {
  CHECK(divsel::kernel_distance(0.0, 1.0) == 0.0);
  CHECK(divsel::kernel_distance(1.0, 0.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(divsel::kernel_distance(0.0, 0.0) == 0.0);
  CHECK(divsel::kernel_distance(1e3, 1e-3) == std::sqrt(2.0));
  // Tiny d / sigma keeps relative accuracy: sqrt(2 - 2 exp(-x)) ~ d / sigma.
  CHECK(divsel::kernel_distance(1e-9, 1.0) == doctest::Approx(1e-9).epsilon(1e-9));
  double prev = 0.0;
  for (double d = 0.01; d < 5.0; d += 0.01) {
    const double v = divsel::kernel_distance(d, 0.7);
    CHECK(v >= prev);
    CHECK(v <= std::sqrt(2.0));
    CHECK(v == doctest::Approx(oracle::kernel(d, 0.7)).epsilon(1e-12));
    prev = v;
  }
}

TEST_CASE("bandwidth denominator") {
  CHECK(divsel::bandwidth_denominator(3) == doctest::Approx(std::sqrt(2.0 * std::log(2.0))));
  CHECK(divsel::bandwidth_denominator(10) == doctest::Approx(std::sqrt(2.0 * std::log(44.0))));
  CHECK_THROWS_AS(divsel::bandwidth_denominator(2), std::invalid_argument);
}

TEST_CASE("median of even and odd counts") {
  CHECK(divsel::median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(divsel::median({4.0, 1.0, 3.0, 2.0}) == 2.5);
  CHECK_THROWS(divsel::median({}));
}

TEST_CASE("gild times sigma approaches ild for large sigma") {
  const auto rows = oracle::random_rows(12, 2, 9);
  const auto o = testing::euclidean(rows);
  const auto all = divsel::all_items(12);
  const double ild = divsel::ild(o, all).value;
  double prev_err = 1.0;
  for (double sigma : {1.0, 10.0, 100.0, 1000.0}) {
    const double err = std::abs(divsel::gild(o, all, sigma).value * sigma / ild - 1.0);
    CHECK(err <= prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 1e-6);
}

TEST_CASE("objective spec syntax round trips") {
  for (const char* text : {"ild", "disp", "gild:adjusted_min", "gild:adjusted_med", "gild:fixed=0.25"}) {
    const auto spec = ObjectiveSpec::parse(text);
    CHECK(ObjectiveSpec::parse(spec.to_string()) == spec);
  }
  CHECK(ObjectiveSpec::parse("gild:fixed=0.25").sigma == 0.25);
  CHECK(ObjectiveSpec::parse("gild:adjusted_med").adaptive());
  CHECK_FALSE(ObjectiveSpec::parse("gild:fixed=1").adaptive());
  for (const char* bad : {"", "ILD", "gild", "gild:fixed=", "gild:fixed=-1", "gild:fixed=abc", "gild:adjusted"}) {
    CHECK_THROWS_AS(ObjectiveSpec::parse(bad), std::invalid_argument);
  }
}

TEST_CASE("jaccard duplicates drive dispersion to zero") {
  const auto o = divsel::DistanceOracle::jaccard(divsel::GenreCatalog({{"a"}, {"a"}, {"b"}}));
  const auto all = divsel::all_items(3);
  CHECK(divsel::dispersion(o, all).value == 0.0);
  CHECK(divsel::ild(o, all).value == doctest::Approx(2.0 / 3.0));
}

TEST_SUITE_END();
