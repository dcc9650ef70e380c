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

#ifndef DIVSEL_OBJECTIVES_HPP_
#define DIVSEL_OBJECTIVES_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "divsel/distance.hpp"

namespace divsel {

enum class ObjectiveKind { kIld, kDisp, kGild };
enum class Bandwidth { kFixed, kAdjustedMin, kAdjustedMed };

// Which diversity objective to optimize or measure.
//
// Textual form: `ild`, `disp`, `gild:fixed=<sigma>`, `gild:adjusted_min`,
// `gild:adjusted_med`.
struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::kIld;
  Bandwidth bandwidth = Bandwidth::kFixed;  // GILD only
  double sigma = 0.0;                       // GILD with kFixed only

  static ObjectiveSpec ild() { return {ObjectiveKind::kIld, Bandwidth::kFixed, 0.0}; }
  static ObjectiveSpec disp() { return {ObjectiveKind::kDisp, Bandwidth::kFixed, 0.0}; }
  static ObjectiveSpec gild_fixed(double sigma);
  static ObjectiveSpec gild_adjusted(Bandwidth scheme);
  static ObjectiveSpec parse(std::string_view text);

  bool adaptive() const { return kind == ObjectiveKind::kGild && bandwidth != Bandwidth::kFixed; }
  std::string to_string() const;

  friend bool operator==(const ObjectiveSpec&, const ObjectiveSpec&) = default;
};

// Objective value; `defined` is false for sets of fewer than 2 items (and,
// for adaptive GILD, fewer than 3).
struct ObjectiveValue {
  double value = 0.0;
  bool defined = false;
};

// Average pairwise distance.
ObjectiveValue ild(const DistanceOracle& oracle, std::span<const ItemId> items);

// Minimum pairwise distance.
ObjectiveValue dispersion(const DistanceOracle& oracle, std::span<const ItemId> items);

// sqrt(2 - 2 exp(-d^2 / 2 sigma^2)), evaluated as sqrt(-2 expm1(-x)) so small
// distances keep full precision. Once the exponent exceeds 700 the kernel is
// taken as exactly 0 and the result is sqrt(2). sigma == 0 returns the limit
// (0 for d == 0, sqrt(2) otherwise).
double kernel_distance(double d, double sigma);

// Average kernel distance over pairs.
ObjectiveValue gild(const DistanceOracle& oracle, std::span<const ItemId> items, double sigma);

// sqrt(2 ln(C(k, 2) - 1)); requires k >= 3.
double bandwidth_denominator(std::size_t k);

// Adjusted minimum / median bandwidth of `items`. Returns nullopt when
// |items| < 3, where the denominator is undefined. May return 0 when the
// statistic itself is 0 (duplicate items).
std::optional<double> adjusted_sigma(const DistanceOracle& oracle, std::span<const ItemId> items,
                                     Bandwidth scheme);

// Value of `spec` on `items`. Adaptive GILD evaluates with the bandwidth of
// the set itself.
ObjectiveValue evaluate(const DistanceOracle& oracle, std::span<const ItemId> items,
                        const ObjectiveSpec& spec);

// All C(|items|, 2) pairwise distances in pair order (a < b).
std::vector<double> pairwise_distances(const DistanceOracle& oracle, std::span<const ItemId> items);

// Median with the even-count convention: mean of the two central values.
// `values` is taken by value and partially reordered. Requires non-empty.
double median(std::vector<double> values);

}  // namespace divsel

#endif  // DIVSEL_OBJECTIVES_HPP_
