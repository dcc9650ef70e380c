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

#ifndef DIVSEL_DATAGEN_HPP_
#define DIVSEL_DATAGEN_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "divsel/dataio.hpp"
#include "divsel/distance.hpp"

namespace divsel {

enum class SyntheticKind { kTwoCircles, kEllipse, kClaim32, kClaim33 };

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::kEllipse;
  std::size_t n = 1000;
  double epsilon = 0.01;  // claim32 only
  std::uint64_t seed = 7;
};

SyntheticKind parse_synthetic_kind(const std::string& name);

// Points drawn uniformly from two disks of radius 1/4 centred at (-3/4, 0) and
// (3/4, 0). Items [0, ceil(n/2)) lie in the left disk, the rest in the right
// one. Each point is drawn by rejection from its disk's bounding square,
// consuming two uniforms (x then y) per attempt.
FeatureCatalog gen_two_circles(std::size_t n, std::uint64_t seed);

// Points drawn uniformly from the axis-aligned ellipse with semi-axes 1 and
// 1/4 (flattening 3/4) by rejection from [-1, 1] x [-1/4, 1/4].
FeatureCatalog gen_ellipse(std::size_t n, std::uint64_t seed);

// Two tight groups in R^{n+2}: n/2 X-vectors then n/2 Y-vectors. Within a
// group every distance is epsilon, across groups every distance is 1.
// Requires n divisible by 4 and epsilon in (0, 1).
FeatureCatalog gen_claim32(std::size_t n, double epsilon);

// One-dimensional catalog of 2n - 2 values: n/2 copies of 1, n/2 copies of n,
// then 2, ..., n - 1. Requires n even and >= 4.
FeatureCatalog gen_claim33(std::size_t n);

FeatureCatalog generate(const SyntheticSpec& spec);

// n points uniform in [0, 1]^dim, coordinates drawn row by row.
FeatureCatalog gen_uniform_cube(std::size_t n, std::size_t dim, std::uint64_t seed);

// Synthetic recommendation task: users and items split into `blocks`
// communities; a user interacts with an in-block item with probability
// p_in and with any other item with probability p_out. Every item draws its
// genre set from a small per-block palette, so many items share identical
// sets.
struct RecTaskSpec {
  std::size_t users = 200;
  std::size_t items = 300;
  std::size_t blocks = 5;
  double p_in = 0.5;
  double p_out = 0.005;
  std::size_t genres = 12;         // vocabulary size
  std::size_t palette_per_block = 15;  // distinct genre sets per block
  std::uint64_t seed = 7;
};

struct RecTask {
  FeedbackMatrix feedback;
  std::vector<std::vector<std::string>> genres;  // one set per item
  std::vector<std::size_t> item_block;
  std::vector<std::size_t> user_block;
};

RecTask gen_rec_task(const RecTaskSpec& spec);

}  // namespace divsel

#endif  // DIVSEL_DATAGEN_HPP_
