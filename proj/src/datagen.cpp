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

#include "divsel/datagen.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "divsel/rng.hpp"

namespace divsel {

SyntheticKind parse_synthetic_kind(const std::string& name) {
  if (name == "two_circles") return SyntheticKind::kTwoCircles;
  if (name == "ellipse") return SyntheticKind::kEllipse;
  if (name == "claim32") return SyntheticKind::kClaim32;
  if (name == "claim33") return SyntheticKind::kClaim33;
  throw std::invalid_argument("unknown synthetic dataset '" + name + "'");
}

FeatureCatalog gen_two_circles(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("two_circles needs n >= 2");
  constexpr double kRadius = 0.25, kCenter = 0.75;
  Rng rng(seed);
  const std::size_t left = (n + 1) / 2;
  std::vector<double> values;
  values.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double cx = i < left ? -kCenter : kCenter;
    while (true) {
      const double x = rng.uniform(-kRadius, kRadius);
      const double y = rng.uniform(-kRadius, kRadius);
      if (x * x + y * y <= kRadius * kRadius) {
        values.push_back(cx + x);
        values.push_back(y);
        break;
      }
    }
  }
  return FeatureCatalog(n, 2, std::move(values));
}

FeatureCatalog gen_ellipse(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("ellipse needs n >= 2");
  constexpr double kA = 1.0, kB = 0.25;
  Rng rng(seed);
  std::vector<double> values;
  values.reserve(2 * n);
  while (values.size() < 2 * n) {
    const double x = rng.uniform(-kA, kA);
    const double y = rng.uniform(-kB, kB);
    if ((x / kA) * (x / kA) + (y / kB) * (y / kB) <= 1.0) {
      values.push_back(x);
      values.push_back(y);
    }
  }
  return FeatureCatalog(n, 2, std::move(values));
}

FeatureCatalog gen_claim32(std::size_t n, double epsilon) {
  if (n < 4 || n % 4 != 0) throw std::invalid_argument("claim32 needs n divisible by 4");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("claim32 needs epsilon in (0, 1)");
  const std::size_t dim = n + 2, half = n / 2;
  const double spike = epsilon / std::sqrt(2.0);
  const double base = std::sqrt((1.0 - epsilon * epsilon) / 2.0);
  std::vector<double> values(n * dim, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    values[i * dim + i] = spike;
    values[i * dim + n] = base;
    const std::size_t y = half + i;
    values[y * dim + half + i] = spike;
    values[y * dim + n + 1] = base;
  }
  return FeatureCatalog(n, dim, std::move(values));
}

FeatureCatalog gen_claim33(std::size_t n) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("claim33 needs an even n >= 4");
  std::vector<double> values;
  values.reserve(2 * n - 2);
  for (std::size_t i = 0; i < n / 2; ++i) values.push_back(1.0);
  for (std::size_t i = 0; i < n / 2; ++i) values.push_back(static_cast<double>(n));
  for (std::size_t v = 2; v < n; ++v) values.push_back(static_cast<double>(v));
  const std::size_t count = values.size();
  return FeatureCatalog(count, 1, std::move(values));
}

FeatureCatalog generate(const SyntheticSpec& spec) {
  switch (spec.kind) {
    case SyntheticKind::kTwoCircles:
      return gen_two_circles(spec.n, spec.seed);
    case SyntheticKind::kEllipse:
      return gen_ellipse(spec.n, spec.seed);
    case SyntheticKind::kClaim32:
      return gen_claim32(spec.n, spec.epsilon);
    case SyntheticKind::kClaim33:
      return gen_claim33(spec.n);
  }
  throw std::invalid_argument("unknown synthetic dataset");
}

FeatureCatalog gen_uniform_cube(std::size_t n, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> values(n * dim);
  for (double& v : values) v = rng.uniform();
  return FeatureCatalog(n, dim, std::move(values));
}

RecTask gen_rec_task(const RecTaskSpec& spec) {
  if (spec.blocks < 1 || spec.users < spec.blocks || spec.items < spec.blocks) {
    throw std::invalid_argument("rec task needs at least one user and item per block");
  }
  if (spec.genres < 3 || spec.palette_per_block < 1) throw std::invalid_argument("rec task needs >= 3 genres");
  const std::size_t subsets = spec.genres + binomial(spec.genres, 2) + binomial(spec.genres, 3);
  if (spec.blocks * spec.palette_per_block > subsets) {
    throw std::invalid_argument("genre palette larger than the number of genre sets of size <= 3");
  }
  Rng rng(spec.seed);
  RecTask task;
  std::vector<std::string> names;
  for (std::size_t g = 0; g < spec.genres; ++g) {
    names.push_back(std::string(g < 10 ? "genre0" : "genre") + std::to_string(g));
  }

  std::set<std::set<std::size_t>> used;
  std::vector<std::vector<std::vector<std::string>>> palettes(spec.blocks);
  for (std::size_t b = 0; b < spec.blocks; ++b) {
    while (palettes[b].size() < spec.palette_per_block) {
      const std::size_t size = 1 + rng.below(3);
      std::set<std::size_t> pick;
      while (pick.size() < size) pick.insert(rng.below(spec.genres));
      if (!used.insert(pick).second) continue;
      std::vector<std::string> tokens;
      for (std::size_t g : pick) tokens.push_back(names[g]);
      palettes[b].push_back(std::move(tokens));
    }
  }

  for (std::size_t i = 0; i < spec.items; ++i) {
    const std::size_t b = i * spec.blocks / spec.items;
    task.item_block.push_back(b);
    task.genres.push_back(palettes[b][rng.below(spec.palette_per_block)]);
  }
  for (std::size_t u = 0; u < spec.users; ++u) task.user_block.push_back(u * spec.blocks / spec.users);

  std::vector<FeedbackMatrix::Entry> entries;
  for (std::size_t u = 0; u < spec.users; ++u) {
    for (std::size_t i = 0; i < spec.items; ++i) {
      const double p = task.user_block[u] == task.item_block[i] ? spec.p_in : spec.p_out;
      if (rng.uniform() < p) entries.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(i));
    }
  }
  task.feedback = FeedbackMatrix(spec.users, spec.items, std::move(entries));
  return task;
}

}  // namespace divsel
