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

#ifndef DIVSEL_DISTANCE_HPP_
#define DIVSEL_DISTANCE_HPP_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "divsel/common.hpp"

namespace divsel {

// n items with d real coordinates each, stored row-major.
class FeatureCatalog {
 public:
  // Throws DataError unless n >= 2, d >= 1, every value finite and
  // values.size() == n * d.
  FeatureCatalog(std::size_t n, std::size_t d, std::vector<double> values);

  static FeatureCatalog from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return d_; }
  std::span<const double> row(ItemId i) const { return {values_.data() + i * d_, d_}; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<double> values_;
};

// n items, each with a non-empty set of genre tokens.
class GenreCatalog {
 public:
  // Throws DataError when fewer than 2 items or any set is empty.
  explicit GenreCatalog(const std::vector<std::vector<std::string>>& sets);

  std::size_t size() const { return sets_.size(); }
  // Sorted, deduplicated token ids of item i.
  std::span<const std::uint32_t> tokens(ItemId i) const { return sets_[i]; }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  std::vector<std::string> genre_names(ItemId i) const;

 private:
  std::vector<std::vector<std::uint32_t>> sets_;
  std::vector<std::string> vocabulary_;
};

enum class Metric { kEuclidean, kCosine, kJaccard };
enum class CachePolicy { kNone, kFullMatrix };

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view name);

// Pairwise distance access over a catalog.
//
// Values are evaluated with the lower index as the first operand so
// d(i, j) and d(j, i) are bitwise identical. The full-matrix cache stores the
// packed upper triangle and is filled by the same routine, so cached and
// uncached lookups agree bitwise. Immutable after construction.
//
// Cosine distance is 1 - cos(x, y) clamped to [0, 2]; zero-norm rows are
// rejected. Jaccard distance is a pseudometric: identical genre sets give 0.
class DistanceOracle {
 public:
  static DistanceOracle euclidean(FeatureCatalog catalog, CachePolicy cache = CachePolicy::kNone);
  static DistanceOracle cosine(FeatureCatalog catalog, CachePolicy cache = CachePolicy::kNone);
  static DistanceOracle jaccard(GenreCatalog catalog, CachePolicy cache = CachePolicy::kNone);

  std::size_t size() const { return n_; }
  Metric metric() const { return metric_; }
  CachePolicy cache_policy() const { return cached_.empty() ? CachePolicy::kNone : CachePolicy::kFullMatrix; }
  double scale() const { return scale_; }

  // Throws std::out_of_range for indices outside [0, n).
  double distance(ItemId i, ItemId j) const;

  // No range check; i, j must be < size().
  double operator()(ItemId i, ItemId j) const {
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    if (!cached_.empty()) return cached_[packed_index(i, j)];
    return scale_ * raw(i, j);
  }

  // Same catalog with every distance multiplied by factor > 0. The cache (if
  // any) is rebuilt for the scaled values.
  DistanceOracle scaled(double factor) const;

  // Feature catalog backing a euclidean/cosine oracle, or nullptr.
  const FeatureCatalog* features() const { return features_.get(); }
  const GenreCatalog* genres() const { return genres_.get(); }

 private:
  DistanceOracle() = default;
  void build_cache();
  std::size_t packed_index(ItemId i, ItemId j) const {
    return i * n_ - i * (i + 1) / 2 + (j - i - 1);
  }
  double raw(ItemId i, ItemId j) const;

  Metric metric_ = Metric::kEuclidean;
  std::size_t n_ = 0;
  double scale_ = 1.0;
  std::shared_ptr<const FeatureCatalog> features_;
  std::shared_ptr<const GenreCatalog> genres_;
  std::vector<double> norms_;  // cosine only
  std::vector<double> cached_;
};

// Maximum pairwise distance among `items`; exact. Throws std::invalid_argument
// for fewer than 2 items.
double diameter(const DistanceOracle& oracle, std::span<const ItemId> items);

// Maximum pairwise distance over the whole catalog.
double diameter(const DistanceOracle& oracle);

// All ids 0..n-1.
std::vector<ItemId> all_items(std::size_t n);

}  // namespace divsel

#endif  // DIVSEL_DISTANCE_HPP_
