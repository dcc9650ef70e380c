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

#ifndef DIVSEL_DATAIO_HPP_
#define DIVSEL_DATAIO_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "divsel/distance.hpp"

namespace divsel {

// Binary implicit feedback: a set of (user, item) pairs over m users and n
// items. Entries are kept sorted by (user, item) and unique.
class FeedbackMatrix {
 public:
  using Entry = std::pair<std::uint32_t, std::uint32_t>;

  FeedbackMatrix() = default;
  // Sorts and deduplicates; throws DataError for indices outside the shape.
  FeedbackMatrix(std::size_t users, std::size_t items, std::vector<Entry> entries);

  std::size_t users() const { return users_; }
  std::size_t items() const { return items_; }
  std::size_t size() const { return entries_.size(); }
  double density() const;
  const std::vector<Entry>& entries() const { return entries_; }
  // Number of duplicate pairs dropped at construction.
  std::size_t duplicates_dropped() const { return duplicates_; }

  // Item lists per user, each sorted ascending.
  std::vector<std::vector<ItemId>> by_user() const;
  bool contains(std::uint32_t user, std::uint32_t item) const;

  friend bool operator==(const FeedbackMatrix& a, const FeedbackMatrix& b) {
    return a.users_ == b.users_ && a.items_ == b.items_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t users_ = 0;
  std::size_t items_ = 0;
  std::vector<Entry> entries_;
  std::size_t duplicates_ = 0;
};

// Reads `user,item[,ignored]` rows after a header line. The shape is
// max index + 1 unless explicit sizes are given (0 = infer). Throws
// DataError naming the line for malformed rows, negative or out-of-shape
// indices, and for files without interactions.
FeedbackMatrix load_feedback(const std::filesystem::path& path, std::size_t users = 0, std::size_t items = 0);
void save_feedback(const std::filesystem::path& path, const FeedbackMatrix& feedback);

// Feature CSV: header `id,f0,...,f{d-1}`, ids 0..n-1 in order.
FeatureCatalog load_features(const std::filesystem::path& path);
void save_features(const std::filesystem::path& path, const FeatureCatalog& catalog);

// Genre CSV: header `id,genres`, tokens separated by '|'.
GenreCatalog load_genres(const std::filesystem::path& path);
void save_genres(const std::filesystem::path& path, const std::vector<std::vector<std::string>>& genres);

// Keeps users with >= min_user interactions and items with >= min_item,
// repeating until neither filter removes anything. Surviving users and items
// are renumbered densely in their original order.
struct FilterResult {
  FeedbackMatrix feedback;
  std::vector<std::uint32_t> user_ids;  // new index -> original
  std::vector<std::uint32_t> item_ids;
};
FilterResult filter_min_counts(const FeedbackMatrix& feedback, std::size_t min_user, std::size_t min_item);

struct EmbeddingSpec {
  std::size_t dim = 32;
  std::size_t oversampling = 8;
  std::size_t power_iterations = 4;
  std::uint64_t seed = 7;
  // Rows of V * Sigma instead of the plain right singular vectors.
  bool scale_by_singular_values = false;
};

struct Embedding {
  FeatureCatalog vectors;
  std::vector<double> singular_values;
};

// Truncated SVD of the binary user-item matrix via a randomized range finder
// (Gaussian test matrix, power iterations with QR re-orthonormalization, then
// an exact SVD of the small projected matrix). Item i's vector is row i of V.
// Column signs are fixed so each column's largest-magnitude entry is positive.
// Throws std::invalid_argument when dim > min(m, n).
Embedding embed_items(const FeedbackMatrix& feedback, const EmbeddingSpec& spec);

struct SplitSpec {
  std::array<double, 3> ratios{0.6, 0.2, 0.2};
  std::uint64_t seed = 7;
};

struct Split {
  FeedbackMatrix train;
  FeedbackMatrix validation;
  FeedbackMatrix test;
};

// Interaction-level random split (weak generalization). Part sizes follow
// the largest-remainder rounding of ratio * |entries|.
Split split_feedback(const FeedbackMatrix& feedback, const SplitSpec& spec);

// Largest-remainder apportionment of `total` over `ratios`; ties in the
// remainder go to the earlier part.
std::array<std::size_t, 3> apportion(std::size_t total, const std::array<double, 3>& ratios);

}  // namespace divsel

#endif  // DIVSEL_DATAIO_HPP_
