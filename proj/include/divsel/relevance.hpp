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

#ifndef DIVSEL_RELEVANCE_HPP_
#define DIVSEL_RELEVANCE_HPP_

#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "divsel/dataio.hpp"

namespace divsel {

// Item-item linear autoencoder with a zero-diagonal weight matrix.
class EaseModel {
 public:
  EaseModel() = default;
  EaseModel(std::size_t n, double l2, std::vector<double> weights);

  std::size_t items() const { return n_; }
  double l2() const { return l2_; }
  double weight(ItemId i, ItemId j) const { return b_[i * n_ + j]; }
  std::span<const double> row(ItemId i) const { return {b_.data() + i * n_, n_}; }
  const std::vector<double>& weights() const { return b_; }

 private:
  std::size_t n_ = 0;
  double l2_ = 0.0;
  std::vector<double> b_;  // row-major n x n
};

inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{2} << 30;

// Closed form P = (X^T X + l2 I)^-1, B = I - P diag(1 / diag P), with the
// diagonal of B stored as exact zeros. Throws std::invalid_argument for
// l2 <= 0 and BudgetExceeded when the dense n x n work would not fit in
// `memory_budget` bytes.
EaseModel fit_ease(const FeedbackMatrix& train, double l2, std::size_t memory_budget = kDefaultMemoryBudget);

// rel_u = x_u B for a user's item history.
std::vector<double> score_history(const EaseModel& model, std::span<const ItemId> history);

// Scores for one user of `feedback`; throws std::out_of_range for an unknown user.
std::vector<double> score_user(const EaseModel& model, const FeedbackMatrix& feedback, std::size_t user);

// Sets the scores of `history` to -infinity.
void mask_items(std::vector<double>& scores, std::span<const ItemId> history);

// Indices of the k largest finite scores, descending, ties to the lower id.
std::vector<ItemId> top_k(const std::vector<double>& scores, std::size_t k);

struct TuneResult {
  double best_l2 = 0.0;
  std::vector<std::pair<double, double>> curve;  // (l2, mean validation nDCG@k), ascending l2
};

inline const std::vector<double> kDefaultL2Grid{1.0, 10.0, 100.0, 500.0, 1000.0};

// Picks the grid value with the highest mean nDCG@k over users that have
// validation interactions, ranking all items outside their training history.
// The grid is deduplicated and sorted; ties go to the smaller l2.
TuneResult tune_l2(const FeedbackMatrix& train, const FeedbackMatrix& validation, std::vector<double> grid,
                   std::size_t k = 50, unsigned threads = 1);

void save_model(const std::filesystem::path& path, const EaseModel& model);
EaseModel load_model(const std::filesystem::path& path);
void export_model_csv(const std::filesystem::path& path, const EaseModel& model);

}  // namespace divsel

#endif  // DIVSEL_RELEVANCE_HPP_
