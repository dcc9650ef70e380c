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

#ifndef DIVSEL_OPTIMIZE_HPP_
#define DIVSEL_OPTIMIZE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "divsel/distance.hpp"
#include "divsel/objectives.hpp"

namespace divsel {

// One greedy iteration.
struct TraceStep {
  ItemId item = 0;
  double score = 0.0;      // quantity maximized at this step
  double marginal = 0.0;   // div(S + item) - div(S), undefined values as 0
  double objective = 0.0;  // div(S + item), 0 while undefined
  std::optional<double> sigma;  // bandwidth used by adaptive GILD
  double relevance = 0.0;       // reranking only
  bool all_tied = false;        // every remaining candidate scored the same
};

// Ordered greedy output with its trace.
struct Selection {
  std::vector<ItemId> items;
  ObjectiveSpec objective;
  std::vector<TraceStep> trace;

  // First k items.
  std::vector<ItemId> prefix(std::size_t k) const {
    return {items.begin(), items.begin() + static_cast<std::ptrdiff_t>(std::min(k, items.size()))};
  }
  // True when some step after the first two had every candidate tied.
  bool degenerate() const;
};

struct GreedyOptions {
  // Candidate items; empty means every item of the oracle.
  std::vector<ItemId> pool;
  // Tie order: among equal scores the item with the smallest priority wins.
  // Empty means priority = item id (lowest index wins).
  std::vector<std::size_t> tie_priority;
  // Workers for candidate scoring; output does not depend on this.
  unsigned threads = 1;
  // Adaptive GILD only: start from the globally farthest pair instead of
  // item 0 and its farthest neighbor.
  bool exact_farthest_pair = false;
  // Fixed-bandwidth GILD only. By default candidates are ranked by the log
  // of their summed kernel deficits sqrt(2) - k(d), which picks the same
  // argmax as the summed kernel values but keeps full resolution when
  // exp(-d^2 / 2 sigma^2) is far below machine epsilon. Setting this ranks
  // by the directly summed kernel values instead; small bandwidths then
  // collapse to ties, as plain floating-point evaluation does.
  bool direct_kernel = false;
};

// Greedy maximization of `objective` up to k items, 2 <= k <= |pool|.
//
// The first pick is the top-priority item, since every singleton has an
// undefined (zero) objective. ILD and fixed-bandwidth GILD maximize
// f(S + i) through running per-candidate sums. DISP ranks candidates by
// their minimum distance to S (farthest-point traversal), which always lies
// in the argmax set of disp(S + i). Adaptive GILD is delegated to
// greedy_gild_adaptive.
Selection greedy(const DistanceOracle& oracle, const ObjectiveSpec& objective, std::size_t k,
                 const GreedyOptions& options = {});

// Greedy on GILD with the bandwidth recomputed per candidate from S + i.
// Step 2 takes the item farthest from the first one; later steps maximize
// GILD_s(S + i) - GILD_s(S) with s = adjusted bandwidth of S + i.
Selection greedy_gild_adaptive(const DistanceOracle& oracle, Bandwidth scheme, std::size_t k,
                               const GreedyOptions& options = {});

// Relevance/diversity trade-off reranking.
struct RerankConfig {
  std::vector<double> relevance;  // one score per oracle item
  double lambda = 0.5;            // in [0, 1]
  ObjectiveSpec objective = ObjectiveSpec::ild();
  std::size_t k = 10;
};

// Step l picks argmax (1 - lambda) rel(i) + lambda (div(S + i) - div(S)).
// Relevance of pool items must be finite; exclude masked items through
// options.pool. The DISP marginal is the literal min(disp(S), m_i) - disp(S),
// so once disp(S) reaches 0 the picks follow relevance order. For adaptive
// GILD the second step's diversity term is sqrt(2) d(i1, i) / max_j d(i1, j).
Selection greedy_rerank(const DistanceOracle& oracle, const RerankConfig& config,
                        const GreedyOptions& options = {});

struct BruteForceOptions {
  std::uint64_t budget = 2'000'000;  // maximum number of subsets
  bool enumerate_all_optima = false;
  std::size_t max_optima = 100'000;
  std::vector<ItemId> pool;  // empty: all items
};

struct BruteForceResult {
  double optimum_value = 0.0;
  std::vector<ItemId> one_optimal_set;
  // Every subset within 1e-12 of the optimum, in lexicographic order (only
  // when enumerate_all_optima was set).
  std::vector<std::vector<ItemId>> all_optimal_sets;
  bool optima_truncated = false;
  std::uint64_t subsets_evaluated = 0;
};

inline constexpr double kCoOptimalTolerance = 1e-12;

// Exact optimum over all k-subsets of the pool in lexicographic order.
// Throws BudgetExceeded when C(|pool|, k) exceeds the budget.
BruteForceResult brute_force(const DistanceOracle& oracle, const ObjectiveSpec& objective, std::size_t k,
                             const BruteForceOptions& options = {});

// k-th smallest (0-based rank) element of the union of two sorted ranges.
double kth_of_sorted_pair(std::span<const double> a, std::span<const double> b, std::size_t rank);

}  // namespace divsel

#endif  // DIVSEL_OPTIMIZE_HPP_
