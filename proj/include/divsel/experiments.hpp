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

#ifndef DIVSEL_EXPERIMENTS_HPP_
#define DIVSEL_EXPERIMENTS_HPP_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "divsel/dataio.hpp"
#include "divsel/distance.hpp"
#include "divsel/objectives.hpp"
#include "divsel/optimize.hpp"
#include "divsel/relevance.hpp"
#include "json.hpp"

namespace divsel {

// Flat table for CSV output.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string format_number(double value);
std::string format_optional(const std::optional<double>& value);

// ---- relative scores ---------------------------------------------------

struct RelativeScoreOptions {
  std::size_t k_max = 128;
  std::size_t random_seeds = 10;
  std::uint64_t seed = 7;
  unsigned threads = 1;
};

inline const std::vector<ObjectiveSpec> kDefaultObjectives{
    ObjectiveSpec::ild(), ObjectiveSpec::disp(), ObjectiveSpec::gild_adjusted(Bandwidth::kAdjustedMed)};

struct RelativeScoreReport {
  std::vector<ObjectiveSpec> objectives;  // columns; rows are these plus Random
  std::size_t k_max = 0;
  std::size_t random_seeds = 0;
  // score[row][col][k - 2] for k = 2..k_max; nullopt where the measure is
  // undefined (adaptive GILD at k = 2) or the denominator vanishes.
  std::vector<std::vector<std::vector<std::optional<double>>>> score;
  // Random row only: across-seed variance per (col, k).
  std::vector<std::vector<std::optional<double>>> random_variance;
  // Mean over the defined k of each (row, col) cell.
  std::vector<std::vector<std::optional<double>>> average;
  // Number of (row, col, k) scores above 1, which greedy denominators allow.
  std::vector<std::vector<std::size_t>> above_one;

  std::size_t random_row() const { return objectives.size(); }
  std::size_t index_of(const ObjectiveSpec& spec) const;
};

// Each greedy runs once to k_max; the prefix of length k is its size-k
// selection. The Random row averages over seeded uniform k-subsets.
RelativeScoreReport relative_scores(const DistanceOracle& oracle, const std::vector<ObjectiveSpec>& objectives,
                                    const RelativeScoreOptions& options = {});

nlohmann::json to_json(const RelativeScoreReport& report);
Table to_table(const RelativeScoreReport& report);

// ---- sigma sweep -------------------------------------------------------

// `count` log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

struct SweepOptions {
  std::size_t k = 16;
  std::vector<double> grid = log_grid(0.02, 1.0, 64);
  unsigned threads = 1;
  bool direct_kernel = false;  // see GreedyOptions::direct_kernel
};

struct SweepCell {
  double sigma = 0.0;
  double ild = 0.0;
  double disp = 0.0;
  bool degenerate = false;  // some step had every candidate tied
};

struct SigmaSweepReport {
  std::size_t k = 0;
  bool direct_kernel = false;
  std::vector<SweepCell> cells;
  double ild_of_ild_greedy = 0.0;
  double disp_of_ild_greedy = 0.0;
  double ild_of_disp_greedy = 0.0;
  double disp_of_disp_greedy = 0.0;
  // Bandwidths read off the adaptive greedy selections.
  double marker_adjusted_min = 0.0;
  double marker_adjusted_med = 0.0;
  double marker_raw_min = 0.0;
  double marker_raw_median = 0.0;
};

SigmaSweepReport sigma_sweep(const DistanceOracle& oracle, const SweepOptions& options);

nlohmann::json to_json(const SigmaSweepReport& report);
Table to_table(const SigmaSweepReport& report);

// ---- histograms ----------------------------------------------------------

struct Histogram {
  double upper = 0.0;  // bins split [0, upper] evenly
  std::vector<std::size_t> counts;
  std::vector<double> distances;  // sorted, for threshold queries
  std::size_t total() const;
  double fraction_below(double threshold) const;
  double fraction_above(double threshold) const;
};

// Pairwise distances of `items` binned over [0, upper]; upper defaults to the
// catalog diameter. A distance equal to upper lands in the last bin.
Histogram pairwise_histogram(const DistanceOracle& oracle, std::span<const ItemId> items, std::size_t bins,
                             std::optional<double> upper = std::nullopt);

nlohmann::json to_json(const Histogram& histogram);
Table to_table(const Histogram& histogram);

// ---- recommendation evaluation ------------------------------------------

inline const std::vector<double> kDefaultLambdas{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7,
                                                 0.8, 0.9, 0.99, 0.999, 1.0};

struct EvalConfig {
  std::vector<ObjectiveSpec> objectives = kDefaultObjectives;
  std::vector<double> lambdas = kDefaultLambdas;
  std::size_t k = 50;
  unsigned threads = 1;
  // Normalizers at or below this value make the cell undefined.
  double zero_tolerance = 1e-12;
  std::size_t max_users = 0;  // 0 = every user
};

struct UserResult {
  std::size_t user = 0;
  std::size_t objective = 0;  // index into EvalConfig::objectives
  std::size_t lambda = 0;     // index into EvalConfig::lambdas
  std::optional<double> ndcg;
  std::optional<double> nild;
  std::optional<double> ndisp;
  // Steps picked purely by relevance because the selection's dispersion had
  // already dropped to 0.
  std::size_t fallback_steps = 0;
};

struct EvalCell {
  ObjectiveSpec objective;
  double lambda = 0.0;
  std::optional<double> mean_ndcg;
  std::optional<double> mean_nild;
  std::optional<double> mean_ndisp;
  std::size_t users = 0;
  std::size_t ndcg_undefined = 0;   // users without test items
  std::size_t nild_undefined = 0;   // ILD normalizer ~ 0
  std::size_t ndisp_undefined = 0;  // dispersion normalizer ~ 0
  std::size_t fallback_users = 0;
};

struct EvalReport {
  std::size_t k = 0;
  std::vector<EvalCell> cells;  // objective-major, then lambda
  std::vector<UserResult> per_user;
  std::size_t users_evaluated = 0;
  std::size_t users_skipped = 0;  // candidate pool smaller than 2
};

// Reranks for every user over the items absent from that user's training and
// validation interactions, with relevance x_u B. Users whose pool holds fewer
// than k items get lists of the pool size.
EvalReport eval_rerank(const DistanceOracle& oracle, const EaseModel& model, const FeedbackMatrix& train,
                       const FeedbackMatrix& validation, const FeedbackMatrix& test, const EvalConfig& config = {});

// Steps t >= 2 of a reranked selection that follow a zero-dispersion prefix
// and pick the most relevant remaining pool item.
std::size_t relevance_fallback_steps(const DistanceOracle& oracle, const Selection& selection,
                                     const std::vector<double>& relevance, std::span<const ItemId> pool);

nlohmann::json to_json(const EvalReport& report, const EvalConfig& config);
Table to_table(const EvalReport& report);
Table per_user_table(const EvalReport& report, const EvalConfig& config);

// ---- output --------------------------------------------------------------

std::string report_stem(const std::string& experiment, const std::string& dataset, std::uint64_t seed);
void write_csv(const std::filesystem::path& path, const Table& table);
void write_json(const std::filesystem::path& path, const nlohmann::json& value);

}  // namespace divsel

#endif  // DIVSEL_EXPERIMENTS_HPP_
