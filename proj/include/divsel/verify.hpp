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

#ifndef DIVSEL_VERIFY_HPP_
#define DIVSEL_VERIFY_HPP_

#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "divsel/distance.hpp"
#include "divsel/optimize.hpp"
#include "json.hpp"

namespace divsel {

inline constexpr double kSlack = 1e-9;

// Outcome of an inequality (or identity) checked over one or more instances.
// Identities contribute -|lhs - rhs| as their margin.
struct TheoremReport {
  std::string name;
  std::size_t instances_checked = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  bool passed = true;
  // Named quantities of the last instance (or of the single instance).
  std::map<std::string, double> quantities;

  void add_margin(double margin);
  // Folds another report of the same check into this one.
  void merge(const TheoremReport& other);
};

// Greedy ILD and greedy DISP each reach half their brute-force optimum.
TheoremReport check_greedy_half(const DistanceOracle& oracle, std::size_t k, const BruteForceOptions& budget = {});

// ILD(S*_disp) / OPT_ILD >= d*_k / D and ILD(S^Gr_disp) / OPT_ILD >=
// max(d*_k / (2D), 1/k), with S*_disp the disp-optimal set of least ILD.
TheoremReport check_theorem_31(const DistanceOracle& oracle, std::size_t k, const BruteForceOptions& budget = {});

// Tightness of the first inequality on the two-group construction, with
// k = n/2 when k is 0.
TheoremReport check_claim_32(std::size_t n, double epsilon, std::size_t k = 0);

// On the endpoint construction with k = n (when k is 0): every ILD optimum and
// the ILD greedy set have dispersion 0 while OPT_disp = 1.
TheoremReport check_claim_33(std::size_t n, std::size_t k = 0);

struct LimitPoint {
  double sigma = 0.0;
  double ratio = 0.0;
  // Small-sigma branch only: the ratio against C / (2 C(n,2)) exp(...),
  // which tends to sqrt(2) rather than 1.
  double literal_ratio = 0.0;
  // Size of the neglected higher-order term relative to the leading one.
  double epsilon_sigma = 0.0;
};

struct LimitCheckReport {
  std::vector<LimitPoint> large;  // increasing sigma
  std::vector<LimitPoint> small;  // decreasing sigma
  double ild = 0.0;
  double disp = 0.0;
  double diameter = 0.0;  // of S
  double delta = 0.0;     // gap between the smallest and the next distinct distance
  std::size_t min_pairs = 0;  // C
  std::size_t pairs = 0;
  bool degenerate = false;  // all pairs at the same distance
  bool large_monotone = true;
  double large_error = 0.0;  // |ratio - 1| at the last large sigma
  double small_error = 0.0;  // |ratio - 1| at the last small sigma
  bool converged = false;
};

struct LimitTolerances {
  double large = 1e-5;
  double small = 1e-3;
};

// Default schedules: sigma = D * 10^(t/4) for t = 0..12, and
// sigma = disp * {0.5, 0.3, 0.2, 0.1, 0.05}.
std::vector<double> default_large_schedule(double diameter);
std::vector<double> default_small_schedule(double disp);

// The small-sigma denominator is -(C / (sqrt(2) C(n,2))) exp(-disp^2 / 2 sigma^2),
// the leading term of GILD - sqrt(2). Both branches are evaluated in log
// space: sqrt(2) - kd = 2K / (sqrt(2) + sqrt(2 - 2K)) with K divided by the
// kernel value at the minimum distance before exponentiating.
LimitCheckReport check_gild_limits(const DistanceOracle& oracle, std::span<const ItemId> items,
                                   std::vector<double> large_schedule = {}, std::vector<double> small_schedule = {},
                                   const LimitTolerances& tolerances = {});

nlohmann::json to_json(const TheoremReport& report);
nlohmann::json to_json(const LimitCheckReport& report);

}  // namespace divsel

#endif  // DIVSEL_VERIFY_HPP_
