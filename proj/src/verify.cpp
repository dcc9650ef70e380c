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

#include "divsel/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "divsel/datagen.hpp"
#include "divsel/objectives.hpp"

namespace divsel {

void TheoremReport::add_margin(double margin) {
  worst_margin = std::min(worst_margin, margin);
  passed = worst_margin >= -kSlack;
}

void TheoremReport::merge(const TheoremReport& other) {
  if (instances_checked == 0) {
    *this = other;
    return;
  }
  instances_checked += other.instances_checked;
  worst_margin = std::min(worst_margin, other.worst_margin);
  passed = worst_margin >= -kSlack;
  quantities = other.quantities;
}

namespace {

double value_of(const DistanceOracle& oracle, std::span<const ItemId> items, const ObjectiveSpec& spec) {
  const auto v = evaluate(oracle, items, spec);
  return v.defined ? v.value : 0.0;
}

// Ratio a / b with 0 / 0 read as 1 (every candidate set is equally good).
double ratio(double a, double b) { return b > 0.0 ? a / b : 1.0; }

TheoremReport start(std::string name) {
  TheoremReport r;
  r.name = std::move(name);
  r.worst_margin = std::numeric_limits<double>::infinity();
  return r;
}

void margin(TheoremReport& r, double m) { r.add_margin(m); }

void finish(TheoremReport& r) {
  r.instances_checked = 1;
  if (!std::isfinite(r.worst_margin)) r.worst_margin = 0.0;
  r.passed = r.worst_margin >= -kSlack;
}

}  // namespace

TheoremReport check_greedy_half(const DistanceOracle& oracle, std::size_t k, const BruteForceOptions& budget) {
  TheoremReport r = start("greedy_half");
  for (const auto& spec : {ObjectiveSpec::ild(), ObjectiveSpec::disp()}) {
    const double opt = brute_force(oracle, spec, k, budget).optimum_value;
    const double got = value_of(oracle, greedy(oracle, spec, k).items, spec);
    const std::string tag = spec.to_string();
    r.quantities["opt_" + tag] = opt;
    r.quantities["greedy_" + tag] = got;
    margin(r, got - 0.5 * opt);
  }
  finish(r);
  return r;
}

TheoremReport check_theorem_31(const DistanceOracle& oracle, std::size_t k, const BruteForceOptions& budget) {
  TheoremReport r = start("theorem_31");
  const double opt_ild = brute_force(oracle, ObjectiveSpec::ild(), k, budget).optimum_value;
  BruteForceOptions all = budget;
  all.enumerate_all_optima = true;
  const auto disp_opt = brute_force(oracle, ObjectiveSpec::disp(), k, all);
  const double d_star = disp_opt.optimum_value;
  double worst_ild = std::numeric_limits<double>::infinity();
  for (const auto& set : disp_opt.all_optimal_sets) worst_ild = std::min(worst_ild, value_of(oracle, set, ObjectiveSpec::ild()));
  const auto pool = budget.pool.empty() ? all_items(oracle.size()) : budget.pool;
  const double big_d = diameter(oracle, pool);
  GreedyOptions g;
  g.pool = budget.pool;
  const auto gr = greedy(oracle, ObjectiveSpec::disp(), k, g);
  const double gr_ild = value_of(oracle, gr.items, ObjectiveSpec::ild());

  const double spread = big_d > 0.0 ? d_star / big_d : 1.0;
  const double first = ratio(worst_ild, opt_ild) - spread;
  const double second = ratio(gr_ild, opt_ild) - std::max(spread / 2.0, 1.0 / static_cast<double>(k));
  margin(r, first);
  margin(r, second);
  r.quantities = {{"opt_ild", opt_ild},
                  {"opt_disp", d_star},
                  {"diameter", big_d},
                  {"ild_worst_disp_optimum", worst_ild},
                  {"ild_greedy_disp", gr_ild},
                  {"margin_optimal", first},
                  {"margin_greedy", second},
                  {"disp_optima", static_cast<double>(disp_opt.all_optimal_sets.size())},
                  {"optima_truncated", disp_opt.optima_truncated ? 1.0 : 0.0}};
  finish(r);
  return r;
}

TheoremReport check_claim_32(std::size_t n, double epsilon, std::size_t k) {
  if (k == 0) k = n / 2;
  if (k < 4 || k % 2 != 0) throw std::invalid_argument("claim32 check needs an even k >= 4");
  TheoremReport r = start("claim_32");
  const auto oracle = DistanceOracle::euclidean(gen_claim32(n, epsilon), CachePolicy::kFullMatrix);
  const std::size_t half = n / 2;
  const auto cross = [&](ItemId i, ItemId j) { return (i < half) != (j < half); };

  // The construction's distance identities.
  double identity_error = 0.0;
  for (ItemId i = 0; i < n; ++i) {
    for (ItemId j = i + 1; j < n; ++j) {
      identity_error = std::max(identity_error, std::abs(oracle(i, j) - (cross(i, j) ? 1.0 : epsilon)));
    }
  }
  margin(r, -identity_error);

  const double kk = static_cast<double>(k);
  const double formula = ((kk / 2) * (kk / 2) + 2.0 * static_cast<double>(pair_count(k / 2)) * epsilon) /
                         static_cast<double>(pair_count(k));
  const double opt_ild = brute_force(oracle, ObjectiveSpec::ild(), k).optimum_value;
  std::vector<ItemId> balanced;
  for (ItemId i = 0; i < k / 2; ++i) {
    balanced.push_back(i);
    balanced.push_back(half + i);
  }
  std::sort(balanced.begin(), balanced.end());
  const double balanced_ild = value_of(oracle, balanced, ObjectiveSpec::ild());
  margin(r, -std::abs(opt_ild - formula));
  margin(r, -std::abs(balanced_ild - formula));

  BruteForceOptions all;
  all.enumerate_all_optima = true;
  const auto disp_opt = brute_force(oracle, ObjectiveSpec::disp(), k, all);
  margin(r, -std::abs(disp_opt.optimum_value - epsilon));
  double all_x_ild = std::numeric_limits<double>::quiet_NaN();
  for (const auto& set : disp_opt.all_optimal_sets) {
    if (std::all_of(set.begin(), set.end(), [&](ItemId i) { return i < half; })) {
      all_x_ild = value_of(oracle, set, ObjectiveSpec::ild());
      break;
    }
  }
  const bool found = !std::isnan(all_x_ild);
  margin(r, found ? -std::abs(all_x_ild - epsilon) : -1.0);
  const double optimal_ratio = found ? all_x_ild / opt_ild : 1.0;
  margin(r, 2.0 * epsilon - optimal_ratio);

  const auto gr = greedy(oracle, ObjectiveSpec::disp(), k);
  const double gr_ild = value_of(oracle, gr.items, ObjectiveSpec::ild());
  const double gr_formula = ((kk - 1) + static_cast<double>(pair_count(k - 1)) * epsilon) / static_cast<double>(pair_count(k));
  margin(r, -std::abs(gr_ild - gr_formula));

  r.quantities = {{"n", static_cast<double>(n)},
                  {"k", kk},
                  {"epsilon", epsilon},
                  {"opt_ild", opt_ild},
                  {"opt_ild_formula", formula},
                  {"opt_disp", disp_opt.optimum_value},
                  {"all_x_optimum_found", found ? 1.0 : 0.0},
                  {"ild_all_x", found ? all_x_ild : -1.0},
                  {"ratio_optimal", optimal_ratio},
                  {"ild_greedy_disp", gr_ild},
                  {"ild_greedy_formula", gr_formula},
                  {"ratio_greedy", gr_ild / opt_ild},
                  {"identity_error", identity_error}};
  finish(r);
  return r;
}

TheoremReport check_claim_33(std::size_t n, std::size_t k) {
  if (k == 0) k = n;
  TheoremReport r = start("claim_33");
  const auto oracle = DistanceOracle::euclidean(gen_claim33(n), CachePolicy::kFullMatrix);
  BruteForceOptions all;
  all.enumerate_all_optima = true;
  const auto ild_opt = brute_force(oracle, ObjectiveSpec::ild(), k, all);
  double worst_disp = 0.0;
  for (const auto& set : ild_opt.all_optimal_sets) worst_disp = std::max(worst_disp, value_of(oracle, set, ObjectiveSpec::disp()));
  margin(r, -worst_disp);

  // Direct argument: the balanced endpoint set reaches OPT_ILD.
  std::vector<ItemId> endpoints(n);
  for (ItemId i = 0; i < n; ++i) endpoints[i] = i;
  const double endpoint_ild = value_of(oracle, std::span<const ItemId>(endpoints).first(std::min(k, n)), ObjectiveSpec::ild());
  if (k == n) margin(r, -std::abs(endpoint_ild - ild_opt.optimum_value));

  const auto gr = greedy(oracle, ObjectiveSpec::ild(), k);
  const double gr_disp = value_of(oracle, gr.items, ObjectiveSpec::disp());
  margin(r, -gr_disp);

  const double opt_disp = brute_force(oracle, ObjectiveSpec::disp(), k).optimum_value;
  if (k == n) margin(r, -std::abs(opt_disp - 1.0));
  // {1, 2, ..., n}: one copy of 1, the interior values and one copy of n.
  std::vector<ItemId> ladder{0, n / 2};
  for (ItemId i = n; i < 2 * n - 2; ++i) ladder.push_back(i);
  std::sort(ladder.begin(), ladder.end());
  const double ladder_disp = value_of(oracle, ladder, ObjectiveSpec::disp());
  margin(r, -std::abs(ladder_disp - 1.0));

  r.quantities = {{"n", static_cast<double>(n)},
                  {"k", static_cast<double>(k)},
                  {"opt_ild", ild_opt.optimum_value},
                  {"ild_optima", static_cast<double>(ild_opt.all_optimal_sets.size())},
                  {"disp_of_ild_optimum", worst_disp},
                  {"endpoint_ild", endpoint_ild},
                  {"disp_of_greedy_ild", gr_disp},
                  {"opt_disp", opt_disp},
                  {"ladder_disp", ladder_disp}};
  finish(r);
  return r;
}

std::vector<double> default_large_schedule(double diameter) {
  std::vector<double> s;
  for (int t = 0; t <= 12; ++t) s.push_back(diameter * std::pow(10.0, t / 4.0));
  return s;
}

std::vector<double> default_small_schedule(double disp) {
  std::vector<double> s;
  for (double f : {0.5, 0.3, 0.2, 0.1, 0.05}) s.push_back(disp * f);
  return s;
}

LimitCheckReport check_gild_limits(const DistanceOracle& oracle, std::span<const ItemId> items,
                                   std::vector<double> large_schedule, std::vector<double> small_schedule,
                                   const LimitTolerances& tolerances) {
  if (items.size() < 3) throw std::invalid_argument("limit check needs at least three items");
  LimitCheckReport rep;
  auto dist = pairwise_distances(oracle, items);
  std::sort(dist.begin(), dist.end());
  rep.pairs = dist.size();
  rep.disp = dist.front();
  rep.diameter = dist.back();
  double total = 0.0;
  for (double d : dist) total += d;
  rep.ild = total / static_cast<double>(rep.pairs);
  const double tie = 1e-12 * std::max(rep.diameter, 1.0);
  rep.min_pairs = static_cast<std::size_t>(
      std::upper_bound(dist.begin(), dist.end(), rep.disp + tie) - dist.begin());
  rep.degenerate = rep.min_pairs == rep.pairs;
  rep.delta = rep.degenerate ? 0.0 : dist[rep.min_pairs] - rep.disp;
  if (!(rep.disp > 0.0)) throw std::invalid_argument("limit check needs distinct items (dispersion > 0)");

  if (large_schedule.empty()) large_schedule = default_large_schedule(rep.diameter);
  if (small_schedule.empty()) small_schedule = default_small_schedule(rep.disp);
  const double n_pairs = static_cast<double>(rep.pairs);
  const double root2 = std::sqrt(2.0);

  for (double sigma : large_schedule) {
    double sum = 0.0;
    for (double d : dist) sum += kernel_distance(d, sigma);
    LimitPoint p;
    p.sigma = sigma;
    p.ratio = (sum / n_pairs) * sigma / rep.ild;
    p.epsilon_sigma = rep.diameter * rep.diameter / (2.0 * sigma * sigma);
    rep.large.push_back(p);
  }
  for (std::size_t t = 1; t < rep.large.size(); ++t) {
    if (std::abs(rep.large[t].ratio - 1.0) > std::abs(rep.large[t - 1].ratio - 1.0) + 1e-12) rep.large_monotone = false;
  }

  const double c = static_cast<double>(rep.min_pairs);
  for (double sigma : small_schedule) {
    const double two_s2 = 2.0 * sigma * sigma;
    double sum = 0.0;  // sum of (sqrt2 - kd) / K_min
    for (double d : dist) {
      const double rel = std::exp(-(d * d - rep.disp * rep.disp) / two_s2);
      const double kernel = std::exp(-d * d / two_s2);
      sum += 2.0 * rel / (root2 + std::sqrt(2.0 - 2.0 * kernel));
    }
    LimitPoint p;
    p.sigma = sigma;
    p.ratio = sum / (c / root2);
    p.literal_ratio = p.ratio * root2;
    const double next = rep.degenerate ? 0.0 : std::exp(-((rep.disp + rep.delta) * (rep.disp + rep.delta) - rep.disp * rep.disp) / two_s2);
    p.epsilon_sigma = std::max(next, std::exp(-rep.disp * rep.disp / two_s2));
    rep.small.push_back(p);
  }
  rep.large_error = rep.large.empty() ? 0.0 : std::abs(rep.large.back().ratio - 1.0);
  rep.small_error = rep.small.empty() ? 0.0 : std::abs(rep.small.back().ratio - 1.0);
  rep.converged = rep.large_monotone && rep.large_error <= tolerances.large && rep.small_error <= tolerances.small;
  return rep;
}

nlohmann::json to_json(const TheoremReport& report) {
  nlohmann::json q = nlohmann::json::object();
  for (const auto& [key, value] : report.quantities) q[key] = value;
  return {{"name", report.name},
          {"instances_checked", report.instances_checked},
          {"worst_margin", report.worst_margin},
          {"passed", report.passed},
          {"quantities", q}};
}

nlohmann::json to_json(const LimitCheckReport& report) {
  const auto series = [](const std::vector<LimitPoint>& points, bool literal) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& p : points) {
      nlohmann::json row{{"sigma", p.sigma}, {"ratio", p.ratio}, {"epsilon_sigma", p.epsilon_sigma}};
      if (literal) row["literal_ratio"] = p.literal_ratio;
      out.push_back(row);
    }
    return out;
  };
  return {{"large_sigma", series(report.large, false)},
          {"small_sigma", series(report.small, true)},
          {"ild", report.ild},
          {"disp", report.disp},
          {"diameter", report.diameter},
          {"delta", report.delta},
          {"min_pairs", report.min_pairs},
          {"pairs", report.pairs},
          {"degenerate", report.degenerate},
          {"large_monotone", report.large_monotone},
          {"large_error", report.large_error},
          {"small_error", report.small_error},
          {"converged", report.converged}};
}

}  // namespace divsel
