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

#include "divsel/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "divsel/metrics.hpp"
#include "divsel/parallel.hpp"
#include "divsel/rng.hpp"

namespace divsel {

namespace {

double value_of(const DistanceOracle& oracle, std::span<const ItemId> items, const ObjectiveSpec& spec) {
  const auto v = evaluate(oracle, items, spec);
  return v.defined ? v.value : 0.0;
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

struct MeanAccumulator {
  double sum = 0.0;
  std::size_t count = 0;
  void add(double v) {
    sum += v;
    ++count;
  }
  std::optional<double> mean() const {
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
  }
};

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string format_optional(const std::optional<double>& value) { return value ? format_number(*value) : ""; }

std::size_t RelativeScoreReport::index_of(const ObjectiveSpec& spec) const {
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    if (objectives[i] == spec) return i;
  }
  throw std::out_of_range("objective " + spec.to_string() + " not in report");
}

RelativeScoreReport relative_scores(const DistanceOracle& oracle, const std::vector<ObjectiveSpec>& objectives,
                                    const RelativeScoreOptions& options) {
  const std::size_t n = oracle.size();
  if (options.k_max < 2 || options.k_max > n) {
    throw std::invalid_argument("k_max = " + std::to_string(options.k_max) + " out of range [2, " +
                                std::to_string(n) + "]");
  }
  if (objectives.empty()) throw std::invalid_argument("no objectives to compare");
  const std::size_t cols = objectives.size(), ks = options.k_max - 1;
  RelativeScoreReport rep;
  rep.objectives = objectives;
  rep.k_max = options.k_max;
  rep.random_seeds = options.random_seeds;

  GreedyOptions g;
  g.threads = options.threads;
  std::vector<Selection> runs;
  for (const auto& spec : objectives) runs.push_back(greedy(oracle, spec, options.k_max, g));

  // measured[row][col][k - 2] = div_col(prefix_k(run_row)).
  std::vector<std::vector<std::vector<std::optional<double>>>> measured(
      cols, std::vector<std::vector<std::optional<double>>>(cols, std::vector<std::optional<double>>(ks)));
  parallel_for(cols * ks, options.threads, [&](std::size_t job) {
    const std::size_t row = job / ks, t = job % ks;
    const auto items = runs[row].prefix(t + 2);
    for (std::size_t col = 0; col < cols; ++col) {
      const auto v = evaluate(oracle, items, objectives[col]);
      if (v.defined) measured[row][col][t] = v.value;
    }
  });

  const auto divide = [&](std::optional<double> num, std::size_t col, std::size_t t) -> std::optional<double> {
    const auto& den = measured[col][col][t];
    if (!num || !den || !(*den > 0.0)) return std::nullopt;
    return *num / *den;
  };

  rep.score.assign(cols + 1, std::vector<std::vector<std::optional<double>>>(cols, std::vector<std::optional<double>>(ks)));
  for (std::size_t row = 0; row < cols; ++row) {
    for (std::size_t col = 0; col < cols; ++col) {
      for (std::size_t t = 0; t < ks; ++t) rep.score[row][col][t] = divide(measured[row][col][t], col, t);
    }
  }

  rep.random_variance.assign(cols, std::vector<std::optional<double>>(ks));
  if (options.random_seeds > 0) {
    parallel_for(ks, options.threads, [&](std::size_t t) {
      const std::size_t k = t + 2;
      std::vector<std::vector<double>> samples(cols);
      for (std::size_t s = 0; s < options.random_seeds; ++s) {
        Rng rng(derive_seed(options.seed, "random/" + std::to_string(k) + "/" + std::to_string(s)));
        auto items = all_items(n);
        shuffle(items, rng);
        items.resize(k);
        std::sort(items.begin(), items.end());
        for (std::size_t col = 0; col < cols; ++col) {
          const auto v = evaluate(oracle, items, objectives[col]);
          const auto r = divide(v.defined ? std::optional<double>(v.value) : std::nullopt, col, t);
          if (r) samples[col].push_back(*r);
        }
      }
      for (std::size_t col = 0; col < cols; ++col) {
        const auto& xs = samples[col];
        if (xs.empty()) continue;
        const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        rep.score[cols][col][t] = mean;
        rep.random_variance[col][t] = var / static_cast<double>(xs.size());
      }
    });
  }

  rep.average.assign(cols + 1, std::vector<std::optional<double>>(cols));
  rep.above_one.assign(cols + 1, std::vector<std::size_t>(cols, 0));
  for (std::size_t row = 0; row <= cols; ++row) {
    for (std::size_t col = 0; col < cols; ++col) {
      MeanAccumulator acc;
      for (const auto& v : rep.score[row][col]) {
        if (!v) continue;
        acc.add(*v);
        if (*v > 1.0 + 1e-12) ++rep.above_one[row][col];
      }
      rep.average[row][col] = acc.mean();
    }
  }
  return rep;
}

nlohmann::json to_json(const RelativeScoreReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  const std::size_t cols = report.objectives.size();
  for (std::size_t row = 0; row <= cols; ++row) {
    nlohmann::json entry;
    entry["optimized"] = row < cols ? report.objectives[row].to_string() : std::string("random");
    nlohmann::json measures = nlohmann::json::array();
    for (std::size_t col = 0; col < cols; ++col) {
      nlohmann::json per_k = nlohmann::json::array();
      for (const auto& v : report.score[row][col]) per_k.push_back(optional_json(v));
      nlohmann::json cell{{"measured", report.objectives[col].to_string()},
                          {"average", optional_json(report.average[row][col])},
                          {"above_one", report.above_one[row][col]},
                          {"per_k", per_k}};
      if (row == cols) {
        nlohmann::json var = nlohmann::json::array();
        for (const auto& v : report.random_variance[col]) var.push_back(optional_json(v));
        cell["variance_per_k"] = var;
      }
      measures.push_back(cell);
    }
    entry["scores"] = measures;
    rows.push_back(entry);
  }
  return {{"experiment", "relative_scores"},
          {"k_min", 2},
          {"k_max", report.k_max},
          {"random_seeds", report.random_seeds},
          {"rows", rows}};
}

Table to_table(const RelativeScoreReport& report) {
  Table t{{"optimized", "measured", "k", "score", "variance"}, {}};
  const std::size_t cols = report.objectives.size();
  for (std::size_t row = 0; row <= cols; ++row) {
    const std::string name = row < cols ? report.objectives[row].to_string() : "random";
    for (std::size_t col = 0; col < cols; ++col) {
      for (std::size_t k = 0; k < report.score[row][col].size(); ++k) {
        t.rows.push_back({name, report.objectives[col].to_string(), std::to_string(k + 2),
                          format_optional(report.score[row][col][k]),
                          row == cols ? format_optional(report.random_variance[col][k]) : ""});
      }
    }
  }
  return t;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw std::invalid_argument("log grid needs 0 < lo < hi and count >= 2");
  std::vector<double> grid(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

SigmaSweepReport sigma_sweep(const DistanceOracle& oracle, const SweepOptions& options) {
  if (options.grid.empty()) throw std::invalid_argument("empty sigma grid");
  for (std::size_t i = 0; i < options.grid.size(); ++i) {
    if (!(options.grid[i] > 0.0)) throw std::invalid_argument("sigma grid must be positive");
    if (i > 0 && !(options.grid[i] > options.grid[i - 1])) throw std::invalid_argument("sigma grid must increase");
  }
  SigmaSweepReport rep;
  rep.k = options.k;
  rep.direct_kernel = options.direct_kernel;
  const auto ild_sel = greedy(oracle, ObjectiveSpec::ild(), options.k);
  const auto disp_sel = greedy(oracle, ObjectiveSpec::disp(), options.k);
  rep.ild_of_ild_greedy = value_of(oracle, ild_sel.items, ObjectiveSpec::ild());
  rep.disp_of_ild_greedy = value_of(oracle, ild_sel.items, ObjectiveSpec::disp());
  rep.ild_of_disp_greedy = value_of(oracle, disp_sel.items, ObjectiveSpec::ild());
  rep.disp_of_disp_greedy = value_of(oracle, disp_sel.items, ObjectiveSpec::disp());

  rep.cells.resize(options.grid.size());
  parallel_for(options.grid.size(), options.threads, [&](std::size_t c) {
    const double sigma = options.grid[c];
    GreedyOptions g;
    g.direct_kernel = options.direct_kernel;
    const auto sel = greedy(oracle, ObjectiveSpec::gild_fixed(sigma), options.k, g);
    rep.cells[c] = {sigma, value_of(oracle, sel.items, ObjectiveSpec::ild()),
                    value_of(oracle, sel.items, ObjectiveSpec::disp()), sel.degenerate()};
  });

  if (options.k >= 3) {
    const double denom = bandwidth_denominator(options.k);
    const auto by_min = greedy_gild_adaptive(oracle, Bandwidth::kAdjustedMin, options.k);
    const auto by_med = greedy_gild_adaptive(oracle, Bandwidth::kAdjustedMed, options.k);
    rep.marker_raw_min = value_of(oracle, by_min.items, ObjectiveSpec::disp());
    rep.marker_raw_median = median(pairwise_distances(oracle, by_med.items));
    rep.marker_adjusted_min = rep.marker_raw_min / denom;
    rep.marker_adjusted_med = rep.marker_raw_median / denom;
  }
  return rep;
}

nlohmann::json to_json(const SigmaSweepReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  std::size_t degenerate = 0;
  for (const auto& c : report.cells) {
    cells.push_back({{"sigma", c.sigma}, {"ild", c.ild}, {"disp", c.disp}, {"degenerate", c.degenerate}});
    degenerate += c.degenerate ? 1 : 0;
  }
  return {{"experiment", "sigma_sweep"},
          {"k", report.k},
          {"direct_kernel", report.direct_kernel},
          {"cells", cells},
          {"degenerate_cells", degenerate},
          {"reference",
           {{"ild_greedy", {{"ild", report.ild_of_ild_greedy}, {"disp", report.disp_of_ild_greedy}}},
            {"disp_greedy", {{"ild", report.ild_of_disp_greedy}, {"disp", report.disp_of_disp_greedy}}}}},
          {"markers",
           {{"adjusted_min", report.marker_adjusted_min},
            {"adjusted_med", report.marker_adjusted_med},
            {"raw_min", report.marker_raw_min},
            {"raw_median", report.marker_raw_median}}}};
}

Table to_table(const SigmaSweepReport& report) {
  Table t{{"sigma", "ild", "disp", "degenerate"}, {}};
  for (const auto& c : report.cells) {
    t.rows.push_back({format_number(c.sigma), format_number(c.ild), format_number(c.disp), c.degenerate ? "1" : "0"});
  }
  return t;
}

std::size_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

double Histogram::fraction_below(double threshold) const {
  if (distances.empty()) return 0.0;
  const auto it = std::lower_bound(distances.begin(), distances.end(), threshold);
  return static_cast<double>(it - distances.begin()) / static_cast<double>(distances.size());
}

double Histogram::fraction_above(double threshold) const {
  if (distances.empty()) return 0.0;
  const auto it = std::upper_bound(distances.begin(), distances.end(), threshold);
  return static_cast<double>(distances.end() - it) / static_cast<double>(distances.size());
}

Histogram pairwise_histogram(const DistanceOracle& oracle, std::span<const ItemId> items, std::size_t bins,
                             std::optional<double> upper) {
  if (items.size() < 2) throw std::invalid_argument("histogram needs at least two items");
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  Histogram h;
  h.upper = upper ? *upper : diameter(oracle);
  h.counts.assign(bins, 0);
  h.distances = pairwise_distances(oracle, items);
  std::sort(h.distances.begin(), h.distances.end());
  for (double d : h.distances) {
    std::size_t b = h.upper > 0.0 ? static_cast<std::size_t>(d / h.upper * static_cast<double>(bins)) : 0;
    h.counts[std::min(b, bins - 1)] += 1;
  }
  return h;
}

nlohmann::json to_json(const Histogram& histogram) {
  return {{"experiment", "histogram"},
          {"lower", 0.0},
          {"upper", histogram.upper},
          {"bins", histogram.counts.size()},
          {"counts", histogram.counts},
          {"pairs", histogram.total()}};
}

Table to_table(const Histogram& histogram) {
  Table t{{"bin", "lower", "upper", "count"}, {}};
  const double width = histogram.upper / static_cast<double>(histogram.counts.size());
  for (std::size_t b = 0; b < histogram.counts.size(); ++b) {
    t.rows.push_back({std::to_string(b), format_number(width * static_cast<double>(b)),
                      format_number(width * static_cast<double>(b + 1)), std::to_string(histogram.counts[b])});
  }
  return t;
}

std::size_t relevance_fallback_steps(const DistanceOracle& oracle, const Selection& selection,
                                     const std::vector<double>& relevance, std::span<const ItemId> pool) {
  std::vector<char> taken(oracle.size(), 0);
  std::size_t steps = 0;
  for (std::size_t t = 0; t < selection.items.size(); ++t) {
    if (t >= 2 && selection.trace[t - 1].objective == 0.0) {
      ItemId best = selection.items[t];
      bool first = true;
      for (ItemId i : pool) {
        if (taken[i]) continue;
        if (first || relevance[i] > relevance[best] || (relevance[i] == relevance[best] && i < best)) best = i;
        first = false;
      }
      if (best == selection.items[t]) ++steps;
    }
    taken[selection.items[t]] = 1;
  }
  return steps;
}

EvalReport eval_rerank(const DistanceOracle& oracle, const EaseModel& model, const FeedbackMatrix& train,
                       const FeedbackMatrix& validation, const FeedbackMatrix& test, const EvalConfig& config) {
  const std::size_t n = oracle.size();
  if (model.items() != n || train.items() != n || validation.items() != n || test.items() != n) {
    throw DataError("model, feedback splits and distance catalog disagree on the item count");
  }
  if (config.k < 2) throw std::invalid_argument("evaluation needs k >= 2");
  if (config.objectives.empty() || config.lambdas.empty()) throw std::invalid_argument("empty evaluation grid");
  std::size_t users = std::max({train.users(), validation.users(), test.users()});
  if (config.max_users > 0) users = std::min(users, config.max_users);
  const auto pad = [&](std::vector<std::vector<ItemId>> lists) {
    lists.resize(std::max(lists.size(), users));
    return lists;
  };
  const auto train_lists = pad(train.by_user());
  const auto valid_lists = pad(validation.by_user());
  const auto test_lists = pad(test.by_user());
  const std::size_t objectives = config.objectives.size(), lambdas = config.lambdas.size();
  const std::size_t cells = objectives * lambdas;

  std::vector<std::vector<UserResult>> slots(users);
  std::vector<char> skipped(users, 0);
  parallel_for(users, config.threads, [&](std::size_t u) {
    std::vector<char> seen(n, 0);
    for (ItemId i : train_lists[u]) seen[i] = 1;
    for (ItemId i : valid_lists[u]) seen[i] = 1;
    std::vector<ItemId> pool;
    for (ItemId i = 0; i < n; ++i) {
      if (!seen[i]) pool.push_back(i);
    }
    if (pool.size() < 2) {
      skipped[u] = 1;
      return;
    }
    const std::size_t k = std::min(config.k, pool.size());
    GreedyOptions g;
    g.pool = pool;
    const auto ild_norm = value_of(oracle, greedy(oracle, ObjectiveSpec::ild(), k, g).items, ObjectiveSpec::ild());
    const auto disp_norm = value_of(oracle, greedy(oracle, ObjectiveSpec::disp(), k, g).items, ObjectiveSpec::disp());
    auto relevance = score_history(model, train_lists[u]);
    mask_items(relevance, train_lists[u]);
    mask_items(relevance, valid_lists[u]);
    slots[u].reserve(cells);
    for (std::size_t o = 0; o < objectives; ++o) {
      for (std::size_t l = 0; l < lambdas; ++l) {
        RerankConfig rc{relevance, config.lambdas[l], config.objectives[o], k};
        const auto sel = greedy_rerank(oracle, rc, g);
        UserResult r;
        r.user = u;
        r.objective = o;
        r.lambda = l;
        r.ndcg = ndcg(sel.items, test_lists[u], config.k);
        if (ild_norm > config.zero_tolerance) r.nild = value_of(oracle, sel.items, ObjectiveSpec::ild()) / ild_norm;
        if (disp_norm > config.zero_tolerance) {
          r.ndisp = value_of(oracle, sel.items, ObjectiveSpec::disp()) / disp_norm;
        }
        if (config.objectives[o].kind == ObjectiveKind::kDisp) {
          r.fallback_steps = relevance_fallback_steps(oracle, sel, relevance, pool);
        }
        slots[u].push_back(r);
      }
    }
  });

  EvalReport rep;
  rep.k = config.k;
  std::vector<MeanAccumulator> ndcg_acc(cells), nild_acc(cells), ndisp_acc(cells);
  rep.cells.resize(cells);
  for (std::size_t o = 0; o < objectives; ++o) {
    for (std::size_t l = 0; l < lambdas; ++l) {
      rep.cells[o * lambdas + l].objective = config.objectives[o];
      rep.cells[o * lambdas + l].lambda = config.lambdas[l];
    }
  }
  for (std::size_t u = 0; u < users; ++u) {
    if (skipped[u]) {
      ++rep.users_skipped;
      continue;
    }
    ++rep.users_evaluated;
    for (const auto& r : slots[u]) {
      const std::size_t c = r.objective * lambdas + r.lambda;
      auto& cell = rep.cells[c];
      ++cell.users;
      if (r.ndcg) {
        ndcg_acc[c].add(*r.ndcg);
      } else {
        ++cell.ndcg_undefined;
      }
      if (r.nild) {
        nild_acc[c].add(*r.nild);
      } else {
        ++cell.nild_undefined;
      }
      if (r.ndisp) {
        ndisp_acc[c].add(*r.ndisp);
      } else {
        ++cell.ndisp_undefined;
      }
      if (r.fallback_steps > 0) ++cell.fallback_users;
      rep.per_user.push_back(r);
    }
  }
  for (std::size_t c = 0; c < cells; ++c) {
    rep.cells[c].mean_ndcg = ndcg_acc[c].mean();
    rep.cells[c].mean_nild = nild_acc[c].mean();
    rep.cells[c].mean_ndisp = ndisp_acc[c].mean();
  }
  return rep;
}

nlohmann::json to_json(const EvalReport& report, const EvalConfig& config) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"objective", c.objective.to_string()},
                     {"lambda", c.lambda},
                     {"mean_ndcg", optional_json(c.mean_ndcg)},
                     {"mean_nild", optional_json(c.mean_nild)},
                     {"mean_ndisp", optional_json(c.mean_ndisp)},
                     {"users", c.users},
                     {"ndcg_undefined", c.ndcg_undefined},
                     {"nild_undefined", c.nild_undefined},
                     {"ndisp_undefined", c.ndisp_undefined},
                     {"fallback_users", c.fallback_users}});
  }
  nlohmann::json objs = nlohmann::json::array();
  for (const auto& o : config.objectives) objs.push_back(o.to_string());
  return {{"experiment", "eval"},
          {"k", report.k},
          {"objectives", objs},
          {"lambdas", config.lambdas},
          {"users_evaluated", report.users_evaluated},
          {"users_skipped", report.users_skipped},
          {"cells", cells}};
}

Table to_table(const EvalReport& report) {
  Table t{{"objective", "lambda", "mean_ndcg", "mean_nild", "mean_ndisp", "users", "ndcg_undefined", "nild_undefined",
           "ndisp_undefined", "fallback_users"},
          {}};
  for (const auto& c : report.cells) {
    t.rows.push_back({c.objective.to_string(), format_number(c.lambda), format_optional(c.mean_ndcg),
                      format_optional(c.mean_nild), format_optional(c.mean_ndisp), std::to_string(c.users),
                      std::to_string(c.ndcg_undefined), std::to_string(c.nild_undefined),
                      std::to_string(c.ndisp_undefined), std::to_string(c.fallback_users)});
  }
  return t;
}

Table per_user_table(const EvalReport& report, const EvalConfig& config) {
  Table t{{"user", "objective", "lambda", "ndcg", "nild", "ndisp", "fallback_steps"}, {}};
  for (const auto& r : report.per_user) {
    t.rows.push_back({std::to_string(r.user), config.objectives[r.objective].to_string(),
                      format_number(config.lambdas[r.lambda]), format_optional(r.ndcg), format_optional(r.nild),
                      format_optional(r.ndisp), std::to_string(r.fallback_steps)});
  }
  return t;
}

std::string report_stem(const std::string& experiment, const std::string& dataset, std::uint64_t seed) {
  return experiment + "_" + dataset + "_" + std::to_string(seed);
}

void write_csv(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  const auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const std::string& f = fields[i];
      out << (i ? "," : "");
      if (f.find_first_of(",\"\n") == std::string::npos) {
        out << f;
        continue;
      }
      out << '"';
      for (char c : f) out << (c == '"' ? "\"\"" : std::string(1, c));
      out << '"';
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << value.dump(2) << '\n';
}

}  // namespace divsel
