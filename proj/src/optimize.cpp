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

#include "divsel/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <unordered_map>

#include "divsel/parallel.hpp"

namespace divsel {

bool Selection::degenerate() const {
  for (std::size_t s = 2; s < trace.size(); ++s) {
    if (trace[s].all_tied) return true;
  }
  return false;
}

double kth_of_sorted_pair(std::span<const double> a, std::span<const double> b, std::size_t rank) {
  if (rank >= a.size() + b.size()) throw std::out_of_range("rank exceeds merged size");
  const std::size_t take = rank + 1;
  std::size_t lo = take > b.size() ? take - b.size() : 0;
  std::size_t hi = std::min(take, a.size());
  // Smallest count from `a` whose next element is not below b's last taken one.
  while (lo < hi) {
    const std::size_t from_a = lo + (hi - lo) / 2;
    const std::size_t from_b = take - from_a;
    if (from_b > 0 && a[from_a] < b[from_b - 1]) {
      lo = from_a + 1;
    } else {
      hi = from_a;
    }
  }
  const std::size_t from_a = lo;
  const std::size_t from_b = take - from_a;
  const double x = from_a > 0 ? a[from_a - 1] : -std::numeric_limits<double>::infinity();
  const double y = from_b > 0 ? b[from_b - 1] : -std::numeric_limits<double>::infinity();
  return std::max(x, y);
}

namespace {

struct Pool {
  std::vector<ItemId> items;
  std::vector<std::size_t> priority;  // per pool position
};

Pool make_pool(const DistanceOracle& oracle, const std::vector<ItemId>& requested,
               const std::vector<std::size_t>& tie_priority) {
  Pool pool;
  pool.items = requested.empty() ? all_items(oracle.size()) : requested;
  std::vector<bool> seen(oracle.size(), false);
  for (ItemId i : pool.items) {
    if (i >= oracle.size()) throw std::out_of_range("pool item " + std::to_string(i) + " out of range");
    if (seen[i]) throw std::invalid_argument("duplicate pool item " + std::to_string(i));
    seen[i] = true;
  }
  if (!tie_priority.empty() && tie_priority.size() != oracle.size()) {
    throw std::invalid_argument("tie priority must have one entry per item");
  }
  pool.priority.reserve(pool.items.size());
  for (ItemId i : pool.items) pool.priority.push_back(tie_priority.empty() ? i : tie_priority[i]);
  return pool;
}

// log(sqrt(2) - k(d)) for the Gaussian kernel distance k, without forming
// exp(-x) on its own: sqrt(2) - sqrt(2 - 2e) = sqrt(2) e / (1 + sqrt(1 - e)).
double log_kernel_deficit(double d, double sigma) {
  const double r = d / sigma;
  const double x = 0.5 * r * r;
  return 0.5 * std::numbers::ln2 - x - std::log1p(std::sqrt(-std::expm1(-x)));
}

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

// Per-step candidate evaluation for one objective. Positions index Pool::items.
class Tracker {
 public:
  virtual ~Tracker() = default;
  // For every alive position c fills the literal marginal, the greedy score
  // and (adaptive GILD) the bandwidth.
  virtual void score(std::span<const std::size_t> alive, std::vector<double>& marginal,
                     std::vector<double>& greedy_score, std::vector<double>& sigma,
                     unsigned threads) = 0;
  virtual void add(std::size_t position, unsigned threads) = 0;
  virtual double objective() const = 0;
  virtual bool reports_sigma() const { return false; }
};

// ILD and fixed-bandwidth GILD: running pair-term sums.
class SumTracker final : public Tracker {
 public:
  SumTracker(const DistanceOracle& oracle, const Pool& pool, std::optional<double> sigma, bool log_rank)
      : oracle_(oracle),
        pool_(pool),
        sigma_(sigma),
        log_rank_(sigma && log_rank),
        gain_(pool.items.size(), 0.0),
        log_deficit_(log_rank_ ? pool.items.size() : 0, -std::numeric_limits<double>::infinity()) {}

  void score(std::span<const std::size_t> alive, std::vector<double>& marginal,
             std::vector<double>& greedy_score, std::vector<double>&, unsigned threads) override {
    const double before = count_ >= 2 ? total_ / static_cast<double>(pair_count(count_)) : 0.0;
    const double pairs_after = static_cast<double>(pair_count(count_ + 1));
    parallel_for_chunks(alive.size(), threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t a = begin; a < end; ++a) {
        const std::size_t c = alive[a];
        const double m = count_ == 0 ? 0.0 : (total_ + gain_[c]) / pairs_after - before;
        marginal[c] = m;
        greedy_score[c] = log_rank_ && count_ > 0 ? -log_deficit_[c] : m;
      }
    });
  }

  void add(std::size_t position, unsigned threads) override {
    total_ += gain_[position];
    ++count_;
    const ItemId picked = pool_.items[position];
    parallel_for_chunks(gain_.size(), threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t c = begin; c < end; ++c) {
        const double d = oracle_(pool_.items[c], picked);
        gain_[c] += term(d);
        if (log_rank_) log_deficit_[c] = log_add(log_deficit_[c], log_kernel_deficit(d, *sigma_));
      }
    });
  }

  double objective() const override {
    return count_ >= 2 ? total_ / static_cast<double>(pair_count(count_)) : 0.0;
  }

 private:
  double term(double d) const { return sigma_ ? kernel_distance(d, *sigma_) : d; }

  const DistanceOracle& oracle_;
  const Pool& pool_;
  std::optional<double> sigma_;
  bool log_rank_;
  std::vector<double> gain_;  // sum of pair terms to the selected items
  std::vector<double> log_deficit_;  // log sum of sqrt(2) - k(d) to the selected items
  double total_ = 0.0;        // sum of pair terms within the selection
  std::size_t count_ = 0;
};

// Dispersion: running minimum distance to the selection.
class DispTracker final : public Tracker {
 public:
  DispTracker(const DistanceOracle& oracle, const Pool& pool)
      : oracle_(oracle), pool_(pool), nearest_(pool.items.size(), std::numeric_limits<double>::infinity()) {}

  void score(std::span<const std::size_t> alive, std::vector<double>& marginal,
             std::vector<double>& greedy_score, std::vector<double>&, unsigned) override {
    for (std::size_t c : alive) {
      if (count_ == 0) {
        marginal[c] = 0.0;
        greedy_score[c] = 0.0;
      } else if (count_ == 1) {
        marginal[c] = nearest_[c];
        greedy_score[c] = nearest_[c];
      } else {
        marginal[c] = std::min(disp_, nearest_[c]) - disp_;
        greedy_score[c] = nearest_[c];
      }
    }
  }

  void add(std::size_t position, unsigned threads) override {
    if (count_ >= 1) disp_ = std::min(disp_, nearest_[position]);
    ++count_;
    const ItemId picked = pool_.items[position];
    parallel_for_chunks(nearest_.size(), threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t c = begin; c < end; ++c) {
        nearest_[c] = std::min(nearest_[c], oracle_(pool_.items[c], picked));
      }
    });
  }

  double objective() const override { return count_ >= 2 ? disp_ : 0.0; }

 private:
  const DistanceOracle& oracle_;
  const Pool& pool_;
  std::vector<double> nearest_;
  double disp_ = std::numeric_limits<double>::infinity();
  std::size_t count_ = 0;
};

// GILD with the bandwidth of S + i recomputed per candidate. Keeps the
// selection's pair distances sorted (plus run-length form for the kernel
// sums) so each candidate costs a merge-rank lookup and one pass over runs.
class AdaptiveGildTracker final : public Tracker {
 public:
  AdaptiveGildTracker(const DistanceOracle& oracle, const Pool& pool, Bandwidth scheme, bool rerank)
      : oracle_(oracle), pool_(pool), scheme_(scheme), rerank_(rerank) {}

  bool reports_sigma() const override { return true; }

  void score(std::span<const std::size_t> alive, std::vector<double>& marginal,
             std::vector<double>& greedy_score, std::vector<double>& sigma, unsigned threads) override {
    const std::size_t size = selected_.size();
    if (size == 0) {
      for (std::size_t c : alive) {
        marginal[c] = greedy_score[c] = 0.0;
        sigma[c] = std::numeric_limits<double>::quiet_NaN();
      }
      return;
    }
    if (size == 1) {
      const ItemId first = selected_.front();
      double farthest = 0.0;
      for (std::size_t c : alive) farthest = std::max(farthest, oracle_(pool_.items[c], first));
      for (std::size_t c : alive) {
        const double d = oracle_(pool_.items[c], first);
        greedy_score[c] = d;
        marginal[c] = rerank_ ? (farthest > 0.0 ? std::numbers::sqrt2 * d / farthest : 0.0) : 0.0;
        sigma[c] = std::numeric_limits<double>::quiet_NaN();
      }
      return;
    }
    const double denominator = bandwidth_denominator(size + 1);
    const double pairs_before = static_cast<double>(pair_count(size));
    const double pairs_after = static_cast<double>(pair_count(size + 1));
    parallel_for_chunks(alive.size(), threads, [&](std::size_t begin, std::size_t end) {
      std::vector<double> fresh(size);
      std::unordered_map<double, double> sum_memo;
      for (std::size_t a = begin; a < end; ++a) {
        const std::size_t c = alive[a];
        const ItemId item = pool_.items[c];
        for (std::size_t s = 0; s < size; ++s) fresh[s] = oracle_(item, selected_[s]);
        const double bw = statistic_with(fresh) / denominator;
        auto it = sum_memo.find(bw);
        if (it == sum_memo.end()) it = sum_memo.emplace(bw, selection_sum(bw)).first;
        const double inside = it->second;
        double extra = 0.0;
        for (double d : fresh) extra += kernel_distance(d, bw);
        const double m = (inside + extra) / pairs_after - inside / pairs_before;
        marginal[c] = m;
        greedy_score[c] = m;
        sigma[c] = bw;
      }
    });
  }

  void add(std::size_t position, unsigned) override {
    const ItemId picked = pool_.items[position];
    std::vector<double> fresh;
    fresh.reserve(selected_.size());
    for (ItemId s : selected_) fresh.push_back(oracle_(picked, s));
    std::sort(fresh.begin(), fresh.end());
    std::vector<double> merged;
    merged.reserve(sorted_.size() + fresh.size());
    std::merge(sorted_.begin(), sorted_.end(), fresh.begin(), fresh.end(), std::back_inserter(merged));
    sorted_ = std::move(merged);
    runs_.clear();
    for (double d : sorted_) {
      if (!runs_.empty() && runs_.back().first == d) {
        ++runs_.back().second;
      } else {
        runs_.emplace_back(d, 1);
      }
    }
    selected_.push_back(picked);
    if (selected_.size() >= 3) {
      const double bw = statistic_of_selection() / bandwidth_denominator(selected_.size());
      objective_ = selection_sum(bw) / static_cast<double>(pair_count(selected_.size()));
    } else {
      objective_ = 0.0;
    }
  }

  double objective() const override { return objective_; }

 private:
  // Min or median of the selection's pair distances merged with `fresh`
  // (which is sorted in place for the median).
  double statistic_with(std::vector<double>& fresh) const {
    if (scheme_ == Bandwidth::kAdjustedMin) {
      double low = *std::min_element(fresh.begin(), fresh.end());
      if (!sorted_.empty()) low = std::min(low, sorted_.front());
      return low;
    }
    std::sort(fresh.begin(), fresh.end());
    const std::size_t total = sorted_.size() + fresh.size();
    const double upper = kth_of_sorted_pair(sorted_, fresh, total / 2);
    if (total % 2 == 1) return upper;
    const double lower = kth_of_sorted_pair(sorted_, fresh, total / 2 - 1);
    return 0.5 * (lower + upper);
  }

  double statistic_of_selection() const {
    if (scheme_ == Bandwidth::kAdjustedMin) return sorted_.front();
    const std::size_t total = sorted_.size();
    const double upper = sorted_[total / 2];
    if (total % 2 == 1) return upper;
    return 0.5 * (sorted_[total / 2 - 1] + upper);
  }

  double selection_sum(double bw) const {
    double sum = 0.0;
    for (const auto& [d, count] : runs_) sum += static_cast<double>(count) * kernel_distance(d, bw);
    return sum;
  }

  const DistanceOracle& oracle_;
  const Pool& pool_;
  Bandwidth scheme_;
  bool rerank_;
  std::vector<ItemId> selected_;
  std::vector<double> sorted_;
  std::vector<std::pair<double, std::size_t>> runs_;
  double objective_ = 0.0;
};

std::unique_ptr<Tracker> make_tracker(const DistanceOracle& oracle, const Pool& pool,
                                      const ObjectiveSpec& spec, bool rerank, bool direct_kernel) {
  switch (spec.kind) {
    case ObjectiveKind::kIld:
      return std::make_unique<SumTracker>(oracle, pool, std::nullopt, false);
    case ObjectiveKind::kDisp:
      return std::make_unique<DispTracker>(oracle, pool);
    case ObjectiveKind::kGild:
      break;
  }
  if (spec.bandwidth == Bandwidth::kFixed) {
    return std::make_unique<SumTracker>(oracle, pool, spec.sigma, !rerank && !direct_kernel);
  }
  return std::make_unique<AdaptiveGildTracker>(oracle, pool, spec.bandwidth, rerank);
}

struct Engine {
  const DistanceOracle& oracle;
  const ObjectiveSpec& spec;
  const GreedyOptions& options;
  const RerankConfig* rerank;  // null for plain greedy

  Selection run(std::size_t k) const {
    const Pool pool = make_pool(oracle, options.pool, options.tie_priority);
    const std::size_t size = pool.items.size();
    auto tracker = make_tracker(oracle, pool, spec, rerank != nullptr, options.direct_kernel);

    Selection out;
    out.objective = spec;
    std::vector<std::size_t> alive(size);
    for (std::size_t c = 0; c < size; ++c) alive[c] = c;
    std::vector<double> marginal(size), greedy_score(size), sigma(size), final_score(size);

    auto commit = [&](std::size_t position, double score, bool tied) {
      TraceStep step;
      step.item = pool.items[position];
      step.score = score;
      step.marginal = marginal[position];
      if (tracker->reports_sigma() && std::isfinite(sigma[position])) step.sigma = sigma[position];
      if (rerank) step.relevance = rerank->relevance[step.item];
      step.all_tied = tied;
      tracker->add(position, options.threads);
      step.objective = tracker->objective();
      out.items.push_back(step.item);
      out.trace.push_back(step);
      alive.erase(std::find(alive.begin(), alive.end(), position));
    };

    if (!rerank && spec.adaptive() && options.exact_farthest_pair) {
      const auto [a, b] = farthest_pair(pool);
      marginal[a] = 0.0;
      sigma[a] = std::numeric_limits<double>::quiet_NaN();
      commit(a, 0.0, false);
      tracker->score(alive, marginal, greedy_score, sigma, options.threads);
      commit(b, oracle(pool.items[a], pool.items[b]), false);
    }

    while (out.items.size() < k) {
      tracker->score(alive, marginal, greedy_score, sigma, options.threads);
      for (std::size_t c : alive) {
        final_score[c] = rerank ? (1.0 - rerank->lambda) * rerank->relevance[pool.items[c]] +
                                      rerank->lambda * marginal[c]
                                : greedy_score[c];
      }
      std::size_t best = alive.front();
      for (std::size_t c : alive) {
        if (final_score[c] > final_score[best] ||
            (final_score[c] == final_score[best] && pool.priority[c] < pool.priority[best])) {
          best = c;
        }
      }
      bool tied = alive.size() >= 2;
      for (std::size_t c : alive) {
        if (final_score[c] != final_score[best]) {
          tied = false;
          break;
        }
      }
      commit(best, final_score[best], tied);
    }
    return out;
  }

  std::pair<std::size_t, std::size_t> farthest_pair(const Pool& pool) const {
    std::vector<std::size_t> order(pool.items.size());
    for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return pool.priority[x] < pool.priority[y]; });
    std::pair<std::size_t, std::size_t> best{order[0], order[1]};
    double best_d = -1.0;
    for (std::size_t x = 0; x < order.size(); ++x) {
      for (std::size_t y = x + 1; y < order.size(); ++y) {
        const double d = oracle(pool.items[order[x]], pool.items[order[y]]);
        if (d > best_d) {
          best_d = d;
          best = {order[x], order[y]};
        }
      }
    }
    return best;
  }
};

void check_greedy_k(std::size_t k, std::size_t pool_size) {
  if (k < 2 || k > pool_size) {
    throw std::invalid_argument("k = " + std::to_string(k) + " out of range [2, " +
                                std::to_string(pool_size) + "]");
  }
}

std::size_t pool_size(const DistanceOracle& oracle, const GreedyOptions& options) {
  return options.pool.empty() ? oracle.size() : options.pool.size();
}

}  // namespace

Selection greedy(const DistanceOracle& oracle, const ObjectiveSpec& objective, std::size_t k,
                 const GreedyOptions& options) {
  check_greedy_k(k, pool_size(oracle, options));
  if (objective.adaptive()) return greedy_gild_adaptive(oracle, objective.bandwidth, k, options);
  return Engine{oracle, objective, options, nullptr}.run(k);
}

Selection greedy_gild_adaptive(const DistanceOracle& oracle, Bandwidth scheme, std::size_t k,
                               const GreedyOptions& options) {
  check_greedy_k(k, pool_size(oracle, options));
  const ObjectiveSpec spec = ObjectiveSpec::gild_adjusted(scheme);
  return Engine{oracle, spec, options, nullptr}.run(k);
}

Selection greedy_rerank(const DistanceOracle& oracle, const RerankConfig& config, const GreedyOptions& options) {
  if (!(config.lambda >= 0.0 && config.lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  if (config.relevance.size() != oracle.size()) {
    throw std::invalid_argument("relevance must have one score per item");
  }
  const std::size_t size = pool_size(oracle, options);
  if (config.k < 1 || config.k > size) {
    throw std::invalid_argument("k = " + std::to_string(config.k) + " out of range [1, " +
                                std::to_string(size) + "]");
  }
  const auto& pool = options.pool.empty() ? all_items(oracle.size()) : options.pool;
  for (ItemId i : pool) {
    if (i < config.relevance.size() && !std::isfinite(config.relevance[i])) {
      throw std::invalid_argument("non-finite relevance for pool item " + std::to_string(i));
    }
  }
  return Engine{oracle, config.objective, options, &config}.run(config.k);
}

BruteForceResult brute_force(const DistanceOracle& oracle, const ObjectiveSpec& objective, std::size_t k,
                             const BruteForceOptions& options) {
  const std::vector<ItemId> pool = options.pool.empty() ? all_items(oracle.size()) : options.pool;
  const std::size_t n = pool.size();
  if (k < 1 || k > n) throw std::invalid_argument("k out of range for brute force");
  const std::uint64_t subsets = binomial(n, k);
  if (subsets > options.budget) {
    throw BudgetExceeded("C(" + std::to_string(n) + ", " + std::to_string(k) + ") = " + std::to_string(subsets) +
                         " subsets exceeds budget " + std::to_string(options.budget));
  }

  BruteForceResult result;
  result.optimum_value = -std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, std::vector<ItemId>>> optima;
  std::vector<std::size_t> index(k);
  for (std::size_t i = 0; i < k; ++i) index[i] = i;
  std::vector<ItemId> subset(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) subset[i] = pool[index[i]];
    const auto value = evaluate(oracle, subset, objective);
    const double v = value.defined ? value.value : 0.0;
    ++result.subsets_evaluated;
    if (v > result.optimum_value) {
      result.optimum_value = v;
      result.one_optimal_set = subset;
      if (options.enumerate_all_optima) {
        std::erase_if(optima, [&](const auto& entry) {
          return entry.first < result.optimum_value - kCoOptimalTolerance;
        });
      }
    }
    if (options.enumerate_all_optima && v >= result.optimum_value - kCoOptimalTolerance) {
      if (optima.size() < options.max_optima) {
        optima.emplace_back(v, subset);
      } else {
        result.optima_truncated = true;
      }
    }
    // Advance to the next combination in lexicographic order.
    std::size_t pos = k;
    while (pos > 0 && index[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) break;
    ++index[pos - 1];
    for (std::size_t i = pos; i < k; ++i) index[i] = index[i - 1] + 1;
  }
  if (options.enumerate_all_optima) {
    for (auto& [v, set] : optima) {
      if (v >= result.optimum_value - kCoOptimalTolerance) result.all_optimal_sets.push_back(std::move(set));
    }
  }
  return result;
}

}  // namespace divsel
