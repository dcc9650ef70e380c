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

#include "divsel/relevance.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "divsel/metrics.hpp"
#include "divsel/parallel.hpp"

namespace divsel {

namespace {

constexpr char kMagic[8] = {'D', 'I', 'V', 'E', 'A', 'S', 'E', '1'};

Eigen::MatrixXd gram(const FeedbackMatrix& train) {
  const auto n = static_cast<Eigen::Index>(train.items());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (const auto& history : train.by_user()) {
    for (ItemId a : history) {
      for (ItemId b : history) g(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += 1.0;
    }
  }
  return g;
}

void check_budget(std::size_t n, std::size_t budget) {
  // Gram matrix, its factorization, the inverse and the output.
  const long double need = 4.0L * static_cast<long double>(n) * static_cast<long double>(n) * sizeof(double);
  if (need > static_cast<long double>(budget)) {
    throw BudgetExceeded("EASE fit for " + std::to_string(n) + " items needs about " +
                         std::to_string(static_cast<unsigned long long>(need / (1 << 20))) + " MiB, over the budget");
  }
}

EaseModel solve(const Eigen::MatrixXd& g, double l2) {
  if (!(l2 > 0.0) || !std::isfinite(l2)) throw std::invalid_argument("l2 must be a positive real");
  const Eigen::Index n = g.rows();
  Eigen::MatrixXd a = g;
  a.diagonal().array() += l2;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) throw DataError("EASE system is not positive definite");
  const Eigen::MatrixXd p = llt.solve(Eigen::MatrixXd::Identity(n, n));
  std::vector<double> b(static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      b[static_cast<std::size_t>(i * n + j)] = i == j ? 0.0 : -p(i, j) / p(j, j);
    }
  }
  return EaseModel(static_cast<std::size_t>(n), l2, std::move(b));
}

}  // namespace

EaseModel::EaseModel(std::size_t n, double l2, std::vector<double> weights)
    : n_(n), l2_(l2), b_(std::move(weights)) {
  if (b_.size() != n_ * n_) throw DataError("EASE weights do not form an n x n matrix");
}

EaseModel fit_ease(const FeedbackMatrix& train, double l2, std::size_t memory_budget) {
  if (!(l2 > 0.0)) throw std::invalid_argument("l2 must be a positive real");
  check_budget(train.items(), memory_budget);
  return solve(gram(train), l2);
}

std::vector<double> score_history(const EaseModel& model, std::span<const ItemId> history) {
  std::vector<double> scores(model.items(), 0.0);
  for (ItemId h : history) {
    if (h >= model.items()) throw std::out_of_range("history item outside the model");
    const auto row = model.row(h);
    for (std::size_t j = 0; j < scores.size(); ++j) scores[j] += row[j];
  }
  return scores;
}

std::vector<double> score_user(const EaseModel& model, const FeedbackMatrix& feedback, std::size_t user) {
  if (user >= feedback.users()) throw std::out_of_range("unknown user " + std::to_string(user));
  std::vector<ItemId> history;
  const auto& entries = feedback.entries();
  auto it = std::lower_bound(entries.begin(), entries.end(), FeedbackMatrix::Entry{static_cast<std::uint32_t>(user), 0});
  for (; it != entries.end() && it->first == user; ++it) history.push_back(it->second);
  return score_history(model, history);
}

void mask_items(std::vector<double>& scores, std::span<const ItemId> history) {
  for (ItemId h : history) scores.at(h) = -std::numeric_limits<double>::infinity();
}

std::vector<ItemId> top_k(const std::vector<double>& scores, std::size_t k) {
  std::vector<ItemId> order;
  for (ItemId i = 0; i < scores.size(); ++i) {
    if (std::isfinite(scores[i])) order.push_back(i);
  }
  const auto better = [&](ItemId a, ItemId b) { return scores[a] > scores[b] || (scores[a] == scores[b] && a < b); };
  const std::size_t keep = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(), better);
  order.resize(keep);
  return order;
}

TuneResult tune_l2(const FeedbackMatrix& train, const FeedbackMatrix& validation, std::vector<double> grid,
                   std::size_t k, unsigned threads) {
  if (grid.empty()) throw std::invalid_argument("empty l2 grid");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  check_budget(train.items(), kDefaultMemoryBudget);
  const Eigen::MatrixXd g = gram(train);
  const auto train_lists = train.by_user();
  const auto valid_lists = validation.by_user();
  std::vector<std::size_t> users;
  for (std::size_t u = 0; u < valid_lists.size(); ++u) {
    if (!valid_lists[u].empty()) users.push_back(u);
  }
  TuneResult result;
  double best = -1.0;
  for (double l2 : grid) {
    const EaseModel model = solve(g, l2);
    std::vector<double> per_user(users.size(), 0.0);
    parallel_for(users.size(), threads, [&](std::size_t t) {
      const std::size_t u = users[t];
      const std::vector<ItemId> empty;
      const auto& history = u < train_lists.size() ? train_lists[u] : empty;
      auto scores = score_history(model, history);
      mask_items(scores, history);
      per_user[t] = ndcg(top_k(scores, k), valid_lists[u], k).value_or(0.0);
    });
    double mean = 0.0;
    for (double v : per_user) mean += v;
    mean = users.empty() ? 0.0 : mean / static_cast<double>(users.size());
    result.curve.emplace_back(l2, mean);
    if (mean > best) {
      best = mean;
      result.best_l2 = l2;
    }
  }
  return result;
}

void save_model(const std::filesystem::path& path, const EaseModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  const std::uint64_t n = model.items();
  const double l2 = model.l2();
  out.write(kMagic, sizeof(kMagic));
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(&l2), sizeof(l2));
  out.write(reinterpret_cast<const char*>(model.weights().data()),
            static_cast<std::streamsize>(model.weights().size() * sizeof(double)));
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

EaseModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  char magic[sizeof(kMagic)];
  std::uint64_t n = 0;
  double l2 = 0.0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  in.read(reinterpret_cast<char*>(&l2), sizeof(l2));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw DataError("'" + path.string() + "' is not a model file");
  if (n > (std::uint64_t{1} << 20)) throw DataError("model item count is implausible");
  std::vector<double> b(n * n);
  in.read(reinterpret_cast<char*>(b.data()), static_cast<std::streamsize>(b.size() * sizeof(double)));
  if (!in) throw DataError("'" + path.string() + "' is truncated");
  return EaseModel(n, l2, std::move(b));
}

void export_model_csv(const std::filesystem::path& path, const EaseModel& model) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << "row,col,weight\n";
  char buf[32];
  for (ItemId i = 0; i < model.items(); ++i) {
    for (ItemId j = 0; j < model.items(); ++j) {
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), model.weight(i, j));
      out << i << ',' << j << ',' << std::string_view(buf, static_cast<std::size_t>(ptr - buf)) << '\n';
    }
  }
}

}  // namespace divsel
