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

// Slow reference implementations that share no code with the library. They
// work on plain coordinate rows and dense distance matrices.

#ifndef DIVSEL_TESTS_ORACLES_HPP_
#define DIVSEL_TESTS_ORACLES_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using Rows = std::vector<std::vector<double>>;
using Matrix = std::vector<std::vector<double>>;
using Set = std::vector<std::size_t>;

inline Rows random_rows(std::size_t n, std::size_t dim, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Rows rows(n, std::vector<double>(dim));
  for (auto& r : rows) {
    for (auto& v : r) v = u(gen);
  }
  return rows;
}

inline Matrix euclidean_matrix(const Rows& rows) {
  const std::size_t n = rows.size();
  Matrix d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < rows[i].size(); ++c) s += (rows[i][c] - rows[j][c]) * (rows[i][c] - rows[j][c]);
      d[i][j] = std::sqrt(s);
    }
  }
  return d;
}

inline std::vector<double> pair_values(const Matrix& d, const Set& s) {
  std::vector<double> out;
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = a + 1; b < s.size(); ++b) out.push_back(d[s[a]][s[b]]);
  }
  return out;
}

inline double ild(const Matrix& d, const Set& s) {
  const auto v = pair_values(d, s);
  if (v.empty()) return 0.0;
  double t = 0.0;
  for (double x : v) t += x;
  return t / static_cast<double>(v.size());
}

inline double disp(const Matrix& d, const Set& s) {
  const auto v = pair_values(d, s);
  if (v.empty()) return 0.0;
  return *std::min_element(v.begin(), v.end());
}

inline double kernel(double dist, double sigma) { return std::sqrt(2.0 - 2.0 * std::exp(-dist * dist / (2.0 * sigma * sigma))); }

inline double gild(const Matrix& d, const Set& s, double sigma) {
  const auto v = pair_values(d, s);
  if (v.empty()) return 0.0;
  double t = 0.0;
  for (double x : v) t += kernel(x, sigma);
  return t / static_cast<double>(v.size());
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// min or median of the pairwise distances over sqrt(2 ln(C(|s|,2) - 1)).
inline double adjusted_sigma(const Matrix& d, const Set& s, bool use_median) {
  const auto v = pair_values(d, s);
  const double stat = use_median ? median(v) : *std::min_element(v.begin(), v.end());
  return stat / std::sqrt(2.0 * std::log(static_cast<double>(v.size()) - 1.0));
}

// Every k-subset of {0..n-1} via bitmasks (n <= 24).
inline std::vector<Set> subsets(std::size_t n, std::size_t k) {
  std::vector<Set> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    Set s;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) s.push_back(i);
    }
    out.push_back(s);
  }
  return out;
}

inline double optimum(const Matrix& d, std::size_t k, const std::function<double(const Matrix&, const Set&)>& f) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& s : subsets(d.size(), k)) best = std::max(best, f(d, s));
  return best;
}

// Greedy that re-evaluates f(S + i) from scratch; starts at item 0, ties to
// the lowest index.
inline Set greedy_from_scratch(const Matrix& d, std::size_t k, const std::function<double(const Matrix&, const Set&)>& f) {
  Set s{0};
  while (s.size() < k) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t pick = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (std::find(s.begin(), s.end(), i) != s.end()) continue;
      Set t = s;
      t.push_back(i);
      const double v = f(d, t);
      if (v > best) {
        best = v;
        pick = i;
      }
    }
    s.push_back(pick);
  }
  return s;
}

// Farthest-point traversal from item 0.
inline Set farthest_point(const Matrix& d, std::size_t k) {
  Set s{0};
  while (s.size() < k) {
    double best = -1.0;
    std::size_t pick = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (std::find(s.begin(), s.end(), i) != s.end()) continue;
      double m = std::numeric_limits<double>::infinity();
      for (std::size_t j : s) m = std::min(m, d[i][j]);
      if (m > best) {
        best = m;
        pick = i;
      }
    }
    s.push_back(pick);
  }
  return s;
}

// Adaptive-bandwidth GILD greedy: step two takes the farthest item from
// item 0, later steps maximize GILD_s(S + i) - GILD_s(S) with s from S + i.
inline Set adaptive_gild_greedy(const Matrix& d, std::size_t k, bool use_median) {
  Set s = farthest_point(d, std::min<std::size_t>(k, 2));
  while (s.size() < k) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t pick = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (std::find(s.begin(), s.end(), i) != s.end()) continue;
      Set t = s;
      t.push_back(i);
      const double sigma = adjusted_sigma(d, t, use_median);
      const double v = gild(d, t, sigma) - gild(d, s, sigma);
      if (v > best) {
        best = v;
        pick = i;
      }
    }
    s.push_back(pick);
  }
  return s;
}

// Zero-diagonal ridge regression solved column by column as an ordinary
// ridge problem over the other items.
inline Eigen::MatrixXd constrained_ridge(const Eigen::MatrixXd& x, double l2) {
  const Eigen::Index n = x.cols();
  const Eigen::MatrixXd g = x.transpose() * x;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    std::vector<Eigen::Index> others;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != j) others.push_back(i);
    }
    const auto m = static_cast<Eigen::Index>(others.size());
    Eigen::MatrixXd a(m, m);
    Eigen::VectorXd rhs(m);
    for (Eigen::Index r = 0; r < m; ++r) {
      rhs(r) = g(others[r], j);
      for (Eigen::Index c = 0; c < m; ++c) a(r, c) = g(others[r], others[c]) + (r == c ? l2 : 0.0);
    }
    const Eigen::VectorXd sol = a.colPivHouseholderQr().solve(rhs);
    for (Eigen::Index r = 0; r < m; ++r) b(others[r], j) = sol(r);
  }
  return b;
}

inline double dcg_at(const std::vector<std::size_t>& ranked, const std::vector<std::size_t>& relevant, std::size_t k) {
  double v = 0.0;
  for (std::size_t r = 0; r < std::min(k, ranked.size()); ++r) {
    if (std::find(relevant.begin(), relevant.end(), ranked[r]) != relevant.end()) v += 1.0 / std::log2(r + 2.0);
  }
  return v;
}

}  // namespace oracle

#endif  // DIVSEL_TESTS_ORACLES_HPP_
