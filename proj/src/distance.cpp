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

#include "divsel/distance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace divsel {

FeatureCatalog::FeatureCatalog(std::size_t n, std::size_t d, std::vector<double> values)
    : n_(n), d_(d), values_(std::move(values)) {
  if (n_ < 2) throw DataError("feature catalog needs at least 2 items, got " + std::to_string(n_));
  if (d_ < 1) throw DataError("feature dimension must be at least 1");
  if (values_.size() != n_ * d_) throw DataError("feature matrix size does not match n * d");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw DataError("non-finite feature value at item " + std::to_string(k / d_));
    }
  }
}

FeatureCatalog FeatureCatalog::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DataError("feature catalog is empty");
  const std::size_t d = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * d);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) throw DataError("ragged feature row " + std::to_string(i));
    values.insert(values.end(), rows[i].begin(), rows[i].end());
  }
  return FeatureCatalog(rows.size(), d, std::move(values));
}

GenreCatalog::GenreCatalog(const std::vector<std::vector<std::string>>& sets) {
  if (sets.size() < 2) throw DataError("genre catalog needs at least 2 items");
  std::map<std::string, std::uint32_t> ids;
  for (const auto& set : sets) {
    for (const auto& token : set) ids.emplace(token, 0);
  }
  vocabulary_.reserve(ids.size());
  for (auto& [token, id] : ids) {
    id = static_cast<std::uint32_t>(vocabulary_.size());
    vocabulary_.push_back(token);
  }
  sets_.reserve(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].empty()) throw DataError("item " + std::to_string(i) + " has no genre");
    std::vector<std::uint32_t> tokens;
    for (const auto& token : sets[i]) tokens.push_back(ids.at(token));
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    sets_.push_back(std::move(tokens));
  }
}

std::vector<std::string> GenreCatalog::genre_names(ItemId i) const {
  std::vector<std::string> names;
  for (auto t : sets_.at(i)) names.push_back(vocabulary_[t]);
  return names;
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::kEuclidean:
      return "euclidean";
    case Metric::kCosine:
      return "cosine";
    case Metric::kJaccard:
      return "jaccard";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  if (name == "euclidean") return Metric::kEuclidean;
  if (name == "cosine") return Metric::kCosine;
  if (name == "jaccard") return Metric::kJaccard;
  throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

DistanceOracle DistanceOracle::euclidean(FeatureCatalog catalog, CachePolicy cache) {
  DistanceOracle oracle;
  oracle.metric_ = Metric::kEuclidean;
  oracle.n_ = catalog.size();
  oracle.features_ = std::make_shared<const FeatureCatalog>(std::move(catalog));
  if (cache == CachePolicy::kFullMatrix) oracle.build_cache();
  return oracle;
}

DistanceOracle DistanceOracle::cosine(FeatureCatalog catalog, CachePolicy cache) {
  DistanceOracle oracle;
  oracle.metric_ = Metric::kCosine;
  oracle.n_ = catalog.size();
  oracle.norms_.resize(oracle.n_);
  for (ItemId i = 0; i < oracle.n_; ++i) {
    double sq = 0.0;
    for (double x : catalog.row(i)) sq += x * x;
    if (sq == 0.0) throw DataError("zero-norm feature vector at item " + std::to_string(i));
    oracle.norms_[i] = std::sqrt(sq);
  }
  oracle.features_ = std::make_shared<const FeatureCatalog>(std::move(catalog));
  if (cache == CachePolicy::kFullMatrix) oracle.build_cache();
  return oracle;
}

DistanceOracle DistanceOracle::jaccard(GenreCatalog catalog, CachePolicy cache) {
  DistanceOracle oracle;
  oracle.metric_ = Metric::kJaccard;
  oracle.n_ = catalog.size();
  oracle.genres_ = std::make_shared<const GenreCatalog>(std::move(catalog));
  if (cache == CachePolicy::kFullMatrix) oracle.build_cache();
  return oracle;
}

double DistanceOracle::distance(ItemId i, ItemId j) const {
  if (i >= n_ || j >= n_) {
    throw std::out_of_range("item index out of range: (" + std::to_string(i) + ", " +
                            std::to_string(j) + ") with n = " + std::to_string(n_));
  }
  return (*this)(i, j);
}

DistanceOracle DistanceOracle::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw std::invalid_argument("distance scale must be positive and finite");
  }
  DistanceOracle copy = *this;
  copy.scale_ = scale_ * factor;
  if (!copy.cached_.empty()) copy.build_cache();
  return copy;
}

void DistanceOracle::build_cache() {
  cached_.assign(pair_count(n_), 0.0);
  for (ItemId i = 0; i < n_; ++i) {
    for (ItemId j = i + 1; j < n_; ++j) cached_[packed_index(i, j)] = scale_ * raw(i, j);
  }
}

double DistanceOracle::raw(ItemId i, ItemId j) const {
  switch (metric_) {
    case Metric::kEuclidean: {
      const auto a = features_->row(i);
      const auto b = features_->row(j);
      double sq = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        sq += diff * diff;
      }
      return std::sqrt(sq);
    }
    case Metric::kCosine: {
      const auto a = features_->row(i);
      const auto b = features_->row(j);
      double dot = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
      const double d = 1.0 - dot / (norms_[i] * norms_[j]);
      return std::clamp(d, 0.0, 2.0);
    }
    case Metric::kJaccard: {
      const auto a = genres_->tokens(i);
      const auto b = genres_->tokens(j);
      std::size_t common = 0;
      std::size_t p = 0, q = 0;
      while (p < a.size() && q < b.size()) {
        if (a[p] == b[q]) {
          ++common;
          ++p;
          ++q;
        } else if (a[p] < b[q]) {
          ++p;
        } else {
          ++q;
        }
      }
      const std::size_t unite = a.size() + b.size() - common;
      return 1.0 - static_cast<double>(common) / static_cast<double>(unite);
    }
  }
  return 0.0;
}

double diameter(const DistanceOracle& oracle, std::span<const ItemId> items) {
  if (items.size() < 2) throw std::invalid_argument("diameter needs at least 2 items");
  for (ItemId i : items) {
    if (i >= oracle.size()) throw std::out_of_range("item index out of range");
  }
  double best = 0.0;
  for (std::size_t a = 0; a < items.size(); ++a) {
    for (std::size_t b = a + 1; b < items.size(); ++b) best = std::max(best, oracle(items[a], items[b]));
  }
  return best;
}

double diameter(const DistanceOracle& oracle) {
  const auto items = all_items(oracle.size());
  return diameter(oracle, items);
}

std::vector<ItemId> all_items(std::size_t n) {
  std::vector<ItemId> ids(n);
  std::iota(ids.begin(), ids.end(), ItemId{0});
  return ids;
}

}  // namespace divsel
