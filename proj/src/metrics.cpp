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

#include "divsel/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace divsel {

std::optional<double> ndcg(std::span<const ItemId> ranked, std::span<const ItemId> relevant, std::size_t k) {
  if (relevant.empty()) return std::nullopt;
  double dcg = 0.0, ideal = 0.0;
  const std::size_t depth = std::min(k, ranked.size());
  for (std::size_t r = 0; r < depth; ++r) {
    if (std::binary_search(relevant.begin(), relevant.end(), ranked[r])) dcg += 1.0 / std::log2(r + 2.0);
  }
  const std::size_t hits = std::min(k, relevant.size());
  for (std::size_t r = 0; r < hits; ++r) ideal += 1.0 / std::log2(r + 2.0);
  return ideal > 0.0 ? dcg / ideal : 0.0;
}

}  // namespace divsel
