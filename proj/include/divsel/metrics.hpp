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

#ifndef DIVSEL_METRICS_HPP_
#define DIVSEL_METRICS_HPP_

#include <optional>
#include <span>

#include "divsel/common.hpp"

namespace divsel {

// Binary-relevance nDCG of the first k entries of `ranked`. `relevant` must be
// sorted ascending. Gains are discounted by 1/log2(rank + 1) with 1-based
// ranks; the ideal list places min(k, |relevant|) hits first. Undefined
// (nullopt) when `relevant` is empty.
std::optional<double> ndcg(std::span<const ItemId> ranked, std::span<const ItemId> relevant, std::size_t k);

}  // namespace divsel

#endif  // DIVSEL_METRICS_HPP_
