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

#ifndef DIVSEL_COMMON_HPP_
#define DIVSEL_COMMON_HPP_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace divsel {

// Dense item index in [0, n).
using ItemId = std::size_t;

// Malformed or inconsistent input data (files, catalogs).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exhaustive search would exceed its configured subset budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Number of unordered pairs among k items.
constexpr std::size_t pair_count(std::size_t k) { return k < 2 ? 0 : k * (k - 1) / 2; }

// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

inline constexpr const char* kVersion = "1.0.0";

}  // namespace divsel

#endif  // DIVSEL_COMMON_HPP_
