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

#include "divsel/objectives.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace divsel {

ObjectiveSpec ObjectiveSpec::gild_fixed(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("fixed GILD bandwidth must be positive and finite");
  }
  return {ObjectiveKind::kGild, Bandwidth::kFixed, sigma};
}

ObjectiveSpec ObjectiveSpec::gild_adjusted(Bandwidth scheme) {
  if (scheme == Bandwidth::kFixed) throw std::invalid_argument("adjusted scheme expected");
  return {ObjectiveKind::kGild, scheme, 0.0};
}

ObjectiveSpec ObjectiveSpec::parse(std::string_view text) {
  if (text == "ild") return ild();
  if (text == "disp") return disp();
  if (text == "gild:adjusted_min") return gild_adjusted(Bandwidth::kAdjustedMin);
  if (text == "gild:adjusted_med") return gild_adjusted(Bandwidth::kAdjustedMed);
  constexpr std::string_view kFixed = "gild:fixed=";
  if (text.starts_with(kFixed)) {
    const std::string number(text.substr(kFixed.size()));
    std::size_t used = 0;
    double sigma = 0.0;
    try {
      sigma = std::stod(number, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != number.size()) {
      throw std::invalid_argument("bad bandwidth in objective '" + std::string(text) + "'");
    }
    return gild_fixed(sigma);
  }
  throw std::invalid_argument("unknown objective '" + std::string(text) +
                              "' (expected ild | disp | gild:fixed=<sigma> | "
                              "gild:adjusted_min | gild:adjusted_med)");
}

std::string ObjectiveSpec::to_string() const {
  switch (kind) {
    case ObjectiveKind::kIld:
      return "ild";
    case ObjectiveKind::kDisp:
      return "disp";
    case ObjectiveKind::kGild:
      break;
  }
  if (bandwidth == Bandwidth::kAdjustedMin) return "gild:adjusted_min";
  if (bandwidth == Bandwidth::kAdjustedMed) return "gild:adjusted_med";
  std::ostringstream out;
  out.precision(17);
  out << "gild:fixed=" << sigma;
  return out.str();
}

ObjectiveValue ild(const DistanceOracle& oracle, std::span<const ItemId> items) {
  if (items.size() < 2) return {};
  double sum = 0.0;
  for (std::size_t a = 0; a < items.size(); ++a) {
    for (std::size_t b = a + 1; b < items.size(); ++b) sum += oracle.distance(items[a], items[b]);
  }
  return {sum / static_cast<double>(pair_count(items.size())), true};
}

ObjectiveValue dispersion(const DistanceOracle& oracle, std::span<const ItemId> items) {
  if (items.size() < 2) return {};
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < items.size(); ++a) {
    for (std::size_t b = a + 1; b < items.size(); ++b) {
      best = std::min(best, oracle.distance(items[a], items[b]));
    }
  }
  return {best, true};
}

double kernel_distance(double d, double sigma) {
  if (d <= 0.0) return 0.0;
  if (sigma <= 0.0) return std::numbers::sqrt2;
  const double ratio = d / sigma;
  const double exponent = 0.5 * ratio * ratio;
  if (exponent > 700.0) return std::numbers::sqrt2;
  return std::sqrt(-2.0 * std::expm1(-exponent));
}

ObjectiveValue gild(const DistanceOracle& oracle, std::span<const ItemId> items, double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("GILD bandwidth must be non-negative");
  if (items.size() < 2) return {};
  double sum = 0.0;
  for (std::size_t a = 0; a < items.size(); ++a) {
    for (std::size_t b = a + 1; b < items.size(); ++b) {
      sum += kernel_distance(oracle.distance(items[a], items[b]), sigma);
    }
  }
  return {sum / static_cast<double>(pair_count(items.size())), true};
}

double bandwidth_denominator(std::size_t k) {
  if (k < 3) throw std::invalid_argument("adjusted bandwidth needs at least 3 items");
  return std::sqrt(2.0 * std::log(static_cast<double>(pair_count(k)) - 1.0));
}

std::vector<double> pairwise_distances(const DistanceOracle& oracle, std::span<const ItemId> items) {
  std::vector<double> out;
  out.reserve(pair_count(items.size()));
  for (std::size_t a = 0; a < items.size(); ++a) {
    for (std::size_t b = a + 1; b < items.size(); ++b) out.push_back(oracle.distance(items[a], items[b]));
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty sequence");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::optional<double> adjusted_sigma(const DistanceOracle& oracle, std::span<const ItemId> items,
                                     Bandwidth scheme) {
  if (scheme == Bandwidth::kFixed) throw std::invalid_argument("adjusted scheme expected");
  if (items.size() < 3) return std::nullopt;
  auto distances = pairwise_distances(oracle, items);
  const double stat = scheme == Bandwidth::kAdjustedMin
                          ? *std::min_element(distances.begin(), distances.end())
                          : median(std::move(distances));
  return stat / bandwidth_denominator(items.size());
}

ObjectiveValue evaluate(const DistanceOracle& oracle, std::span<const ItemId> items,
                        const ObjectiveSpec& spec) {
  switch (spec.kind) {
    case ObjectiveKind::kIld:
      return ild(oracle, items);
    case ObjectiveKind::kDisp:
      return dispersion(oracle, items);
    case ObjectiveKind::kGild:
      break;
  }
  if (spec.bandwidth == Bandwidth::kFixed) return gild(oracle, items, spec.sigma);
  const auto sigma = adjusted_sigma(oracle, items, spec.bandwidth);
  if (!sigma) return {};
  return gild(oracle, items, *sigma);
}

}  // namespace divsel
