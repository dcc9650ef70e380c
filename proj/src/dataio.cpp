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

#include "divsel/dataio.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "divsel/rng.hpp"

namespace divsel {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return fields;
}

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

long long parse_integer(std::string_view field, const std::filesystem::path& path, std::size_t line) {
  long long value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw DataError(where(path, line) + "expected an integer, got '" + std::string(field) + "'");
  }
  return value;
}

double parse_real(std::string_view field, const std::filesystem::path& path, std::size_t line) {
  const std::string text(field);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw DataError(where(path, line) + "expected a number, got '" + text + "'");
  }
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

std::string format_real(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

FeedbackMatrix::FeedbackMatrix(std::size_t users, std::size_t items, std::vector<Entry> entries)
    : users_(users), items_(items), entries_(std::move(entries)) {
  for (const auto& [u, i] : entries_) {
    if (u >= users_ || i >= items_) {
      throw DataError("interaction (" + std::to_string(u) + ", " + std::to_string(i) + ") outside " +
                      std::to_string(users_) + " x " + std::to_string(items_));
    }
  }
  std::sort(entries_.begin(), entries_.end());
  const std::size_t before = entries_.size();
  entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
  duplicates_ = before - entries_.size();
}

double FeedbackMatrix::density() const {
  if (users_ == 0 || items_ == 0) return 0.0;
  return static_cast<double>(entries_.size()) / (static_cast<double>(users_) * static_cast<double>(items_));
}

std::vector<std::vector<ItemId>> FeedbackMatrix::by_user() const {
  std::vector<std::vector<ItemId>> lists(users_);
  for (const auto& [u, i] : entries_) lists[u].push_back(i);
  return lists;
}

bool FeedbackMatrix::contains(std::uint32_t user, std::uint32_t item) const {
  return std::binary_search(entries_.begin(), entries_.end(), Entry{user, item});
}

FeedbackMatrix load_feedback(const std::filesystem::path& path, std::size_t users, std::size_t items) {
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  std::vector<FeedbackMatrix::Entry> entries;
  bool header_seen = false;
  std::size_t max_user = 0, max_item = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      const auto fields = split(text, ',');
      if (fields.size() < 2 || fields[0] != "user" || fields[1] != "item") {
        throw DataError(where(path, line_no) + "expected header 'user,item'");
      }
      continue;
    }
    const auto fields = split(text, ',');
    if (fields.size() < 2) throw DataError(where(path, line_no) + "expected 'user,item'");
    const long long u = parse_integer(fields[0], path, line_no);
    const long long i = parse_integer(fields[1], path, line_no);
    if (u < 0 || i < 0 || u > UINT32_MAX || i > UINT32_MAX) {
      throw DataError(where(path, line_no) + "index out of range");
    }
    if ((users > 0 && static_cast<std::size_t>(u) >= users) || (items > 0 && static_cast<std::size_t>(i) >= items)) {
      throw DataError(where(path, line_no) + "index outside the declared shape");
    }
    max_user = std::max<std::size_t>(max_user, static_cast<std::size_t>(u));
    max_item = std::max<std::size_t>(max_item, static_cast<std::size_t>(i));
    entries.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(i));
  }
  if (entries.empty()) throw DataError(path.string() + ": no interactions");
  return FeedbackMatrix(users > 0 ? users : max_user + 1, items > 0 ? items : max_item + 1, std::move(entries));
}

void save_feedback(const std::filesystem::path& path, const FeedbackMatrix& feedback) {
  auto out = open_output(path);
  out << "user,item\n";
  for (const auto& [u, i] : feedback.entries()) out << u << ',' << i << '\n';
}

FeatureCatalog load_features(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto fields = split(text, ',');
    if (dim == 0) {
      if (fields.size() < 2 || fields[0] != "id") throw DataError(where(path, line_no) + "expected header 'id,f0,...'");
      for (std::size_t k = 1; k < fields.size(); ++k) {
        if (fields[k] != "f" + std::to_string(k - 1)) {
          throw DataError(where(path, line_no) + "feature columns must be named f0..f{d-1}");
        }
      }
      dim = fields.size() - 1;
      continue;
    }
    if (fields.size() != dim + 1) throw DataError(where(path, line_no) + "expected " + std::to_string(dim + 1) + " fields");
    const long long id = parse_integer(fields[0], path, line_no);
    if (id != static_cast<long long>(rows)) {
      throw DataError(where(path, line_no) + "ids must be 0..n-1 in order (expected " + std::to_string(rows) + ")");
    }
    for (std::size_t k = 1; k < fields.size(); ++k) values.push_back(parse_real(fields[k], path, line_no));
    ++rows;
  }
  if (dim == 0) throw DataError(path.string() + ": empty feature file");
  return FeatureCatalog(rows, dim, std::move(values));
}

void save_features(const std::filesystem::path& path, const FeatureCatalog& catalog) {
  auto out = open_output(path);
  out << "id";
  for (std::size_t k = 0; k < catalog.dim(); ++k) out << ",f" << k;
  out << '\n';
  for (ItemId i = 0; i < catalog.size(); ++i) {
    out << i;
    for (double v : catalog.row(i)) out << ',' << format_real(v);
    out << '\n';
  }
}

GenreCatalog load_genres(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<std::vector<std::string>> sets;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (text != "id,genres") throw DataError(where(path, line_no) + "expected header 'id,genres'");
      continue;
    }
    const std::size_t comma = text.find(',');
    if (comma == std::string_view::npos) throw DataError(where(path, line_no) + "expected 'id,genres'");
    const long long id = parse_integer(trim(text.substr(0, comma)), path, line_no);
    if (id != static_cast<long long>(sets.size())) {
      throw DataError(where(path, line_no) + "ids must be 0..n-1 in order");
    }
    std::vector<std::string> tokens;
    for (auto token : split(text.substr(comma + 1), '|')) {
      if (!token.empty()) tokens.emplace_back(token);
    }
    if (tokens.empty()) throw DataError(where(path, line_no) + "item has no genre");
    sets.push_back(std::move(tokens));
  }
  return GenreCatalog(sets);
}

void save_genres(const std::filesystem::path& path, const std::vector<std::vector<std::string>>& genres) {
  auto out = open_output(path);
  out << "id,genres\n";
  for (std::size_t i = 0; i < genres.size(); ++i) {
    out << i << ',';
    for (std::size_t t = 0; t < genres[i].size(); ++t) out << (t ? "|" : "") << genres[i][t];
    out << '\n';
  }
}

FilterResult filter_min_counts(const FeedbackMatrix& feedback, std::size_t min_user, std::size_t min_item) {
  std::vector<bool> keep_user(feedback.users(), true), keep_item(feedback.items(), true);
  auto entries = feedback.entries();
  while (true) {
    std::vector<std::size_t> user_count(feedback.users(), 0), item_count(feedback.items(), 0);
    for (const auto& [u, i] : entries) {
      ++user_count[u];
      ++item_count[i];
    }
    bool changed = false;
    for (std::size_t u = 0; u < keep_user.size(); ++u) {
      if (keep_user[u] && user_count[u] < min_user) {
        keep_user[u] = false;
        changed = true;
      }
    }
    for (std::size_t i = 0; i < keep_item.size(); ++i) {
      if (keep_item[i] && item_count[i] < min_item) {
        keep_item[i] = false;
        changed = true;
      }
    }
    if (!changed) break;
    std::erase_if(entries, [&](const auto& e) { return !keep_user[e.first] || !keep_item[e.second]; });
  }
  FilterResult result;
  std::vector<std::uint32_t> user_map(feedback.users()), item_map(feedback.items());
  for (std::size_t u = 0; u < keep_user.size(); ++u) {
    if (keep_user[u]) {
      user_map[u] = static_cast<std::uint32_t>(result.user_ids.size());
      result.user_ids.push_back(static_cast<std::uint32_t>(u));
    }
  }
  for (std::size_t i = 0; i < keep_item.size(); ++i) {
    if (keep_item[i]) {
      item_map[i] = static_cast<std::uint32_t>(result.item_ids.size());
      result.item_ids.push_back(static_cast<std::uint32_t>(i));
    }
  }
  for (auto& [u, i] : entries) {
    u = user_map[u];
    i = item_map[i];
  }
  result.feedback = FeedbackMatrix(result.user_ids.size(), result.item_ids.size(), std::move(entries));
  return result;
}

namespace {

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

}  // namespace

Embedding embed_items(const FeedbackMatrix& feedback, const EmbeddingSpec& spec) {
  const std::size_t m = feedback.users(), n = feedback.items();
  if (spec.dim < 1 || spec.dim > std::min(m, n)) {
    throw std::invalid_argument("embedding dimension " + std::to_string(spec.dim) + " exceeds min(m, n) = " +
                                std::to_string(std::min(m, n)));
  }
  Eigen::SparseMatrix<double> x(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(feedback.size());
  for (const auto& [u, i] : feedback.entries()) triplets.emplace_back(u, i, 1.0);
  x.setFromTriplets(triplets.begin(), triplets.end());

  const auto width = static_cast<Eigen::Index>(std::min(spec.dim + spec.oversampling, std::min(m, n)));
  Rng rng(spec.seed);
  Eigen::MatrixXd omega(static_cast<Eigen::Index>(n), width);
  for (Eigen::Index c = 0; c < width; ++c) {
    for (Eigen::Index r = 0; r < omega.rows(); ++r) omega(r, c) = rng.normal();
  }
  Eigen::MatrixXd q = orthonormal_basis(x * omega);
  for (std::size_t it = 0; it < spec.power_iterations; ++it) {
    const Eigen::MatrixXd z = orthonormal_basis(x.transpose() * q);
    q = orthonormal_basis(x * z);
  }
  const Eigen::MatrixXd projected = (x.transpose() * q).transpose();  // width x n
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(projected, Eigen::ComputeThinV);
  const auto d = static_cast<Eigen::Index>(spec.dim);
  Eigen::MatrixXd v = svd.matrixV().leftCols(d);
  for (Eigen::Index c = 0; c < d; ++c) {
    Eigen::Index arg = 0;
    v.col(c).cwiseAbs().maxCoeff(&arg);
    if (v(arg, c) < 0) v.col(c) *= -1.0;
    if (spec.scale_by_singular_values) v.col(c) *= svd.singularValues()(c);
  }
  std::vector<double> values(n * spec.dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < spec.dim; ++c) {
      values[i * spec.dim + c] = v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
    }
  }
  Embedding out{FeatureCatalog(n, spec.dim, std::move(values)), {}};
  for (Eigen::Index c = 0; c < d; ++c) out.singular_values.push_back(svd.singularValues()(c));
  return out;
}

std::array<std::size_t, 3> apportion(std::size_t total, const std::array<double, 3>& ratios) {
  double sum = 0.0;
  for (double r : ratios) {
    if (!(r > 0.0)) throw std::invalid_argument("split ratios must be positive");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("split ratios must sum to 1");
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t p = 0; p < 3; ++p) {
    const double exact = ratios[p] * static_cast<double>(total);
    sizes[p] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainder[p] = exact - static_cast<double>(sizes[p]);
    assigned += sizes[p];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t r = 0; assigned < total; ++r, ++assigned) ++sizes[order[r % 3]];
  while (assigned > total) {
    // Only reachable through the 1e-9 guard on near-integer products.
    for (std::size_t p = 3; p-- > 0 && assigned > total;) {
      if (sizes[p] > 0) {
        --sizes[p];
        --assigned;
      }
    }
  }
  return sizes;
}

Split split_feedback(const FeedbackMatrix& feedback, const SplitSpec& spec) {
  const auto sizes = apportion(feedback.size(), spec.ratios);
  std::vector<std::size_t> order(feedback.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(spec.seed);
  shuffle(order, rng);
  std::array<std::vector<FeedbackMatrix::Entry>, 3> parts;
  std::size_t cursor = 0;
  for (std::size_t p = 0; p < 3; ++p) {
    for (std::size_t c = 0; c < sizes[p]; ++c) parts[p].push_back(feedback.entries()[order[cursor++]]);
  }
  return {FeedbackMatrix(feedback.users(), feedback.items(), std::move(parts[0])),
          FeedbackMatrix(feedback.users(), feedback.items(), std::move(parts[1])),
          FeedbackMatrix(feedback.users(), feedback.items(), std::move(parts[2]))};
}

}  // namespace divsel
