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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>

#include "divsel/datagen.hpp"
#include "divsel/dataio.hpp"
#include "doctest.h"
#include "helpers.hpp"

using divsel::FeedbackMatrix;

TEST_SUITE_BEGIN("dataio");

namespace {

Eigen::MatrixXd dense(const FeedbackMatrix& fm) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(fm.users()), static_cast<Eigen::Index>(fm.items()));
  for (const auto& [u, i] : fm.entries()) x(u, i) = 1.0;
  return x;
}

}  // namespace

TEST_CASE("feedback csv parsing") {
  testing::TempDir dir("feedback");
  testing::write_file(dir / "a.csv", "user,item\n0,1\n2, 0\n0,1\n1,3,5.0\n\n");
  const auto fm = divsel::load_feedback(dir / "a.csv");
  CHECK(fm.users() == 3);
  CHECK(fm.items() == 4);
  CHECK(fm.size() == 3);
  CHECK(fm.duplicates_dropped() == 1);
  CHECK(fm.contains(2, 0));
  CHECK_FALSE(fm.contains(0, 0));
  CHECK(fm.by_user()[0] == std::vector<divsel::ItemId>{1});
  CHECK(divsel::load_feedback(dir / "a.csv", 10, 10).users() == 10);
  CHECK_THROWS_AS(divsel::load_feedback(dir / "a.csv", 2, 10), divsel::DataError);

  testing::write_file(dir / "empty.csv", "user,item\n");
  CHECK_THROWS_AS(divsel::load_feedback(dir / "empty.csv"), divsel::DataError);
  testing::write_file(dir / "bad.csv", "user,item\n0,1\nx,2\n");
  try {
    divsel::load_feedback(dir / "bad.csv");
    FAIL("expected a DataError");
  } catch (const divsel::DataError& e) {
    CHECK(std::string(e.what()).find("bad.csv:3:") != std::string::npos);
  }
  testing::write_file(dir / "neg.csv", "user,item\n0,-1\n");
  CHECK_THROWS_AS(divsel::load_feedback(dir / "neg.csv"), divsel::DataError);
  CHECK_THROWS_AS(divsel::load_feedback(dir / "missing.csv"), divsel::DataError);
}

TEST_CASE("csv round trips") {
  testing::TempDir dir("roundtrip");
  const auto task = divsel::gen_rec_task({});
  divsel::save_feedback(dir / "f.csv", task.feedback);
  CHECK(divsel::load_feedback(dir / "f.csv", 200, 300) == task.feedback);

  const auto cat = divsel::gen_ellipse(40, 2);
  divsel::save_features(dir / "x.csv", cat);
  const auto back = divsel::load_features(dir / "x.csv");
  CHECK(back.dim() == 2);
  CHECK(back.values() == cat.values());

  divsel::save_genres(dir / "g.csv", task.genres);
  const auto genres = divsel::load_genres(dir / "g.csv");
  REQUIRE(genres.size() == 300);
  for (divsel::ItemId i = 0; i < 300; ++i) {
    auto want = task.genres[i];
    std::sort(want.begin(), want.end());
    CHECK(genres.genre_names(i) == want);
  }
  testing::write_file(dir / "bad_features.csv", "id,f0,f1\n0,1,2\n1,3\n");
  CHECK_THROWS_AS(divsel::load_features(dir / "bad_features.csv"), divsel::DataError);
}

TEST_CASE("split sizes follow largest remainder rounding") {
  CHECK(divsel::apportion(10, {0.6, 0.2, 0.2}) == std::array<std::size_t, 3>{6, 2, 2});
  CHECK(divsel::apportion(7, {0.6, 0.2, 0.2}) == std::array<std::size_t, 3>{4, 2, 1});
  for (std::size_t total = 0; total < 50; ++total) {
    const auto parts = divsel::apportion(total, {0.5, 0.3, 0.2});
    CHECK(parts[0] + parts[1] + parts[2] == total);
  }
}

TEST_CASE("split partitions the interactions") {
  const auto fm = divsel::gen_rec_task({}).feedback;
  const auto split = divsel::split_feedback(fm, {});
  const auto parts = divsel::apportion(fm.size(), {0.6, 0.2, 0.2});
  CHECK(split.train.size() == parts[0]);
  CHECK(split.validation.size() == parts[1]);
  CHECK(split.test.size() == parts[2]);
  std::set<FeedbackMatrix::Entry> seen;
  for (const auto* part : {&split.train, &split.validation, &split.test}) {
    CHECK(part->users() == fm.users());
    CHECK(part->items() == fm.items());
    for (const auto& e : part->entries()) CHECK(seen.insert(e).second);
  }
  CHECK(seen == std::set<FeedbackMatrix::Entry>(fm.entries().begin(), fm.entries().end()));
  CHECK(divsel::split_feedback(fm, {}).train == split.train);
  divsel::SplitSpec other;
  other.seed = 8;
  CHECK_FALSE(divsel::split_feedback(fm, other).train == split.train);
  CHECK_THROWS_AS(divsel::split_feedback(fm, {{0.5, 0.5, 0.5}, 1}), std::invalid_argument);
}

TEST_CASE("embedding recovers a rank-one matrix") {
  // Users 0..3 all like items 0..2; nothing else.
  std::vector<FeedbackMatrix::Entry> entries;
  for (std::uint32_t u = 0; u < 4; ++u) {
    for (std::uint32_t i = 0; i < 3; ++i) entries.emplace_back(u, i);
  }
  entries.emplace_back(4, 3);
  const FeedbackMatrix fm(5, 5, entries);
  divsel::EmbeddingSpec spec;
  spec.dim = 1;
  const auto emb = divsel::embed_items(fm, spec);
  REQUIRE(emb.singular_values.size() == 1);
  CHECK(emb.singular_values[0] == doctest::Approx(std::sqrt(12.0)));
  for (divsel::ItemId i = 0; i < 3; ++i) CHECK(emb.vectors.row(i)[0] == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(emb.vectors.row(3)[0] == doctest::Approx(0.0));
}

TEST_CASE("randomized embedding is close to the exact truncated svd") {
  divsel::RecTaskSpec rs;
  rs.users = 50;
  rs.items = 40;
  rs.blocks = 4;
  rs.palette_per_block = 3;
  rs.p_in = 0.4;
  rs.p_out = 0.1;
  const auto fm = divsel::gen_rec_task(rs).feedback;
  const Eigen::MatrixXd x = dense(fm);
  const Eigen::JacobiSVD<Eigen::MatrixXd> exact(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  for (std::size_t k : {2, 5, 10}) {
    divsel::EmbeddingSpec spec;
    spec.dim = k;
    const auto emb = divsel::embed_items(fm, spec);
    Eigen::MatrixXd v(40, static_cast<Eigen::Index>(k));
    for (Eigen::Index i = 0; i < 40; ++i) {
      for (Eigen::Index c = 0; c < v.cols(); ++c) v(i, c) = emb.vectors.row(i)[c];
    }
    CHECK((v.transpose() * v - Eigen::MatrixXd::Identity(v.cols(), v.cols())).norm() < 1e-10);
    const double err = (x - x * v * v.transpose()).norm();
    double best = 0.0;
    for (Eigen::Index c = static_cast<Eigen::Index>(k); c < exact.singularValues().size(); ++c) {
      best += exact.singularValues()(c) * exact.singularValues()(c);
    }
    CHECK(err <= 1.1 * std::sqrt(best) + 1e-9);
    for (std::size_t c = 0; c < k; ++c) {
      CHECK(emb.singular_values[c] == doctest::Approx(exact.singularValues()(static_cast<Eigen::Index>(c))).epsilon(0.05));
    }
  }
  divsel::EmbeddingSpec too_big;
  too_big.dim = 41;
  CHECK_THROWS_AS(divsel::embed_items(fm, too_big), std::invalid_argument);
  divsel::EmbeddingSpec spec;
  spec.dim = 4;
  CHECK(divsel::embed_items(fm, spec).vectors.values() == divsel::embed_items(fm, spec).vectors.values());
}

TEST_CASE("min-count filtering reaches a fixed point") {
  // User 2 has one interaction; once it goes, item 3 drops to one user too.
  const FeedbackMatrix fm(4, 4, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 3}, {3, 0}, {3, 1}, {3, 3}});
  const auto r = divsel::filter_min_counts(fm, 2, 2);
  CHECK(r.user_ids == std::vector<std::uint32_t>{0, 1, 3});
  CHECK(r.item_ids == std::vector<std::uint32_t>{0, 1});
  CHECK(r.feedback.users() == 3);
  CHECK(r.feedback.items() == 2);
  CHECK(r.feedback.size() == 6);
  const auto again = divsel::filter_min_counts(r.feedback, 2, 2);
  CHECK(again.feedback == r.feedback);
}

TEST_SUITE_END();
