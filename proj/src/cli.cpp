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

#include "divsel/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "divsel/datagen.hpp"
#include "divsel/dataio.hpp"
#include "divsel/distance.hpp"
#include "divsel/experiments.hpp"
#include "divsel/objectives.hpp"
#include "divsel/optimize.hpp"
#include "divsel/relevance.hpp"
#include "divsel/rng.hpp"
#include "divsel/verify.hpp"

namespace divsel {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::size_t kCacheLimit = 4096;

struct Globals {
  unsigned threads = 1;
  std::uint64_t seed = 7;
};

struct CatalogArgs {
  std::string features;
  std::string genres;
  std::string metric = "euclidean";
  double scale_to = 0.0;  // rescale so the diameter equals this value

  void attach(CLI::App* sub) {
    sub->add_option("--features", features, "Feature CSV (id,f0,...)")->check(CLI::ExistingFile);
    sub->add_option("--genres", genres, "Genre CSV (id,genres); implies the Jaccard metric")->check(CLI::ExistingFile);
    sub->add_option("--metric", metric, "euclidean | cosine for feature catalogs")->capture_default_str();
    sub->add_option("--scale-to-diameter", scale_to, "Rescale distances so the diameter equals this value");
  }

  std::string dataset() const { return fs::path(features.empty() ? genres : features).stem().string(); }

  DistanceOracle load() const {
    if (features.empty() == genres.empty()) throw std::invalid_argument("pass exactly one of --features or --genres");
    DistanceOracle oracle = [&] {
      if (!genres.empty()) {
        auto catalog = load_genres(genres);
        const auto policy = catalog.size() <= kCacheLimit ? CachePolicy::kFullMatrix : CachePolicy::kNone;
        return DistanceOracle::jaccard(std::move(catalog), policy);
      }
      auto catalog = load_features(features);
      const auto policy = catalog.size() <= kCacheLimit ? CachePolicy::kFullMatrix : CachePolicy::kNone;
      switch (parse_metric(metric)) {
        case Metric::kEuclidean:
          return DistanceOracle::euclidean(std::move(catalog), policy);
        case Metric::kCosine:
          return DistanceOracle::cosine(std::move(catalog), policy);
        case Metric::kJaccard:
          break;
      }
      throw std::invalid_argument("the Jaccard metric needs --genres");
    }();
    if (scale_to > 0.0) {
      const double d = diameter(oracle);
      if (!(d > 0.0)) throw DataError("cannot rescale a catalog with zero diameter");
      oracle = oracle.scaled(scale_to / d);
    }
    return oracle;
  }
};

void emit(const json& value, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << value.dump(2) << '\n';
  } else {
    write_json(path, value);
  }
}

json selection_json(const Selection& sel, const DistanceOracle& oracle, std::size_t k) {
  json trace = json::array();
  for (const auto& s : sel.trace) {
    json step{{"item", s.item},   {"score", s.score},           {"marginal", s.marginal},
              {"objective", s.objective}, {"relevance", s.relevance}, {"all_tied", s.all_tied}};
    step["sigma"] = s.sigma ? json(*s.sigma) : json(nullptr);
    trace.push_back(step);
  }
  const auto value = evaluate(oracle, sel.items, sel.objective);
  return {{"objective", sel.objective.to_string()},
          {"k", k},
          {"items", sel.items},
          {"value", value.defined ? json(value.value) : json(nullptr)},
          {"ild", ild(oracle, sel.items).value},
          {"disp", dispersion(oracle, sel.items).value},
          {"degenerate", sel.degenerate()},
          {"trace", trace}};
}

FeedbackMatrix reshape(const FeedbackMatrix& m, std::size_t users, std::size_t items) {
  if (m.users() > users || m.items() > items) throw DataError("interaction outside the common shape");
  return FeedbackMatrix(users, items, m.entries());
}

std::vector<ObjectiveSpec> parse_objectives(const std::vector<std::string>& names) {
  std::vector<ObjectiveSpec> out;
  for (const auto& n : names) out.push_back(ObjectiveSpec::parse(n));
  return out;
}

// A sigma grid given either as lo,hi,count or as an explicit increasing list.
std::vector<double> parse_grid(const std::vector<double>& values, bool explicit_list) {
  if (values.empty()) return log_grid(0.02, 1.0, 64);
  if (explicit_list) return values;
  if (values.size() != 3) throw std::invalid_argument("--sigma-grid expects lo,hi,count");
  return log_grid(values[0], values[1], static_cast<std::size_t>(values[2]));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diversity-aware item selection: ILD, dispersion and Gaussian ILD", "divsel"};
  app.set_version_flag("--version", std::string("divsel ") + kVersion);
  app.set_config("--config", "", "key=value file mirroring the flags (sections per subcommand)");
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--threads", g.threads, "Worker threads; results do not depend on it")
      ->envname("DIVSEL_THREADS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Root seed; stages derive sub-seeds from it")->capture_default_str();

  std::function<int()> action;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic catalog or recommendation task");
  struct {
    std::string kind = "ellipse", output;
    std::size_t n = 1000;
    double eps = 0.01, scale_to = 0.0;
    RecTaskSpec rec;
  } ga;
  gen->add_option("--kind", ga.kind, "two_circles | ellipse | claim32 | claim33 | rec")->capture_default_str();
  gen->add_option("--n", ga.n, "Point count, or the construction parameter for claims")->capture_default_str();
  gen->add_option("--eps", ga.eps, "Epsilon for claim32")->capture_default_str();
  gen->add_option("--scale-to-diameter", ga.scale_to, "Scale coordinates so the diameter equals this value");
  gen->add_option("--users", ga.rec.users, "rec: users")->capture_default_str();
  gen->add_option("--items", ga.rec.items, "rec: items")->capture_default_str();
  gen->add_option("--blocks", ga.rec.blocks, "rec: communities")->capture_default_str();
  gen->add_option("-o,--output", ga.output, "Feature CSV, or an output directory for rec")->required();
  gen->callback([&] {
    action = [&] {
      if (ga.kind == "rec") {
        ga.rec.seed = derive_seed(g.seed, "gen/rec");
        const auto task = gen_rec_task(ga.rec);
        fs::create_directories(ga.output);
        save_feedback(fs::path(ga.output) / "feedback.csv", task.feedback);
        save_genres(fs::path(ga.output) / "genres.csv", task.genres);
        return kExitOk;
      }
      SyntheticSpec spec{parse_synthetic_kind(ga.kind), ga.n, ga.eps, derive_seed(g.seed, "gen/" + ga.kind)};
      auto catalog = generate(spec);
      if (ga.scale_to > 0.0) {
        const double d = diameter(DistanceOracle::euclidean(catalog, CachePolicy::kNone));
        if (!(d > 0.0)) throw DataError("cannot rescale a catalog with zero diameter");
        std::vector<double> values = catalog.values();
        for (double& v : values) v *= ga.scale_to / d;
        catalog = FeatureCatalog(catalog.size(), catalog.dim(), std::move(values));
      }
      save_features(ga.output, catalog);
      return kExitOk;
    };
  });

  // embed
  auto* embed = app.add_subcommand("embed", "Item vectors from a truncated SVD of implicit feedback");
  struct {
    std::string feedback, output;
    EmbeddingSpec spec;
    std::size_t min_user = 0, min_item = 0;
  } ea;
  embed->add_option("--feedback", ea.feedback, "Feedback CSV (user,item)")->required()->check(CLI::ExistingFile);
  embed->add_option("--dim", ea.spec.dim, "Embedding dimension")->capture_default_str();
  embed->add_option("--oversampling", ea.spec.oversampling)->capture_default_str();
  embed->add_option("--power-iterations", ea.spec.power_iterations)->capture_default_str();
  embed->add_flag("--scale-by-singular-values", ea.spec.scale_by_singular_values, "Rows of V Sigma instead of V");
  embed->add_option("--min-user", ea.min_user, "Drop users with fewer interactions (iterated)")->capture_default_str();
  embed->add_option("--min-item", ea.min_item, "Drop items with fewer interactions (iterated)")->capture_default_str();
  embed->add_option("-o,--output", ea.output, "Feature CSV")->required();
  embed->callback([&] {
    action = [&] {
      auto fm = load_feedback(ea.feedback);
      if (ea.min_user > 0 || ea.min_item > 0) fm = filter_min_counts(fm, ea.min_user, ea.min_item).feedback;
      ea.spec.seed = derive_seed(g.seed, "embed");
      save_features(ea.output, embed_items(fm, ea.spec).vectors);
      return kExitOk;
    };
  });

  // split
  auto* split = app.add_subcommand("split", "Random interaction-level train/validation/test split");
  struct {
    std::string feedback, out_dir;
    std::vector<double> ratios{0.6, 0.2, 0.2};
  } sa;
  split->add_option("--feedback", sa.feedback, "Feedback CSV")->required()->check(CLI::ExistingFile);
  split->add_option("--ratios", sa.ratios, "train,validation,test")->delimiter(',')->expected(3);
  split->add_option("--out-dir", sa.out_dir, "Directory for train.csv, validation.csv, test.csv")->required();
  split->callback([&] {
    action = [&] {
      const auto fm = load_feedback(sa.feedback);
      const auto parts = split_feedback(fm, {{sa.ratios[0], sa.ratios[1], sa.ratios[2]}, derive_seed(g.seed, "split")});
      fs::create_directories(sa.out_dir);
      save_feedback(fs::path(sa.out_dir) / "train.csv", parts.train);
      save_feedback(fs::path(sa.out_dir) / "validation.csv", parts.validation);
      save_feedback(fs::path(sa.out_dir) / "test.csv", parts.test);
      return kExitOk;
    };
  });

  // select
  auto* select = app.add_subcommand("select", "Greedy selection with its trace");
  struct {
    CatalogArgs catalog;
    std::string objective = "ild", output;
    std::size_t k = 10;
    bool exact_pair = false, direct_kernel = false;
  } sel;
  sel.catalog.attach(select);
  select->add_option("--objective", sel.objective, "ild | disp | gild:fixed=<s> | gild:adjusted_min | gild:adjusted_med")
      ->capture_default_str();
  select->add_option("--k", sel.k, "Items to select")->capture_default_str();
  select->add_flag("--exact-farthest-pair", sel.exact_pair, "Adaptive GILD: start from the farthest pair");
  select->add_flag("--direct-kernel", sel.direct_kernel, "Fixed-bandwidth GILD: rank by plainly summed kernel values");
  select->add_option("-o,--output", sel.output, "JSON output (default: stdout)");
  select->callback([&] {
    action = [&] {
      const auto oracle = sel.catalog.load();
      GreedyOptions opts;
      opts.threads = g.threads;
      opts.exact_farthest_pair = sel.exact_pair;
      opts.direct_kernel = sel.direct_kernel;
      const auto result = greedy(oracle, ObjectiveSpec::parse(sel.objective), sel.k, opts);
      emit(selection_json(result, oracle, sel.k), sel.output, out);
      return kExitOk;
    };
  });

  // verify
  auto* verify = app.add_subcommand("verify", "Numeric checks of the approximation and limit results");
  struct {
    bool all = false, half = false, t31 = false, c32 = false, c33 = false, limits = false;
    std::size_t n = 8, claim33_n = 0, instances = 20, points = 10;
    double eps = 0.01;
    std::string output;
  } va;
  verify->add_flag("--all", va.all, "Run every check");
  verify->add_flag("--greedy-half", va.half, "Greedy reaches half the optimum (k = 3, 4, 5)");
  verify->add_flag("--theorem31", va.t31, "ILD of dispersion-optimal and greedy sets");
  verify->add_flag("--claim32", va.c32, "Tightness on the two-group construction");
  verify->add_flag("--claim33", va.c33, "Dispersion of ILD-optimal sets on the endpoint construction");
  verify->add_flag("--limits", va.limits, "GILD limits for large and small bandwidth");
  verify->add_option("--n", va.n, "Construction parameter for claim32 (and claim33 unless --claim33-n)")
      ->capture_default_str();
  verify->add_option("--claim33-n", va.claim33_n, "Construction parameter for claim33");
  verify->add_option("--eps", va.eps, "Epsilon for claim32")->capture_default_str();
  verify->add_option("--instances", va.instances, "Random instances per k")->capture_default_str();
  verify->add_option("--points", va.points, "Points per random instance")->capture_default_str();
  verify->add_option("-o,--output", va.output, "JSON output (default: stdout)");
  verify->callback([&] {
    action = [&] {
      const bool any = va.half || va.t31 || va.c32 || va.c33 || va.limits;
      const bool all = va.all || !any;
      json reports = json::array();
      bool passed = true;
      const auto instance = [&](std::size_t k, std::size_t i) {
        return DistanceOracle::euclidean(
            gen_uniform_cube(va.points, 2,
                             derive_seed(g.seed, "verify/" + std::to_string(k) + "/" + std::to_string(i))),
            CachePolicy::kFullMatrix);
      };
      const auto push = [&](const TheoremReport& r) {
        passed = passed && r.passed;
        reports.push_back(to_json(r));
      };
      if (all || va.half) {
        TheoremReport r;
        for (std::size_t k : {3, 4, 5}) {
          for (std::size_t i = 0; i < va.instances; ++i) r.merge(check_greedy_half(instance(k, i), k));
        }
        push(r);
      }
      if (all || va.t31) {
        TheoremReport r;
        for (std::size_t k : {3, 4, 5}) {
          for (std::size_t i = 0; i < va.instances; ++i) r.merge(check_theorem_31(instance(k, i), k));
        }
        r.merge(check_theorem_31(DistanceOracle::euclidean(gen_claim32(va.n, va.eps), CachePolicy::kFullMatrix), va.n / 2));
        push(r);
      }
      if (all || va.c32) push(check_claim_32(va.n, va.eps));
      if (all || va.c33) push(check_claim_33(va.claim33_n ? va.claim33_n : va.n));
      if (all || va.limits) {
        TheoremReport r = {"gild_limits", 0, 0.0, true, {}};
        json details = json::array();
        double worst = 0.0;
        for (std::size_t i = 0; i < va.instances; ++i) {
          const auto oracle = instance(0, i);
          const auto rep = check_gild_limits(oracle, all_items(oracle.size()));
          details.push_back(to_json(rep));
          worst = std::max({worst, rep.large_error / 1e-5, rep.small_error / 1e-3});
          ++r.instances_checked;
          r.add_margin(rep.converged ? 0.0 : -1.0);
        }
        r.quantities["worst_error_over_tolerance"] = worst;
        auto j = to_json(r);
        j["instances"] = details;
        passed = passed && r.passed;
        reports.push_back(j);
      }
      emit(json{{"passed", passed}, {"reports", reports}}, va.output, out);
      return passed ? kExitOk : kExitVerifyFailed;
    };
  });

  // compare
  auto* compare = app.add_subcommand("compare", "Relative scores between diversity objectives");
  struct {
    CatalogArgs catalog;
    std::vector<std::string> objectives{"ild", "disp", "gild:adjusted_med"};
    RelativeScoreOptions options;
    std::string out_dir = ".", dataset;
  } ca;
  ca.catalog.attach(compare);
  compare->add_option("--objectives", ca.objectives, "Objectives to compare")->delimiter(',')->capture_default_str();
  compare->add_option("--k-max", ca.options.k_max)->capture_default_str();
  compare->add_option("--random-seeds", ca.options.random_seeds, "Random subsets per k")->capture_default_str();
  compare->add_option("--out-dir", ca.out_dir)->capture_default_str();
  compare->add_option("--dataset", ca.dataset, "Dataset label for file names (default: input stem)");
  compare->callback([&] {
    action = [&] {
      const auto oracle = ca.catalog.load();
      ca.options.seed = derive_seed(g.seed, "compare");
      ca.options.threads = g.threads;
      const auto rep = relative_scores(oracle, parse_objectives(ca.objectives), ca.options);
      const auto stem = report_stem("relative_scores", ca.dataset.empty() ? ca.catalog.dataset() : ca.dataset, g.seed);
      fs::create_directories(ca.out_dir);
      write_json(fs::path(ca.out_dir) / (stem + ".json"), to_json(rep));
      write_csv(fs::path(ca.out_dir) / (stem + ".csv"), to_table(rep));
      return kExitOk;
    };
  });

  // sweep
  auto* sweep = app.add_subcommand("sweep", "ILD and dispersion of fixed-bandwidth GILD selections");
  struct {
    CatalogArgs catalog;
    SweepOptions options;
    std::vector<double> grid;
    bool explicit_grid = false;
    std::string out_dir = ".", dataset;
  } wa;
  wa.catalog.attach(sweep);
  sweep->add_option("--k", wa.options.k)->capture_default_str();
  sweep->add_option("--sigma-grid", wa.grid, "lo,hi,count (log-spaced); default 0.02,1,64")->delimiter(',');
  sweep->add_flag("--explicit-grid", wa.explicit_grid, "Read --sigma-grid as the list of values");
  sweep->add_flag("--direct-kernel", wa.options.direct_kernel, "Rank by plainly summed kernel values (shows rounding collapse)");
  sweep->add_option("--out-dir", wa.out_dir)->capture_default_str();
  sweep->add_option("--dataset", wa.dataset);
  sweep->callback([&] {
    action = [&] {
      const auto oracle = wa.catalog.load();
      wa.options.grid = parse_grid(wa.grid, wa.explicit_grid);
      wa.options.threads = g.threads;
      const auto rep = sigma_sweep(oracle, wa.options);
      const auto stem = report_stem("sigma_sweep", wa.dataset.empty() ? wa.catalog.dataset() : wa.dataset, g.seed);
      fs::create_directories(wa.out_dir);
      write_json(fs::path(wa.out_dir) / (stem + ".json"), to_json(rep));
      write_csv(fs::path(wa.out_dir) / (stem + ".csv"), to_table(rep));
      return kExitOk;
    };
  });

  // hist
  auto* hist = app.add_subcommand("hist", "Histogram of pairwise distances of a greedy selection");
  struct {
    CatalogArgs catalog;
    std::string objective = "ild", out_dir = ".", dataset;
    std::size_t k = 128, bins = 20;
  } ha;
  ha.catalog.attach(hist);
  hist->add_option("--objective", ha.objective)->capture_default_str();
  hist->add_option("--k", ha.k)->capture_default_str();
  hist->add_option("--bins", ha.bins)->capture_default_str();
  hist->add_option("--out-dir", ha.out_dir)->capture_default_str();
  hist->add_option("--dataset", ha.dataset);
  hist->callback([&] {
    action = [&] {
      const auto oracle = ha.catalog.load();
      GreedyOptions opts;
      opts.threads = g.threads;
      const auto spec = ObjectiveSpec::parse(ha.objective);
      const auto sel = greedy(oracle, spec, ha.k, opts);
      const auto h = pairwise_histogram(oracle, sel.items, ha.bins);
      std::string tag = spec.to_string();
      std::replace(tag.begin(), tag.end(), ':', '-');
      std::replace(tag.begin(), tag.end(), '=', '-');
      const auto stem =
          report_stem("hist-" + tag, ha.dataset.empty() ? ha.catalog.dataset() : ha.dataset, g.seed);
      fs::create_directories(ha.out_dir);
      auto j = to_json(h);
      j["objective"] = spec.to_string();
      j["k"] = ha.k;
      write_json(fs::path(ha.out_dir) / (stem + ".json"), j);
      write_csv(fs::path(ha.out_dir) / (stem + ".csv"), to_table(h));
      return kExitOk;
    };
  });

  // fit
  auto* fit = app.add_subcommand("fit", "Fit the item-item relevance model");
  struct {
    std::string train, validation, output, export_csv;
    std::vector<double> grid;
    std::size_t ndcg_k = 50, items = 0;
  } fa;
  fit->add_option("--train", fa.train)->required()->check(CLI::ExistingFile);
  fit->add_option("--validation", fa.validation, "Tune l2 on this split")->check(CLI::ExistingFile);
  fit->add_option("--l2", fa.grid, "l2 value or grid (default 1,10,100,500,1000)")->delimiter(',');
  fit->add_option("--ndcg-k", fa.ndcg_k, "Cutoff of the tuning metric")->capture_default_str();
  fit->add_option("--items", fa.items, "Item count (default: largest id + 1 across the inputs)");
  fit->add_option("-o,--output", fa.output, "Binary model file")->required();
  fit->add_option("--export-csv", fa.export_csv, "Also write the weights as row,col,weight CSV");
  fit->callback([&] {
    action = [&] {
      auto train = load_feedback(fa.train);
      std::optional<FeedbackMatrix> valid;
      if (!fa.validation.empty()) valid = load_feedback(fa.validation);
      std::size_t users = train.users(), items = std::max(train.items(), fa.items);
      if (valid) {
        users = std::max(users, valid->users());
        items = std::max(items, valid->items());
      }
      train = reshape(train, users, items);
      std::vector<double> grid = fa.grid.empty() ? kDefaultL2Grid : fa.grid;
      double l2 = grid.front();
      json summary;
      if (valid && grid.size() > 1) {
        const auto tuned = tune_l2(train, reshape(*valid, users, items), grid, fa.ndcg_k, g.threads);
        l2 = tuned.best_l2;
        json curve = json::array();
        for (const auto& [v, score] : tuned.curve) curve.push_back({{"l2", v}, {"ndcg", score}});
        summary["curve"] = curve;
      } else if (grid.size() > 1) {
        throw std::invalid_argument("an l2 grid needs --validation");
      }
      const auto model = fit_ease(train, l2);
      save_model(fa.output, model);
      if (!fa.export_csv.empty()) export_model_csv(fa.export_csv, model);
      summary["l2"] = l2;
      summary["items"] = model.items();
      out << summary.dump(2) << '\n';
      return kExitOk;
    };
  });

  // rerank
  auto* rerank = app.add_subcommand("rerank", "Relevance/diversity reranking for one user");
  struct {
    CatalogArgs catalog;
    std::string model, train, validation, objective = "disp", output;
    std::size_t user = 0, k = 50;
    double lambda = 0.5;
    bool minmax = false;
  } ra;
  ra.catalog.attach(rerank);
  rerank->add_option("--model", ra.model)->required()->check(CLI::ExistingFile);
  rerank->add_option("--train", ra.train, "History used for relevance and masking")->required()->check(CLI::ExistingFile);
  rerank->add_option("--validation", ra.validation, "Also mask these interactions")->check(CLI::ExistingFile);
  rerank->add_option("--user", ra.user)->required();
  rerank->add_option("--lambda", ra.lambda)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  rerank->add_option("--objective", ra.objective)->capture_default_str();
  rerank->add_option("--k", ra.k)->capture_default_str();
  rerank->add_flag("--minmax-relevance", ra.minmax, "Scale pool relevance to [0, 1] before mixing");
  rerank->add_option("-o,--output", ra.output, "JSON output (default: stdout)");
  rerank->callback([&] {
    action = [&] {
      const auto oracle = ra.catalog.load();
      const auto model = load_model(ra.model);
      if (model.items() != oracle.size()) throw DataError("model and catalog disagree on the item count");
      const auto train = load_feedback(ra.train);
      if (ra.user >= train.users()) throw std::out_of_range("unknown user " + std::to_string(ra.user));
      std::vector<char> seen(oracle.size(), 0);
      std::vector<ItemId> history;
      for (const auto& [u, i] : train.entries()) {
        if (u != ra.user) continue;
        if (i >= oracle.size()) throw DataError("training item outside the catalog");
        history.push_back(i);
        seen[i] = 1;
      }
      if (!ra.validation.empty()) {
        for (const auto& [u, i] : load_feedback(ra.validation).entries()) {
          if (u == ra.user && i < seen.size()) seen[i] = 1;
        }
      }
      GreedyOptions opts;
      opts.threads = g.threads;
      for (ItemId i = 0; i < oracle.size(); ++i) {
        if (!seen[i]) opts.pool.push_back(i);
      }
      auto relevance = score_history(model, history);
      for (ItemId i = 0; i < oracle.size(); ++i) {
        if (seen[i]) relevance[i] = -std::numeric_limits<double>::infinity();
      }
      if (ra.minmax && !opts.pool.empty()) {
        double lo = relevance[opts.pool.front()], hi = lo;
        for (ItemId i : opts.pool) {
          lo = std::min(lo, relevance[i]);
          hi = std::max(hi, relevance[i]);
        }
        for (ItemId i : opts.pool) relevance[i] = hi > lo ? (relevance[i] - lo) / (hi - lo) : 0.0;
      }
      RerankConfig rc{relevance, ra.lambda, ObjectiveSpec::parse(ra.objective), std::min(ra.k, opts.pool.size())};
      const auto result = greedy_rerank(oracle, rc, opts);
      auto j = selection_json(result, oracle, rc.k);
      j["user"] = ra.user;
      j["lambda"] = ra.lambda;
      j["minmax_relevance"] = ra.minmax;
      emit(j, ra.output, out);
      return kExitOk;
    };
  });

  // eval
  auto* eval = app.add_subcommand("eval", "nDCG, nILD and ndisp over a lambda grid");
  struct {
    CatalogArgs catalog;
    std::string model, train, validation, test, out_dir = ".", dataset;
    std::vector<std::string> objectives{"ild", "disp", "gild:adjusted_med"};
    EvalConfig config;
  } va2;
  va2.catalog.attach(eval);
  eval->add_option("--model", va2.model)->required()->check(CLI::ExistingFile);
  eval->add_option("--train", va2.train)->required()->check(CLI::ExistingFile);
  eval->add_option("--validation", va2.validation)->required()->check(CLI::ExistingFile);
  eval->add_option("--test", va2.test)->required()->check(CLI::ExistingFile);
  eval->add_option("--objectives", va2.objectives)->delimiter(',')->capture_default_str();
  eval->add_option("--lambdas", va2.config.lambdas)->delimiter(',');
  eval->add_option("--k", va2.config.k)->capture_default_str();
  eval->add_option("--max-users", va2.config.max_users, "Evaluate only the first users (0 = all)");
  eval->add_option("--out-dir", va2.out_dir)->capture_default_str();
  eval->add_option("--dataset", va2.dataset);
  eval->callback([&] {
    action = [&] {
      const auto oracle = va2.catalog.load();
      const auto model = load_model(va2.model);
      auto train = load_feedback(va2.train);
      auto valid = load_feedback(va2.validation);
      auto test = load_feedback(va2.test);
      const std::size_t users = std::max({train.users(), valid.users(), test.users()});
      const std::size_t items = oracle.size();
      train = reshape(train, users, items);
      valid = reshape(valid, users, items);
      test = reshape(test, users, items);
      va2.config.objectives = parse_objectives(va2.objectives);
      va2.config.threads = g.threads;
      const auto rep = eval_rerank(oracle, model, train, valid, test, va2.config);
      const std::string dataset = va2.dataset.empty() ? va2.catalog.dataset() : va2.dataset;
      fs::create_directories(va2.out_dir);
      write_json(fs::path(va2.out_dir) / (report_stem("eval", dataset, g.seed) + ".json"), to_json(rep, va2.config));
      write_csv(fs::path(va2.out_dir) / (report_stem("eval", dataset, g.seed) + ".csv"), to_table(rep));
      write_csv(fs::path(va2.out_dir) / (report_stem("eval-users", dataset, g.seed) + ".csv"),
                per_user_table(rep, va2.config));
      return kExitOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    return action ? action() : kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace divsel
