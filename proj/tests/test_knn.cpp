// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "ggospa/error.hpp"
#include "ggospa/knn.hpp"
#include "ggospa/random.hpp"
#include "oracle.hpp"

using namespace ggospa;
namespace fs = std::filesystem;

namespace {

FamilyParams fig_params() {
  FamilyParams p;
  p.c = 3;
  p.p = 1;
  p.epsilon = 1;
  p.beta = 0.3;
  p.eta = 0.7;
  return p;
}

// Two classes of edgeless graphs: tight clouds near the origin and far away.
Dataset separable(std::size_t per_class, std::uint64_t seed) {
  Rng rng(seed);
  Dataset ds;
  ds.name = "synthetic";
  for (std::size_t k = 0; k < 2 * per_class; ++k) {
    const int label = static_cast<int>(k % 2);
    Graph g = oracle::random_graph(rng, 2 + rng.index(3), 0.0, 2, 0.2);
    if (label == 1) {
      std::vector<Attribute> attrs = g.attributes();
      for (auto& a : attrs) a[0] += 50.0;
      g = Graph(attrs, g.edges());
    }
    ds.graphs.push_back(g);
    ds.labels.push_back(label);
  }
  return ds;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ggospa_knn_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Pairwise, TrivialLists) {
  const Graph g = make_graph({{0, 0}, {1, 1}}, {{0, 1}});
  const std::vector<Graph> one{g};
  const auto m1 = pairwise_distances(one, fig_params(), Backend::exact);
  EXPECT_EQ(m1.values, Eigen::MatrixXd::Zero(1, 1));
  const std::vector<Graph> two{g, g};
  const auto m2 = pairwise_distances(two, fig_params(), Backend::relaxed);
  EXPECT_TRUE(m2.values.isZero(1e-12));
  EXPECT_TRUE(m2.failures.empty());
}

TEST(Pairwise, RelaxedBelowIntegerSymmetricZeroDiagonal) {
  Rng rng(60);
  std::vector<Graph> graphs;
  for (int k = 0; k < 4; ++k) graphs.push_back(oracle::random_graph(rng, 3 + rng.index(3), 0.5));
  PairwiseOptions opts;
  opts.threads = 2;
  const auto relaxed = pairwise_distances(graphs, fig_params(), Backend::relaxed, {}, opts);
  const auto integer = pairwise_distances(graphs, fig_params(), Backend::integer, {}, opts);
  const auto exact = pairwise_distances(graphs, fig_params(), Backend::exact, {}, opts);
  for (const auto* m : {&relaxed, &integer, &exact}) {
    EXPECT_TRUE(m->values.isApprox(m->values.transpose()));
    EXPECT_EQ(m->values.diagonal().cwiseAbs().maxCoeff(), 0.0);
  }
  EXPECT_TRUE((relaxed.values.array() <= integer.values.array() + 1e-9).all());
  EXPECT_TRUE(integer.values.isApprox(exact.values, 1e-9));
}

TEST(Pairwise, GraphGospaCornerMatchesIndependentGraphGospa) {
  Rng rng(61);
  std::vector<Graph> graphs;
  for (int k = 0; k < 5; ++k) graphs.push_back(oracle::random_graph(rng, rng.index(5), 0.5));
  FamilyParams prm = fig_params();
  prm.beta = 0.0;
  prm.eta = 0.5;
  prm.gospa_compat = true;
  const auto m = pairwise_distances(graphs, prm, Backend::exact);
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    for (std::size_t j = 0; j < graphs.size(); ++j) {
      EXPECT_NEAR(m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                  oracle::graph_gospa_value_p(graphs[i], graphs[j], prm.c, 1.0, prm.epsilon), 1e-9);
    }
  }
}

TEST(Pairwise, FailuresAreReported) {
  const Graph big(std::vector<Attribute>(10, Attribute{0.0}), {});
  const Graph small = make_graph({{0.0}}, {});
  const std::vector<Graph> graphs{small, big, small};
  const auto m = pairwise_distances(graphs, fig_params(), Backend::exact);
  EXPECT_EQ(m.failures, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}}));
  EXPECT_TRUE(std::isnan(m.values(0, 1)));
  EXPECT_TRUE(std::isnan(m.values(2, 1)));
  EXPECT_EQ(m.values(0, 2), 0.0);
}

TEST(DistanceCache, RoundTripThroughDisk) {
  Rng rng(62);
  std::vector<Graph> graphs;
  for (int k = 0; k < 4; ++k) graphs.push_back(oracle::random_graph(rng, 3, 0.5));
  PairwiseOptions opts;
  opts.cache_dir = scratch("roundtrip");
  const auto key = dataset_hash(graphs);
  const std::vector<std::size_t> rows{0, 1}, cols{2, 3};
  Eigen::MatrixXd first;
  {
    DistanceCache cache(graphs, key, fig_params(), Backend::exact, {}, opts);
    ASSERT_TRUE(cache.path().has_value());
    EXPECT_FALSE(fs::exists(*cache.path()));
    cache.fill(rows, cols);
    EXPECT_TRUE(fs::exists(*cache.path()));
    first = cache.values();
  }
  EXPECT_TRUE(std::isnan(first(0, 1)));
  EXPECT_FALSE(std::isnan(first(0, 2)));
  {
    DistanceCache cache(graphs, key, fig_params(), Backend::exact, {}, opts);
    for (Eigen::Index i = 0; i < 4; ++i) {
      for (Eigen::Index j = 0; j < 4; ++j) {
        if (std::isnan(first(i, j))) {
          EXPECT_TRUE(std::isnan(cache.at(i, j)));
        } else {
          EXPECT_EQ(cache.at(i, j), first(i, j));
        }
      }
    }
  }
  // Different parameters or backend use a different file.
  FamilyParams other = fig_params();
  other.c = 4;
  DistanceCache c2(graphs, key, other, Backend::exact, {}, opts);
  DistanceCache c3(graphs, key, fig_params(), Backend::integer, {}, opts);
  EXPECT_NE(c2.path(), DistanceCache(graphs, key, fig_params(), Backend::exact, {}, opts).path());
  EXPECT_NE(c3.path(), c2.path());
  EXPECT_TRUE(std::isnan(c2.at(0, 2)));
  fs::remove_all(*opts.cache_dir);
}

TEST(DistanceCache, ForeignFileIsIgnored) {
  const std::vector<Graph> graphs{make_graph({{0.0}}, {}), make_graph({{1.0}}, {})};
  PairwiseOptions opts;
  opts.cache_dir = scratch("foreign");
  const auto key = dataset_hash(graphs);
  fs::path path;
  {
    DistanceCache cache(graphs, key, fig_params(), Backend::exact, {}, opts);
    path = *cache.path();
    fs::create_directories(path.parent_path());
    std::ofstream(path) << "garbage\n";
  }
  DistanceCache cache(graphs, key, fig_params(), Backend::exact, {}, opts);
  EXPECT_TRUE(std::isnan(cache.at(0, 1)));
  const std::vector<std::size_t> all{0, 1};
  cache.fill(all, all);
  EXPECT_DOUBLE_EQ(cache.at(0, 1), 1.0);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "# ggospa-distance-cache v1");
  fs::remove_all(*opts.cache_dir);
}

TEST(DatasetHash, SensitiveToContent) {
  const std::vector<Graph> a{make_graph({{0.0}}, {})};
  const std::vector<Graph> b{make_graph({{0.5}}, {})};
  const std::vector<int> l0{0}, l1{1};
  EXPECT_EQ(dataset_hash(a, l0), dataset_hash(a, l0));
  EXPECT_NE(dataset_hash(a, l0), dataset_hash(b, l0));
  EXPECT_NE(dataset_hash(a, l0), dataset_hash(a, l1));
}

TEST(KnnClassify, Examples) {
  const std::vector<double> one{2.5};
  const std::vector<int> one_label{7};
  EXPECT_EQ(knn_classify(one, one_label, 1), 7);

  const std::vector<double> d{0.1, 0.2, 0.3, 5.0};
  const std::vector<int> l{1, 1, 2, 2};
  EXPECT_EQ(knn_classify(d, l, 3), 1);

  const std::vector<double> exact{3.0, 0.0, 1.0};
  const std::vector<int> el{4, 9, 4};
  EXPECT_EQ(knn_classify(exact, el, 1), 9);
}

TEST(KnnClassify, TieRules) {
  // k-th neighbour distance tie: lower index wins.
  const std::vector<double> d{1.0, 1.0};
  EXPECT_EQ(knn_classify(d, std::vector<int>{3, 5}, 1), 3);
  // Vote tie: smaller summed distance wins, then the smaller label.
  const std::vector<double> v{0.5, 1.0, 0.2, 0.4};
  EXPECT_EQ(knn_classify(v, std::vector<int>{1, 1, 2, 2}, 4), 2);
  const std::vector<double> w{1.0, 1.0};
  EXPECT_EQ(knn_classify(w, std::vector<int>{8, 6}, 2), 6);
}

TEST(KnnClassify, Errors) {
  const std::vector<double> d{1.0, 2.0};
  const std::vector<int> l{0, 1};
  EXPECT_THROW(knn_classify({}, {}, 1), InvalidParams);
  EXPECT_THROW(knn_classify(d, std::vector<int>{0}, 1), InvalidParams);
  EXPECT_THROW(knn_classify(d, l, 0), InvalidParams);
  EXPECT_THROW(knn_classify(d, l, 3), InvalidParams);
  const std::vector<double> bad{1.0, std::nan("")};
  EXPECT_THROW(knn_classify(bad, l, 1), InvalidParams);
}

TEST(KnnClassify, InvariantToTrainingOrder) {
  Rng rng(63);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.index(12);
    std::vector<double> d(n);
    std::vector<int> l(n);
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = rng.uniform(0, 10);
      l[i] = static_cast<int>(rng.index(3));
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t k = n; k > 1; --k) std::swap(perm[k - 1], perm[rng.index(k)]);
    std::vector<double> pd(n);
    std::vector<int> pl(n);
    for (std::size_t i = 0; i < n; ++i) {
      pd[perm[i]] = d[i];
      pl[perm[i]] = l[i];
    }
    const std::size_t k = 1 + rng.index(n);
    EXPECT_EQ(knn_classify(d, l, k), knn_classify(pd, pl, k));
  }
}

TEST(Splits, StratifiedSplit) {
  std::vector<int> labels;
  for (int i = 0; i < 40; ++i) labels.push_back(i % 4 == 0 ? 1 : 0);  // 10 vs 30
  const auto [train, test] = stratified_split(labels, 0.2, 5);
  EXPECT_EQ(test.size(), 8u);
  EXPECT_EQ(train.size(), 32u);
  std::map<int, int> test_counts;
  for (auto i : test) ++test_counts[labels[i]];
  EXPECT_EQ(test_counts[1], 2);
  EXPECT_EQ(test_counts[0], 6);
  std::set<std::size_t> all(train.begin(), train.end());
  for (auto i : test) EXPECT_TRUE(all.insert(i).second);
  EXPECT_EQ(all.size(), 40u);
  EXPECT_TRUE(std::is_sorted(train.begin(), train.end()));
  EXPECT_EQ(stratified_split(labels, 0.2, 5), stratified_split(labels, 0.2, 5));
  EXPECT_NE(stratified_split(labels, 0.2, 5).second, stratified_split(labels, 0.2, 6).second);
  EXPECT_THROW(stratified_split(labels, 0.0, 1), InvalidParams);
}

TEST(Splits, StratifiedFolds) {
  std::vector<int> labels;
  for (int i = 0; i < 23; ++i) labels.push_back(i < 8 ? 1 : 0);
  std::vector<std::size_t> items(23);
  std::iota(items.begin(), items.end(), 0);
  const auto folds = stratified_folds(labels, items, 5, 3);
  ASSERT_EQ(folds.size(), 5u);
  std::set<std::size_t> seen;
  for (const auto& f : folds) {
    EXPECT_TRUE(f.size() == 4 || f.size() == 5);
    int ones = 0;
    for (auto i : f) {
      EXPECT_TRUE(seen.insert(i).second);
      ones += labels[i];
    }
    EXPECT_TRUE(ones == 1 || ones == 2);
  }
  EXPECT_EQ(seen.size(), 23u);
  EXPECT_THROW(stratified_folds(labels, items, 1, 3), InvalidParams);
  const std::vector<std::size_t> few{0, 1, 2, 10, 11, 12, 13, 14};
  EXPECT_THROW(stratified_folds(labels, few, 5, 3), InvalidParams);
}

TEST(RandomSearch, SeparableSetIsClassifiedPerfectly) {
  const Dataset ds = separable(15, 64);
  SearchSpace space;
  space.trials = 3;
  SearchOptions opts;
  opts.backend = Backend::exact;
  opts.seed = 4;
  const auto r = random_search_cv(ds, space, opts);
  EXPECT_EQ(r.trials.size(), 3u);
  EXPECT_DOUBLE_EQ(r.cv_accuracy, 1.0);
  EXPECT_DOUBLE_EQ(r.test_accuracy, 1.0);
  EXPECT_EQ(r.test.size(), 6u);
  for (const auto& t : r.trials) {
    EXPECT_NO_THROW(validate(t.params, Backend::exact));
    EXPECT_TRUE(t.k == 1 || t.k == 3 || t.k == 5);
  }
}

TEST(RandomSearch, SingleTrialAndRelaxedSampling) {
  const Dataset ds = separable(10, 65);
  SearchSpace space;
  space.trials = 1;
  SearchOptions opts;
  opts.backend = Backend::relaxed;
  const auto r = random_search_cv(ds, space, opts);
  ASSERT_EQ(r.trials.size(), 1u);
  EXPECT_EQ(r.best_trial, 0u);
  EXPECT_EQ(r.best_params, r.trials[0].params);
  EXPECT_EQ(r.best_k, r.trials[0].k);
  EXPECT_GE(r.best_params.eta, 0.5);
  EXPECT_LE(r.best_params.beta, r.best_params.eta);

  const std::string csv = search_csv(r);
  EXPECT_EQ(csv.rfind("trial,c,epsilon,beta,eta,k,cv_accuracy,test_accuracy\n0,", 0), 0u);
  EXPECT_NE(csv.find("\nbest,"), std::string::npos);
}

TEST(RandomSearch, DeterministicAndCacheTransparent) {
  const Dataset ds = separable(8, 66);
  SearchSpace space;
  space.trials = 2;
  SearchOptions opts;
  opts.backend = Backend::exact;
  opts.folds = 3;
  const std::string plain = search_csv(random_search_cv(ds, space, opts));
  opts.pairwise.cache_dir = scratch("search");
  opts.pairwise.threads = 2;
  const std::string cold = search_csv(random_search_cv(ds, space, opts));
  const std::string warm = search_csv(random_search_cv(ds, space, opts));
  EXPECT_EQ(plain, cold);
  EXPECT_EQ(plain, warm);
  fs::remove_all(*opts.pairwise.cache_dir);
}

TEST(RandomSearch, FailuresDisqualifyTrials) {
  Dataset ds = separable(6, 67);
  ds.graphs[0] = Graph(std::vector<Attribute>(10, Attribute{0.0, 0.0}), {});
  SearchSpace space;
  space.trials = 2;
  SearchOptions opts;
  opts.backend = Backend::exact;
  opts.folds = 2;
  opts.test_fraction = 0.2;
  // Graph 0 lands in either split; both paths must surface the failure.
  try {
    const auto r = random_search_cv(ds, space, opts);
    FAIL() << "expected a failure, got test accuracy " << r.test_accuracy;
  } catch (const SolverError&) {
  }
}

TEST(RandomSearch, InvalidSpace) {
  const Dataset ds = separable(6, 68);
  SearchSpace space;
  space.trials = 0;
  EXPECT_THROW(random_search_cv(ds, space, {}), InvalidParams);
  space.trials = 1;
  space.eta = {0.0, 0.4};
  SearchOptions opts;
  opts.backend = Backend::relaxed;
  EXPECT_THROW(random_search_cv(ds, space, opts), InvalidParams);
}
