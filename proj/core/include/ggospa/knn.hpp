// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ggospa/distance.hpp"
#include "ggospa/graph.hpp"
#include "ggospa/graph_io.hpp"
#include "ggospa/params.hpp"

namespace ggospa {

/// Symmetric matrix of family distances. Entries that could not be computed
/// hold NaN and are listed in `failures`.
struct DistanceMatrix {
  Eigen::MatrixXd values;
  std::vector<std::pair<std::size_t, std::size_t>> failures;
};

struct PairwiseOptions {
  std::size_t threads = 1;
  DistanceOptions distance;
  /// Directory for on-disk matrix caches; disabled when unset.
  std::optional<std::filesystem::path> cache_dir;
};

/// Hash of the graphs and labels, used to key distance caches.
std::uint64_t dataset_hash(std::span<const Graph> graphs,
                           std::span<const int> labels = {});

/// Lazily filled distance matrix over a fixed graph list, optionally backed
/// by a cache file. Unknown entries are NaN on disk and in memory.
///
/// Cache format (text): a `# ggospa-distance-cache v1` line, then
/// `key <hex>`, `dataset <hex>`, `params c p epsilon beta eta compat`,
/// `backend <name>`, `n <size>`, followed by n rows of n entries, each a
/// %.17g number, `nan` (not computed) or `fail` (backend failure).
class DistanceCache {
 public:
  DistanceCache(std::span<const Graph> graphs, std::uint64_t dataset_key,
                const FamilyParams& params, Backend backend,
                const BaseMetricSpec& spec, const PairwiseOptions& options);

  /// Computes every missing entry (i, j) with i in rows, j in cols.
  void fill(std::span<const std::size_t> rows,
            std::span<const std::size_t> cols);
  double at(std::size_t i, std::size_t j) const { return values_(i, j); }
  bool failed(std::size_t i, std::size_t j) const;
  const Eigen::MatrixXd& values() const { return values_; }
  std::vector<std::pair<std::size_t, std::size_t>> failures() const;
  std::optional<std::filesystem::path> path() const { return path_; }

 private:
  void load();
  void save() const;

  std::span<const Graph> graphs_;
  FamilyParams params_;
  Backend backend_;
  BaseMetricSpec spec_;
  PairwiseOptions options_;
  std::uint64_t dataset_key_;
  Eigen::MatrixXd values_;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> failed_;
  std::optional<std::filesystem::path> path_;
};

DistanceMatrix pairwise_distances(std::span<const Graph> graphs,
                                  const FamilyParams& params, Backend backend,
                                  const BaseMetricSpec& spec = {},
                                  const PairwiseOptions& options = {});

/// Majority label among the k nearest training items. Distance ties at the
/// k-th neighbour go to the lower training index; label ties go to the
/// smaller summed distance, then the smaller label.
int knn_classify(std::span<const double> distances, std::span<const int> labels,
                 std::size_t k);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

struct SearchSpace {
  Interval c{1.0, 10.0};
  Interval epsilon{0.1, 5.0};
  Interval beta{0.0, 1.0};
  Interval eta{0.0, 1.0};
  std::vector<std::size_t> k_choices{1, 3, 5};
  double p = 1.0;
  std::size_t trials = 30;
  bool gospa_compat = false;
};

struct SearchOptions {
  std::size_t folds = 5;
  double test_fraction = 0.2;
  std::uint64_t seed = 1;
  Backend backend = Backend::relaxed;
  BaseMetricSpec spec;
  PairwiseOptions pairwise;
};

struct TrialResult {
  std::size_t trial = 0;
  FamilyParams params;
  std::size_t k = 1;
  double cv_accuracy = 0.0;
  bool failed = false;  ///< a distance failed; the trial is disqualified
};

struct SearchResult {
  std::vector<TrialResult> trials;
  std::size_t best_trial = 0;
  FamilyParams best_params;
  std::size_t best_k = 1;
  double cv_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Stratified train/test split of label indices.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    std::span<const int> labels, double test_fraction, std::uint64_t seed);

/// Stratified folds over `items` (indices into labels). Throws InvalidParams
/// when a class has fewer members than folds.
std::vector<std::vector<std::size_t>> stratified_folds(
    std::span<const int> labels, std::span<const std::size_t> items,
    std::size_t folds, std::uint64_t seed);

/// Random hyperparameter search with k-fold cross-validation on the
/// training split, then held-out accuracy of the best tuple.
SearchResult random_search_cv(const Dataset& dataset, const SearchSpace& space,
                              const SearchOptions& options);

std::string search_csv(const SearchResult& result);

}  // namespace ggospa
