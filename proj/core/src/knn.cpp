// SPDX-License-Identifier: Apache-2.0

#include "ggospa/knn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "ggospa/error.hpp"
#include "ggospa/random.hpp"
#include "parallel.hpp"

namespace ggospa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  void u64(std::uint64_t v) { bytes(&v, sizeof v); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

std::string hex(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

std::uint64_t cache_key(std::uint64_t dataset_key, const FamilyParams& params,
                        Backend backend, const BaseMetricSpec& spec) {
  Fnv1a h;
  h.u64(dataset_key);
  h.f64(params.c);
  h.f64(params.p);
  h.f64(params.epsilon);
  h.f64(params.beta);
  h.f64(params.eta);
  h.u64(params.gospa_compat ? 1 : 0);
  h.u64(static_cast<std::uint64_t>(backend));
  h.u64(static_cast<std::uint64_t>(spec.kind));
  h.f64(spec.delta ? *spec.delta : kNaN);
  return h.value();
}

std::string params_line(const FamilyParams& p) {
  return "params " + g17(p.c) + ' ' + g17(p.p) + ' ' + g17(p.epsilon) + ' ' +
         g17(p.beta) + ' ' + g17(p.eta) + ' ' + (p.gospa_compat ? "1" : "0");
}

}  // namespace

std::uint64_t dataset_hash(std::span<const Graph> graphs,
                           std::span<const int> labels) {
  Fnv1a h;
  h.u64(graphs.size());
  for (const auto& g : graphs) {
    h.u64(g.num_nodes());
    h.u64(g.dimension());
    for (const auto& a : g.attributes()) {
      for (double v : a) h.f64(v);
    }
    h.u64(g.num_edges());
    for (const auto& [i, j] : g.edges()) {
      h.u64(i);
      h.u64(j);
    }
  }
  h.u64(labels.size());
  for (int l : labels) h.u64(static_cast<std::uint64_t>(static_cast<std::int64_t>(l)));
  return h.value();
}

DistanceCache::DistanceCache(std::span<const Graph> graphs,
                             std::uint64_t dataset_key,
                             const FamilyParams& params, Backend backend,
                             const BaseMetricSpec& spec,
                             const PairwiseOptions& options)
    : graphs_(graphs),
      params_(params),
      backend_(backend),
      spec_(spec),
      options_(options),
      dataset_key_(dataset_key) {
  validate(params, backend);
  const auto n = static_cast<Eigen::Index>(graphs.size());
  values_ = Eigen::MatrixXd::Constant(n, n, kNaN);
  values_.diagonal().setZero();
  failed_ = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, false);
  if (options.cache_dir) {
    path_ = *options.cache_dir /
            (hex(cache_key(dataset_key, params, backend, spec)) + ".ggdist");
    load();
  }
}

bool DistanceCache::failed(std::size_t i, std::size_t j) const {
  return failed_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

std::vector<std::pair<std::size_t, std::size_t>> DistanceCache::failures() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (Eigen::Index i = 0; i < failed_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < failed_.cols(); ++j) {
      if (failed_(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

void DistanceCache::fill(std::span<const std::size_t> rows,
                         std::span<const std::size_t> cols) {
  const std::size_t n = graphs_.size();
  std::vector<std::pair<std::size_t, std::size_t>> todo;
  for (std::size_t i : rows) {
    for (std::size_t j : cols) {
      if (i >= n || j >= n) throw InvalidParams("distance index out of range");
      if (i == j) continue;
      const auto a = static_cast<Eigen::Index>(std::min(i, j));
      const auto b = static_cast<Eigen::Index>(std::max(i, j));
      if (std::isnan(values_(a, b)) && !failed_(a, b)) todo.emplace_back(a, b);
    }
  }
  std::sort(todo.begin(), todo.end());
  todo.erase(std::unique(todo.begin(), todo.end()), todo.end());
  if (todo.empty()) return;

  std::vector<double> result(todo.size(), kNaN);
  detail::parallel_for(todo.size(), options_.threads, [&](std::size_t k) {
    const auto [i, j] = todo[k];
    try {
      const auto r = family_distance(graphs_[i], graphs_[j], params_, backend_,
                                     spec_, options_.distance);
      if (r.status == LpStatus::optimal) result[k] = r.value;
    } catch (const SolverError&) {
    } catch (const SizeGuardExceeded&) {
    }
  });
  for (std::size_t k = 0; k < todo.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(todo[k].first);
    const auto j = static_cast<Eigen::Index>(todo[k].second);
    values_(i, j) = values_(j, i) = result[k];
    failed_(i, j) = failed_(j, i) = std::isnan(result[k]);
  }
  if (path_) save();
}

void DistanceCache::load() {
  std::ifstream in(*path_);
  if (!in) return;
  std::string line;
  const std::uint64_t key = cache_key(dataset_key_, params_, backend_, spec_);
  const std::string expected[] = {
      "# ggospa-distance-cache v1",
      "key " + hex(key),
      "dataset " + hex(dataset_key_),
      params_line(params_),
      std::string("backend ") + to_string(backend_),
      "n " + std::to_string(graphs_.size()),
  };
  for (const auto& e : expected) {
    if (!std::getline(in, line) || line != e) return;  // stale or foreign file
  }
  const auto n = values_.rows();
  Eigen::MatrixXd values(n, n);
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> failed(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      std::string tok;
      if (!(in >> tok)) return;
      failed(i, j) = tok == "fail";
      if (tok == "fail" || tok == "nan") {
        values(i, j) = kNaN;
      } else {
        try {
          values(i, j) = std::stod(tok);
        } catch (const std::exception&) {
          return;
        }
      }
    }
  }
  values_ = std::move(values);
  failed_ = std::move(failed);
}

void DistanceCache::save() const {
  std::filesystem::create_directories(path_->parent_path());
  const auto tmp = std::filesystem::path(path_->string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot write distance cache " + tmp.string());
    out << "# ggospa-distance-cache v1\n"
        << "key " << hex(cache_key(dataset_key_, params_, backend_, spec_)) << '\n'
        << "dataset " << hex(dataset_key_) << '\n'
        << params_line(params_) << '\n'
        << "backend " << to_string(backend_) << '\n'
        << "n " << graphs_.size() << '\n';
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
      for (Eigen::Index j = 0; j < values_.cols(); ++j) {
        if (j) out << ' ';
        if (failed_(i, j)) {
          out << "fail";
        } else if (std::isnan(values_(i, j))) {
          out << "nan";
        } else {
          out << g17(values_(i, j));
        }
      }
      out << '\n';
    }
    if (!out) throw Error("cannot write distance cache " + tmp.string());
  }
  std::filesystem::rename(tmp, *path_);
}

DistanceMatrix pairwise_distances(std::span<const Graph> graphs,
                                  const FamilyParams& params, Backend backend,
                                  const BaseMetricSpec& spec,
                                  const PairwiseOptions& options) {
  DistanceCache cache(graphs, dataset_hash(graphs), params, backend, spec, options);
  std::vector<std::size_t> all(graphs.size());
  std::iota(all.begin(), all.end(), 0);
  cache.fill(all, all);
  return {cache.values(), cache.failures()};
}

int knn_classify(std::span<const double> distances, std::span<const int> labels,
                 std::size_t k) {
  if (distances.empty()) throw InvalidParams("knn needs a nonempty training set");
  if (distances.size() != labels.size()) {
    throw InvalidParams("knn distances and labels differ in length");
  }
  if (k < 1 || k > distances.size()) {
    throw InvalidParams("knn requires 1 <= k <= number of training items");
  }
  for (double d : distances) {
    if (!std::isfinite(d)) throw InvalidParams("knn distances must be finite");
  }
  std::vector<std::size_t> order(distances.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                    order.end(), [&](std::size_t a, std::size_t b) {
                      if (distances[a] != distances[b]) return distances[a] < distances[b];
                      return a < b;
                    });
  std::map<int, std::pair<std::size_t, double>> votes;  // label -> (count, sum)
  for (std::size_t r = 0; r < k; ++r) {
    auto& v = votes[labels[order[r]]];
    ++v.first;
    v.second += distances[order[r]];
  }
  int best = votes.begin()->first;
  auto best_vote = votes.begin()->second;
  for (const auto& [label, vote] : votes) {
    if (vote.first > best_vote.first ||
        (vote.first == best_vote.first && vote.second < best_vote.second)) {
      best = label;
      best_vote = vote;
    }
  }
  return best;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    std::span<const int> labels, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw InvalidParams("test fraction must lie in (0, 1)");
  }
  std::map<int, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < labels.size(); ++i) classes[labels[i]].push_back(i);
  Rng rng(seed);
  std::vector<std::size_t> train, test;
  for (auto& [label, members] : classes) {
    for (std::size_t i = members.size(); i > 1; --i) {
      std::swap(members[i - 1], members[rng.index(i)]);
    }
    auto n_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(members.size())));
    n_test = std::min(n_test, members.size() - 1);
    test.insert(test.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_test));
    train.insert(train.end(), members.begin() + static_cast<std::ptrdiff_t>(n_test), members.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {train, test};
}

std::vector<std::vector<std::size_t>> stratified_folds(
    std::span<const int> labels, std::span<const std::size_t> items,
    std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw InvalidParams("cross-validation needs at least 2 folds");
  std::map<int, std::vector<std::size_t>> classes;
  for (std::size_t i : items) {
    if (i >= labels.size()) throw InvalidParams("fold item out of range");
    classes[labels[i]].push_back(i);
  }
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> out(folds);
  std::size_t next = 0;
  for (auto& [label, members] : classes) {
    if (members.size() < folds) {
      throw InvalidParams("class " + std::to_string(label) + " has " +
                          std::to_string(members.size()) + " items, fewer than " +
                          std::to_string(folds) + " folds");
    }
    for (std::size_t i = members.size(); i > 1; --i) {
      std::swap(members[i - 1], members[rng.index(i)]);
    }
    // Round-robin, continuing where the previous class stopped so fold sizes
    // stay balanced.
    for (std::size_t m : members) {
      out[next].push_back(m);
      next = (next + 1) % folds;
    }
  }
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

namespace {

FamilyParams sample_params(const SearchSpace& space, Backend backend, Rng& rng) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    FamilyParams p;
    p.p = space.p;
    p.gospa_compat = space.gospa_compat;
    p.c = rng.uniform(space.c.low, space.c.high);
    p.epsilon = rng.uniform(space.epsilon.low, space.epsilon.high);
    p.beta = rng.uniform(space.beta.low, space.beta.high);
    p.eta = rng.uniform(space.eta.low, space.eta.high);
    try {
      validate(p, backend);
      return p;
    } catch (const InvalidParams&) {
    }
  }
  throw InvalidParams("search space admits no valid parameter tuple");
}

void check_space(const SearchSpace& space) {
  for (const Interval* iv : {&space.c, &space.epsilon, &space.beta, &space.eta}) {
    if (!(iv->low <= iv->high)) throw InvalidParams("search interval is empty");
  }
  if (space.k_choices.empty()) throw InvalidParams("no k choices in search space");
  if (space.trials < 1) throw InvalidParams("at least one trial is needed");
}

double accuracy(const DistanceCache& cache, std::span<const int> labels,
                std::span<const std::size_t> queries,
                std::span<const std::size_t> train, std::size_t k) {
  std::vector<double> d(train.size());
  std::vector<int> l(train.size());
  for (std::size_t t = 0; t < train.size(); ++t) l[t] = labels[train[t]];
  std::size_t correct = 0;
  for (std::size_t q : queries) {
    for (std::size_t t = 0; t < train.size(); ++t) d[t] = cache.at(q, train[t]);
    if (knn_classify(d, l, k) == labels[q]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(queries.size());
}

}  // namespace

SearchResult random_search_cv(const Dataset& dataset, const SearchSpace& space,
                              const SearchOptions& options) {
  check_space(space);
  if (dataset.graphs.size() != dataset.labels.size()) {
    throw InvalidParams("dataset graphs and labels differ in length");
  }
  SearchResult result;
  std::tie(result.train, result.test) =
      stratified_split(dataset.labels, options.test_fraction, options.seed);
  const auto folds = stratified_folds(dataset.labels, result.train, options.folds,
                                      derive_seed(options.seed, 1));
  std::vector<std::vector<std::size_t>> fold_train(folds.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    for (std::size_t g = 0; g < folds.size(); ++g) {
      if (g != f) fold_train[f].insert(fold_train[f].end(), folds[g].begin(), folds[g].end());
    }
    std::sort(fold_train[f].begin(), fold_train[f].end());
  }

  const std::uint64_t key = dataset_hash(dataset.graphs, dataset.labels);
  Rng rng(derive_seed(options.seed, 2));
  bool have_best = false;
  for (std::size_t t = 0; t < space.trials; ++t) {
    TrialResult trial;
    trial.trial = t;
    trial.params = sample_params(space, options.backend, rng);
    trial.k = space.k_choices[rng.index(space.k_choices.size())];

    DistanceCache cache(dataset.graphs, key, trial.params, options.backend,
                        options.spec, options.pairwise);
    cache.fill(result.train, result.train);
    for (std::size_t i : result.train) {
      for (std::size_t j : result.train) {
        if (cache.failed(i, j)) trial.failed = true;
      }
    }
    if (!trial.failed) {
      double sum = 0.0;
      for (std::size_t f = 0; f < folds.size(); ++f) {
        sum += accuracy(cache, dataset.labels, folds[f], fold_train[f], trial.k);
      }
      trial.cv_accuracy = sum / static_cast<double>(folds.size());
      if (!have_best || trial.cv_accuracy > result.cv_accuracy) {
        have_best = true;
        result.best_trial = t;
        result.cv_accuracy = trial.cv_accuracy;
      }
    }
    result.trials.push_back(trial);
  }
  if (!have_best) throw SolverError("every search trial had distance failures");

  const TrialResult& best = result.trials[result.best_trial];
  result.best_params = best.params;
  result.best_k = best.k;
  DistanceCache cache(dataset.graphs, key, best.params, options.backend,
                      options.spec, options.pairwise);
  cache.fill(result.test, result.train);
  for (std::size_t i : result.test) {
    for (std::size_t j : result.train) {
      if (cache.failed(i, j)) {
        throw SolverError("distance failure between test graph " + std::to_string(i) +
                          " and training graph " + std::to_string(j));
      }
    }
  }
  result.test_accuracy = accuracy(cache, dataset.labels, result.test, result.train,
                                  result.best_k);
  return result;
}

std::string search_csv(const SearchResult& result) {
  std::ostringstream os;
  os << "trial,c,epsilon,beta,eta,k,cv_accuracy,test_accuracy\n";
  for (const auto& t : result.trials) {
    os << t.trial << ',' << fixed9(t.params.c) << ',' << fixed9(t.params.epsilon)
       << ',' << fixed9(t.params.beta) << ',' << fixed9(t.params.eta) << ',' << t.k
       << ',' << (t.failed ? std::string("fail") : fixed9(t.cv_accuracy)) << ",\n";
  }
  const auto& b = result.best_params;
  os << "best," << fixed9(b.c) << ',' << fixed9(b.epsilon) << ',' << fixed9(b.beta)
     << ',' << fixed9(b.eta) << ',' << result.best_k << ',' << fixed9(result.cv_accuracy)
     << ',' << fixed9(result.test_accuracy) << '\n';
  return os.str();
}

}  // namespace ggospa
