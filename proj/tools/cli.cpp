// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ggospa/distance.hpp"
#include "ggospa/error.hpp"
#include "ggospa/experiments.hpp"
#include "ggospa/graph_io.hpp"
#include "ggospa/knn.hpp"
#include "ggospa/lp_formulation.hpp"
#include "ggospa/metric_exact.hpp"
#include "ggospa/params.hpp"
#include "ggospa/random.hpp"

namespace ggospa::cli {

namespace {

std::string fixed9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

const std::vector<std::string> kModes{"exact", "integer", "relaxed"};

struct MetricFlags {
  std::string kind = "euclidean";
  std::optional<double> delta;

  BaseMetricSpec spec() const {
    if (kind == "discrete") return BaseMetricSpec::discrete(delta);
    return BaseMetricSpec::euclidean();
  }
};

void add_family_flags(CLI::App* cmd, FamilyParams& params) {
  cmd->add_option("--c", params.c, "cut-off distance, c > 0")
      ->capture_default_str();
  cmd->add_option("--p", params.p, "exponent, 1 <= p < inf")
      ->capture_default_str();
  cmd->add_option("--epsilon", params.epsilon, "edge mismatch cost, > 0")
      ->capture_default_str();
  cmd->add_option("--beta", params.beta, "unassigned edge weight")
      ->capture_default_str();
  cmd->add_option("--eta", params.eta, "half-assigned edge weight")
      ->capture_default_str();
  cmd->add_flag("--gospa-compat", params.gospa_compat,
                "admit beta = 0 (graph GOSPA at eta = 1/2)");
}

void add_metric_flags(CLI::App* cmd, MetricFlags& metric) {
  cmd->add_option("--metric", metric.kind, "base metric on node attributes")
      ->check(CLI::IsMember({"euclidean", "discrete"}))
      ->capture_default_str();
  cmd->add_option("--delta", metric.delta,
                  "discrete mismatch distance (default 2c)");
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary);
    if (!file_) throw Error("cannot open output file " + path);
    stream_ = &file_;
  }
  std::ostream& get() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw Error("failed writing output");
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

// dist --------------------------------------------------------------------

struct DistArgs {
  std::string a;
  std::string b;
  FamilyParams params;
  MetricFlags metric;
  std::string mode = "integer";
  bool decompose = false;
  std::size_t enumeration_limit = kDefaultEnumerationLimit;
  std::size_t node_budget = 100000;
  double time_limit = 0.0;
  std::string lp_export;
};

void register_dist(CLI::App& app, DistArgs& args) {
  auto* cmd = app.add_subcommand("dist", "family distance between two graphs");
  cmd->add_option("--a", args.a, "first graph (ground truth), JSON")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--b", args.b, "second graph (estimate), JSON")
      ->required()
      ->check(CLI::ExistingFile);
  add_family_flags(cmd, args.params);
  add_metric_flags(cmd, args.metric);
  cmd->add_option("--mode", args.mode, "backend")
      ->check(CLI::IsMember(kModes))
      ->capture_default_str();
  cmd->add_flag("--decompose", args.decompose, "print the six cost components");
  cmd->add_option("--enumeration-limit", args.enumeration_limit,
                  "largest graph the exact backend enumerates")
      ->capture_default_str();
  cmd->add_option("--node-budget", args.node_budget,
                  "branch-and-bound node budget")
      ->capture_default_str();
  cmd->add_option("--time-limit", args.time_limit,
                  "branch-and-bound wall-clock budget in seconds, 0 = none");
  cmd->add_option("--lp-export", args.lp_export,
                  "write the linear program in LP format to this file");
}

int run_dist(const DistArgs& args, std::ostream& out, std::ostream& err) {
  const Backend backend = backend_from_string(args.mode);
  validate(args.params, backend);
  const Graph x = read_graph_file(args.a);
  const Graph y = read_graph_file(args.b);
  const BaseMetricSpec spec = args.metric.spec();

  if (!args.lp_export.empty()) {
    const auto mode = backend == Backend::relaxed ? Integrality::relaxed
                                                  : Integrality::integer;
    const auto program = build_family_program(x, y, args.params, mode, spec);
    std::ofstream file(args.lp_export, std::ios::binary);
    file << program.lp.to_lp_format();
    if (!file) throw Error("cannot write " + args.lp_export);
  }

  DistanceOptions options;
  options.enumeration_limit = args.enumeration_limit;
  options.lp.limits.max_nodes = args.node_budget;
  options.lp.limits.time_limit = args.time_limit;
  const DistanceResult r =
      family_distance(x, y, args.params, backend, spec, options);
  if (r.status == LpStatus::limit_reached) {
    err << "warning: branch-and-bound budget exhausted; the value is the best "
           "incumbent, an upper bound\n";
  }

  out << fixed9(r.value) << '\n';
  if (!args.decompose) return kExitOk;

  const auto& b = r.breakdown;
  out << (backend == Backend::relaxed ? "relaxed decomposition"
                                      : "decomposition")
      << " (p-th powers)\n";
  out << "localisation " << fixed9(b.localisation_p) << '\n';
  out << "missed " << fixed9(b.missed_p) << '\n';
  out << "false " << fixed9(b.false_p) << '\n';
  out << "assigned_edge " << fixed9(b.assigned_edge_p) << '\n';
  out << "half_edge " << fixed9(b.half_edge_p) << '\n';
  out << "unassigned_edge " << fixed9(b.unassigned_edge_p) << '\n';
  if (backend != Backend::exact) {
    out << "binaryness " << fixed9(r.binaryness) << '\n';
    out << "status " << to_string(r.status) << '\n';
  }
  return kExitOk;
}

// simulate ----------------------------------------------------------------

struct SimulateArgs {
  SimulationConfig config;
  MetricFlags metric;
  std::string perturbation = "attr_noise";
  std::string attributes = "uniform";
  std::string mode = "relaxed";
  std::string out;
};

void register_simulate(CLI::App& app, SimulateArgs& args) {
  auto* cmd = app.add_subcommand(
      "simulate", "mean cost components of perturbed random graphs");
  auto& c = args.config;
  c.levels = {0.0, 0.5, 1.0};
  cmd->add_option("--case", args.perturbation, "perturbation")
      ->check(CLI::IsMember({"attr_noise", "edge_add", "edge_del", "node_del"}))
      ->capture_default_str();
  cmd->add_option("--levels", c.levels, "comma-separated perturbation levels")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--runs", c.runs, "runs per level")->capture_default_str();
  cmd->add_option("--nodes", c.n_nodes, "nodes of the ground-truth graph")
      ->capture_default_str();
  cmd->add_option("--edge-probability", c.edge_probability,
                  "Erdos-Renyi edge probability")
      ->capture_default_str();
  cmd->add_option("--dimension", c.attribute_dimension, "attribute dimension")
      ->capture_default_str();
  cmd->add_option("--attributes", args.attributes, "attribute layout")
      ->check(CLI::IsMember({"uniform", "separated"}))
      ->capture_default_str();
  cmd->add_option("--spacing", c.attributes.spacing,
                  "node spacing of the separated layout")
      ->capture_default_str();
  cmd->add_option("--background-noise", c.background_noise,
                  "attribute noise variance in the structural cases")
      ->capture_default_str();
  cmd->add_option("--threads", c.threads, "worker threads, 0 = all cores")
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "base seed")->capture_default_str();
  cmd->add_option("--mode", args.mode, "backend")
      ->check(CLI::IsMember(kModes))
      ->capture_default_str();
  cmd->add_option("--out", args.out, "CSV output file (default stdout)");
  add_family_flags(cmd, c.params);
  add_metric_flags(cmd, args.metric);
}

int run_simulate(SimulateArgs& args, std::ostream& out) {
  auto& c = args.config;
  c.perturbation = perturbation_from_string(args.perturbation);
  c.backend = backend_from_string(args.mode);
  c.spec = args.metric.spec();
  c.attributes.kind = args.attributes == "separated"
                          ? AttributeModel::Kind::separated_line
                          : AttributeModel::Kind::uniform_box;
  c.distance.enumeration_limit = std::max(c.n_nodes, kDefaultEnumerationLimit);
  validate(c);
  const auto rows = run_simulation(c);
  Output sink(args.out, out);
  sink.get() << simulation_csv(c, rows);
  sink.finish();
  return kExitOk;
}

// timing ------------------------------------------------------------------

struct TimingArgs {
  TimingConfig config;
  MetricFlags metric;
  std::vector<std::string> modes{"relaxed", "integer"};
  std::string out;
};

void register_timing(CLI::App& app, TimingArgs& args) {
  auto* cmd = app.add_subcommand(
      "timing", "wall-clock time per distance on Erdos-Renyi pairs");
  auto& c = args.config;
  c.sizes = {5, 10};
  cmd->add_option("--sizes", c.sizes, "comma-separated node counts")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--mode", args.modes, "comma-separated backends")
      ->delimiter(',')
      ->check(CLI::IsMember(kModes))
      ->capture_default_str();
  cmd->add_option("--runs", c.runs, "pairs per size")->capture_default_str();
  cmd->add_option("--edge-probability", c.edge_probability,
                  "Erdos-Renyi edge probability")
      ->capture_default_str();
  cmd->add_option("--dimension", c.attribute_dimension, "attribute dimension")
      ->capture_default_str();
  cmd->add_option("--time-budget", c.time_budget,
                  "per-run budget for the integer backend, seconds")
      ->capture_default_str();
  cmd->add_option("--node-budget", c.node_budget,
                  "branch-and-bound node budget")
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "base seed")->capture_default_str();
  cmd->add_option("--out", args.out, "CSV output file (default stdout)");
  add_family_flags(cmd, c.params);
  add_metric_flags(cmd, args.metric);
}

int run_timing_command(TimingArgs& args, std::ostream& out) {
  auto& c = args.config;
  c.spec = args.metric.spec();
  c.backends.clear();
  for (const auto& m : args.modes) {
    c.backends.push_back(backend_from_string(m));
    validate(c.params, c.backends.back());
  }
  if (c.sizes.empty() || c.runs == 0) {
    throw InvalidParams("timing needs at least one size and one run");
  }
  const auto rows = run_timing(c);
  Output sink(args.out, out);
  sink.get() << timing_csv(c, rows);
  sink.finish();
  return kExitOk;
}

// knn ---------------------------------------------------------------------

struct KnnArgs {
  std::string dataset;
  std::string format = "tudataset";
  std::string name;
  std::string features = "auto";
  SearchSpace space;
  SearchOptions options;
  MetricFlags metric;
  std::string mode = "relaxed";
  std::vector<double> c_range{1.0, 10.0};
  std::vector<double> epsilon_range{0.1, 5.0};
  std::vector<double> beta_range{0.0, 1.0};
  std::vector<double> eta_range{0.0, 1.0};
  std::size_t max_graphs = 0;
  std::string cache;
  std::string out;
};

void register_knn(CLI::App& app, KnnArgs& args) {
  auto* cmd = app.add_subcommand(
      "knn", "k-NN classification with random search and cross-validation");
  cmd->add_option("--dataset", args.dataset, "dataset directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  cmd->add_option("--format", args.format, "dataset format")
      ->check(CLI::IsMember({"tudataset"}))
      ->capture_default_str();
  cmd->add_option("--name", args.name,
                  "file prefix inside the directory (default: its name)");
  cmd->add_option("--features", args.features,
                  "node features: auto prefers attributes over labels")
      ->check(CLI::IsMember({"auto", "labels"}))
      ->capture_default_str();
  cmd->add_option("--trials", args.space.trials, "random search trials")
      ->capture_default_str();
  cmd->add_option("--folds", args.options.folds, "cross-validation folds")
      ->capture_default_str();
  cmd->add_option("--test-fraction", args.options.test_fraction,
                  "held-out fraction per class")
      ->capture_default_str();
  cmd->add_option("--k-choices", args.space.k_choices,
                  "comma-separated neighbour counts")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--c-range", args.c_range, "search interval for c")
      ->delimiter(',')
      ->expected(2);
  cmd->add_option("--epsilon-range", args.epsilon_range,
                  "search interval for epsilon")
      ->delimiter(',')
      ->expected(2);
  cmd->add_option("--beta-range", args.beta_range, "search interval for beta")
      ->delimiter(',')
      ->expected(2);
  cmd->add_option("--eta-range", args.eta_range, "search interval for eta")
      ->delimiter(',')
      ->expected(2);
  cmd->add_option("--p", args.space.p, "exponent")->capture_default_str();
  cmd->add_flag("--gospa-compat", args.space.gospa_compat, "admit beta = 0");
  cmd->add_option("--max-graphs", args.max_graphs,
                  "stratified subsample of the dataset, 0 = all");
  cmd->add_option("--cache", args.cache, "distance cache directory");
  cmd->add_option("--threads", args.options.pairwise.threads,
                  "worker threads, 0 = all cores")
      ->capture_default_str();
  cmd->add_option("--seed", args.options.seed, "base seed")
      ->capture_default_str();
  cmd->add_option("--mode", args.mode, "backend")
      ->check(CLI::IsMember(kModes))
      ->capture_default_str();
  cmd->add_option("--out", args.out, "CSV output file (default stdout)");
  add_metric_flags(cmd, args.metric);
}

Dataset subsample(const Dataset& full, std::size_t count, std::uint64_t seed) {
  const double fraction =
      static_cast<double>(count) / static_cast<double>(full.size());
  auto keep =
      stratified_split(full.labels, fraction, derive_seed(seed, 3)).second;
  Dataset part;
  part.name = full.name;
  for (std::size_t i : keep) {
    part.graphs.push_back(full.graphs[i]);
    part.labels.push_back(full.labels[i]);
  }
  return part;
}

int run_knn(KnnArgs& args, std::ostream& out) {
  args.options.backend = backend_from_string(args.mode);
  args.options.spec = args.metric.spec();
  args.space.c = {args.c_range[0], args.c_range[1]};
  args.space.epsilon = {args.epsilon_range[0], args.epsilon_range[1]};
  args.space.beta = {args.beta_range[0], args.beta_range[1]};
  args.space.eta = {args.eta_range[0], args.eta_range[1]};
  if (!args.cache.empty()) args.options.pairwise.cache_dir = args.cache;

  const std::filesystem::path dir(args.dataset);
  std::string name = args.name;
  if (name.empty()) name = std::filesystem::absolute(dir).lexically_normal().filename().string();
  if (name.empty()) name = dir.parent_path().filename().string();
  const auto source = args.features == "labels" ? NodeFeatureSource::labels
                                                : NodeFeatureSource::automatic;
  Dataset data = parse_tudataset(dir, name, source);
  if (args.max_graphs > 0 && args.max_graphs < data.size()) {
    data = subsample(data, args.max_graphs, args.options.seed);
  }
  const auto result = random_search_cv(data, args.space, args.options);
  Output sink(args.out, out);
  sink.get() << search_csv(result);
  sink.finish();
  return kExitOk;
}

// validate ----------------------------------------------------------------

struct ValidateArgs {
  std::vector<std::string> graphs;
  std::string dataset;
  std::string features = "auto";
  FamilyParams params;
  std::string mode = "integer";
};

void register_validate(CLI::App& app, ValidateArgs& args) {
  auto* cmd = app.add_subcommand(
      "validate", "check graph files, a dataset and parameters");
  cmd->add_option("--a,--b,--graph", args.graphs, "graph JSON file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--dataset", args.dataset, "TUDataset directory")
      ->check(CLI::ExistingDirectory);
  cmd->add_option("--features", args.features, "node features")
      ->check(CLI::IsMember({"auto", "labels"}));
  cmd->add_option("--mode", args.mode, "backend the parameters are meant for")
      ->check(CLI::IsMember(kModes))
      ->capture_default_str();
  add_family_flags(cmd, args.params);
}

int run_validate(const ValidateArgs& args, std::ostream& out) {
  validate(args.params, backend_from_string(args.mode));
  out << "params ok for " << args.mode << '\n';
  for (const auto& path : args.graphs) {
    const Graph g = read_graph_file(path);
    out << path << ": " << g.num_nodes() << " nodes, " << g.num_edges()
        << " edges, dimension " << g.dimension() << '\n';
  }
  if (!args.dataset.empty()) {
    const std::filesystem::path dir(args.dataset);
    const auto name =
        std::filesystem::absolute(dir).lexically_normal().filename().string();
    const auto source = args.features == "labels"
                            ? NodeFeatureSource::labels
                            : NodeFeatureSource::automatic;
    const Dataset data = parse_tudataset(dir, name, source);
    std::size_t largest = 0;
    for (const auto& g : data.graphs) largest = std::max(largest, g.num_nodes());
    out << args.dataset << ": " << data.size() << " graphs, largest "
        << largest << " nodes\n";
  }
  return kExitOk;
}

}  // namespace

int run_command(std::span<const std::string> args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"Graph GOSPA metric family", "ggospa"};
  app.require_subcommand(1);

  DistArgs dist;
  SimulateArgs simulate;
  TimingArgs timing;
  KnnArgs knn;
  ValidateArgs check;
  register_dist(app, dist);
  register_simulate(app, simulate);
  register_timing(app, timing);
  register_knn(app, knn);
  register_validate(app, check);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand("dist")) return run_dist(dist, out, err);
    if (app.got_subcommand("simulate")) return run_simulate(simulate, out);
    if (app.got_subcommand("timing")) return run_timing_command(timing, out);
    if (app.got_subcommand("knn")) return run_knn(knn, out);
    return run_validate(check, out);
  } catch (const InvalidParams& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace ggospa::cli
