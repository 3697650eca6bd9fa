// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ggospa/distance.hpp"
#include "ggospa/graph.hpp"
#include "ggospa/params.hpp"
#include "ggospa/random.hpp"

namespace ggospa {

enum class PerturbationCase { attr_noise, edge_add, edge_del, node_del };

const char* to_string(PerturbationCase c);
PerturbationCase perturbation_from_string(const std::string& name);

/// How node attributes of generated graphs are drawn.
struct AttributeModel {
  enum class Kind {
    uniform_box,     ///< i.i.d. uniform on [low, high]^dim
    separated_line,  ///< node i at (i * spacing, 0, ..., 0)
  };
  Kind kind = Kind::uniform_box;
  double low = 0.0;
  double high = 10.0;
  double spacing = 10.0;
};

/// Erdos-Renyi graph: each unordered pair is an edge with probability
/// p_edge, independently.
Graph er_graph(std::size_t n, double p_edge, std::size_t attribute_dimension,
               Rng& rng, const AttributeModel& attributes = {});

/// attr_noise: level is the variance of isotropic Gaussian noise added to
/// every attribute. edge_add / edge_del / node_del: level is the
/// per-pair / per-edge / per-node probability.
Graph perturb(const Graph& x, PerturbationCase perturbation, double level,
              Rng& rng);

struct SimulationConfig {
  std::size_t n_nodes = 14;
  double edge_probability = 0.6;
  std::size_t attribute_dimension = 2;
  AttributeModel attributes;
  PerturbationCase perturbation = PerturbationCase::attr_noise;
  std::vector<double> levels;
  std::size_t runs = 100;
  FamilyParams params;
  Backend backend = Backend::relaxed;
  BaseMetricSpec spec;
  std::uint64_t seed = 1;
  /// Variance of extra attribute noise in the structural cases; 0 disables.
  double background_noise = 0.0;
  std::size_t threads = 1;
  DistanceOptions distance;
};

/// Throws InvalidParams on an invalid configuration.
void validate(const SimulationConfig& config);

struct SimulationRun {
  std::size_t level_index = 0;
  std::size_t run = 0;
  bool ok = false;
  MetricBreakdown breakdown;
  /// |E_Y| - |E_X| for the pair, handy for the structural cases.
  long edge_delta = 0;
};

struct SimulationRow {
  double level = 0.0;
  std::size_t runs_ok = 0;
  std::size_t runs_failed = 0;
  MetricBreakdown mean;
};

/// Every (level, run) pair, ordered by level then run. X depends only on the
/// run index, so each run perturbs the same ground truth at every level.
std::vector<SimulationRun> simulate_runs(const SimulationConfig& config);

/// Mean breakdown per level; failed runs are excluded and counted.
std::vector<SimulationRow> run_simulation(const SimulationConfig& config);

std::string simulation_csv(const SimulationConfig& config,
                           const std::vector<SimulationRow>& rows);

struct TimingConfig {
  std::vector<std::size_t> sizes;
  std::vector<Backend> backends;
  std::size_t runs = 3;
  double edge_probability = 0.6;
  std::size_t attribute_dimension = 2;
  FamilyParams params;
  BaseMetricSpec spec;
  std::uint64_t seed = 1;
  /// Per-run wall-clock budget for the integer backend (seconds).
  double time_budget = 60.0;
  std::size_t node_budget = 100000;
};

struct TimingRow {
  std::size_t n = 0;
  Backend backend = Backend::relaxed;
  std::size_t runs = 0;
  std::size_t censored = 0;  ///< runs that hit the node or time budget
  double mean_seconds = 0.0;
};

/// Timing covers program build and solve, not graph generation.
std::vector<TimingRow> run_timing(const TimingConfig& config);

std::string timing_csv(const TimingConfig& config,
                       const std::vector<TimingRow>& rows);

}  // namespace ggospa
