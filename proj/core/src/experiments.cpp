// SPDX-License-Identifier: Apache-2.0

#include "ggospa/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ggospa/error.hpp"
#include "parallel.hpp"

namespace ggospa {

const char* to_string(PerturbationCase c) {
  switch (c) {
    case PerturbationCase::attr_noise:
      return "attr_noise";
    case PerturbationCase::edge_add:
      return "edge_add";
    case PerturbationCase::edge_del:
      return "edge_del";
    case PerturbationCase::node_del:
      return "node_del";
  }
  return "?";
}

PerturbationCase perturbation_from_string(const std::string& name) {
  if (name == "attr_noise") return PerturbationCase::attr_noise;
  if (name == "edge_add") return PerturbationCase::edge_add;
  if (name == "edge_del") return PerturbationCase::edge_del;
  if (name == "node_del") return PerturbationCase::node_del;
  throw InvalidParams("unknown perturbation case '" + name +
                      "' (expected attr_noise, edge_add, edge_del or node_del)");
}

Graph er_graph(std::size_t n, double p_edge, std::size_t attribute_dimension,
               Rng& rng, const AttributeModel& attributes) {
  if (!(p_edge >= 0.0 && p_edge <= 1.0)) {
    throw InvalidParams("edge probability must lie in [0, 1]");
  }
  std::vector<Attribute> attrs(n, Attribute(attribute_dimension, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    if (attributes.kind == AttributeModel::Kind::uniform_box) {
      for (auto& v : attrs[i]) v = rng.uniform(attributes.low, attributes.high);
    } else if (attribute_dimension > 0) {
      attrs[i][0] = attributes.spacing * static_cast<double>(i);
    }
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.bernoulli(p_edge)) edges.emplace_back(i, j);
    }
  }
  return Graph(std::move(attrs), std::move(edges));
}

Graph perturb(const Graph& x, PerturbationCase perturbation, double level,
              Rng& rng) {
  switch (perturbation) {
    case PerturbationCase::attr_noise: {
      if (!(level >= 0.0)) throw InvalidParams("noise variance must be >= 0");
      const double sigma = std::sqrt(level);
      std::vector<Attribute> attrs = x.attributes();
      for (auto& a : attrs) {
        for (auto& v : a) v += sigma * rng.normal();
      }
      return Graph(std::move(attrs), x.edges());
    }
    case PerturbationCase::edge_add: {
      if (!(level >= 0.0 && level <= 1.0)) {
        throw InvalidParams("edge addition probability must lie in [0, 1]");
      }
      std::vector<Edge> edges;
      const std::size_t n = x.num_nodes();
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (x.has_edge(i, j) || rng.bernoulli(level)) edges.emplace_back(i, j);
        }
      }
      return Graph(x.attributes(), std::move(edges));
    }
    case PerturbationCase::edge_del: {
      if (!(level >= 0.0 && level <= 1.0)) {
        throw InvalidParams("edge deletion probability must lie in [0, 1]");
      }
      std::vector<Edge> edges;
      for (const auto& e : x.edges()) {
        if (!rng.bernoulli(level)) edges.push_back(e);
      }
      return Graph(x.attributes(), std::move(edges));
    }
    case PerturbationCase::node_del: {
      if (!(level >= 0.0 && level <= 1.0)) {
        throw InvalidParams("node deletion probability must lie in [0, 1]");
      }
      const std::size_t n = x.num_nodes();
      constexpr std::size_t gone = static_cast<std::size_t>(-1);
      std::vector<std::size_t> new_index(n, gone);
      std::vector<Attribute> attrs;
      for (std::size_t i = 0; i < n; ++i) {
        if (!rng.bernoulli(level)) {
          new_index[i] = attrs.size();
          attrs.push_back(x.attribute(i));
        }
      }
      std::vector<Edge> edges;
      for (const auto& [i, j] : x.edges()) {
        if (new_index[i] != gone && new_index[j] != gone) {
          edges.emplace_back(new_index[i], new_index[j]);
        }
      }
      return Graph(std::move(attrs), std::move(edges));
    }
  }
  return x;
}

void validate(const SimulationConfig& config) {
  if (!(config.edge_probability >= 0.0 && config.edge_probability <= 1.0)) {
    throw InvalidParams("edge probability must lie in [0, 1]");
  }
  if (config.runs < 1) throw InvalidParams("runs must be >= 1");
  if (config.levels.empty()) throw InvalidParams("at least one level is needed");
  for (double level : config.levels) {
    if (config.perturbation == PerturbationCase::attr_noise) {
      if (!(level >= 0.0)) throw InvalidParams("noise variance must be >= 0");
    } else if (!(level >= 0.0 && level <= 1.0)) {
      throw InvalidParams("perturbation probability must lie in [0, 1]");
    }
  }
  if (!(config.background_noise >= 0.0)) {
    throw InvalidParams("background noise variance must be >= 0");
  }
  validate(config.params, config.backend);
}

std::vector<SimulationRun> simulate_runs(const SimulationConfig& config) {
  validate(config);
  const std::size_t levels = config.levels.size();
  std::vector<SimulationRun> runs(levels * config.runs);
  detail::parallel_for(runs.size(), config.threads, [&](std::size_t k) {
    const std::size_t level_index = k / config.runs;
    const std::size_t run = k % config.runs;
    SimulationRun& out = runs[k];
    out.level_index = level_index;
    out.run = run;

    Rng truth_rng(derive_seed(config.seed, run));
    const Graph x = er_graph(config.n_nodes, config.edge_probability,
                             config.attribute_dimension, truth_rng,
                             config.attributes);
    Rng rng(derive_seed(config.seed, run, level_index + 1));
    Graph y = perturb(x, config.perturbation, config.levels[level_index], rng);
    if (config.background_noise > 0.0 &&
        config.perturbation != PerturbationCase::attr_noise) {
      y = perturb(y, PerturbationCase::attr_noise, config.background_noise, rng);
    }
    out.edge_delta = static_cast<long>(y.num_edges()) - static_cast<long>(x.num_edges());
    try {
      const auto result = family_distance(x, y, config.params, config.backend,
                                          config.spec, config.distance);
      out.breakdown = result.breakdown;
      out.ok = result.status == LpStatus::optimal;
    } catch (const Error&) {
      out.ok = false;
    }
  });
  return runs;
}

std::vector<SimulationRow> run_simulation(const SimulationConfig& config) {
  const auto runs = simulate_runs(config);
  std::vector<SimulationRow> rows(config.levels.size());
  for (std::size_t l = 0; l < rows.size(); ++l) rows[l].level = config.levels[l];
  // Runs are already ordered by (level, run), so the sums are deterministic.
  for (const auto& r : runs) {
    SimulationRow& row = rows[r.level_index];
    if (!r.ok) {
      ++row.runs_failed;
      continue;
    }
    ++row.runs_ok;
    row.mean.localisation_p += r.breakdown.localisation_p;
    row.mean.missed_p += r.breakdown.missed_p;
    row.mean.false_p += r.breakdown.false_p;
    row.mean.assigned_edge_p += r.breakdown.assigned_edge_p;
    row.mean.half_edge_p += r.breakdown.half_edge_p;
    row.mean.unassigned_edge_p += r.breakdown.unassigned_edge_p;
    row.mean.total += r.breakdown.total;
  }
  for (auto& row : rows) {
    if (row.runs_ok == 0) continue;
    const double n = static_cast<double>(row.runs_ok);
    row.mean.localisation_p /= n;
    row.mean.missed_p /= n;
    row.mean.false_p /= n;
    row.mean.assigned_edge_p /= n;
    row.mean.half_edge_p /= n;
    row.mean.unassigned_edge_p /= n;
    row.mean.total /= n;
  }
  return rows;
}

namespace {

std::string fixed9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

std::string param_comment(const FamilyParams& p) {
  std::ostringstream os;
  os << "c=" << fixed9(p.c) << " p=" << fixed9(p.p) << " epsilon=" << fixed9(p.epsilon)
     << " beta=" << fixed9(p.beta) << " eta=" << fixed9(p.eta);
  return os.str();
}

}  // namespace

std::string simulation_csv(const SimulationConfig& config,
                           const std::vector<SimulationRow>& rows) {
  std::ostringstream os;
  os << "# rng=" << Rng::kAlgorithm << " seed=" << config.seed
     << " case=" << to_string(config.perturbation) << " n=" << config.n_nodes
     << " edge_probability=" << fixed9(config.edge_probability)
     << " runs=" << config.runs << " backend=" << to_string(config.backend) << ' '
     << param_comment(config.params) << '\n';
  os << "level,runs_ok,total_mean,loc_mean,missed_mean,false_mean,"
        "edge_assigned_mean,edge_half_mean,edge_unassigned_mean\n";
  for (const auto& r : rows) {
    os << fixed9(r.level) << ',' << r.runs_ok << ',' << fixed9(r.mean.total) << ','
       << fixed9(r.mean.localisation_p) << ',' << fixed9(r.mean.missed_p) << ','
       << fixed9(r.mean.false_p) << ',' << fixed9(r.mean.assigned_edge_p) << ','
       << fixed9(r.mean.half_edge_p) << ',' << fixed9(r.mean.unassigned_edge_p)
       << '\n';
  }
  return os.str();
}

std::vector<TimingRow> run_timing(const TimingConfig& config) {
  for (std::size_t n : config.sizes) {
    if (n < 1) throw InvalidParams("timing sizes must be >= 1");
  }
  if (config.runs < 1) throw InvalidParams("runs must be >= 1");
  std::vector<TimingRow> rows;
  for (std::size_t si = 0; si < config.sizes.size(); ++si) {
    const std::size_t n = config.sizes[si];
    for (Backend backend : config.backends) {
      validate(config.params, backend);
      TimingRow row;
      row.n = n;
      row.backend = backend;
      double total = 0.0;
      for (std::size_t run = 0; run < config.runs; ++run) {
        Rng rng(derive_seed(config.seed, si, run));
        const Graph x = er_graph(n, config.edge_probability,
                                 config.attribute_dimension, rng);
        const Graph y = er_graph(n, config.edge_probability,
                                 config.attribute_dimension, rng);
        DistanceOptions options;
        options.enumeration_limit = n;
        options.lp.limits.max_nodes = config.node_budget;
        options.lp.limits.time_limit = config.time_budget;
        const auto start = std::chrono::steady_clock::now();
        bool censored = false;
        try {
          const auto r = family_distance(x, y, config.params, backend,
                                         config.spec, options);
          censored = r.status != LpStatus::optimal;
        } catch (const SolverError&) {
          censored = true;
        }
        const std::chrono::duration<double> elapsed =
            std::chrono::steady_clock::now() - start;
        total += elapsed.count();
        ++row.runs;
        if (censored) ++row.censored;
      }
      row.mean_seconds = total / static_cast<double>(row.runs);
      rows.push_back(row);
    }
  }
  return rows;
}

std::string timing_csv(const TimingConfig& config,
                       const std::vector<TimingRow>& rows) {
  std::ostringstream os;
  os << "# rng=" << Rng::kAlgorithm << " seed=" << config.seed
     << " edge_probability=" << fixed9(config.edge_probability)
     << " time_budget=" << fixed9(config.time_budget)
     << " node_budget=" << config.node_budget << ' ' << param_comment(config.params)
     << '\n';
  os << "n,mode,runs,censored,mean_seconds\n";
  for (const auto& r : rows) {
    os << r.n << ',' << to_string(r.backend) << ',' << r.runs << ',' << r.censored
       << ',' << fixed9(r.mean_seconds) << '\n';
  }
  return os.str();
}

}  // namespace ggospa
