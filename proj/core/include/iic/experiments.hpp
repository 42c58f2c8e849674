#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "iic/closure.hpp"
#include "iic/graph.hpp"
#include "iic/halftrek.hpp"
#include "iic/seeds.hpp"

namespace iic {

enum class GraphFamily { IvStructured, AllMaximalConfounded, ErdosRenyi };

struct EnumerationConfig {
  int n = 4;
  GraphFamily family = GraphFamily::ErdosRenyi;
  double p_dir = 0.3;
  double p_bi = 0.2;
  int count = 200;
  uint64_t rng_seed = 1;
};

/// Exhaustive IV-structured universe with the canonical triple (Z,T,Y) =
/// (0,1,2): DAG skeletons where Z is exogenous with Z->T, no direct Z->Y,
/// T->Y present, no mediating path between T and Y, and every directed Z->*Y
/// path passes through T; crossed with every bidirected pattern over pairs not
/// involving Z (so the instrument stays exogenous). Deterministic order.
std::vector<std::pair<MixedGraph, IvTriple>> enumerate_iv_structured(int n);

/// Skeletons only (no bidirected patterns) of the same family.
std::vector<MixedGraph> enumerate_iv_skeletons(int n);

/// All labeled DAGs with bidirected edges on every non-comparable pair.
std::vector<MixedGraph> enumerate_maximal_confounded(int n);

/// Random mixed graph: directed edges over a random topological order with
/// p_dir, bidirected over unordered pairs with p_bi. Reproducible.
MixedGraph random_mixed_graph(const EnumerationConfig& cfg, uint64_t index);

enum class PerturbationKind { MissingDirected, ExtraDirected, MissingConfounder, ExtraConfounder };
const char* to_string(PerturbationKind k);

/// Remove or add round(rate * |relevant set|) edges (at least one); additions
/// keep the directed part acyclic by resampling violating candidates.
MixedGraph perturb(const MixedGraph& g, PerturbationKind kind, double rate, uint64_t rng_seed);

/// HTC on the ancestral subgraph of node i (the comparison baseline).
std::optional<Witness> ad_htc_baseline(const MixedGraph& g, NodeId i);

struct ExperimentConfig {
  int n = 5;
  int k = 1;                 // intervened nodes where applicable
  int graphs = 200;
  uint64_t rng_seed = 20260809;
  int jobs = 1;
  double p_dir = 0.3;
  double p_bi = 0.2;
};

struct ExperimentResult {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::map<std::string, double> summary;
};

/// Named experiment registry; writes a CSV artifact with a provenance header
/// and returns the parsed result table.
ExperimentResult run_experiment(const std::string& name, const ExperimentConfig& cfg,
                                std::ostream& csv_out);

std::vector<std::string> experiment_names();

}  // namespace iic
