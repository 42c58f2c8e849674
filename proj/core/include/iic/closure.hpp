#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "iic/graph.hpp"
#include "iic/halftrek.hpp"
#include "iic/seeds.hpp"

namespace iic {

enum class Rule { Seed, HTC, ReducedHTC, InfiniteToOne, SingleUnknownNonId };
const char* to_string(Rule r);

struct ClosureRequest {
  MixedGraph graph;
  SeedSet seed;
  std::vector<DirectedEdge> targets;  // empty means all of D
};

struct ClosureOptions {
  bool single_unknown_rule = true;
  // test hook: permutation of the sweep order (indices into the edge list)
  std::vector<int> sweep_order;
};

struct Provenance {
  Rule rule = Rule::HTC;
  int iteration = 0;
  std::optional<Witness> witness;
};

struct ClosureResult {
  std::map<DirectedEdge, EdgeStatus> status;       // per target edge
  std::map<DirectedEdge, Provenance> provenance;   // per target edge
  int iterations = 0;                              // propagation sweeps run
  std::set<DirectedEdge> identified_set;           // identified targets
  std::vector<bool> solved_nodes;                  // all incoming edges known
};

/// Iterative identification closure: seeds + the standard fixed point first,
/// then sweeps of the reduced criterion with maximal known-parent sets,
/// Gauss-Seidel style. Unresolved targets are labelled NonIdentifiable when
/// the node-level infinite-to-one flag holds and the coordinate is unpinned
/// (or by the single-unknown rule), Inconclusive otherwise.
ClosureResult iic_close(const ClosureRequest& req, const ClosureOptions& opt = {});

ClosureResult iic_close_unseeded(const MixedGraph& g, const ClosureOptions& opt = {});

struct GapProfileRow {
  DirectedEdge edge;
  int r_size = 0;
  int r_sib_overlap = 0;
};

/// For every Inconclusive edge j->i: residual unknown-parent count |R| and
/// |R n sib(i)| at the fixed point.
std::vector<GapProfileRow> gap_profile(const MixedGraph& g, const ClosureResult& result);

/// gamma = |identified(S0) \ HTC| / |S0|.
double propagation_gain(const ClosureResult& result, const SeedSet& seed,
                        const ClosureResult& htc_only);

}  // namespace iic
