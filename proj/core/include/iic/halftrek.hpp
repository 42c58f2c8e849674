#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iic/graph.hpp"

namespace iic {

/// A half-trek from `source`: either a directed path source ->* target, or a
/// bidirected step source <-> s followed by a directed path s ->* target.
/// The left side is {source} in both cases.
struct HalfTrek {
  enum class Kind { DirectedPath, ConfoundedPath };
  NodeId source = -1;
  NodeId target = -1;
  Kind kind = Kind::DirectedPath;
  std::vector<NodeId> left_side;   // always {source}
  std::vector<NodeId> path_nodes;  // DirectedPath: [source..target]; ConfoundedPath: [source, s, .., target]
};

/// Certificate for node `node`: a system of half-treks with pairwise disjoint
/// left sides and pairwise disjoint right sides, sources outside sib(node),
/// one trek per required parent.
struct Witness {
  NodeId node = -1;
  std::vector<NodeId> sources;        // sorted set W
  std::map<NodeId, HalfTrek> system;  // required parent -> trek ending there
  std::vector<NodeId> known_parents;  // K; empty for standard HTC
};

struct MaxSystemResult {
  int size = 0;
  Witness partial;  // treks for the matched targets
};

/// Exact maximum half-trek system (no sided intersection) from distinct
/// sources in `source_pool` \ `forbidden_left` onto distinct members of
/// `targets`. Flow on the standard auxiliary network; unit capacities make
/// max-flow equal the system size. With lex_min, the reported source set is
/// the lexicographically smallest one of maximum size.
MaxSystemResult max_halftrek_system(const MixedGraph& g, const std::vector<NodeId>& targets,
                                    const std::vector<NodeId>& source_pool,
                                    const std::vector<NodeId>& forbidden_left,
                                    bool lex_min = true);

/// Nodes w with Cov(X_w, eps_i) structurally zero: no u in {i} u sib(i) has a
/// directed path to w (u = w included).
std::vector<NodeId> clean_sources(const MixedGraph& g, NodeId i);

/// Sources usable to probe node i: not i, not a sibling of i, and either clean
/// for i or already solved (all incoming coefficients known, so the residual
/// error is available as a probe).
std::vector<NodeId> probe_pool(const MixedGraph& g, NodeId i, const std::vector<bool>& solved);

/// Node-wise HTC fixed point over the whole graph: a node is solved once a
/// full system onto pa(i) exists from clean-or-solved sources. Witnesses are
/// recorded for solved nodes.
class HtcAnalysis {
 public:
  explicit HtcAnalysis(const MixedGraph& g);
  bool solved(NodeId i) const { return solved_[i]; }
  const std::vector<bool>& solved_mask() const { return solved_; }
  const std::optional<Witness>& witness(NodeId i) const { return witness_[i]; }

 private:
  std::vector<bool> solved_;
  std::vector<std::optional<Witness>> witness_;
};

/// Standard HTC verdict for node i (identifies all incoming edges at once).
/// pa(i) empty yields the empty witness.
std::optional<Witness> htc_check(const MixedGraph& g, NodeId i);

/// Reduced HTC for the residual parents R = pa(i) \ known; sources restricted
/// to non-descendant clean-or-solved probes. `solved` may widen the probe set
/// with nodes made known by seeds or earlier closure steps.
std::optional<Witness> reduced_htc_check(const MixedGraph& g, NodeId i,
                                         const std::vector<NodeId>& known);
std::optional<Witness> reduced_htc_check(const MixedGraph& g, NodeId i,
                                         const std::vector<NodeId>& known,
                                         const std::vector<bool>& solved);

/// Node-level non-identifiability flag: the maximum sibling-free half-trek
/// system from V \ ({i} u sib(i)) into pa(i) falls short of |pa(i)|.
bool htc_infinite_to_one(const MixedGraph& g, NodeId i);

/// Edge-level refinement used when labelling Non-id: dropping target j from
/// pa(i) leaves the maximum system size unchanged, so no maximum system needs
/// the j coordinate (its column adds no rank generically).
bool edge_unpinned(const MixedGraph& g, NodeId j, NodeId i);

/// Independent verifier: re-walks every trek in g, recomputes left sides and
/// checks disjointness (both sides), sibling-freeness and target assignment.
bool verify_witness(const MixedGraph& g, NodeId i, const Witness& w, std::string* why = nullptr);

}  // namespace iic
