#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace iic {

using NodeId = int;
using DirectedEdge = std::pair<NodeId, NodeId>;  // (j,i) meaning j -> i
using BidirectedEdge = std::pair<NodeId, NodeId>;  // normalized a < b

enum class EdgeStatus { Identified, NonIdentifiable, Inconclusive };

const char* to_string(EdgeStatus s);

enum class Err {
  CycleDetected,
  SelfLoop,
  IndexOutOfRange,
  KnownNotSubsetOfParents,
  InvalidTriple,
  PriorEdgeNotInGraph,
  EmptySeed,
  DegenerateRealization,
  InfeasiblePerturbation,
  UnknownExperiment,
  TooFewSamples,
  MissingRegimeData,
  SingularDesign,
  WeakInstrument,
  GraphTooLarge,
  ParseError,
};

struct Error : std::runtime_error {
  Err code;
  Error(Err c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

struct Neighborhood {
  std::vector<NodeId> pa, ch, sib, desc, anc;
};

/// Immutable mixed graph: directed part is a DAG, bidirected edges model
/// correlated errors. Descendant/ancestor sets are cached at construction.
class MixedGraph {
 public:
  MixedGraph() = default;  // empty graph
  static MixedGraph build(int n_nodes,
                          std::vector<DirectedEdge> directed,
                          std::vector<BidirectedEdge> bidirected,
                          std::map<NodeId, std::string> labels = {});

  int n() const { return n_; }
  const std::vector<DirectedEdge>& directed() const { return directed_; }
  const std::vector<BidirectedEdge>& bidirected() const { return bidirected_; }

  const std::vector<NodeId>& pa(NodeId i) const { return pa_.at(check(i)); }
  const std::vector<NodeId>& ch(NodeId i) const { return ch_.at(check(i)); }
  const std::vector<NodeId>& sib(NodeId i) const { return sib_.at(check(i)); }
  // desc/anc exclude the node itself
  const std::vector<NodeId>& desc(NodeId i) const { return desc_.at(check(i)); }
  const std::vector<NodeId>& anc(NodeId i) const { return anc_.at(check(i)); }

  bool has_directed(NodeId j, NodeId i) const;
  bool has_bidirected(NodeId a, NodeId b) const;
  bool is_sibling(NodeId a, NodeId b) const { return has_bidirected(a, b); }
  /// true iff u ->* v with at least one edge
  bool reaches(NodeId u, NodeId v) const { return reach_[u][v] != 0; }

  Neighborhood neighborhood(NodeId i) const;

  /// Kahn's algorithm with a min-index heap; deterministic.
  std::vector<NodeId> topological_order() const;

  const std::map<NodeId, std::string>& labels() const { return labels_; }
  std::string label(NodeId i) const;
  std::optional<NodeId> node_by_label(const std::string& name) const;

  /// Induced subgraph on `keep` (sorted, distinct). Node k of the result is
  /// keep[k]; both edge sets restricted.
  MixedGraph induced(const std::vector<NodeId>& keep) const;

  bool same_edges(const MixedGraph& other) const {
    return n_ == other.n_ && directed_ == other.directed_ && bidirected_ == other.bidirected_;
  }

 private:
  NodeId check(NodeId i) const {
    if (i < 0 || i >= n_) throw Error(Err::IndexOutOfRange, "node index out of range");
    return i;
  }

  int n_ = 0;
  std::vector<DirectedEdge> directed_;     // sorted
  std::vector<BidirectedEdge> bidirected_; // sorted, a < b
  std::vector<std::vector<NodeId>> pa_, ch_, sib_, desc_, anc_;
  std::vector<std::vector<uint8_t>> reach_;  // reach_[u][v]: u ->* v, u != v
  std::map<NodeId, std::string> labels_;
};

}  // namespace iic
