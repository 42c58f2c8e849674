#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iic/graph.hpp"

namespace iic {

struct IvTriple {
  NodeId z = -1, t = -1, y = -1;
};

enum class EstimatorTag { IvRatio, InterventionRegression, NgBivariate, PriorValue };
const char* to_string(EstimatorTag t);

/// Declarative side information.
struct SeedSpec {
  std::vector<IvTriple> iv_triples;
  std::vector<NodeId> intervened;
  bool use_ng_rule = false;
  struct Prior {
    DirectedEdge edge;
    std::optional<double> value;
  };
  std::vector<Prior> prior_edges;
};

struct IvVerdict {
  bool z_to_t_ok = false;
  bool t_to_y_ok = false;
  std::string reason;
};

/// Structural validation of an IV triple.
///   z_to_t: Z exogenous (no parents, no siblings), Z->T present, no direct
///           Z->Y edge, and no indirect Z ->* T path (the ratio Cov(Z,T)/Var(Z)
///           equals the coefficient only when the direct edge carries the
///           whole effect).
///   t_to_y: additionally T->Y present, no mediating path (no proper
///           descendant of T is a parent of Y) and genuine exclusion (every
///           directed Z ->* Y path passes through T).
IvVerdict validate_iv_triple(const MixedGraph& g, NodeId z, NodeId t, NodeId y);

/// IV-augmented graph: drop Z's outgoing edges other than Z->T and every
/// bidirected edge at Z.
MixedGraph giv_augment(const MixedGraph& g, const IvTriple& triple);

struct SeedInfo {
  EstimatorTag tag;
  NodeId instrument = -1;          // IvRatio: the Z of the triple
  std::optional<double> prior_value;
};

struct SeedSet {
  std::vector<DirectedEdge> edges;  // sorted, subset of D
  std::map<DirectedEdge, SeedInfo> info;
  struct TripleReport {
    IvTriple triple;
    IvVerdict verdict;
  };
  std::vector<TripleReport> iv_reports;

  bool contains(const DirectedEdge& e) const { return info.count(e) != 0; }
};

/// Resolve a SeedSpec into the initially identified edge set. Invalid IV
/// triples contribute nothing and are reported in iv_reports.
SeedSet resolve_seeds(const MixedGraph& g, const SeedSpec& spec);

/// Brute-force scan of all ordered triples passing the z_to_t validation.
std::vector<IvTriple> discover_iv_triples(const MixedGraph& g, int max_nodes = 12);

}  // namespace iic
