#include "iic/closure.hpp"

#include <algorithm>

namespace iic {

const char* to_string(Rule r) {
  switch (r) {
    case Rule::Seed: return "Seed";
    case Rule::HTC: return "HTC";
    case Rule::ReducedHTC: return "ReducedHTC";
    case Rule::InfiniteToOne: return "InfiniteToOne";
    case Rule::SingleUnknownNonId: return "SingleUnknownNonId";
  }
  return "?";
}

namespace {

struct State {
  const MixedGraph& g;
  std::set<DirectedEdge> identified;
  std::vector<bool> solved;
  std::map<DirectedEdge, Provenance> prov;

  explicit State(const MixedGraph& graph) : g(graph), solved(graph.n(), false) {}

  void refresh_solved() {
    for (NodeId i = 0; i < g.n(); ++i) {
      if (solved[i]) continue;
      bool all = true;
      for (NodeId p : g.pa(i))
        if (!identified.count({p, i})) {
          all = false;
          break;
        }
      solved[i] = all;
    }
  }

  // standard node-wise fixed point given the current solved mask
  bool htc_pass(int iteration) {
    bool any = false;
    bool changed = true;
    while (changed) {
      changed = false;
      for (NodeId i = 0; i < g.n(); ++i) {
        if (solved[i]) continue;
        const auto& pa = g.pa(i);
        auto pool = probe_pool(g, i, solved);
        auto r = max_halftrek_system(g, pa, pool, {});
        if (r.size == static_cast<int>(pa.size())) {
          r.partial.node = i;
          for (NodeId p : pa) {
            DirectedEdge e{p, i};
            if (identified.insert(e).second)
              prov[e] = {Rule::HTC, iteration, r.partial};
          }
          solved[i] = true;
          changed = true;
          any = true;
        }
      }
    }
    return any;
  }
};

}  // namespace

ClosureResult iic_close(const ClosureRequest& req, const ClosureOptions& opt) {
  const MixedGraph& g = req.graph;
  std::vector<DirectedEdge> targets = req.targets.empty() ? g.directed() : req.targets;
  for (const auto& e : targets)
    if (!g.has_directed(e.first, e.second))
      throw Error(Err::IndexOutOfRange, "target edge not in the graph");

  State st(g);
  for (const auto& e : req.seed.edges) {
    if (!g.has_directed(e.first, e.second)) continue;  // resolve_seeds guarantees membership
    st.identified.insert(e);
    st.prov[e] = {Rule::Seed, 0, std::nullopt};
  }
  st.refresh_solved();
  st.htc_pass(0);

  // propagation sweeps over all directed edges (maximal K per node)
  std::vector<DirectedEdge> sweep = g.directed();
  if (!opt.sweep_order.empty()) {
    std::vector<DirectedEdge> perm;
    perm.reserve(sweep.size());
    for (int k : opt.sweep_order) perm.push_back(sweep.at(k));
    sweep = std::move(perm);
  }
  int iterations = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    ++iterations;
    for (const auto& [j, i] : sweep) {
      if (st.identified.count({j, i})) continue;
      std::vector<NodeId> K;
      for (NodeId p : g.pa(i))
        if (st.identified.count({p, i})) K.push_back(p);
      if (K.empty()) continue;
      auto w = reduced_htc_check(g, i, K, st.solved);
      if (!w) continue;
      for (NodeId r : g.pa(i)) {
        DirectedEdge e{r, i};
        if (!st.identified.count(e)) {
          st.identified.insert(e);
          st.prov[e] = {Rule::ReducedHTC, iterations, *w};
          changed = true;
        }
      }
      st.refresh_solved();
      if (st.htc_pass(iterations)) changed = true;
    }
  }

  ClosureResult out;
  out.iterations = iterations;
  out.solved_nodes = st.solved;
  out.identified_set = st.identified;  // the full fixed point, targets or not
  for (const auto& e : targets) {
    if (st.identified.count(e)) {
      out.status[e] = EdgeStatus::Identified;
      out.provenance[e] = st.prov.at(e);
      continue;
    }
    auto [j, i] = e;
    if (htc_infinite_to_one(g, i) && edge_unpinned(g, j, i)) {
      out.status[e] = EdgeStatus::NonIdentifiable;
      out.provenance[e] = {Rule::InfiniteToOne, iterations, std::nullopt};
      continue;
    }
    if (opt.single_unknown_rule) {
      std::vector<NodeId> R;
      for (NodeId p : g.pa(i))
        if (!st.identified.count({p, i})) R.push_back(p);
      if (R.size() == 1 && R[0] == j && g.is_sibling(j, i)) {
        out.status[e] = EdgeStatus::NonIdentifiable;
        out.provenance[e] = {Rule::SingleUnknownNonId, iterations, std::nullopt};
        continue;
      }
    }
    out.status[e] = EdgeStatus::Inconclusive;
    out.provenance[e] = {Rule::InfiniteToOne, iterations, std::nullopt};
  }
  return out;
}

ClosureResult iic_close_unseeded(const MixedGraph& g, const ClosureOptions& opt) {
  ClosureRequest req{g, SeedSet{}, {}};
  return iic_close(req, opt);
}

std::vector<GapProfileRow> gap_profile(const MixedGraph& g, const ClosureResult& result) {
  std::vector<GapProfileRow> rows;
  for (const auto& [e, s] : result.status) {
    if (s != EdgeStatus::Inconclusive) continue;
    NodeId i = e.second;
    GapProfileRow row;
    row.edge = e;
    for (NodeId p : g.pa(i)) {
      if (result.identified_set.count({p, i})) continue;
      row.r_size++;
      if (g.is_sibling(p, i)) row.r_sib_overlap++;
    }
    rows.push_back(row);
  }
  return rows;
}

double propagation_gain(const ClosureResult& result, const SeedSet& seed,
                        const ClosureResult& htc_only) {
  if (seed.edges.empty()) throw Error(Err::EmptySeed, "propagation gain needs a nonempty seed");
  int extra = 0;
  for (const auto& e : result.identified_set)
    if (!htc_only.identified_set.count(e)) extra++;
  return static_cast<double>(extra) / static_cast<double>(seed.edges.size());
}

}  // namespace iic
