#include "iic/seeds.hpp"

#include <algorithm>
#include <set>

namespace iic {

const char* to_string(EstimatorTag t) {
  switch (t) {
    case EstimatorTag::IvRatio: return "IvRatio";
    case EstimatorTag::InterventionRegression: return "InterventionRegression";
    case EstimatorTag::NgBivariate: return "NgBivariate";
    case EstimatorTag::PriorValue: return "PriorValue";
  }
  return "?";
}

namespace {
// does a directed path u ->* v exist that avoids node `blocked`?
bool reaches_avoiding(const MixedGraph& g, NodeId u, NodeId v, NodeId blocked) {
  if (u == v) return true;
  std::vector<bool> seen(g.n(), false);
  std::vector<NodeId> st{u};
  seen[u] = true;
  while (!st.empty()) {
    NodeId x = st.back();
    st.pop_back();
    if (x == blocked) continue;  // paths through `blocked` do not count
    for (NodeId c : g.ch(x)) {
      if (c == v) return true;
      if (!seen[c]) {
        seen[c] = true;
        st.push_back(c);
      }
    }
  }
  return false;
}
}  // namespace

IvVerdict validate_iv_triple(const MixedGraph& g, NodeId z, NodeId t, NodeId y) {
  IvVerdict v;
  if (z == t || z == y || t == y) {
    v.reason = "nodes of the triple must be distinct";
    return v;
  }
  if (!g.pa(z).empty()) {
    v.reason = "instrument has parents";
    return v;
  }
  if (!g.sib(z).empty()) {
    v.reason = "instrument has bidirected edges";
    return v;
  }
  if (!g.has_directed(z, t)) {
    v.reason = "relevance edge Z->T missing";
    return v;
  }
  if (g.has_directed(z, y)) {
    v.reason = "direct Z->Y edge present";
    return v;
  }
  // ratio validity for B_ZT: the direct edge must carry the whole Z->T effect
  bool indirect = false;
  for (NodeId c : g.ch(z)) {
    if (c == t) continue;
    if (g.reaches(c, t)) {
      indirect = true;
      break;
    }
  }
  if (indirect) {
    v.reason = "indirect Z->*T path bypasses the direct edge";
    return v;
  }
  v.z_to_t_ok = true;

  if (!g.has_directed(t, y)) {
    v.reason = "T->Y edge missing";
    return v;
  }
  for (NodeId d : g.desc(t)) {
    if (d == y) continue;
    if (g.has_directed(d, y)) {
      v.reason = "mediating path: a descendant of T is a parent of Y";
      return v;
    }
  }
  // genuine exclusion: every directed Z ->* Y path passes through T
  for (NodeId c : g.ch(z)) {
    if (c == t) continue;
    if (c == y || reaches_avoiding(g, c, y, t)) {
      v.reason = "Z->*Y path bypasses T";
      return v;
    }
  }
  v.t_to_y_ok = true;
  v.reason = "ok";
  return v;
}

MixedGraph giv_augment(const MixedGraph& g, const IvTriple& triple) {
  auto v = validate_iv_triple(g, triple.z, triple.t, triple.y);
  if (!v.z_to_t_ok) throw Error(Err::InvalidTriple, "giv_augment: " + v.reason);
  std::vector<DirectedEdge> d;
  for (const auto& e : g.directed())
    if (!(e.first == triple.z && e.second != triple.t)) d.push_back(e);
  std::vector<BidirectedEdge> b;
  for (const auto& e : g.bidirected())
    if (e.first != triple.z && e.second != triple.z) b.push_back(e);
  return MixedGraph::build(g.n(), std::move(d), std::move(b), g.labels());
}

SeedSet resolve_seeds(const MixedGraph& g, const SeedSpec& spec) {
  SeedSet out;
  auto put = [&](DirectedEdge e, SeedInfo info) {
    if (!out.info.count(e)) {
      out.info[e] = info;
      out.edges.push_back(e);
    }
  };
  for (const auto& tr : spec.iv_triples) {
    auto v = validate_iv_triple(g, tr.z, tr.t, tr.y);
    out.iv_reports.push_back({tr, v});
    if (v.z_to_t_ok) put({tr.z, tr.t}, {EstimatorTag::IvRatio, tr.z, std::nullopt});
    if (v.t_to_y_ok) put({tr.t, tr.y}, {EstimatorTag::IvRatio, tr.z, std::nullopt});
  }
  for (NodeId v : spec.intervened) {
    if (v < 0 || v >= g.n()) throw Error(Err::IndexOutOfRange, "intervened node out of range");
    for (NodeId c : g.ch(v))
      put({v, c}, {EstimatorTag::InterventionRegression, v, std::nullopt});
  }
  if (spec.use_ng_rule) {
    for (NodeId i = 0; i < g.n(); ++i)
      if (g.pa(i).size() == 1 && g.sib(i).empty())
        put({g.pa(i)[0], i}, {EstimatorTag::NgBivariate, g.pa(i)[0], std::nullopt});
  }
  for (const auto& pr : spec.prior_edges) {
    if (!g.has_directed(pr.edge.first, pr.edge.second))
      throw Error(Err::PriorEdgeNotInGraph, "prior edge not in the graph");
    put(pr.edge, {EstimatorTag::PriorValue, -1, pr.value});
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

std::vector<IvTriple> discover_iv_triples(const MixedGraph& g, int max_nodes) {
  if (g.n() > max_nodes)
    throw Error(Err::GraphTooLarge, "discover_iv_triples limited to small graphs");
  std::vector<IvTriple> out;
  for (NodeId z = 0; z < g.n(); ++z)
    for (NodeId t = 0; t < g.n(); ++t)
      for (NodeId y = 0; y < g.n(); ++y) {
        if (z == t || z == y || t == y) continue;
        if (validate_iv_triple(g, z, t, y).z_to_t_ok) out.push_back({z, t, y});
      }
  return out;
}

}  // namespace iic
