#include "iic/graph.hpp"

#include <algorithm>
#include <queue>

namespace iic {

const char* to_string(EdgeStatus s) {
  switch (s) {
    case EdgeStatus::Identified: return "Identified";
    case EdgeStatus::NonIdentifiable: return "NonIdentifiable";
    case EdgeStatus::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {
std::vector<NodeId> kahn_min_index(int n, const std::vector<std::vector<NodeId>>& ch,
                                   const std::vector<std::vector<NodeId>>& pa) {
  std::vector<int> indeg(n);
  for (NodeId v = 0; v < n; ++v) indeg[v] = static_cast<int>(pa[v].size());
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> heap;
  for (NodeId v = 0; v < n; ++v)
    if (indeg[v] == 0) heap.push(v);
  std::vector<NodeId> order;
  order.reserve(n);
  while (!heap.empty()) {
    NodeId v = heap.top();
    heap.pop();
    order.push_back(v);
    for (NodeId c : ch[v])
      if (--indeg[c] == 0) heap.push(c);
  }
  return order;
}
}  // namespace

MixedGraph MixedGraph::build(int n_nodes, std::vector<DirectedEdge> directed,
                             std::vector<BidirectedEdge> bidirected,
                             std::map<NodeId, std::string> labels) {
  MixedGraph g;
  if (n_nodes < 0) throw Error(Err::IndexOutOfRange, "negative node count");
  g.n_ = n_nodes;

  for (auto& [a, b] : bidirected) {
    if (a == b) throw Error(Err::SelfLoop, "bidirected self-loop");
    if (a > b) std::swap(a, b);
  }
  for (const auto& [j, i] : directed) {
    if (j == i) throw Error(Err::SelfLoop, "directed self-loop");
    if (j < 0 || j >= n_nodes || i < 0 || i >= n_nodes)
      throw Error(Err::IndexOutOfRange, "edge endpoint out of range");
  }
  for (const auto& [a, b] : bidirected)
    if (a < 0 || a >= n_nodes || b < 0 || b >= n_nodes)
      throw Error(Err::IndexOutOfRange, "bidirected endpoint out of range");

  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());
  std::sort(bidirected.begin(), bidirected.end());
  bidirected.erase(std::unique(bidirected.begin(), bidirected.end()), bidirected.end());
  g.directed_ = std::move(directed);
  g.bidirected_ = std::move(bidirected);
  g.labels_ = std::move(labels);
  for (const auto& [k, v] : g.labels_) {
    (void)v;
    if (k < 0 || k >= n_nodes) throw Error(Err::IndexOutOfRange, "label index out of range");
  }

  g.pa_.assign(n_nodes, {});
  g.ch_.assign(n_nodes, {});
  g.sib_.assign(n_nodes, {});
  for (const auto& [j, i] : g.directed_) {
    g.pa_[i].push_back(j);
    g.ch_[j].push_back(i);
  }
  for (const auto& [a, b] : g.bidirected_) {
    g.sib_[a].push_back(b);
    g.sib_[b].push_back(a);
  }
  for (auto* adj : {&g.pa_, &g.ch_, &g.sib_})
    for (auto& v : *adj) std::sort(v.begin(), v.end());

  auto order = kahn_min_index(n_nodes, g.ch_, g.pa_);
  if (static_cast<int>(order.size()) != n_nodes)
    throw Error(Err::CycleDetected, "directed part is not a DAG");

  // reachability closure, children merged in reverse topological order
  g.reach_.assign(n_nodes, std::vector<uint8_t>(n_nodes, 0));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NodeId v = *it;
    for (NodeId c : g.ch_[v]) {
      g.reach_[v][c] = 1;
      for (NodeId w = 0; w < n_nodes; ++w)
        if (g.reach_[c][w]) g.reach_[v][w] = 1;
    }
  }
  g.desc_.assign(n_nodes, {});
  g.anc_.assign(n_nodes, {});
  for (NodeId v = 0; v < n_nodes; ++v)
    for (NodeId w = 0; w < n_nodes; ++w)
      if (g.reach_[v][w]) {
        g.desc_[v].push_back(w);
        g.anc_[w].push_back(v);
      }
  return g;
}

bool MixedGraph::has_directed(NodeId j, NodeId i) const {
  check(j);
  check(i);
  return std::binary_search(directed_.begin(), directed_.end(), DirectedEdge{j, i});
}

bool MixedGraph::has_bidirected(NodeId a, NodeId b) const {
  check(a);
  check(b);
  if (a > b) std::swap(a, b);
  return std::binary_search(bidirected_.begin(), bidirected_.end(), BidirectedEdge{a, b});
}

Neighborhood MixedGraph::neighborhood(NodeId i) const {
  check(i);
  return Neighborhood{pa_[i], ch_[i], sib_[i], desc_[i], anc_[i]};
}

std::vector<NodeId> MixedGraph::topological_order() const {
  return kahn_min_index(n_, ch_, pa_);
}

std::string MixedGraph::label(NodeId i) const {
  auto it = labels_.find(check(i));
  return it == labels_.end() ? std::to_string(i) : it->second;
}

std::optional<NodeId> MixedGraph::node_by_label(const std::string& name) const {
  for (const auto& [k, v] : labels_)
    if (v == name) return k;
  try {
    size_t pos = 0;
    int v = std::stoi(name, &pos);
    if (pos == name.size() && v >= 0 && v < n_) return v;
  } catch (...) {
  }
  return std::nullopt;
}

MixedGraph MixedGraph::induced(const std::vector<NodeId>& keep) const {
  std::map<NodeId, NodeId> remap;
  for (size_t k = 0; k < keep.size(); ++k) {
    check(keep[k]);
    remap[keep[k]] = static_cast<NodeId>(k);
  }
  std::vector<DirectedEdge> d;
  std::vector<BidirectedEdge> b;
  for (const auto& [j, i] : directed_)
    if (remap.count(j) && remap.count(i)) d.push_back({remap[j], remap[i]});
  for (const auto& [x, y] : bidirected_)
    if (remap.count(x) && remap.count(y)) b.push_back({remap[x], remap[y]});
  std::map<NodeId, std::string> lab;
  for (const auto& [k, v] : remap) {
    auto it = labels_.find(k);
    if (it != labels_.end()) lab[v] = it->second;
  }
  return build(static_cast<int>(keep.size()), std::move(d), std::move(b), std::move(lab));
}

}  // namespace iic
