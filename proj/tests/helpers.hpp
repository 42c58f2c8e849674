#pragma once

// Shared test utilities: an independent brute-force half-trek-system oracle
// (pure enumeration, no flow) and small random-graph generators.

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "iic/graph.hpp"
#include "iic/halftrek.hpp"

namespace testutil {

using iic::DirectedEdge;
using iic::MixedGraph;
using iic::NodeId;

struct TrekOption {
  NodeId source;
  std::set<NodeId> right;  // right-side node set
};

// every half-trek from `src` to `tgt`: directed paths (right side includes the
// source/top) and bidirected-start paths (right side starts at the sibling)
inline void enumerate_treks(const MixedGraph& g, NodeId src, NodeId tgt,
                            std::vector<TrekOption>& out) {
  // all simple directed paths from `from` to tgt
  std::vector<NodeId> path;
  std::function<void(NodeId, std::set<NodeId>&, bool)> dfs = [&](NodeId at, std::set<NodeId>& right,
                                                                 bool confounded) {
    if (at == tgt) {
      out.push_back({src, right});
      return;
    }
    for (NodeId c : g.ch(at)) {
      if (right.count(c)) continue;
      right.insert(c);
      dfs(c, right, confounded);
      right.erase(c);
    }
  };
  {
    std::set<NodeId> right{src};
    dfs(src, right, false);
  }
  for (NodeId s : g.sib(src)) {
    std::set<NodeId> right{s};
    dfs(s, right, true);
  }
}

// exact maximum system by exhaustive assignment: distinct sources, distinct
// targets, pairwise-disjoint right sides (left sides are singleton sources)
inline int bf_max_system(const MixedGraph& g, const std::vector<NodeId>& targets,
                         const std::vector<NodeId>& pool_in,
                         const std::vector<NodeId>& forbidden_left) {
  std::set<NodeId> forb(forbidden_left.begin(), forbidden_left.end());
  std::vector<NodeId> pool;
  for (NodeId w : pool_in)
    if (!forb.count(w)) pool.push_back(w);

  // options[t][...] = treks into targets[t]
  std::vector<std::vector<TrekOption>> options(targets.size());
  for (size_t t = 0; t < targets.size(); ++t)
    for (NodeId w : pool) enumerate_treks(g, w, targets[t], options[t]);

  int best = 0;
  std::set<NodeId> used_sources;
  std::set<NodeId> used_right;
  std::function<void(size_t, int)> rec = [&](size_t t, int size) {
    best = std::max(best, size);
    if (t == targets.size()) return;
    // prune: even taking every remaining target cannot beat best
    if (size + static_cast<int>(targets.size() - t) <= best) return;
    rec(t + 1, size);  // skip this target
    for (const auto& opt : options[t]) {
      if (used_sources.count(opt.source)) continue;
      bool clash = false;
      for (NodeId r : opt.right)
        if (used_right.count(r)) {
          clash = true;
          break;
        }
      if (clash) continue;
      used_sources.insert(opt.source);
      for (NodeId r : opt.right) used_right.insert(r);
      rec(t + 1, size + 1);
      used_sources.erase(opt.source);
      for (NodeId r : opt.right) used_right.erase(r);
    }
  };
  rec(0, 0);
  return best;
}

inline MixedGraph random_mixed(int n, double p_dir, double p_bi, std::mt19937_64& rng) {
  std::vector<NodeId> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<DirectedEdge> d;
  std::vector<std::pair<NodeId, NodeId>> b;
  for (int a = 0; a < n; ++a)
    for (int c = a + 1; c < n; ++c) {
      if (u(rng) < p_dir) d.push_back({perm[a], perm[c]});
    }
  for (int a = 0; a < n; ++a)
    for (int c = a + 1; c < n; ++c)
      if (u(rng) < p_bi) b.push_back({a, c});
  return MixedGraph::build(n, d, b);
}

}  // namespace testutil
