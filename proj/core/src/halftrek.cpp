#include "iic/halftrek.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace iic {

namespace {

// Unit-capacity flow on the auxiliary network.
//   node ids: 0 = S, 1 = T, L(w) = 2 + w, Rin(w) = 2 + n + w, Rout(w) = 2 + 2n + w
struct FlowNet {
  int n;
  struct Arc {
    int to;
    int cap;
    int rev;  // index of reverse arc in adj[to]
  };
  std::vector<std::vector<Arc>> adj;

  explicit FlowNet(int nodes) : n(nodes), adj(nodes) {}

  void add(int u, int v) {
    adj[u].push_back({v, 1, static_cast<int>(adj[v].size())});
    adj[v].push_back({u, 0, static_cast<int>(adj[u].size()) - 1});
  }

  // BFS augmenting path; deterministic given insertion order.
  bool augment() {
    std::vector<int> pre_node(n, -1), pre_arc(n, -1);
    pre_node[0] = 0;
    std::deque<int> q{0};
    while (!q.empty() && pre_node[1] < 0) {
      int u = q.front();
      q.pop_front();
      for (size_t k = 0; k < adj[u].size(); ++k) {
        const Arc& a = adj[u][k];
        if (a.cap > 0 && pre_node[a.to] < 0) {
          pre_node[a.to] = u;
          pre_arc[a.to] = static_cast<int>(k);
          q.push_back(a.to);
        }
      }
    }
    if (pre_node[1] < 0) return false;
    int v = 1;
    while (v != 0) {
      int u = pre_node[v];
      Arc& a = adj[u][pre_arc[v]];
      a.cap -= 1;
      adj[v][a.rev].cap += 1;
      v = u;
    }
    return true;
  }

  int maxflow() {
    int f = 0;
    while (augment()) ++f;
    return f;
  }
};

int l_id(NodeId w) { return 2 + w; }
int rin_id(int n, NodeId w) { return 2 + n + w; }
int rout_id(int n, NodeId w) { return 2 + 2 * n + w; }

FlowNet build_net(const MixedGraph& g, const std::vector<NodeId>& pool,
                  const std::vector<NodeId>& targets) {
  int n = g.n();
  FlowNet net(2 + 3 * n);
  for (NodeId w : pool) {
    net.add(0, l_id(w));
    net.add(l_id(w), rin_id(n, w));  // directed-path trek tops at w itself
    for (NodeId s : g.sib(w)) net.add(l_id(w), rin_id(n, s));
  }
  for (NodeId v = 0; v < n; ++v) {
    net.add(rin_id(n, v), rout_id(n, v));  // right sides pairwise disjoint
    for (NodeId c : g.ch(v)) net.add(rout_id(n, v), rin_id(n, c));
  }
  for (NodeId p : targets) net.add(rout_id(n, p), 1);
  return net;
}

int system_size(const MixedGraph& g, const std::vector<NodeId>& pool,
                const std::vector<NodeId>& targets) {
  if (targets.empty()) return 0;
  FlowNet net = build_net(g, pool, targets);
  return net.maxflow();
}

// Decode one trek per saturated source from the residual network.
std::map<NodeId, HalfTrek> decode(const MixedGraph& g, FlowNet& net,
                                  const std::vector<NodeId>& pool,
                                  const std::vector<NodeId>& targets) {
  int n = g.n();
  std::set<NodeId> target_set(targets.begin(), targets.end());
  std::map<NodeId, HalfTrek> out;
  auto used = [&](int u, int v) {
    for (const auto& a : net.adj[u])
      if (a.to == v && a.cap == 0) return true;  // forward arc saturated
    return false;
  };
  // mark consumed arcs so parallel treks do not reuse them
  auto consume = [&](int u, int v) {
    for (auto& a : net.adj[u])
      if (a.to == v && a.cap == 0) {
        a.cap = -1;  // visited marker
        return;
      }
  };
  for (NodeId w : pool) {
    if (!used(0, l_id(w))) continue;
    HalfTrek t;
    t.source = w;
    t.left_side = {w};
    // first hop out of L(w)
    NodeId head = -1;
    for (auto& a : net.adj[l_id(w)]) {
      if (a.cap == 0 && a.to >= rin_id(n, 0) && a.to < rin_id(n, 0) + n) {
        head = a.to - rin_id(n, 0);
        a.cap = -1;
        break;
      }
    }
    if (head < 0) continue;
    t.kind = (head == w) ? HalfTrek::Kind::DirectedPath : HalfTrek::Kind::ConfoundedPath;
    t.path_nodes.push_back(w);
    if (head != w) t.path_nodes.push_back(head);
    NodeId cur = head;
    while (true) {
      consume(rin_id(n, cur), rout_id(n, cur));
      if (target_set.count(cur) && used(rout_id(n, cur), 1)) {
        consume(rout_id(n, cur), 1);
        t.target = cur;
        break;
      }
      NodeId nxt = -1;
      for (auto& a : net.adj[rout_id(n, cur)]) {
        if (a.cap == 0 && a.to >= rin_id(n, 0) && a.to < rin_id(n, 0) + n) {
          nxt = a.to - rin_id(n, 0);
          a.cap = -1;
          break;
        }
      }
      if (nxt < 0) break;  // should not happen on a valid flow
      t.path_nodes.push_back(nxt);
      cur = nxt;
    }
    if (t.target >= 0) out[t.target] = std::move(t);
  }
  return out;
}

}  // namespace

MaxSystemResult max_halftrek_system(const MixedGraph& g, const std::vector<NodeId>& targets,
                                    const std::vector<NodeId>& source_pool,
                                    const std::vector<NodeId>& forbidden_left, bool lex_min) {
  std::set<NodeId> forb(forbidden_left.begin(), forbidden_left.end());
  std::vector<NodeId> pool;
  for (NodeId w : source_pool)
    if (!forb.count(w)) pool.push_back(w);
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  MaxSystemResult res;
  res.size = system_size(g, pool, targets);
  if (res.size == 0) return res;

  std::vector<NodeId> chosen = pool;
  if (lex_min) {
    // lexicographically smallest max-size source set: matroid greedy over the
    // transversal matroid rank (= max system with sources restricted)
    chosen.clear();
    int have = 0;
    for (NodeId w : pool) {
      if (have == res.size) break;
      std::vector<NodeId> trial = chosen;
      trial.push_back(w);
      if (system_size(g, trial, targets) > have) {
        chosen.push_back(w);
        ++have;
      }
    }
  }
  FlowNet net = build_net(g, chosen, targets);
  net.maxflow();
  res.partial.sources = chosen;
  res.partial.system = decode(g, net, chosen, targets);
  return res;
}

std::vector<NodeId> clean_sources(const MixedGraph& g, NodeId i) {
  std::vector<bool> bad(g.n(), false);
  bad[i] = true;
  for (NodeId d : g.desc(i)) bad[d] = true;
  for (NodeId s : g.sib(i)) {
    bad[s] = true;
    for (NodeId d : g.desc(s)) bad[d] = true;
  }
  std::vector<NodeId> out;
  for (NodeId w = 0; w < g.n(); ++w)
    if (!bad[w]) out.push_back(w);
  return out;
}

std::vector<NodeId> probe_pool(const MixedGraph& g, NodeId i, const std::vector<bool>& solved) {
  std::vector<bool> ok(g.n(), false);
  for (NodeId w : clean_sources(g, i)) ok[w] = true;
  for (NodeId w = 0; w < g.n(); ++w)
    if (solved[w]) ok[w] = true;
  ok[i] = false;
  for (NodeId s : g.sib(i)) ok[s] = false;
  std::vector<NodeId> out;
  for (NodeId w = 0; w < g.n(); ++w)
    if (ok[w]) out.push_back(w);
  return out;
}

HtcAnalysis::HtcAnalysis(const MixedGraph& g)
    : solved_(g.n(), false), witness_(g.n()) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId i = 0; i < g.n(); ++i) {
      if (solved_[i]) continue;
      const auto& pa = g.pa(i);
      auto pool = probe_pool(g, i, solved_);
      auto r = max_halftrek_system(g, pa, pool, {});
      if (r.size == static_cast<int>(pa.size())) {
        solved_[i] = true;
        r.partial.node = i;
        witness_[i] = std::move(r.partial);
        changed = true;
      }
    }
  }
}

std::optional<Witness> htc_check(const MixedGraph& g, NodeId i) {
  if (i < 0 || i >= g.n()) throw Error(Err::IndexOutOfRange, "htc_check: bad node");
  HtcAnalysis an(g);
  if (!an.solved(i)) return std::nullopt;
  return an.witness(i);
}

std::optional<Witness> reduced_htc_check(const MixedGraph& g, NodeId i,
                                         const std::vector<NodeId>& known) {
  HtcAnalysis an(g);
  return reduced_htc_check(g, i, known, an.solved_mask());
}

std::optional<Witness> reduced_htc_check(const MixedGraph& g, NodeId i,
                                         const std::vector<NodeId>& known,
                                         const std::vector<bool>& solved) {
  if (i < 0 || i >= g.n()) throw Error(Err::IndexOutOfRange, "reduced_htc_check: bad node");
  const auto& pa = g.pa(i);
  std::set<NodeId> pa_set(pa.begin(), pa.end());
  for (NodeId k : known)
    if (!pa_set.count(k))
      throw Error(Err::KnownNotSubsetOfParents, "known set must be a subset of pa(i)");
  std::set<NodeId> ks(known.begin(), known.end());
  std::vector<NodeId> R;
  for (NodeId p : pa)
    if (!ks.count(p)) R.push_back(p);
  if (R.empty()) {
    Witness w;
    w.node = i;
    w.known_parents = {ks.begin(), ks.end()};
    return w;
  }
  // Def 4.2 pool is the non-descendant set; clean-or-solved keeps it sound.
  auto pool = probe_pool(g, i, solved);
  std::set<NodeId> desc(g.desc(i).begin(), g.desc(i).end());
  std::vector<NodeId> nd_pool;
  for (NodeId w : pool)
    if (!desc.count(w)) nd_pool.push_back(w);
  auto r = max_halftrek_system(g, R, nd_pool, {});
  if (r.size != static_cast<int>(R.size())) return std::nullopt;
  r.partial.node = i;
  r.partial.known_parents = {ks.begin(), ks.end()};
  return r.partial;
}

bool htc_infinite_to_one(const MixedGraph& g, NodeId i) {
  const auto& pa = g.pa(i);
  if (pa.empty()) return false;
  std::vector<NodeId> pool;
  for (NodeId w = 0; w < g.n(); ++w)
    if (w != i) pool.push_back(w);
  auto r = max_halftrek_system(g, pa, pool, g.sib(i), /*lex_min=*/false);
  return r.size < static_cast<int>(pa.size());
}

bool edge_unpinned(const MixedGraph& g, NodeId j, NodeId i) {
  const auto& pa = g.pa(i);
  std::vector<NodeId> pool;
  for (NodeId w = 0; w < g.n(); ++w)
    if (w != i) pool.push_back(w);
  std::vector<NodeId> rest;
  for (NodeId p : pa)
    if (p != j) rest.push_back(p);
  int full = max_halftrek_system(g, pa, pool, g.sib(i), false).size;
  int dropped = max_halftrek_system(g, rest, pool, g.sib(i), false).size;
  return dropped == full;
}

bool verify_witness(const MixedGraph& g, NodeId i, const Witness& w, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  std::set<NodeId> lefts, rights;
  std::set<NodeId> sib(g.sib(i).begin(), g.sib(i).end());
  std::set<NodeId> seen_sources;
  for (const auto& [tgt, t] : w.system) {
    if (t.target != tgt) return fail("trek filed under wrong target");
    if (!g.has_directed(tgt, i)) return fail("target is not a parent of the node");
    if (t.left_side != std::vector<NodeId>{t.source}) return fail("left side must be {source}");
    if (sib.count(t.source)) return fail("left-side node is a sibling of the node");
    if (lefts.count(t.source)) return fail("left sides intersect");
    lefts.insert(t.source);
    if (!seen_sources.insert(t.source).second) return fail("duplicate source");
    // re-walk the path
    const auto& p = t.path_nodes;
    if (p.empty() || p.front() != t.source || p.back() != t.target)
      return fail("path endpoints do not match trek");
    size_t k = 1;
    if (t.kind == HalfTrek::Kind::ConfoundedPath) {
      if (p.size() < 2) return fail("confounded trek too short");
      if (!g.has_bidirected(p[0], p[1])) return fail("missing bidirected first hop");
      k = 2;
    }
    for (; k < p.size(); ++k)
      if (!g.has_directed(p[k - 1], p[k])) return fail("missing directed hop on path");
    // right side: whole path for a directed trek, path minus source otherwise
    size_t start = (t.kind == HalfTrek::Kind::DirectedPath) ? 0 : 1;
    for (size_t q = start; q < p.size(); ++q) {
      if (rights.count(p[q])) return fail("right sides intersect");
      rights.insert(p[q]);
    }
  }
  return true;
}

}  // namespace iic
