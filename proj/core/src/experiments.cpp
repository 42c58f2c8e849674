#include "iic/experiments.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "iic/oracle.hpp"
#include "iic/threading.hpp"

namespace iic {

namespace {

uint64_t sub_seed(uint64_t root, uint64_t index) {
  uint64_t x = root + 0x9e3779b97f4a7c15ULL * (index + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

bool dag_if_added(int n, const std::vector<DirectedEdge>& edges, DirectedEdge cand) {
  std::vector<std::vector<NodeId>> ch(n);
  std::vector<int> indeg(n, 0);
  for (const auto& [j, i] : edges) {
    ch[j].push_back(i);
    indeg[i]++;
  }
  ch[cand.first].push_back(cand.second);
  indeg[cand.second]++;
  std::vector<NodeId> q;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) q.push_back(v);
  int seen = 0;
  while (!q.empty()) {
    NodeId v = q.back();
    q.pop_back();
    ++seen;
    for (NodeId c : ch[v])
      if (--indeg[c] == 0) q.push_back(c);
  }
  return seen == n;
}

// every directed Z ->* Y path passes through T
bool exclusion_through(const MixedGraph& g, NodeId z, NodeId t, NodeId y) {
  std::vector<bool> seen(g.n(), false);
  std::vector<NodeId> st{z};
  seen[z] = true;
  while (!st.empty()) {
    NodeId u = st.back();
    st.pop_back();
    if (u == t) continue;
    for (NodeId c : g.ch(u)) {
      if (c == y) return false;
      if (!seen[c]) {
        seen[c] = true;
        st.push_back(c);
      }
    }
  }
  return true;
}

bool skeleton_ok(const MixedGraph& g) {
  if (!g.pa(0).empty()) return false;
  if (!g.has_directed(0, 1)) return false;
  if (g.has_directed(0, 2)) return false;
  if (!g.has_directed(1, 2)) return false;
  for (NodeId d : g.desc(1)) {
    if (d == 2) continue;
    if (g.has_directed(d, 2)) return false;  // mediating path
  }
  return exclusion_through(g, 0, 1, 2);
}

void enumerate_dags(int n, const std::function<void(const std::vector<DirectedEdge>&)>& emit) {
  std::vector<std::pair<NodeId, NodeId>> slots;
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b) slots.push_back({a, b});
  std::vector<DirectedEdge> edges;
  std::function<void(size_t)> rec = [&](size_t k) {
    if (k == slots.size()) {
      // orientation choices cannot close a cycle check here; validate lazily
      std::vector<std::vector<NodeId>> ch(n);
      std::vector<int> indeg(n, 0);
      for (const auto& [j, i] : edges) {
        ch[j].push_back(i);
        indeg[i]++;
      }
      std::vector<NodeId> q;
      for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) q.push_back(v);
      int seen = 0;
      while (!q.empty()) {
        NodeId v = q.back();
        q.pop_back();
        ++seen;
        for (NodeId c : ch[v])
          if (--indeg[c] == 0) q.push_back(c);
      }
      if (seen == n) emit(edges);
      return;
    }
    auto [a, b] = slots[k];
    rec(k + 1);
    edges.push_back({a, b});
    rec(k + 1);
    edges.back() = {b, a};
    rec(k + 1);
    edges.pop_back();
  };
  rec(0);
}

}  // namespace

std::vector<MixedGraph> enumerate_iv_skeletons(int n) {
  if (n < 4 || n > 5)
    throw Error(Err::IndexOutOfRange, "IV-structured enumeration supports n in {4,5}");
  std::vector<MixedGraph> out;
  enumerate_dags(n, [&](const std::vector<DirectedEdge>& edges) {
    MixedGraph g = MixedGraph::build(n, edges, {});
    if (skeleton_ok(g)) out.push_back(std::move(g));
  });
  return out;
}

std::vector<std::pair<MixedGraph, IvTriple>> enumerate_iv_structured(int n) {
  auto skels = enumerate_iv_skeletons(n);
  std::vector<BidirectedEdge> cand;
  for (NodeId a = 1; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b) cand.push_back({a, b});
  std::vector<std::pair<MixedGraph, IvTriple>> out;
  for (const auto& skel : skels) {
    for (uint32_t mask = 0; mask < (1u << cand.size()); ++mask) {
      std::vector<BidirectedEdge> bi;
      for (size_t k = 0; k < cand.size(); ++k)
        if (mask & (1u << k)) bi.push_back(cand[k]);
      out.push_back({MixedGraph::build(n, skel.directed(), bi), IvTriple{0, 1, 2}});
    }
  }
  return out;
}

std::vector<MixedGraph> enumerate_maximal_confounded(int n) {
  if (n > 5) throw Error(Err::GraphTooLarge, "exhaustive enumeration limited to n <= 5");
  std::vector<MixedGraph> out;
  enumerate_dags(n, [&](const std::vector<DirectedEdge>& edges) {
    MixedGraph d = MixedGraph::build(n, edges, {});
    std::vector<BidirectedEdge> bi;
    for (NodeId a = 0; a < n; ++a)
      for (NodeId b = a + 1; b < n; ++b)
        if (!d.reaches(a, b) && !d.reaches(b, a)) bi.push_back({a, b});
    out.push_back(MixedGraph::build(n, edges, bi));
  });
  return out;
}

MixedGraph random_mixed_graph(const EnumerationConfig& cfg, uint64_t index) {
  if (cfg.n < 2) throw Error(Err::IndexOutOfRange, "random graph needs n >= 2");
  std::mt19937_64 rng(sub_seed(cfg.rng_seed, index));
  std::vector<NodeId> perm(cfg.n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<DirectedEdge> d;
  for (int a = 0; a < cfg.n; ++a)
    for (int b = a + 1; b < cfg.n; ++b)
      if (u(rng) < cfg.p_dir) d.push_back({perm[a], perm[b]});
  std::vector<BidirectedEdge> bi;
  for (int a = 0; a < cfg.n; ++a)
    for (int b = a + 1; b < cfg.n; ++b)
      if (u(rng) < cfg.p_bi) bi.push_back({a, b});
  return MixedGraph::build(cfg.n, std::move(d), std::move(bi));
}

const char* to_string(PerturbationKind k) {
  switch (k) {
    case PerturbationKind::MissingDirected: return "missing_directed";
    case PerturbationKind::ExtraDirected: return "extra_directed";
    case PerturbationKind::MissingConfounder: return "missing_confounder";
    case PerturbationKind::ExtraConfounder: return "extra_confounder";
  }
  return "?";
}

MixedGraph perturb(const MixedGraph& g, PerturbationKind kind, double rate, uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  auto d = g.directed();
  auto bi = g.bidirected();
  int n = g.n();
  auto count_of = [&](size_t base) { return std::max<int>(1, static_cast<int>(std::lround(rate * base))); };
  switch (kind) {
    case PerturbationKind::MissingDirected: {
      if (d.empty()) throw Error(Err::InfeasiblePerturbation, "no directed edges to remove");
      int k = std::min<int>(count_of(d.size()), static_cast<int>(d.size()));
      std::shuffle(d.begin(), d.end(), rng);
      d.resize(d.size() - k);
      break;
    }
    case PerturbationKind::ExtraDirected: {
      int k = count_of(d.size());
      int added = 0, tries = 0;
      std::uniform_int_distribution<int> pick(0, n - 1);
      while (added < k && tries < 64 * k + 256) {
        ++tries;
        NodeId a = pick(rng), b = pick(rng);
        if (a == b) continue;
        if (std::find(d.begin(), d.end(), DirectedEdge{a, b}) != d.end()) continue;
        if (std::find(d.begin(), d.end(), DirectedEdge{b, a}) != d.end()) continue;
        if (!dag_if_added(n, d, {a, b})) continue;  // resample cycle-makers
        d.push_back({a, b});
        ++added;
      }
      if (added == 0) throw Error(Err::InfeasiblePerturbation, "no room for extra directed edges");
      break;
    }
    case PerturbationKind::MissingConfounder: {
      if (bi.empty()) throw Error(Err::InfeasiblePerturbation, "no bidirected edges to remove");
      int k = std::min<int>(count_of(bi.size()), static_cast<int>(bi.size()));
      std::shuffle(bi.begin(), bi.end(), rng);
      bi.resize(bi.size() - k);
      break;
    }
    case PerturbationKind::ExtraConfounder: {
      int k = count_of(std::max<size_t>(bi.size(), 1));
      int added = 0, tries = 0;
      std::uniform_int_distribution<int> pick(0, n - 1);
      while (added < k && tries < 64 * k + 256) {
        ++tries;
        NodeId a = pick(rng), b = pick(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (std::find(bi.begin(), bi.end(), BidirectedEdge{a, b}) != bi.end()) continue;
        bi.push_back({a, b});
        ++added;
      }
      if (added == 0) throw Error(Err::InfeasiblePerturbation, "no room for extra confounders");
      break;
    }
  }
  return MixedGraph::build(n, std::move(d), std::move(bi), g.labels());
}

std::optional<Witness> ad_htc_baseline(const MixedGraph& g, NodeId i) {
  std::vector<NodeId> keep = g.anc(i);
  keep.push_back(i);
  std::sort(keep.begin(), keep.end());
  MixedGraph sub = g.induced(keep);
  NodeId i_sub = static_cast<NodeId>(std::lower_bound(keep.begin(), keep.end(), i) - keep.begin());
  auto w = htc_check(sub, i_sub);
  if (!w) return std::nullopt;
  // map node ids back to the full graph
  Witness out;
  out.node = i;
  for (NodeId s : w->sources) out.sources.push_back(keep[s]);
  for (auto& [tgt, trek] : w->system) {
    HalfTrek t = trek;
    t.source = keep[t.source];
    t.target = keep[t.target];
    t.left_side = {t.source};
    for (auto& v : t.path_nodes) v = keep[v];
    out.system[keep[tgt]] = std::move(t);
  }
  return out;
}

// ------------------------------------------------------------------ runners

namespace {

SeedSet interventions_seed(const MixedGraph& g, int k, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<NodeId> nodes(g.n());
  std::iota(nodes.begin(), nodes.end(), 0);
  std::shuffle(nodes.begin(), nodes.end(), rng);
  SeedSpec spec;
  for (int t = 0; t < std::min<int>(k, g.n()); ++t) spec.intervened.push_back(nodes[t]);
  return resolve_seeds(g, spec);
}

SeedSet exogenous_seed(const MixedGraph& g) {
  // edges out of exogenous roots whose direct edge carries the whole effect
  SeedSet out;
  for (NodeId v = 0; v < g.n(); ++v) {
    if (!g.pa(v).empty() || !g.sib(v).empty()) continue;
    for (NodeId c : g.ch(v)) {
      bool indirect = false;
      for (NodeId c2 : g.ch(v))
        if (c2 != c && g.reaches(c2, c)) indirect = true;
      if (indirect) continue;
      DirectedEdge e{v, c};
      if (!out.info.count(e)) {
        out.info[e] = {EstimatorTag::IvRatio, v, std::nullopt};
        out.edges.push_back(e);
      }
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

int count_identified(const ClosureResult& r) {
  int c = 0;
  for (const auto& [e, s] : r.status)
    if (s == EdgeStatus::Identified) ++c;
  return c;
}

struct Csv {
  std::ostream& os;
  ExperimentResult& res;
  void header(const std::string& name, const ExperimentConfig& cfg,
              const std::vector<std::string>& cols) {
    std::ostringstream cfgs;
    cfgs << "n=" << cfg.n << " k=" << cfg.k << " graphs=" << cfg.graphs
         << " p_dir=" << cfg.p_dir << " p_bi=" << cfg.p_bi;
    uint64_t h = 1469598103934665603ULL;
    for (char c : cfgs.str()) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
    os << "# iic v0.1.0 experiment=" << name << " rng_seed=" << cfg.rng_seed
       << " config_hash=" << std::hex << h << std::dec << "\n# config: " << cfgs.str() << "\n";
    res.columns = cols;
    for (size_t k = 0; k < cols.size(); ++k) os << cols[k] << (k + 1 < cols.size() ? "," : "\n");
  }
  void row(const std::vector<std::string>& vals) {
    res.rows.push_back(vals);
    for (size_t k = 0; k < vals.size(); ++k) os << vals[k] << (k + 1 < vals.size() ? "," : "\n");
  }
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(prec);
  os << v;
  return os.str();
}

void run_seed_iv(const ExperimentConfig& cfg, Csv& csv) {
  auto universe = enumerate_iv_structured(cfg.n);
  struct Tally {
    long edges = 0, none = 0, iv = 0, exo = 0, both = 0;
  };
  std::vector<Tally> tallies(universe.size());
  parallel_for(static_cast<int>(universe.size()), cfg.jobs, [&](int gi) {
    const auto& [g, triple] = universe[gi];
    Tally t;
    t.edges = static_cast<long>(g.directed().size());
    auto base = iic_close_unseeded(g);
    t.none = count_identified(base);
    SeedSpec ivspec;
    ivspec.iv_triples = {triple};
    auto ivseed = resolve_seeds(g, ivspec);
    t.iv = count_identified(iic_close({g, ivseed, {}}));
    auto exo = exogenous_seed(g);
    t.exo = count_identified(iic_close({g, exo, {}}));
    SeedSet comb = ivseed;
    for (const auto& e : exo.edges)
      if (!comb.info.count(e)) {
        comb.info[e] = exo.info.at(e);
        comb.edges.push_back(e);
      }
    std::sort(comb.edges.begin(), comb.edges.end());
    t.both = count_identified(iic_close({g, comb, {}}));
    tallies[gi] = t;
  });
  Tally sum;
  for (const auto& t : tallies) {
    sum.edges += t.edges;
    sum.none += t.none;
    sum.iv += t.iv;
    sum.exo += t.exo;
    sum.both += t.both;
  }
  csv.res.summary["graphs"] = static_cast<double>(universe.size());
  csv.res.summary["edges"] = static_cast<double>(sum.edges);
  csv.res.summary["id_none"] = static_cast<double>(sum.none);
  csv.res.summary["id_iv"] = static_cast<double>(sum.iv);
  csv.res.summary["id_exogenous"] = static_cast<double>(sum.exo);
  csv.res.summary["id_iv_exogenous"] = static_cast<double>(sum.both);
  auto rate = [&](long c) { return fmt(100.0 * c / sum.edges, 2); };
  csv.row({"no_seed", std::to_string(sum.none), std::to_string(sum.edges), rate(sum.none)});
  csv.row({"iv", std::to_string(sum.iv), std::to_string(sum.edges), rate(sum.iv)});
  csv.row({"exogenous", std::to_string(sum.exo), std::to_string(sum.edges), rate(sum.exo)});
  csv.row({"iv_exogenous", std::to_string(sum.both), std::to_string(sum.edges), rate(sum.both)});
}

void run_interventions(const ExperimentConfig& cfg, Csv& csv) {
  std::vector<long> edges(cfg.graphs), id0(cfg.graphs), idk(cfg.graphs);
  std::vector<double> gam(cfg.graphs, -1.0);
  EnumerationConfig ecfg{cfg.n, GraphFamily::ErdosRenyi, cfg.p_dir, cfg.p_bi, cfg.graphs, cfg.rng_seed};
  parallel_for(cfg.graphs, cfg.jobs, [&](int gi) {
    MixedGraph g = random_mixed_graph(ecfg, gi);
    edges[gi] = static_cast<long>(g.directed().size());
    if (edges[gi] == 0) return;
    auto base = iic_close_unseeded(g);
    id0[gi] = count_identified(base);
    auto seed = interventions_seed(g, cfg.k, sub_seed(cfg.rng_seed, 7777 + gi));
    auto res = iic_close({g, seed, {}});
    idk[gi] = count_identified(res);
    if (!seed.edges.empty()) gam[gi] = propagation_gain(res, seed, base);
  });
  long e = 0, a = 0, b = 0;
  double gsum = 0;
  int gcount = 0;
  for (int i = 0; i < cfg.graphs; ++i) {
    e += edges[i];
    a += id0[i];
    b += idk[i];
    if (gam[i] >= 0) {
      gsum += gam[i];
      ++gcount;
    }
  }
  csv.res.summary["edges"] = static_cast<double>(e);
  csv.res.summary["rate_unseeded"] = 100.0 * a / e;
  csv.res.summary["rate_seeded"] = 100.0 * b / e;
  csv.res.summary["gamma_mean"] = gcount ? gsum / gcount : 0.0;
  csv.row({"no_seed", std::to_string(a), std::to_string(e), fmt(100.0 * a / e, 2)});
  csv.row({"interv_k" + std::to_string(cfg.k), std::to_string(b), std::to_string(e),
           fmt(100.0 * b / e, 2)});
}

void run_convergence(const ExperimentConfig& cfg, Csv& csv) {
  std::vector<int> iters;
  if (cfg.n <= 5) {
    auto universe = enumerate_iv_structured(cfg.n);
    iters.resize(universe.size());
    parallel_for(static_cast<int>(universe.size()), cfg.jobs, [&](int gi) {
      const auto& [g, triple] = universe[gi];
      SeedSpec spec;
      spec.iv_triples = {triple};
      iters[gi] = iic_close({g, resolve_seeds(g, spec), {}}).iterations;
    });
  } else {
    iters.resize(cfg.graphs);
    EnumerationConfig ecfg{cfg.n, GraphFamily::ErdosRenyi, cfg.p_dir, cfg.p_bi, cfg.graphs, cfg.rng_seed};
    parallel_for(cfg.graphs, cfg.jobs, [&](int gi) {
      MixedGraph g = random_mixed_graph(ecfg, gi);
      auto seed = interventions_seed(g, std::max(1, cfg.k), sub_seed(cfg.rng_seed, 555 + gi));
      iters[gi] = iic_close({g, seed, {}}).iterations;
    });
  }
  double mean = std::accumulate(iters.begin(), iters.end(), 0.0) / iters.size();
  int mx = *std::max_element(iters.begin(), iters.end());
  double le2 = 100.0 * std::count_if(iters.begin(), iters.end(), [](int x) { return x <= 2; }) /
               iters.size();
  csv.res.summary["mean_iter"] = mean;
  csv.res.summary["max_iter"] = mx;
  csv.res.summary["le2_pct"] = le2;
  csv.row({std::to_string(cfg.n), std::to_string(iters.size()), fmt(mean, 3), std::to_string(mx),
           fmt(le2, 1)});
}

void run_ad_compare(const ExperimentConfig& cfg, Csv& csv) {
  auto universe = enumerate_iv_structured(cfg.n);
  std::vector<std::array<long, 4>> cells(universe.size(), {0, 0, 0, 0});
  parallel_for(static_cast<int>(universe.size()), cfg.jobs, [&](int gi) {
    const auto& [g, triple] = universe[gi];
    SeedSpec spec;
    spec.iv_triples = {triple};
    auto res = iic_close({g, resolve_seeds(g, spec), {}});
    std::set<DirectedEdge> ad;
    for (NodeId i = 0; i < g.n(); ++i)
      if (ad_htc_baseline(g, i))
        for (NodeId p : g.pa(i)) ad.insert({p, i});
    for (const auto& e : g.directed()) {
      bool in_iic = res.identified_set.count(e) != 0;
      bool in_ad = ad.count(e) != 0;
      cells[gi][in_iic ? (in_ad ? 0 : 1) : (in_ad ? 2 : 3)]++;
    }
  });
  std::array<long, 4> sum{0, 0, 0, 0};
  for (const auto& c : cells)
    for (int k = 0; k < 4; ++k) sum[k] += c[k];
  csv.res.summary["both"] = static_cast<double>(sum[0]);
  csv.res.summary["iic_only"] = static_cast<double>(sum[1]);
  csv.res.summary["ad_only"] = static_cast<double>(sum[2]);
  csv.res.summary["neither"] = static_cast<double>(sum[3]);
  csv.row({std::to_string(cfg.n), std::to_string(sum[0]), std::to_string(sum[1]),
           std::to_string(sum[2]), std::to_string(sum[3])});
}

void run_precision(const ExperimentConfig& cfg, Csv& csv) {
  auto universe = enumerate_iv_structured(cfg.n);
  std::vector<std::pair<long, long>> cells(universe.size(), {0, 0});  // {new, false}
  parallel_for(static_cast<int>(universe.size()), cfg.jobs, [&](int gi) {
    const auto& [g, triple] = universe[gi];
    auto base = iic_close_unseeded(g);
    SeedSpec spec;
    spec.iv_triples = {triple};
    auto res = iic_close({g, resolve_seeds(g, spec), {}});
    std::vector<DirectedEdge> fresh;
    for (const auto& e : res.identified_set)
      if (!base.identified_set.count(e)) fresh.push_back(e);
    if (fresh.empty()) return;
    OracleOptions opts;
    opts.trials = 50;
    opts.rng_seed = sub_seed(cfg.rng_seed, gi);
    auto truth = oracle_identifiable_all(g, opts);
    const auto& D = g.directed();
    for (const auto& e : fresh) {
      cells[gi].first++;
      size_t k = std::lower_bound(D.begin(), D.end(), e) - D.begin();
      if (!truth[k]) cells[gi].second++;
    }
  });
  long fresh = 0, fp = 0;
  for (const auto& [a, b] : cells) {
    fresh += a;
    fp += b;
  }
  csv.res.summary["newly_identified"] = static_cast<double>(fresh);
  csv.res.summary["false_positives"] = static_cast<double>(fp);
  csv.row({std::to_string(cfg.n), std::to_string(fresh), std::to_string(fresh - fp),
           std::to_string(fp), fresh ? fmt(100.0 * (fresh - fp) / fresh, 2) : "100.00"});
}

void run_scalability(const ExperimentConfig& cfg, Csv& csv) {
  for (int n : {10, 20, 50, 100}) {
    if (n > cfg.n && cfg.n >= 10) continue;
    int reps = std::max(1, cfg.graphs / 10);
    EnumerationConfig ecfg{n, GraphFamily::ErdosRenyi, cfg.p_dir, cfg.p_bi, reps, cfg.rng_seed + n};
    std::vector<double> ms(reps);
    std::vector<long> edges(reps), id0(reps), idk(reps), s0(reps);
    parallel_for(reps, cfg.jobs, [&](int gi) {
      MixedGraph g = random_mixed_graph(ecfg, gi);
      edges[gi] = static_cast<long>(g.directed().size());
      auto t0 = std::chrono::steady_clock::now();
      auto base = iic_close_unseeded(g);
      auto seed = interventions_seed(g, std::max(1, n / 5), sub_seed(cfg.rng_seed, 99 + gi));
      auto res = iic_close({g, seed, {}});
      auto t1 = std::chrono::steady_clock::now();
      ms[gi] = std::chrono::duration<double, std::milli>(t1 - t0).count();
      id0[gi] = count_identified(base);
      idk[gi] = count_identified(res);
      s0[gi] = static_cast<long>(seed.edges.size());
    });
    long e = std::accumulate(edges.begin(), edges.end(), 0L);
    long a = std::accumulate(id0.begin(), id0.end(), 0L);
    long b = std::accumulate(idk.begin(), idk.end(), 0L);
    long s = std::accumulate(s0.begin(), s0.end(), 0L);
    double t = std::accumulate(ms.begin(), ms.end(), 0.0) / reps;
    if (e == 0) continue;
    csv.row({std::to_string(n), std::to_string(e / reps), std::to_string(s / reps),
             fmt(100.0 * a / e, 2), fmt(100.0 * b / e, 2), fmt(t, 1)});
    csv.res.summary["ms_n" + std::to_string(n)] = t;
    csv.res.summary["rate_n" + std::to_string(n)] = 100.0 * b / e;
  }
}

void run_seed_tradeoff(const ExperimentConfig& cfg, Csv& csv) {
  for (int k = 0; k <= std::min(cfg.n, 10); ++k) {
    EnumerationConfig ecfg{cfg.n, GraphFamily::ErdosRenyi, cfg.p_dir, cfg.p_bi, cfg.graphs,
                           cfg.rng_seed};
    std::vector<long> edges(cfg.graphs), idk(cfg.graphs);
    parallel_for(cfg.graphs, cfg.jobs, [&](int gi) {
      MixedGraph g = random_mixed_graph(ecfg, gi);
      edges[gi] = static_cast<long>(g.directed().size());
      if (!edges[gi]) return;
      auto seed = interventions_seed(g, k, sub_seed(cfg.rng_seed, 31 * k + gi));
      idk[gi] = count_identified(iic_close({g, seed, {}}));
    });
    long e = std::accumulate(edges.begin(), edges.end(), 0L);
    long b = std::accumulate(idk.begin(), idk.end(), 0L);
    csv.row({std::to_string(k), std::to_string(b), std::to_string(e), fmt(100.0 * b / e, 2)});
    csv.res.summary["rate_k" + std::to_string(k)] = 100.0 * b / e;
  }
}

void run_robustness(const ExperimentConfig& cfg, Csv& csv) {
  EnumerationConfig ecfg{cfg.n, GraphFamily::ErdosRenyi, cfg.p_dir, cfg.p_bi, cfg.graphs,
                         cfg.rng_seed};
  for (auto kind : {PerturbationKind::MissingDirected, PerturbationKind::ExtraDirected,
                    PerturbationKind::MissingConfounder, PerturbationKind::ExtraConfounder}) {
    for (double rate : {0.1, 0.2, 0.3}) {
      std::vector<double> precs(cfg.graphs, -1), recs(cfg.graphs, -1);
      parallel_for(cfg.graphs, cfg.jobs, [&](int gi) {
        MixedGraph g = random_mixed_graph(ecfg, gi);
        if (g.directed().empty()) return;
        uint64_t s = sub_seed(cfg.rng_seed, 1000 * static_cast<int>(kind) + gi);
        MixedGraph gp = g;
        try {
          gp = perturb(g, kind, rate, s);
        } catch (const Error&) {
          return;  // nothing to remove on this draw
        }
        std::mt19937_64 rng(s ^ 0xabcdef);
        NodeId v = static_cast<NodeId>(rng() % g.n());
        SeedSpec spec;
        spec.intervened = {v};
        auto res = iic_close({g, resolve_seeds(g, spec), {}});
        auto resp = iic_close({gp, resolve_seeds(gp, spec), {}});
        long tp = 0, fp = 0, fn = 0;
        for (const auto& e : g.directed()) {
          if (!gp.has_directed(e.first, e.second)) continue;  // compare on common edges
          bool a = res.identified_set.count(e) != 0;
          bool b = resp.identified_set.count(e) != 0;
          if (a && b) tp++;
          if (!a && b) fp++;
          if (a && !b) fn++;
        }
        if (tp + fp) precs[gi] = static_cast<double>(tp) / (tp + fp);
        if (tp + fn) recs[gi] = static_cast<double>(tp) / (tp + fn);
      });
      double ps = 0, rs = 0;
      int pc = 0, rc = 0;
      for (int i = 0; i < cfg.graphs; ++i) {
        if (precs[i] >= 0) {
          ps += precs[i];
          pc++;
        }
        if (recs[i] >= 0) {
          rs += recs[i];
          rc++;
        }
      }
      double precision = pc ? ps / pc : 1.0, recall = rc ? rs / rc : 1.0;
      csv.row({to_string(kind), fmt(rate, 1), fmt(precision, 3), fmt(recall, 3)});
      std::string key = std::string(to_string(kind)) + "_" + fmt(rate, 1);
      csv.res.summary["precision_" + key] = precision;
      csv.res.summary["recall_" + key] = recall;
    }
  }
}

void run_amplification(const ExperimentConfig& cfg, Csv& csv) {
  EnumerationConfig ecfg{cfg.n, GraphFamily::ErdosRenyi, cfg.p_dir, cfg.p_bi, cfg.graphs,
                         cfg.rng_seed};
  std::vector<double> gam(cfg.graphs, -1);
  parallel_for(cfg.graphs, cfg.jobs, [&](int gi) {
    MixedGraph g = random_mixed_graph(ecfg, gi);
    if (g.directed().empty()) return;
    auto seed = interventions_seed(g, cfg.k, sub_seed(cfg.rng_seed, gi));
    if (seed.edges.empty()) return;
    auto base = iic_close_unseeded(g);
    auto res = iic_close({g, seed, {}});
    gam[gi] = propagation_gain(res, seed, base);
  });
  double s = 0;
  int c = 0;
  double mx = 0;
  for (double v : gam)
    if (v >= 0) {
      s += v;
      c++;
      mx = std::max(mx, v);
    }
  csv.res.summary["gamma_mean"] = c ? s / c : 0;
  csv.res.summary["gamma_max"] = mx;
  csv.row({std::to_string(cfg.n), std::to_string(cfg.k), fmt(c ? s / c : 0, 3), fmt(mx, 3)});
}

void run_gap_structure(const ExperimentConfig& cfg, Csv& csv) {
  auto universe = enumerate_iv_structured(cfg.n);
  std::vector<std::map<std::pair<int, int>, long>> cells(universe.size());
  parallel_for(static_cast<int>(universe.size()), cfg.jobs, [&](int gi) {
    const auto& [g, triple] = universe[gi];
    SeedSpec spec;
    spec.iv_triples = {triple};
    auto res = iic_close({g, resolve_seeds(g, spec), {}});
    for (const auto& row : gap_profile(g, res)) cells[gi][{row.r_size, row.r_sib_overlap}]++;
  });
  std::map<std::pair<int, int>, long> hist;
  for (const auto& c : cells)
    for (const auto& [k, v] : c) hist[k] += v;
  for (const auto& [k, v] : hist) {
    csv.row({std::to_string(k.first), std::to_string(k.second), std::to_string(v)});
    csv.res.summary["gap_" + std::to_string(k.first) + "_" + std::to_string(k.second)] =
        static_cast<double>(v);
  }
}

}  // namespace

std::vector<std::string> experiment_names() {
  return {"seed_iv_exhaustive", "interventions", "convergence", "ad_compare", "precision",
          "scalability",       "seed_tradeoff", "robustness",  "amplification", "gap_structure"};
}

ExperimentResult run_experiment(const std::string& name, const ExperimentConfig& cfg,
                                std::ostream& os) {
  ExperimentResult res;
  Csv csv{os, res};
  if (name == "seed_iv_exhaustive") {
    csv.header(name, cfg, {"seed_source", "identified", "edges", "rate_pct"});
    run_seed_iv(cfg, csv);
  } else if (name == "interventions") {
    csv.header(name, cfg, {"seed_source", "identified", "edges", "rate_pct"});
    run_interventions(cfg, csv);
  } else if (name == "convergence") {
    csv.header(name, cfg, {"n", "graphs", "mean_iter", "max_iter", "le2_pct"});
    run_convergence(cfg, csv);
  } else if (name == "ad_compare") {
    csv.header(name, cfg, {"n", "both", "iic_only", "ad_only", "neither"});
    run_ad_compare(cfg, csv);
  } else if (name == "precision") {
    csv.header(name, cfg, {"n", "newly_identified", "true_pos", "false_pos", "precision_pct"});
    run_precision(cfg, csv);
  } else if (name == "scalability") {
    csv.header(name, cfg, {"n", "edges_per_graph", "seed_edges", "htc_rate_pct", "iic_rate_pct",
                           "mean_ms"});
    run_scalability(cfg, csv);
  } else if (name == "seed_tradeoff") {
    csv.header(name, cfg, {"k", "identified", "edges", "rate_pct"});
    run_seed_tradeoff(cfg, csv);
  } else if (name == "robustness") {
    csv.header(name, cfg, {"perturbation", "rate", "precision", "recall"});
    run_robustness(cfg, csv);
  } else if (name == "amplification") {
    csv.header(name, cfg, {"n", "k", "gamma_mean", "gamma_max"});
    run_amplification(cfg, csv);
  } else if (name == "gap_structure") {
    csv.header(name, cfg, {"r_size", "r_sib_overlap", "edges"});
    run_gap_structure(cfg, csv);
  } else {
    throw Error(Err::UnknownExperiment, "unknown experiment: " + name);
  }
  return res;
}

}  // namespace iic
