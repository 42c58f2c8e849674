#include "iic/estimate.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace iic {

namespace {
constexpr double kZ975 = 1.959963984540054;
}

Eigen::MatrixXd Dataset::rows_for_regime(int r) const {
  std::vector<int> idx;
  for (size_t k = 0; k < regime.size(); ++k)
    if (regime[k] == r) idx.push_back(static_cast<int>(k));
  Eigen::MatrixXd out(idx.size(), X.cols());
  for (size_t k = 0; k < idx.size(); ++k) out.row(k) = X.row(idx[k]);
  return out;
}

std::optional<int> Dataset::regime_with(NodeId v) const {
  for (size_t r = 0; r < regime_nodes.size(); ++r)
    if (regime_nodes[r].count(v)) return static_cast<int>(r);
  return std::nullopt;
}

CovMatrix sample_cov(const Eigen::MatrixXd& X) {
  if (X.rows() < 2) throw Error(Err::TooFewSamples, "sample covariance needs >= 2 rows");
  Eigen::MatrixXd C = X.rowwise() - X.colwise().mean();
  Eigen::MatrixXd s = (C.transpose() * C) / static_cast<double>(X.rows() - 1);
  return CovMatrix{0.5 * (s + s.transpose())};
}

namespace {

// Cov(lambda_w, X_x) where lambda_w = X_w - sum_p Bhat_pw X_p for residualized
// sources; plain X_w otherwise.
struct CovAccess {
  const Eigen::MatrixXd& sigma;
  const MixedGraph& g;
  const std::map<DirectedEdge, double>& est;
  const std::set<NodeId>& residualized;

  double operator()(NodeId w, NodeId x) const {
    double v = sigma(w, x);
    if (residualized.count(w))
      for (NodeId p : g.pa(w)) v -= est.at({p, w}) * sigma(p, x);
    return v;
  }
};

struct Phase2Outcome {
  std::map<DirectedEdge, double> estimates;
  std::map<DirectedEdge, std::string> unestimated;
  std::vector<SolveDiagnostics> diagnostics;
};

Phase2Outcome run_phases(const MixedGraph& g, const ClosureResult& closure, const SeedSet& seeds,
                         const Eigen::MatrixXd& sigma, const Dataset* data, double kappa_max,
                         bool want_diagnostics) {
  Phase2Outcome out;
  auto& est = out.estimates;

  // Phase 1: seed estimators (never overwritten later)
  for (const auto& e : seeds.edges) {
    const SeedInfo& info = seeds.info.at(e);
    switch (info.tag) {
      case EstimatorTag::IvRatio: {
        double denom = sigma(info.instrument, e.first);
        if (std::abs(denom) < 1e-12) {
          out.unestimated[e] = "weak instrument in seed ratio";
          break;
        }
        est[e] = sigma(info.instrument, e.second) / denom;
        break;
      }
      case EstimatorTag::NgBivariate:
        est[e] = sigma(e.first, e.second) / sigma(e.first, e.first);
        break;
      case EstimatorTag::PriorValue:
        if (info.prior_value)
          est[e] = *info.prior_value;
        else
          out.unestimated[e] = "prior edge carries no value";
        break;
      case EstimatorTag::InterventionRegression: {
        if (!data) throw Error(Err::MissingRegimeData, "intervention seed needs regime data");
        auto r = data->regime_with(e.first);
        if (!r) throw Error(Err::MissingRegimeData, "no regime intervening on the seeded node");
        Eigen::MatrixXd rows = data->rows_for_regime(*r);
        if (rows.rows() < g.n() + 2)
          throw Error(Err::MissingRegimeData, "regime has too few samples");
        const auto& pa = g.pa(e.second);
        Eigen::MatrixXd C = rows.rowwise() - rows.colwise().mean();
        Eigen::MatrixXd P(rows.rows(), pa.size());
        for (size_t k = 0; k < pa.size(); ++k) P.col(k) = C.col(pa[k]);
        Eigen::VectorXd y = C.col(e.second);
        Eigen::VectorXd beta = (P.transpose() * P).ldlt().solve(P.transpose() * y);
        for (size_t k = 0; k < pa.size(); ++k)
          if (pa[k] == e.first) est[e] = beta[k];
        break;
      }
    }
  }

  // which witness sources must be probed through residual errors
  auto residual_set = [&](NodeId i, const Witness& w) {
    std::set<NodeId> res;
    auto clean = clean_sources(g, i);
    std::set<NodeId> clean_set(clean.begin(), clean.end());
    for (NodeId s : w.sources)
      if (!clean_set.count(s)) res.insert(s);
    return res;
  };

  // Phase 2: dependency-ordered witness-system solves
  bool progress = true;
  int round = 0;
  std::set<NodeId> refused;  // ill-conditioned nodes, do not retry
  while (progress) {
    progress = false;
    ++round;
    for (NodeId i = 0; i < g.n(); ++i) {
      if (refused.count(i)) continue;
      const auto& pa = g.pa(i);
      if (pa.empty()) continue;
      std::vector<DirectedEdge> pending;
      for (NodeId p : pa) {
        DirectedEdge e{p, i};
        if (closure.identified_set.count(e) && !est.count(e) && !out.unestimated.count(e))
          pending.push_back(e);
      }
      if (pending.empty()) continue;
      // the node's certificate: recorded on any incoming identified edge
      const Witness* w = nullptr;
      for (const auto& e : pending) {
        auto it = closure.provenance.find(e);
        if (it != closure.provenance.end() && it->second.witness) {
          w = &*it->second.witness;
          break;
        }
      }
      if (!w) continue;  // e.g. value-less prior seeds; reported at the end
      // required inputs: estimates for K-edges and for residualized sources
      std::set<NodeId> resid = residual_set(i, *w);
      bool ready = true;
      for (NodeId k : w->known_parents)
        if (!est.count({k, i})) ready = false;
      for (NodeId s : resid)
        for (NodeId p : g.pa(s))
          if (!est.count({p, s})) ready = false;
      if (!ready) continue;

      std::vector<NodeId> targets;
      for (const auto& [tgt, trek] : w->system) {
        (void)trek;
        targets.push_back(tgt);
      }
      std::sort(targets.begin(), targets.end());
      CovAccess cov{sigma, g, est, resid};
      int m = static_cast<int>(targets.size());
      if (m == 0) continue;
      Eigen::MatrixXd M(m, m);
      Eigen::VectorXd rhs(m);
      for (int l = 0; l < m; ++l) {
        NodeId src = w->system.at(targets[l]).source;
        for (int c = 0; c < m; ++c) M(l, c) = cov(src, targets[c]);
        double v = cov(src, i);
        for (NodeId k : w->known_parents) v -= est.at({k, i}) * cov(src, k);
        rhs[l] = v;
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
      double smax = svd.singularValues()(0);
      double smin = svd.singularValues()(svd.singularValues().size() - 1);
      double kappa = (smin > 0) ? smax / smin : std::numeric_limits<double>::infinity();
      if (!(kappa < kappa_max)) {
        refused.insert(i);
        for (const auto& e : pending) out.unestimated[e] = "ill-conditioned witness system";
        continue;
      }
      Eigen::VectorXd beta = svd.solve(rhs);
      for (int c = 0; c < m; ++c) {
        DirectedEdge e{targets[c], i};
        if (!est.count(e)) {
          est[e] = beta[c];
          progress = true;
        }
      }
      if (want_diagnostics) {
        SolveDiagnostics d;
        d.node = i;
        d.step = round;
        d.kappa = kappa;
        double colmax = 0.0;
        for (NodeId k : w->known_parents) colmax = std::max(colmax, sigma.col(k).norm());
        d.gamma = (smin > 0 ? 1.0 / smin : 0.0) * colmax;
        out.diagnostics.push_back(d);
      }
    }
  }

  for (const auto& e : closure.identified_set)
    if (!est.count(e) && !out.unestimated.count(e))
      out.unestimated[e] = "no estimable witness chain";
  return out;
}

}  // namespace

EstimateResult iic_estimate(const MixedGraph& g, const Dataset& data, const SeedSpec& spec,
                            const EstimateOptions& opts) {
  if (data.X.rows() < g.n() + 2) throw Error(Err::TooFewSamples, "need at least |V|+2 samples");
  SeedSet seeds = resolve_seeds(g, spec);
  EstimateResult out;
  out.closure = iic_close({g, seeds, {}});

  Eigen::MatrixXd obs = data.rows_for_regime(-1);
  if (obs.rows() < g.n() + 2) throw Error(Err::TooFewSamples, "need observational samples");
  CovMatrix sig = sample_cov(obs);
  auto main = run_phases(g, out.closure, seeds, sig.sigma, &data, opts.kappa_max, true);
  out.estimates = main.estimates;
  out.unestimated = main.unestimated;
  out.diagnostics = main.diagnostics;

  if (!opts.bootstrap || opts.n_boot <= 1) return out;

  // Phase 3: nonparametric bootstrap over rows, stratified by regime
  std::map<DirectedEdge, std::vector<double>> reps;
  std::mt19937_64 rng(opts.rng_seed);
  std::vector<std::vector<int>> strata;  // row indices per regime (-1 first)
  {
    std::map<int, std::vector<int>> by;
    for (size_t r = 0; r < data.regime.size(); ++r) by[data.regime[r]].push_back(static_cast<int>(r));
    for (auto& [k, v] : by) strata.push_back(std::move(v));
  }
  for (int b = 0; b < opts.n_boot; ++b) {
    Dataset bs;
    bs.regime_nodes = data.regime_nodes;
    std::vector<int> pick;
    for (const auto& s : strata) {
      std::uniform_int_distribution<int> u(0, static_cast<int>(s.size()) - 1);
      for (size_t k = 0; k < s.size(); ++k) pick.push_back(s[u(rng)]);
    }
    bs.X.resize(pick.size(), data.X.cols());
    bs.regime.resize(pick.size());
    for (size_t k = 0; k < pick.size(); ++k) {
      bs.X.row(k) = data.X.row(pick[k]);
      bs.regime[k] = data.regime[pick[k]];
    }
    Eigen::MatrixXd bobs = bs.rows_for_regime(-1);
    if (bobs.rows() < 2) continue;
    CovMatrix bsig = sample_cov(bobs);
    try {
      auto rep = run_phases(g, out.closure, seeds, bsig.sigma, &bs, opts.kappa_max, false);
      for (const auto& [e, v] : rep.estimates) reps[e].push_back(v);
    } catch (const Error&) {
      continue;  // a degenerate resample; skip the replicate
    }
  }
  for (const auto& [e, v] : out.estimates) {
    auto it = reps.find(e);
    if (it == reps.end() || it->second.size() < 8) continue;
    const auto& r = it->second;
    double mean = 0;
    for (double x : r) mean += x;
    mean /= r.size();
    double var = 0;
    for (double x : r) var += (x - mean) * (x - mean);
    var /= (r.size() - 1);
    double sd = std::sqrt(var);
    out.se[e] = sd;
    out.ci[e] = {v - kZ975 * sd, v + kZ975 * sd};
  }
  return out;
}

EstimateResult iic_estimate_population(const MixedGraph& g, const CovMatrix& sigma,
                                       const SeedSpec& spec) {
  SeedSet seeds = resolve_seeds(g, spec);
  for (const auto& e : seeds.edges)
    if (seeds.info.at(e).tag == EstimatorTag::InterventionRegression)
      throw Error(Err::MissingRegimeData, "population path cannot use intervention seeds");
  EstimateResult out;
  out.closure = iic_close({g, seeds, {}});
  auto main = run_phases(g, out.closure, seeds, sigma.sigma, nullptr, 1e12, true);
  out.estimates = main.estimates;
  out.unestimated = main.unestimated;
  out.diagnostics = main.diagnostics;
  return out;
}

std::map<DirectedEdge, double> ols_baseline(const MixedGraph& g, const Eigen::MatrixXd& X) {
  CovMatrix sig = sample_cov(X);
  std::map<DirectedEdge, double> out;
  for (NodeId i = 0; i < g.n(); ++i) {
    const auto& pa = g.pa(i);
    if (pa.empty()) continue;
    Eigen::MatrixXd Spp(pa.size(), pa.size());
    Eigen::VectorXd spy(pa.size());
    for (size_t a = 0; a < pa.size(); ++a) {
      spy[a] = sig.sigma(pa[a], i);
      for (size_t b = 0; b < pa.size(); ++b) Spp(a, b) = sig.sigma(pa[a], pa[b]);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Spp, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin < 1e-12 * svd.singularValues()(0))
      throw Error(Err::SingularDesign, "collinear parents in OLS design");
    Eigen::VectorXd beta = svd.solve(spy);
    for (size_t a = 0; a < pa.size(); ++a) out[{pa[a], i}] = beta[a];
  }
  return out;
}

std::optional<double> tsls_baseline(const MixedGraph& g, const Eigen::MatrixXd& X,
                                    const IvTriple& triple) {
  auto v = validate_iv_triple(g, triple.z, triple.t, triple.y);
  if (!v.t_to_y_ok) return std::nullopt;
  CovMatrix sig = sample_cov(X);
  double denom = sig.sigma(triple.z, triple.t);
  double scale = std::sqrt(sig.sigma(triple.z, triple.z) * sig.sigma(triple.t, triple.t));
  if (std::abs(denom) < 1e-6 * scale)
    throw Error(Err::WeakInstrument, "instrument-treatment covariance near zero");
  return sig.sigma(triple.z, triple.y) / denom;
}

ErrorPropagationReport error_propagation_report(const EstimateResult& result) {
  ErrorPropagationReport rep;
  rep.steps = result.diagnostics;
  for (const auto& d : rep.steps) {
    rep.depth = std::max(rep.depth, d.step);
    rep.bound_constant *= (1.0 + d.kappa * d.gamma);
  }
  return rep;
}

Dataset simulate_data(const ParamRealization& p, int n, uint64_t rng_seed,
                      const std::set<NodeId>& intervened) {
  int nv = static_cast<int>(p.B.rows());
  Eigen::MatrixXd B = p.B;
  Eigen::MatrixXd Om = p.Omega;
  for (NodeId v : intervened) {
    B.col(v).setZero();  // sever incoming edges
    for (int k = 0; k < nv; ++k) {
      if (k == v) continue;
      Om(v, k) = 0.0;
      Om(k, v) = 0.0;
    }
    Om(v, v) = 1.0;
  }
  Eigen::MatrixXd A = (Eigen::MatrixXd::Identity(nv, nv) - B.transpose()).inverse();
  Eigen::LLT<Eigen::MatrixXd> llt(Om);
  if (llt.info() != Eigen::Success)
    throw Error(Err::DegenerateRealization, "error covariance not positive definite");
  Eigen::MatrixXd L = llt.matrixL();
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Dataset out;
  out.X.resize(n, nv);
  out.regime.assign(n, intervened.empty() ? -1 : 0);
  if (!intervened.empty()) out.regime_nodes.push_back(intervened);
  Eigen::VectorXd z(nv);
  for (int r = 0; r < n; ++r) {
    for (int k = 0; k < nv; ++k) z[k] = nd(rng);
    out.X.row(r) = (A * (L * z)).transpose();
  }
  return out;
}

Dataset concat(const Dataset& a, const Dataset& b) {
  if (a.X.cols() != b.X.cols()) throw Error(Err::IndexOutOfRange, "column mismatch in concat");
  Dataset out;
  out.X.resize(a.X.rows() + b.X.rows(), a.X.cols());
  out.X.topRows(a.X.rows()) = a.X;
  out.X.bottomRows(b.X.rows()) = b.X;
  out.regime = a.regime;
  out.regime_nodes = a.regime_nodes;
  int shift = static_cast<int>(a.regime_nodes.size());
  for (int r : b.regime) out.regime.push_back(r < 0 ? -1 : r + shift);
  for (const auto& s : b.regime_nodes) out.regime_nodes.push_back(s);
  return out;
}

}  // namespace iic
