#include "iic/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <random>
#include <set>

#include "iic/closure.hpp"

namespace iic {

namespace {

double pick_coeff(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  return (rng() & 1 ? 1.0 : -1.0) * mag(rng);
}

double pick_conf(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.1, 0.4);
  return (rng() & 1 ? 1.0 : -1.0) * mag(rng);
}

void fix_pd(Eigen::MatrixXd& omega) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(omega);
  double lo = es.eigenvalues().minCoeff();
  if (lo < 0.05)
    omega.diagonal().array() += (0.05 - lo) + 0.05;
}

struct ParamIndex {
  // free-parameter layout: B entries (minus known), Omega diagonal, Omega off-diagonal
  std::vector<DirectedEdge> b_edges;
  int n = 0;
  std::vector<BidirectedEdge> o_pairs;
  int total() const { return static_cast<int>(b_edges.size()) + n + static_cast<int>(o_pairs.size()); }
};

ParamIndex make_index(const MixedGraph& g, const std::vector<DirectedEdge>& known) {
  ParamIndex idx;
  idx.n = g.n();
  std::set<DirectedEdge> kn(known.begin(), known.end());
  for (const auto& e : g.directed())
    if (!kn.count(e)) idx.b_edges.push_back(e);
  idx.o_pairs = g.bidirected();
  return idx;
}

Eigen::VectorXd vech(const Eigen::MatrixXd& m) {
  int n = static_cast<int>(m.rows());
  Eigen::VectorXd v(n * (n + 1) / 2);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) v[k++] = m(i, j);
  return v;
}

Eigen::VectorXd sigma_of(const ParamRealization& p) {
  int n = static_cast<int>(p.B.rows());
  Eigen::MatrixXd M = (Eigen::MatrixXd::Identity(n, n) - p.B).inverse();
  return vech(M.transpose() * p.Omega * M);
}

void write_params(ParamRealization& p, const ParamIndex& idx, const Eigen::VectorXd& theta) {
  int k = 0;
  for (const auto& [j, i] : idx.b_edges) p.B(j, i) = theta[k++];
  for (int v = 0; v < idx.n; ++v) p.Omega(v, v) = theta[k++];
  for (const auto& [a, b] : idx.o_pairs) {
    p.Omega(a, b) = theta[k];
    p.Omega(b, a) = theta[k];
    ++k;
  }
}

Eigen::VectorXd read_params(const ParamRealization& p, const ParamIndex& idx) {
  Eigen::VectorXd theta(idx.total());
  int k = 0;
  for (const auto& [j, i] : idx.b_edges) theta[k++] = p.B(j, i);
  for (int v = 0; v < idx.n; ++v) theta[k++] = p.Omega(v, v);
  for (const auto& [a, b] : idx.o_pairs) theta[k++] = p.Omega(a, b);
  return theta;
}

// Central-difference Jacobian of theta -> vech(Sigma).
Eigen::MatrixXd jacobian(const MixedGraph& g, const ParamIndex& idx, ParamRealization base,
                         double step) {
  Eigen::VectorXd theta = read_params(base, idx);
  int rows = g.n() * (g.n() + 1) / 2;
  Eigen::MatrixXd J(rows, idx.total());
  ParamRealization work = base;
  for (int k = 0; k < idx.total(); ++k) {
    Eigen::VectorXd tp = theta, tm = theta;
    tp[k] += step;
    tm[k] -= step;
    write_params(work, idx, tp);
    Eigen::VectorXd sp = sigma_of(work);
    write_params(work, idx, tm);
    Eigen::VectorXd sm = sigma_of(work);
    J.col(k) = (sp - sm) / (2.0 * step);
  }
  return J;
}

}  // namespace

ParamRealization sample_params(const MixedGraph& g, uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  int n = g.n();
  ParamRealization p{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Identity(n, n)};
  for (const auto& [j, i] : g.directed()) p.B(j, i) = pick_coeff(rng);
  for (const auto& [a, b] : g.bidirected()) {
    double w = pick_conf(rng);
    p.Omega(a, b) = w;
    p.Omega(b, a) = w;
  }
  fix_pd(p.Omega);
  return p;
}

CovMatrix implied_cov(const ParamRealization& p) {
  int n = static_cast<int>(p.B.rows());
  Eigen::MatrixXd M = (Eigen::MatrixXd::Identity(n, n) - p.B).inverse();
  Eigen::MatrixXd s = M.transpose() * p.Omega * M;
  return CovMatrix{0.5 * (s + s.transpose())};
}

std::vector<bool> oracle_identifiable_all(const MixedGraph& g, const OracleOptions& opts) {
  ParamIndex idx = make_index(g, opts.known_edges);
  const auto& D = g.directed();
  std::vector<bool> ok(D.size(), true);
  std::map<DirectedEdge, int> col_of;
  for (size_t k = 0; k < idx.b_edges.size(); ++k) col_of[idx.b_edges[k]] = static_cast<int>(k);

  std::mt19937_64 seeder(opts.rng_seed);
  for (int t = 0; t < opts.trials; ++t) {
    ParamRealization p;
    int guard = 0;
    while (true) {
      p = sample_params(g, seeder());
      int n = g.n();
      Eigen::MatrixXd ImB = Eigen::MatrixXd::Identity(n, n) - p.B;
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(ImB);
      double cond = svd.singularValues()(0) /
                    svd.singularValues()(svd.singularValues().size() - 1);
      if (cond < 1e10) break;
      if (++guard > 32)
        throw Error(Err::DegenerateRealization, "could not sample a well-conditioned realization");
    }
    Eigen::MatrixXd J = jacobian(g, idx, p, opts.fd_step);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double thresh = std::max(J.rows(), J.cols()) * sv(0) * 1e-10;
    int rank = 0;
    for (int k = 0; k < sv.size(); ++k)
      if (sv(k) >= thresh) ++rank;
    int ncols = static_cast<int>(J.cols());
    if (rank >= ncols) continue;  // trivial null space: nothing moves
    Eigen::MatrixXd null_basis = svd.matrixV().rightCols(ncols - rank);
    for (size_t e = 0; e < D.size(); ++e) {
      auto it = col_of.find(D[e]);
      if (it == col_of.end()) continue;  // a known edge: axiomatically identified
      double comp = null_basis.row(it->second).cwiseAbs().maxCoeff();
      if (comp > opts.tol) ok[e] = false;
    }
  }
  return ok;
}

bool oracle_identifiable(const MixedGraph& g, const DirectedEdge& edge, const OracleOptions& opts) {
  if (!g.has_directed(edge.first, edge.second))
    throw Error(Err::IndexOutOfRange, "oracle: edge not in graph");
  auto all = oracle_identifiable_all(g, opts);
  const auto& D = g.directed();
  for (size_t k = 0; k < D.size(); ++k)
    if (D[k] == edge) return all[k];
  return false;
}

Eigen::VectorXd analytic_dsigma_dB(const ParamRealization& p, NodeId j, NodeId i) {
  int n = static_cast<int>(p.B.rows());
  Eigen::MatrixXd M = (Eigen::MatrixXd::Identity(n, n) - p.B).inverse();
  Eigen::MatrixXd dM = M.col(j) * M.row(i);  // M E_ji M
  Eigen::MatrixXd dS = dM.transpose() * p.Omega * M + M.transpose() * p.Omega * dM;
  Eigen::VectorXd v(n * (n + 1) / 2);
  int k = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) v[k++] = dS(a, b);
  return v;
}

Eigen::VectorXd fd_dsigma_dB(const ParamRealization& p, NodeId j, NodeId i, double step) {
  ParamRealization up = p, dn = p;
  up.B(j, i) += step;
  dn.B(j, i) -= step;
  int n = static_cast<int>(p.B.rows());
  auto vech_of = [&](const ParamRealization& q) {
    Eigen::MatrixXd M = (Eigen::MatrixXd::Identity(n, n) - q.B).inverse();
    Eigen::MatrixXd s = M.transpose() * q.Omega * M;
    Eigen::VectorXd v(n * (n + 1) / 2);
    int k = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) v[k++] = s(a, b);
    return v;
  };
  return (vech_of(up) - vech_of(dn)) / (2.0 * step);
}

OracleAgreement oracle_agrees_with_htc(const MixedGraph& g, const OracleOptions& opts) {
  OracleAgreement rep;
  auto res = iic_close_unseeded(g);
  auto truth = oracle_identifiable_all(g, opts);
  const auto& D = g.directed();
  for (size_t k = 0; k < D.size(); ++k) {
    auto st = res.status.at(D[k]);
    bool agree = true;
    if (st == EdgeStatus::Identified) agree = truth[k];
    if (st == EdgeStatus::NonIdentifiable) agree = !truth[k];
    rep.rows.push_back({D[k], st, truth[k], agree});
    if (!agree) rep.disagreements++;
  }
  return rep;
}

}  // namespace iic
