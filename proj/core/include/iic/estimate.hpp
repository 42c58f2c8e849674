#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "iic/closure.hpp"
#include "iic/graph.hpp"
#include "iic/oracle.hpp"
#include "iic/seeds.hpp"

namespace iic {

/// Observations, one row per sample. regime[r] = -1 for observational rows,
/// otherwise an index into regime_nodes giving the intervened node set.
struct Dataset {
  Eigen::MatrixXd X;
  std::vector<int> regime;
  std::vector<std::set<NodeId>> regime_nodes;

  Eigen::MatrixXd rows_for_regime(int r) const;     // r = -1: observational
  std::optional<int> regime_with(NodeId v) const;   // a regime intervening on v
};

/// Unbiased sample covariance of internally centered data.
CovMatrix sample_cov(const Eigen::MatrixXd& X);

struct SolveDiagnostics {
  NodeId node = -1;
  int step = 0;          // propagation depth of this solve
  double kappa = 0.0;    // condition number of the witness system
  double gamma = 0.0;    // ||M^-1|| * max_k ||Sigma_{.,k}|| over substituted parents
};

struct EstimateResult {
  std::map<DirectedEdge, double> estimates;
  std::map<DirectedEdge, double> se;
  std::map<DirectedEdge, std::pair<double, double>> ci;
  std::vector<SolveDiagnostics> diagnostics;
  std::map<DirectedEdge, std::string> unestimated;
  ClosureResult closure;
};

struct EstimateOptions {
  int n_boot = 200;
  double kappa_max = 1e8;  // refuse ill-conditioned witness systems
  uint64_t rng_seed = 7;
  bool bootstrap = true;
};

/// Plug-in estimation: seed estimators first, then iterated linear solves of
/// the recorded witness systems with known-parent substitution, then a
/// nonparametric bootstrap over rows for standard errors and 95% normal CIs.
EstimateResult iic_estimate(const MixedGraph& g, const Dataset& data, const SeedSpec& spec,
                            const EstimateOptions& opts = {});

/// Same pipeline evaluated on a population covariance (no data, no bootstrap);
/// exact at the population values for every identified edge.
EstimateResult iic_estimate_population(const MixedGraph& g, const CovMatrix& sigma,
                                       const SeedSpec& spec);

/// Per node, least squares of X_i on its parents (observational rows).
std::map<DirectedEdge, double> ols_baseline(const MixedGraph& g, const Eigen::MatrixXd& X);

/// Two-stage least squares for the edge T->Y of a valid triple; nullopt when
/// the triple fails validation.
std::optional<double> tsls_baseline(const MixedGraph& g, const Eigen::MatrixXd& X,
                                    const IvTriple& triple);

struct ErrorPropagationReport {
  int depth = 0;
  std::vector<SolveDiagnostics> steps;
  double bound_constant = 1.0;  // prod over steps of (1 + kappa*gamma), C0 = 1
};

ErrorPropagationReport error_propagation_report(const EstimateResult& result);

/// Draw n samples of X = (I-B^T)^-1 eps, eps ~ N(0, Omega). When `intervened`
/// is nonempty those nodes get their incoming edges severed and independent
/// standard-normal errors; rows carry the regime tag.
Dataset simulate_data(const ParamRealization& p, int n, uint64_t rng_seed,
                      const std::set<NodeId>& intervened = {});

/// Concatenate datasets (column counts must match).
Dataset concat(const Dataset& a, const Dataset& b);

}  // namespace iic
