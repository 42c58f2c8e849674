#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iic/graph.hpp"

namespace iic {

/// Coefficient matrix and error covariance with sparsity matching the graph.
/// B(j,i) is the coefficient on edge j->i; the model is X = B^T X + eps,
/// Sigma = (I-B)^-T Omega (I-B)^-1.
struct ParamRealization {
  Eigen::MatrixXd B;
  Eigen::MatrixXd Omega;
};

struct CovMatrix {
  Eigen::MatrixXd sigma;
};

/// Coefficients i.i.d. Uniform(+-[0.5,2]); Omega diagonal 1.0 with confounded
/// entries Uniform(+-[0.1,0.4]); the diagonal is lifted if needed to keep
/// Omega positive definite.
ParamRealization sample_params(const MixedGraph& g, uint64_t rng_seed);

CovMatrix implied_cov(const ParamRealization& p);

struct OracleOptions {
  int trials = 50;
  double fd_step = 1e-7;
  double tol = 1e-8;
  uint64_t rng_seed = 1;
  // Edges whose coefficients are treated as known constants (side-information
  // axioms); their columns are excluded from the free-parameter Jacobian.
  std::vector<DirectedEdge> known_edges;
};

/// Numerical ground truth for one edge: at each random realization, build the
/// Jacobian of the free-parameter -> vech(Sigma) map by central differences,
/// compute a null-space basis by SVD and require every null vector's
/// component on the edge coordinate to stay below tol.
bool oracle_identifiable(const MixedGraph& g, const DirectedEdge& edge,
                         const OracleOptions& opts = {});

/// Same test for all directed edges at once (shares the Jacobians).
std::vector<bool> oracle_identifiable_all(const MixedGraph& g, const OracleOptions& opts = {});

/// Analytic Jacobian column d vech(Sigma) / d B_ji via dM = M E_ji M with
/// M = (I-B)^-1; used to cross-check the finite-difference path.
Eigen::VectorXd analytic_dsigma_dB(const ParamRealization& p, NodeId j, NodeId i);
Eigen::VectorXd fd_dsigma_dB(const ParamRealization& p, NodeId j, NodeId i, double step);

struct OracleAgreement {
  struct Row {
    DirectedEdge edge;
    EdgeStatus iic_status;
    bool oracle_identifiable;
    bool agree;
  };
  std::vector<Row> rows;
  int disagreements = 0;
};

/// Per-edge comparison of the unseeded closure against the oracle:
/// Identified must be oracle-true, NonIdentifiable oracle-false,
/// Inconclusive tolerates either verdict.
OracleAgreement oracle_agrees_with_htc(const MixedGraph& g, const OracleOptions& opts = {});

}  // namespace iic
