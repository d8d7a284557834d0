// SPDX-License-Identifier: Apache-2.0
//
// Dense primal-dual interior-point solver for small conic programs with
// Hermitian PSD matrix blocks, non-negative scalars, and affine rows.
// Complex blocks ride on the standard real symmetric embedding.

#ifndef WPCN_CONIC_HPP
#define WPCN_CONIC_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace wpcn::conic {

enum class Sense { LessEqual, Equal, GreaterEqual };

/// One affine row: sum_n Tr(block_coeffs[n] * V_n) + scalar_coeffs . s  <sense>  rhs.
/// Every block coefficient must be Hermitian so the trace inner product is real.
struct ConstraintRow {
  std::vector<Eigen::MatrixXcd> block_coeffs;  // one per PSD block; empty matrix = zero
  Eigen::VectorXd scalar_coeffs;
  double rhs = 0.0;
  Sense sense = Sense::LessEqual;
  std::string label;
};

/// Linear objective over Hermitian PSD blocks and non-negative scalars.
struct SdpSubproblem {
  std::vector<int> psd_block_dims;
  int n_scalars = 0;
  std::vector<Eigen::MatrixXcd> objective_blocks;  // Hermitian C_n; empty = zero
  Eigen::VectorXd objective_scalars;
  std::vector<ConstraintRow> constraints;

  void validate() const;  // throws on shape or Hermiticity (1e-12) violations
};

enum class SolveStatus { Optimal, Infeasible, NumericalTrouble };

struct SdpSolution {
  std::vector<Eigen::MatrixXcd> v_blocks;  // Hermitian PSD
  Eigen::VectorXd scalars;
  double objective_value = 0.0;
  SolveStatus status = SolveStatus::NumericalTrouble;
  double primal_residual = 0.0;  // scaled ||A(X) - b||_inf
  double dual_residual = 0.0;    // scaled dual-slack mismatch
  double rel_gap = 0.0;          // |primal - dual| / (1 + |primal| + |dual|)
  Eigen::VectorXd row_duals;     // one multiplier per constraint row
  std::vector<Eigen::MatrixXcd> dual_blocks;  // Y_n, PSD at optimality
  Eigen::VectorXd scalar_reduced_costs;
  int iterations = 0;
};

struct SolverOptions {
  double tol_gap = 1e-10;
  double tol_feas = 1e-10;
  int max_iterations = 200;
  // Accept as Optimal when progress stalls inside these looser bounds.
  double acceptable_gap = 1e-8;
  double acceptable_feas = 1e-8;
};

SdpSolution solve(const SdpSubproblem& sp, const SolverOptions& opts = {});

/// KKT residual report recomputed from the original (complex) data.
struct KktReport {
  double max_primal_violation = 0.0;        // constraint violations
  std::vector<double> stationarity;         // || C_n - A_n^T(y) - Y_n ||_F per block
  std::vector<double> complementarity;      // |<Y_n, V_n>| per block
  double scalar_complementarity = 0.0;      // max |z_i * s_i|
  double dual_sign_violation = 0.0;         // wrong-signed row multipliers
  double min_dual_block_eig = 0.0;          // most negative eigenvalue across Y_n
  double recomputed_gap = 0.0;              // |primal - b'y| / max(1, |primal|)
  double max_residual = 0.0;                // worst of everything above
};

KktReport verify_kkt(const SdpSubproblem& sp, const SdpSolution& sol);

/// [[Re A, -Im A], [Im A, Re A]]. Trace doubles; PSD-ness is preserved both ways.
Eigen::MatrixXd hermitian_to_real_embedding(const Eigen::MatrixXcd& a);

/// Inverse of the embedding (averages the redundant halves).
Eigen::MatrixXcd real_embedding_to_hermitian(const Eigen::MatrixXd& m);

/// Plain-text dump (dims, objective, rows) for offline cross-checking.
void dump_subproblem(const SdpSubproblem& sp, std::ostream& os);

}  // namespace wpcn::conic

#endif
