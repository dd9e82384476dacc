#pragma once

#include "bloch/coeffs.hpp"
#include "bloch/fiber.hpp"

namespace bloch {

/// Constant-coefficient effective operator produced by the cell problem.
///
/// drift = mean(c_i - c'_i) is the uncorrected first-order part that enters
/// the homogenized fiber as i <drift, xi>; c_hat is the corrected first-order
/// coefficient of the homogenized form.
struct HomogenizedOperator {
  Eigen::MatrixXcd C_hat;
  Eigen::VectorXcd c_hat;
  Eigen::VectorXcd drift;
  cplx c0_hat{};
  bool symmetrized = false;
  bool self_adjoint = false;

  int dimension() const { return static_cast<int>(C_hat.rows()); }
};

/// Galerkin solutions w_j of H_1 w_j = sum_l d_l c_lj at theta = 0.
/// Column j of w holds the coefficients of w_j on basis.
struct CellSolution {
  PlaneWaveBasis basis;
  Eigen::MatrixXcd w;
  Eigen::VectorXd residuals;  // |A w_j - g_j| / |g_j|, 0 when g_j = 0
  bool mean_zero_block;       // solved on the complement of the constant mode
};

// Pure second-order specs solve on the nonzero modes; otherwise the full
// matrix (constant mode included) must be nonsingular.
CellSolution cell_solve(const OperatorSpec& spec, int cutoff);

// C_hat_ij = mean(c_ij) - f_i^* w_j with f_i[a] = sum_k (i 2 pi a_k) c_ik[a].
HomogenizedOperator homogenize(const OperatorSpec& spec, int cutoff, bool symmetrize = false);

// Constant-coefficient OperatorSpec carrying C_hat; requires a pure
// second-order homogenized operator (zero drift and c0_hat).
OperatorSpec homogenized_spec(const HomogenizedOperator& h);

}  // namespace bloch
