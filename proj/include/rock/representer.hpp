#pragma once

#include <Eigen/Dense>

#include "rock/kernels.hpp"

namespace rock {

/// The reduced system (G + lambda I) A = Y obtained from the separable
/// kernel k (x) I_d. `targets` is np x d.
struct RegularizedSystem {
  Eigen::MatrixXd gram;
  Eigen::MatrixXd targets;
  double lambda = 1.0;

  void validate() const;
};

/// Solves (G + lambda I) A = Y for all d right-hand sides with one Cholesky
/// factorization. Jitter 10*eps*trace/n is added (and doubled, three times at
/// most) if the factorization fails; iterative refinement against the
/// unjittered system then restores the residual.
Eigen::MatrixXd solve_regularized(const RegularizedSystem& sys);

/// Reference solve of the materialized (G (x) I_d + lambda I) alpha = y.
/// `y_flat` is Y^T stacked by columns (block i holds the d components of row
/// i of Y). Refuses systems larger than 500 unknowns.
Eigen::VectorXd solve_full_kronecker(const Eigen::Ref<const Eigen::MatrixXd>& G, double lambda,
                                     const Eigen::Ref<const Eigen::VectorXd>& y_flat,
                                     Eigen::Index d);

/// Objective |G A - Y|_F^2 + lambda tr(A^T G A) minimized by solve_regularized.
double regularized_objective(const Eigen::Ref<const Eigen::MatrixXd>& G,
                             const Eigen::Ref<const Eigen::MatrixXd>& Y,
                             const Eigen::Ref<const Eigen::MatrixXd>& A, double lambda);

/// Plain kernel ridge regression f(x) = sum_i k(x, x_i) alpha_i with
/// alpha = (K + lambda I)^{-1} Y, kept as an equivalence oracle.
struct RidgeModel {
  KernelSpec kernel;
  Eigen::MatrixXd points;  ///< d x n
  Eigen::MatrixXd coeffs;  ///< n x d_out

  /// d_out x M predictions at the columns of Xq.
  Eigen::MatrixXd predict(const Eigen::Ref<const Eigen::MatrixXd>& Xq) const;
};

/// X is d x n, Y is d_out x n.
RidgeModel ridge_regression_oracle(const KernelSpec& kernel,
                                   const Eigen::Ref<const Eigen::MatrixXd>& X,
                                   const Eigen::Ref<const Eigen::MatrixXd>& Y, double lambda);

}  // namespace rock
