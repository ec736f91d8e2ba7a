#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rock/kernels.hpp"
#include "rock/test_space.hpp"
#include "rock/trajectory.hpp"

namespace rock {

/// A trained occupation-kernel vector field
///   f(x) = sum_i { int k(x, x_i(t)) psi_i(t)^T dt } A_i
/// with the integrals replaced by the quadrature carried in `test_block`.
struct RockModel {
  KernelSpec kernel;
  double lambda = 0.0;
  int p = 0;
  Eigen::MatrixXd train_points;  ///< d x (sum m_i)
  std::vector<Eigen::VectorXd> sample_times;
  TestBlock test_block;
  Eigen::MatrixXd coeffs;  ///< np x d

  /// Per-sample weights W = QPhi^T A, so that f(x) = W^T k(train, x).
  Eigen::MatrixXd sample_weights;

  Eigen::Index dim() const { return train_points.rows(); }

  /// Recomputes sample_weights from test_block and coeffs.
  void refresh_weights();

  /// d x M field values at the query columns.
  Eigen::MatrixXd eval(const Eigen::Ref<const Eigen::MatrixXd>& Xq) const;
  Eigen::VectorXd eval_point(const Eigen::VectorXd& x) const;

  VectorFieldFn field() const;
};

/// G = QPhi K QPhi^T, assembled block row by block row without forming the
/// full sample Gram matrix.
Eigen::MatrixXd assemble_gram(const KernelSpec& kernel, const TrajectorySet& data,
                              const TestBlock& tb);

/// d x np matrix X QPhiD^T: the integration-by-parts form of int psi x' dt.
Eigen::MatrixXd assemble_targets(const TrajectorySet& data, const TestBlock& tb);

/// Assembles and solves (G + lambda I) A = Y^T with p test features
/// (Legendre degrees 0..p-1) per trajectory.
RockModel train(const TrajectorySet& data, const KernelSpec& kernel, double lambda, int p);

/// Builds a model from an already solved coefficient matrix.
RockModel make_model(const TrajectorySet& data, const KernelSpec& kernel, double lambda,
                     TestBlock tb, Eigen::MatrixXd coeffs);

Eigen::MatrixXd eval_vector_field(const RockModel& model,
                                  const Eigen::Ref<const Eigen::MatrixXd>& Xq);

Eigen::MatrixXd forecast(const RockModel& model, const Eigen::VectorXd& x0,
                         const Eigen::Ref<const Eigen::VectorXd>& t_grid, Integrator method,
                         int substeps = 1);

}  // namespace rock
