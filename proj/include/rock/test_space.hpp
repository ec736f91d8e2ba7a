#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace rock {

/// L2([a,b])-normalized shifted Legendre polynomials of degree 0..n evaluated
/// at `ts`. Returns an m x (n+1) matrix, column j holding degree j.
Eigen::MatrixXd legendre_features(const Eigen::Ref<const Eigen::VectorXd>& ts, int n, double a,
                                  double b);

/// Same as legendre_features plus the time derivatives of every column.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> legendre_features_with_derivatives(
    const Eigen::Ref<const Eigen::VectorXd>& ts, int n, double a, double b);

/// Composite trapezoid weights for strictly increasing, possibly nonuniform
/// nodes. The weights sum to ts.back() - ts.front().
Eigen::VectorXd trapezoid_weights(const Eigen::Ref<const Eigen::VectorXd>& ts);

/// Quadrature-weighted test-function matrices for a set of trajectories.
///
/// Conceptually qphi and qphid are block-diagonal np x (sum m_i) matrices;
/// only the diagonal blocks are stored. Block i of qphi is
/// [w_1 psi(t_1), ..., w_m psi(t_m)] and block i of qphid is
/// -[w_k psi'(t_k)]_k with psi(a) subtracted from the first column and psi(b)
/// added to the last, so that X_i * block^T equals
/// x(b)psi(b) - x(a)psi(a) - int x psi' dt.
struct TestBlock {
  int p = 0;
  std::vector<Eigen::MatrixXd> qphi;
  std::vector<Eigen::MatrixXd> qphid;
  /// offsets[i] is the first sample column of block i; offsets.back() is the
  /// total sample count.
  std::vector<Eigen::Index> offsets;

  Eigen::Index num_blocks() const { return static_cast<Eigen::Index>(qphi.size()); }
  Eigen::Index num_rows() const { return num_blocks() * p; }
  Eigen::Index num_samples() const { return offsets.empty() ? 0 : offsets.back(); }
  Eigen::Index block_size(Eigen::Index i) const { return offsets[i + 1] - offsets[i]; }

  Eigen::MatrixXd dense_qphi() const;
  Eigen::MatrixXd dense_qphid() const;
};

/// Builds the block for every trajectory on its own interval
/// [ts.front(), ts.back()] with Legendre degrees 0..max_degree.
/// `weights` may be empty, in which case trapezoid weights are used.
TestBlock build_test_block(const std::vector<Eigen::VectorXd>& ts_list, int max_degree,
                           const std::vector<Eigen::VectorXd>& weights = {});

}  // namespace rock
