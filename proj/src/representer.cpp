#include "rock/representer.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "rock/error.hpp"

namespace rock {

void RegularizedSystem::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCategory::Config, "regularization lambda must be positive");
  }
  if (gram.rows() != gram.cols()) throw Error(ErrorCategory::Shape, "gram matrix must be square");
  if (targets.rows() != gram.rows()) {
    throw Error(ErrorCategory::Shape, "targets need one row per gram row");
  }
  const double scale = gram.cwiseAbs().maxCoeff();
  if (gram.size() > 0 && (gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(ErrorCategory::InputDomain, "gram matrix is not symmetric");
  }
  if (!gram.allFinite() || !targets.allFinite()) {
    throw Error(ErrorCategory::Data, "non-finite entries in the regularized system");
  }
}

Eigen::MatrixXd solve_regularized(const RegularizedSystem& sys) {
  sys.validate();
  const Eigen::Index n = sys.gram.rows();
  if (n == 0) return Eigen::MatrixXd(0, sys.targets.cols());

  Eigen::MatrixXd system = sys.gram;
  system.diagonal().array() += sys.lambda;

  const double eps = std::numeric_limits<double>::epsilon();
  const double base_jitter = 10.0 * eps * system.trace() / static_cast<double>(n);
  std::vector<double> attempted;
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
  for (int attempt = 0; attempt <= 4; ++attempt) {
    Eigen::MatrixXd shifted = system;
    shifted.diagonal().array() += jitter;
    llt.compute(shifted);
    if (llt.info() == Eigen::Success) break;
    attempted.push_back(jitter);
    if (attempt == 4) {
      std::ostringstream msg;
      msg << "cholesky factorization failed; attempted jitters:";
      for (double j : attempted) msg << ' ' << j;
      throw Error(ErrorCategory::NumericalConditioning, msg.str());
    }
    jitter = attempt == 0 ? base_jitter : 2.0 * jitter;
  }

  Eigen::MatrixXd A = llt.solve(sys.targets);
  const double tol = 1e-8 * (sys.targets.norm() + 1.0);
  for (int step = 0; step < 5; ++step) {
    const Eigen::MatrixXd residual = sys.targets - system * A;
    if (residual.norm() <= 0.01 * tol) break;
    A += llt.solve(residual);
  }
  return A;
}

Eigen::VectorXd solve_full_kronecker(const Eigen::Ref<const Eigen::MatrixXd>& G, double lambda,
                                     const Eigen::Ref<const Eigen::VectorXd>& y_flat,
                                     Eigen::Index d) {
  if (d < 1) throw Error(ErrorCategory::Config, "state dimension must be >= 1");
  const Eigen::Index n = G.rows();
  const Eigen::Index total = n * d;
  if (total > 500) {
    throw Error(ErrorCategory::Unsupported,
                "solve_full_kronecker is a test oracle limited to 500 unknowns");
  }
  if (G.cols() != n || y_flat.size() != total) {
    throw Error(ErrorCategory::Shape, "solve_full_kronecker: inconsistent sizes");
  }
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(total, total);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index k = 0; k < d; ++k) big(i * d + k, j * d + k) = G(i, j);
    }
  }
  big.diagonal().array() += lambda;
  return big.partialPivLu().solve(y_flat);
}

double regularized_objective(const Eigen::Ref<const Eigen::MatrixXd>& G,
                             const Eigen::Ref<const Eigen::MatrixXd>& Y,
                             const Eigen::Ref<const Eigen::MatrixXd>& A, double lambda) {
  const Eigen::MatrixXd GA = G * A;
  return (GA - Y).squaredNorm() + lambda * (A.transpose() * GA).trace();
}

Eigen::MatrixXd RidgeModel::predict(const Eigen::Ref<const Eigen::MatrixXd>& Xq) const {
  return coeffs.transpose() * gram(kernel, points, Xq);
}

RidgeModel ridge_regression_oracle(const KernelSpec& kernel,
                                   const Eigen::Ref<const Eigen::MatrixXd>& X,
                                   const Eigen::Ref<const Eigen::MatrixXd>& Y, double lambda) {
  if (X.cols() < 1) throw Error(ErrorCategory::InputDomain, "ridge regression needs a sample");
  if (Y.cols() != X.cols()) throw Error(ErrorCategory::Shape, "one target per sample required");
  if (!(lambda > 0.0)) throw Error(ErrorCategory::Config, "lambda must be positive");
  Eigen::MatrixXd K = gram(kernel, X, X);
  K.diagonal().array() += lambda;
  RidgeModel model{kernel, X, K.ldlt().solve(Y.transpose())};
  return model;
}

}  // namespace rock
