#include "rock/ode_learner.hpp"

#include <string>

#include "rock/error.hpp"
#include "rock/parallel.hpp"
#include "rock/representer.hpp"

namespace rock {

namespace {

void check_block_matches(const TrajectorySet& data, const TestBlock& tb) {
  if (static_cast<std::size_t>(tb.num_blocks()) != data.size()) {
    throw Error(ErrorCategory::Shape, "test block has " + std::to_string(tb.num_blocks()) +
                                          " blocks for " + std::to_string(data.size()) +
                                          " trajectories");
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (tb.block_size(static_cast<Eigen::Index>(i)) != data[i].size()) {
      throw Error(ErrorCategory::Shape,
                  "test block " + std::to_string(i) + " does not match its trajectory length");
    }
  }
}

}  // namespace

Eigen::MatrixXd assemble_gram(const KernelSpec& kernel, const TrajectorySet& data,
                              const TestBlock& tb) {
  check_block_matches(data, tb);
  const Eigen::MatrixXd X = data.flattened_states();
  const Eigen::Index n = tb.num_blocks();
  const Eigen::Index p = tb.p;
  const Eigen::Index total = tb.num_samples();
  Eigen::MatrixXd G(n * p, n * p);

  if (kernel.family == KernelFamily::RandomFourier) {
    // K = F^T F, so G = (F QPhi^T)^T (F QPhi^T)
    const Eigen::MatrixXd F = rff_features(kernel, X);
    Eigen::MatrixXd Z(F.rows(), n * p);
    for (Eigen::Index i = 0; i < n; ++i) {
      Z.middleCols(i * p, p) = F.middleCols(tb.offsets[i], tb.block_size(i)) * tb.qphi[i].transpose();
    }
    G.noalias() = Z.transpose() * Z;
    G = 0.5 * (G + G.transpose()).eval();
    return G;
  }

  parallel_for(n, [&](long i) {
    const Eigen::Index off = tb.offsets[i];
    const Eigen::Index rest = total - off;
    // kernel rows of block i against blocks i..n-1
    const Eigen::MatrixXd K = gram(kernel, X.middleCols(off, tb.block_size(i)), X.rightCols(rest));
    const Eigen::MatrixXd T = tb.qphi[i] * K;
    for (Eigen::Index j = i; j < n; ++j) {
      G.block(i * p, j * p, p, p) =
          T.middleCols(tb.offsets[j] - off, tb.block_size(j)) * tb.qphi[j].transpose();
    }
  });
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      G.block(j * p, i * p, p, p) = G.block(i * p, j * p, p, p).transpose();
    }
    // diagonal blocks are symmetric up to rounding; make them exact
    auto D = G.block(i * p, i * p, p, p);
    D = 0.5 * (D + D.transpose()).eval();
  }
  return G;
}

Eigen::MatrixXd assemble_targets(const TrajectorySet& data, const TestBlock& tb) {
  check_block_matches(data, tb);
  const Eigen::Index p = tb.p;
  Eigen::MatrixXd Y(data.dim(), tb.num_rows());
  for (std::size_t i = 0; i < data.size(); ++i) {
    Y.middleCols(static_cast<Eigen::Index>(i) * p, p) = data[i].xs * tb.qphid[i].transpose();
  }
  return Y;
}

void RockModel::refresh_weights() {
  const Eigen::Index p = test_block.p;
  sample_weights.resize(test_block.num_samples(), coeffs.cols());
  for (Eigen::Index i = 0; i < test_block.num_blocks(); ++i) {
    sample_weights.middleRows(test_block.offsets[i], test_block.block_size(i)) =
        test_block.qphi[i].transpose() * coeffs.middleRows(i * p, p);
  }
}

Eigen::MatrixXd RockModel::eval(const Eigen::Ref<const Eigen::MatrixXd>& Xq) const {
  if (Xq.rows() != dim()) {
    throw Error(ErrorCategory::Shape, "query dimension " + std::to_string(Xq.rows()) +
                                          " does not match model dimension " +
                                          std::to_string(dim()));
  }
  return sample_weights.transpose() * gram(kernel, train_points, Xq);
}

Eigen::VectorXd RockModel::eval_point(const Eigen::VectorXd& x) const {
  return eval(x);
}

VectorFieldFn RockModel::field() const {
  return [this](const Eigen::VectorXd& x) { return eval_point(x); };
}

RockModel make_model(const TrajectorySet& data, const KernelSpec& kernel, double lambda,
                     TestBlock tb, Eigen::MatrixXd coeffs) {
  if (coeffs.rows() != tb.num_rows() || coeffs.cols() != data.dim()) {
    throw Error(ErrorCategory::Shape, "coefficient matrix must be np x d");
  }
  RockModel model;
  model.kernel = kernel;
  model.lambda = lambda;
  model.p = tb.p;
  model.train_points = data.flattened_states();
  model.sample_times = data.time_vectors();
  model.test_block = std::move(tb);
  model.coeffs = std::move(coeffs);
  model.refresh_weights();
  return model;
}

RockModel train(const TrajectorySet& data, const KernelSpec& kernel, double lambda, int p) {
  if (p < 1) throw Error(ErrorCategory::Config, "number of test features p must be >= 1");
  if (!(lambda > 0.0)) throw Error(ErrorCategory::Config, "lambda must be positive");
  if (data.empty()) throw Error(ErrorCategory::InputDomain, "training set is empty");
  kernel.validate();
  data.validate();
  TestBlock tb = build_test_block(data.time_vectors(), p - 1);
  RegularizedSystem sys{assemble_gram(kernel, data, tb),
                        assemble_targets(data, tb).transpose(), lambda};
  Eigen::MatrixXd A = solve_regularized(sys);
  return make_model(data, kernel, lambda, std::move(tb), std::move(A));
}

Eigen::MatrixXd eval_vector_field(const RockModel& model,
                                  const Eigen::Ref<const Eigen::MatrixXd>& Xq) {
  return model.eval(Xq);
}

Eigen::MatrixXd forecast(const RockModel& model, const Eigen::VectorXd& x0,
                         const Eigen::Ref<const Eigen::VectorXd>& t_grid, Integrator method,
                         int substeps) {
  if (x0.size() != model.dim()) {
    throw Error(ErrorCategory::Shape, "initial state dimension does not match the model");
  }
  return integrate(model.field(), x0, t_grid, method, substeps);
}

}  // namespace rock
