#include "rock/kernels.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "rock/error.hpp"

namespace rock {

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Gaussian: return "gaussian";
    case KernelFamily::Laplace: return "laplace";
    case KernelFamily::Matern10: return "matern10";
    case KernelFamily::RandomFourier: return "random_fourier";
  }
  return "unknown";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "gaussian") return KernelFamily::Gaussian;
  if (name == "laplace") return KernelFamily::Laplace;
  if (name == "matern10" || name == "matern") return KernelFamily::Matern10;
  if (name == "random_fourier" || name == "rff") return KernelFamily::RandomFourier;
  throw Error(ErrorCategory::Config, "unknown kernel family '" + name + "'");
}

KernelSpec KernelSpec::gaussian(double sigma) {
  KernelSpec s{KernelFamily::Gaussian, sigma, std::nullopt};
  s.validate();
  return s;
}

KernelSpec KernelSpec::laplace(double gamma) {
  KernelSpec s{KernelFamily::Laplace, gamma, std::nullopt};
  s.validate();
  return s;
}

KernelSpec KernelSpec::matern10(double gamma) {
  KernelSpec s{KernelFamily::Matern10, gamma, std::nullopt};
  s.validate();
  return s;
}

KernelSpec KernelSpec::random_fourier(double sigma, int num_features, std::uint64_t seed,
                                      std::optional<double> period) {
  KernelSpec s{KernelFamily::RandomFourier, sigma, RffConfig{num_features, period, seed}};
  s.validate();
  return s;
}

void KernelSpec::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorCategory::Config, "kernel scale must be positive and finite");
  }
  const bool is_rff = family == KernelFamily::RandomFourier;
  if (is_rff != rff.has_value()) {
    throw Error(ErrorCategory::Config,
                "rff settings must be present exactly when the family is random_fourier");
  }
  if (rff) {
    if (rff->num_features < 1) {
      throw Error(ErrorCategory::Config, "rff num_features must be >= 1");
    }
    if (rff->num_features % 2 != 0) {
      throw Error(ErrorCategory::Config, "rff num_features must be even (cos/sin pairs)");
    }
    if (rff->period && !(*rff->period > 0.0)) {
      throw Error(ErrorCategory::Config, "rff period must be positive");
    }
  }
}

bool operator==(const RffConfig& a, const RffConfig& b) {
  return a.num_features == b.num_features && a.period == b.period && a.seed == b.seed;
}

bool operator==(const KernelSpec& a, const KernelSpec& b) {
  return a.family == b.family && a.scale == b.scale && a.rff == b.rff;
}

namespace {

double matern10_profile(double u) {
  if (u > 700.0) return 0.0;
  const double poly = ((((u + 15.0) * u + 105.0) * u + 420.0) * u + 945.0) * u + 945.0;
  return std::exp(-u) * poly / 945.0;
}

}  // namespace

double eval_scalar_kernel(const KernelSpec& spec, double r) {
  if (!(r >= 0.0)) {
    throw Error(ErrorCategory::InputDomain, "kernel radius must be nonnegative");
  }
  switch (spec.family) {
    case KernelFamily::Gaussian:
      return std::exp(-r * r / (2.0 * spec.scale * spec.scale));
    case KernelFamily::Laplace:
      return std::exp(-r / spec.scale);
    case KernelFamily::Matern10:
      return matern10_profile(r / spec.scale);
    case KernelFamily::RandomFourier:
      break;
  }
  throw Error(ErrorCategory::Unsupported,
              "random_fourier kernels have no closed form; use rff_gram");
}

Eigen::MatrixXd squared_distances(const Eigen::Ref<const Eigen::MatrixXd>& X,
                                  const Eigen::Ref<const Eigen::MatrixXd>& Y) {
  if (X.rows() != Y.rows()) {
    throw Error(ErrorCategory::Shape, "gram: point dimensions differ (" +
                                          std::to_string(X.rows()) + " vs " +
                                          std::to_string(Y.rows()) + ")");
  }
  const Eigen::VectorXd x2 = X.colwise().squaredNorm().transpose();
  const Eigen::RowVectorXd y2 = Y.colwise().squaredNorm();
  Eigen::MatrixXd d2 = -2.0 * (X.transpose() * Y);
  d2.colwise() += x2;
  d2.rowwise() += y2;
  return d2.cwiseMax(0.0);
}

Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& X,
                     const Eigen::Ref<const Eigen::MatrixXd>& Y) {
  if (spec.family == KernelFamily::RandomFourier) return rff_gram(spec, X, Y);
  Eigen::MatrixXd d2 = squared_distances(X, Y);
  const double s = spec.scale;
  switch (spec.family) {
    case KernelFamily::Gaussian:
      return (d2 * (-1.0 / (2.0 * s * s))).array().exp().matrix();
    case KernelFamily::Laplace:
      return (d2.array().sqrt() * (-1.0 / s)).exp().matrix();
    case KernelFamily::Matern10:
      return d2.unaryExpr([s](double v) { return matern10_profile(std::sqrt(v) / s); });
    case KernelFamily::RandomFourier:
      break;
  }
  return d2;
}

Eigen::MatrixXd rff_frequencies(const KernelSpec& spec, Eigen::Index dim) {
  if (spec.family != KernelFamily::RandomFourier || !spec.rff) {
    throw Error(ErrorCategory::Unsupported, "rff_frequencies requires a random_fourier kernel");
  }
  spec.validate();
  const RffConfig& cfg = *spec.rff;
  const Eigen::Index half = cfg.num_features / 2;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0 / spec.scale);
  Eigen::MatrixXd w(half, dim);
  for (Eigen::Index i = 0; i < half; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) w(i, j) = normal(rng);
  }
  if (cfg.period) {
    // snap each frequency onto the lattice of period-compatible frequencies
    const double unit = 2.0 * std::numbers::pi / *cfg.period;
    w = (w / unit).array().round().matrix() * unit;
  }
  return w;
}

Eigen::MatrixXd rff_features(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& X) {
  const Eigen::MatrixXd w = rff_frequencies(spec, X.rows());
  const Eigen::Index half = w.rows();
  const Eigen::MatrixXd phase = w * X;
  const double norm = std::sqrt(2.0 / static_cast<double>(2 * half));
  Eigen::MatrixXd out(2 * half, X.cols());
  out.topRows(half) = norm * phase.array().cos().matrix();
  out.bottomRows(half) = norm * phase.array().sin().matrix();
  return out;
}

Eigen::MatrixXd rff_gram(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& X,
                         const Eigen::Ref<const Eigen::MatrixXd>& Y) {
  if (X.rows() != Y.rows()) {
    throw Error(ErrorCategory::Shape, "rff_gram: point dimensions differ");
  }
  return rff_features(spec, X).transpose() * rff_features(spec, Y);
}

}  // namespace rock
