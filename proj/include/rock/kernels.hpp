#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace rock {

enum class KernelFamily { Gaussian, Laplace, Matern10, RandomFourier };

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

/// Random Fourier feature configuration. `num_features` counts the cos/sin
/// outputs, so it must be even. When `period` is set the frequencies live on
/// the lattice (2*pi/period) * Z^d and every feature is period-periodic in
/// each input coordinate.
struct RffConfig {
  int num_features = 256;
  std::optional<double> period;
  std::uint64_t seed = 0;
};

/// Scalar radial kernel k(r). The matrix-valued kernel used by the learners
/// is k (x) I_d, so everything downstream only needs scalar Gram matrices.
///
/// `scale` is sigma for the Gaussian (and the RFF approximation of it) and
/// gamma for Laplace / Matern10.
struct KernelSpec {
  KernelFamily family = KernelFamily::Gaussian;
  double scale = 1.0;
  std::optional<RffConfig> rff;

  static KernelSpec gaussian(double sigma);
  static KernelSpec laplace(double gamma);
  static KernelSpec matern10(double gamma);
  static KernelSpec random_fourier(double sigma, int num_features, std::uint64_t seed,
                                   std::optional<double> period = std::nullopt);

  /// Throws Error(Config) when the invariants do not hold.
  void validate() const;
};

bool operator==(const RffConfig& a, const RffConfig& b);
bool operator==(const KernelSpec& a, const KernelSpec& b);

/// k(r) for the closed-form families. Matern10 is the C^10 member of the
/// half-integer Matern family with polynomial degree 5.
double eval_scalar_kernel(const KernelSpec& spec, double r);

/// Squared pairwise distances between the columns of X (d x M) and Y (d x N)
/// through |x|^2 + |y|^2 - 2 x.y, clamped at zero.
Eigen::MatrixXd squared_distances(const Eigen::Ref<const Eigen::MatrixXd>& X,
                                  const Eigen::Ref<const Eigen::MatrixXd>& Y);

/// M x N matrix of k(|X_i - Y_j|). Dispatches to rff_gram for RandomFourier.
Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& X,
                     const Eigen::Ref<const Eigen::MatrixXd>& Y);

/// Frequencies (num_features/2 x d) drawn deterministically from the kernel's
/// seed. Row i is frequency w_i.
Eigen::MatrixXd rff_frequencies(const KernelSpec& spec, Eigen::Index dim);

/// q x M feature matrix sqrt(2/q) [cos(W x); sin(W x)].
Eigen::MatrixXd rff_features(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& X);

Eigen::MatrixXd rff_gram(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& X,
                         const Eigen::Ref<const Eigen::MatrixXd>& Y);

}  // namespace rock
