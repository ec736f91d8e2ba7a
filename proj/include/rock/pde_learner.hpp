#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rock {

/// Samples u(t_j, x_i) of a scalar field on a uniform 1D mesh. Row j of `u`
/// is the spatial profile at ts(j).
struct FieldGrid {
  Eigen::MatrixXd u;   ///< M x N
  Eigen::VectorXd ts;  ///< M
  Eigen::VectorXd xs;  ///< N, uniform
  bool periodic = true;

  void validate() const;
  double dx() const { return xs(1) - xs(0); }
};

/// u and its spatial derivatives 1..D on a coarsened mesh. Order k is built
/// from the standard second-order stencils: D2^(k/2), times D1 when k is odd.
/// Non-periodic grids use one-sided second-order stencils at the ends.
struct DerivativeStack {
  std::vector<Eigen::MatrixXd> orders;  ///< D+1 matrices, each M x N'
  Eigen::VectorXd xs;                   ///< coarsened mesh
  double h = 0.0;                       ///< coarsened spacing
};

/// Derivatives of a single profile: (D+1) x N rows u, u_x, u_xx, ...
Eigen::MatrixXd profile_derivatives(const Eigen::Ref<const Eigen::VectorXd>& u, double h,
                                    int max_order, bool periodic);

DerivativeStack spatial_derivatives(const FieldGrid& grid, int max_order, int coarsen);

enum class FeatureKind { Polynomial, RandomFourier };

/// Explicit feature map phi over the inputs (u, u_x, ..., d^D u / dx^D).
struct FeatureSpec {
  FeatureKind kind = FeatureKind::Polynomial;
  int max_order = 2;
  /// Polynomial: all monomials of total degree 1..degree (plus the constant
  /// when include_constant). degree is at most 3;
  /// degree 0 leaves only the constant.
  int degree = 1;
  bool include_constant = true;
  /// RandomFourier: q = num_features Gaussian features of bandwidth sigma.
  int num_features = 200;
  double sigma = 1.0;
  std::optional<double> period;
  std::uint64_t seed = 0;

  void validate() const;
  int num_inputs() const { return max_order + 1; }
  int dimension() const;
  std::vector<std::string> names() const;
};

/// q x K features for the K input columns (each column has D+1 entries).
Eigen::MatrixXd eval_features(const FeatureSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& inputs);

struct PdeSystem {
  Eigen::MatrixXd phi;  ///< q x N'(M-1), column j*N' + i
  Eigen::VectorXd y;    ///< u(t_{j+1}, x_i) - u(t_j, x_i)
};

/// Per-interval trapezoid integrals of the features and the increments of u.
PdeSystem assemble_pde_system(const FieldGrid& grid, const DerivativeStack& derivs,
                              const FeatureSpec& spec);

/// Learned right-hand side f(u, u_x, ...) = alpha^T phi(u, u_x, ...).
struct PdeModel {
  FeatureSpec features;
  Eigen::VectorXd alpha;
  double lambda = 0.0;
  int coarsen = 4;
  double h = 0.0;  ///< coarsened spatial step
  bool periodic = true;

  /// f evaluated at every point of a coarsened profile.
  Eigen::VectorXd rhs(const Eigen::Ref<const Eigen::VectorXd>& u) const;
};

/// Solves (Phi Phi^T + lambda I) alpha = Phi y.
PdeModel train_pde(const FieldGrid& grid, const FeatureSpec& spec, double lambda, int coarsen);

/// Explicit Euler rollout on the coarsened mesh. Returns (steps+1) x N'.
/// Throws DivergenceError (time = step index) once |u|_inf exceeds 1e6.
Eigen::MatrixXd forecast_pde(const PdeModel& model, const Eigen::Ref<const Eigen::VectorXd>& u0,
                             double dt, int steps);

/// Coarsened grid (every `coarsen`-th spatial column).
FieldGrid coarsen_grid(const FieldGrid& grid, int coarsen);

}  // namespace rock
