#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "rock/pde_learner.hpp"
#include "rock/trajectory.hpp"

namespace rock {

enum class SystemName {
  Lorenz63,
  Lorenz96,
  FitzHughNagumo,
  Rossler,
  DoublePendulum,
  Heat1D,
  KuramotoSivashinsky,
};

std::string to_string(SystemName name);
SystemName system_from_string(const std::string& name);

/// Reference dynamical system. Missing parameters are filled with the
/// literature-standard defaults by `with_defaults`:
///  - Lorenz63: sigma=10, rho=28, beta=8/3
///  - Lorenz96: F=8 (dim >= 4)
///  - FitzHughNagumo: a=0.7, b=0.8, tau=12.5, I=0.5
///  - Rossler: a=0.2, b=0.2, c=5.7
///  - DoublePendulum: unit masses and lengths, g=9.81; state (th1, th2, p1, p2)
///  - Heat1D: c=0.1, length=2*pi (periodic)
///  - KuramotoSivashinsky: length=22 (periodic), u_t = -u u_x - u_xx - u_xxxx
/// For the PDE systems `dim` is the number of fine-mesh points.
struct SystemSpec {
  SystemName name = SystemName::Lorenz63;
  std::map<std::string, double> params;
  int dim = 3;
  double noise_std = 0.0;
  std::uint64_t seed = 0;

  static SystemSpec with_defaults(SystemName name, int dim = 0);
  bool is_pde() const;
  void validate() const;
  double param(const std::string& key) const;
};

Eigen::VectorXd vector_field(const SystemSpec& spec, const Eigen::VectorXd& x);

/// Total energy of the double pendulum (Hamiltonian) at state x.
double double_pendulum_energy(const SystemSpec& spec, const Eigen::VectorXd& x);

struct GenerateOptions {
  int n_traj = 10;
  int samples_per_traj = 201;
  double dt = 0.01;
  double transient = 0.0;
  std::uint64_t seed = 0;
  /// RK4 steps per output interval.
  int substeps = 10;
};

/// Trajectories from random initial conditions, integrated with RK4 and
/// observed with Gaussian noise of std spec.noise_std. Trajectory i uses a
/// sub-seed derived from (seed, i), so the result is reproducible.
TrajectorySet generate(const SystemSpec& spec, const GenerateOptions& opts);

/// Default random initial condition for trajectory `index` (before any
/// transient).
Eigen::VectorXd initial_condition(const SystemSpec& spec, std::uint64_t seed, int index);

struct FieldOptions {
  int n_space = 256;          ///< output spatial points
  int refine = 2;             ///< fine mesh = n_space * refine points
  int n_times = 200;          ///< output time samples
  double dt = 0.05;           ///< output sampling interval
  double transient = 0.0;
  std::uint64_t seed = 0;
  /// Optional initial profile u0(x); defaults to random low Fourier modes.
  std::function<double(double)> initial;
};

/// Method-of-lines RK4 on the fine mesh, subsampled to n_space points.
FieldGrid generate_field(const SystemSpec& spec, const FieldOptions& opts);

}  // namespace rock
