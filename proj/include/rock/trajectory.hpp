#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace rock {

/// One sampled trajectory: times ts (length m, strictly increasing) and
/// states xs (d x m, column k observed at ts(k)).
struct Trajectory {
  Eigen::VectorXd ts;
  Eigen::MatrixXd xs;

  Eigen::Index size() const { return ts.size(); }
};

/// Training data for the ODE learner. Every trajectory shares the state
/// dimension and has at least two samples.
class TrajectorySet {
 public:
  TrajectorySet() = default;
  explicit TrajectorySet(std::vector<Trajectory> trajectories);

  /// Throws on dimension mismatch, short trajectories or unsorted times.
  void validate() const;

  Eigen::Index dim() const;
  std::size_t size() const { return trajectories_.size(); }
  bool empty() const { return trajectories_.empty(); }
  Eigen::Index total_samples() const;

  const Trajectory& operator[](std::size_t i) const { return trajectories_[i]; }
  const std::vector<Trajectory>& trajectories() const { return trajectories_; }

  void push_back(Trajectory t) { trajectories_.push_back(std::move(t)); }

  /// d x (sum m_i) column concatenation of all states in trajectory order.
  Eigen::MatrixXd flattened_states() const;
  std::vector<Eigen::VectorXd> time_vectors() const;

 private:
  std::vector<Trajectory> trajectories_;
};

using VectorFieldFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

enum class Integrator { Euler, RK4 };

/// Fixed-step integration of x' = f(x) reporting the state at every grid time.
/// Each grid interval is split into `substeps` equal steps. Throws
/// DivergenceError with the grid time at which the state became non-finite.
Eigen::MatrixXd integrate(const VectorFieldFn& field, const Eigen::VectorXd& x0,
                          const Eigen::Ref<const Eigen::VectorXd>& t_grid, Integrator method,
                          int substeps = 1);

}  // namespace rock
