#include "rock/trajectory.hpp"

#include <string>

#include "rock/error.hpp"

namespace rock {

TrajectorySet::TrajectorySet(std::vector<Trajectory> trajectories)
    : trajectories_(std::move(trajectories)) {
  validate();
}

void TrajectorySet::validate() const {
  if (trajectories_.empty()) return;
  const Eigen::Index d = trajectories_.front().xs.rows();
  if (d < 1) throw Error(ErrorCategory::Shape, "state dimension must be >= 1");
  for (std::size_t i = 0; i < trajectories_.size(); ++i) {
    const Trajectory& t = trajectories_[i];
    const std::string where = "trajectory " + std::to_string(i);
    if (t.xs.rows() != d) throw Error(ErrorCategory::Shape, where + ": state dimension differs");
    if (t.xs.cols() != t.ts.size()) {
      throw Error(ErrorCategory::Shape, where + ": time and state counts differ");
    }
    if (t.ts.size() < 2) {
      throw Error(ErrorCategory::TrajectoryTooShort, where + ": fewer than 2 samples");
    }
    for (Eigen::Index k = 1; k < t.ts.size(); ++k) {
      if (!(t.ts(k) > t.ts(k - 1))) {
        throw Error(ErrorCategory::InputDomain, where + ": times not strictly increasing");
      }
    }
  }
}

Eigen::Index TrajectorySet::dim() const {
  return trajectories_.empty() ? 0 : trajectories_.front().xs.rows();
}

Eigen::Index TrajectorySet::total_samples() const {
  Eigen::Index total = 0;
  for (const auto& t : trajectories_) total += t.size();
  return total;
}

Eigen::MatrixXd TrajectorySet::flattened_states() const {
  Eigen::MatrixXd out(dim(), total_samples());
  Eigen::Index offset = 0;
  for (const auto& t : trajectories_) {
    out.middleCols(offset, t.size()) = t.xs;
    offset += t.size();
  }
  return out;
}

std::vector<Eigen::VectorXd> TrajectorySet::time_vectors() const {
  std::vector<Eigen::VectorXd> out;
  out.reserve(trajectories_.size());
  for (const auto& t : trajectories_) out.push_back(t.ts);
  return out;
}

Eigen::MatrixXd integrate(const VectorFieldFn& field, const Eigen::VectorXd& x0,
                          const Eigen::Ref<const Eigen::VectorXd>& t_grid, Integrator method,
                          int substeps) {
  if (t_grid.size() < 1) throw Error(ErrorCategory::InputDomain, "empty time grid");
  if (substeps < 1) throw Error(ErrorCategory::Config, "substeps must be >= 1");
  for (Eigen::Index k = 1; k < t_grid.size(); ++k) {
    if (!(t_grid(k) > t_grid(k - 1))) {
      throw Error(ErrorCategory::InputDomain, "time grid must be strictly increasing");
    }
  }
  Eigen::MatrixXd out(x0.size(), t_grid.size());
  out.col(0) = x0;
  Eigen::VectorXd x = x0;
  for (Eigen::Index k = 1; k < t_grid.size(); ++k) {
    const double h = (t_grid(k) - t_grid(k - 1)) / substeps;
    for (int s = 0; s < substeps; ++s) {
      if (method == Integrator::Euler) {
        x += h * field(x);
      } else {
        const Eigen::VectorXd k1 = field(x);
        const Eigen::VectorXd k2 = field(x + 0.5 * h * k1);
        const Eigen::VectorXd k3 = field(x + 0.5 * h * k2);
        const Eigen::VectorXd k4 = field(x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
    }
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > 1e150) {
      throw DivergenceError("state became non-finite at t=" + std::to_string(t_grid(k)),
                            t_grid(k));
    }
    out.col(k) = x;
  }
  return out;
}

}  // namespace rock
