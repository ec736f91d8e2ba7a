#include "rock/evaluation.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "rock/error.hpp"

namespace rock {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nonempty(const TrajectorySet& test) {
  if (test.empty()) throw Error(ErrorCategory::InputDomain, "test set is empty");
  test.validate();
}

// Sum of squared rollout errors for one trajectory, or +inf on divergence.
double rollout_sse(const VectorFieldFn& field, const Trajectory& t,
                   const IntegratorOptions& integrator) {
  try {
    const Eigen::MatrixXd pred =
        integrate(field, t.xs.col(0), t.ts, integrator.method, integrator.substeps);
    return (pred - t.xs).squaredNorm();
  } catch (const DivergenceError&) {
    return kInf;
  }
}

// Sum over intervals of per-step RMSE, or +inf on divergence.
double one_step_rmse_sum(const VectorFieldFn& field, const Trajectory& t,
                         const IntegratorOptions& integrator) {
  const double d = static_cast<double>(t.xs.rows());
  double total = 0.0;
  for (Eigen::Index k = 0; k + 1 < t.size(); ++k) {
    Eigen::Vector2d grid(t.ts(k), t.ts(k + 1));
    try {
      const Eigen::MatrixXd pred =
          integrate(field, t.xs.col(k), grid, integrator.method, integrator.substeps);
      total += std::sqrt((pred.col(1) - t.xs.col(k + 1)).squaredNorm() / d);
    } catch (const DivergenceError&) {
      return kInf;
    }
  }
  return total;
}

}  // namespace

EvalReport evaluate(const VectorFieldFn& field, const TrajectorySet& test,
                    const IntegratorOptions& integrator) {
  require_nonempty(test);
  EvalReport report;
  double sse = 0.0;
  double count = 0.0;
  double step_sum = 0.0;
  double steps = 0.0;
  for (const Trajectory& t : test.trajectories()) {
    const double traj_sse = rollout_sse(field, t, integrator);
    const double traj_steps = static_cast<double>(t.size() - 1);
    const double traj_step_sum = one_step_rmse_sum(field, t, integrator);
    TrajectoryScore score;
    const double n = static_cast<double>(t.xs.size());
    score.err = std::sqrt(traj_sse / n);
    score.one_err = traj_step_sum / traj_steps;
    score.diverged = !std::isfinite(traj_sse) || !std::isfinite(traj_step_sum);
    report.per_trajectory.push_back(score);
    sse += traj_sse;
    count += n;
    step_sum += traj_step_sum;
    steps += traj_steps;
  }
  report.err = std::sqrt(sse / count);
  report.one_err = step_sum / steps;
  report.diverged = !std::isfinite(report.err) || !std::isfinite(report.one_err);
  return report;
}

EvalReport evaluate(const RockModel& model, const TrajectorySet& test,
                    const IntegratorOptions& integrator) {
  if (!test.empty() && test.dim() != model.dim()) {
    throw Error(ErrorCategory::Shape, "test data dimension does not match the model");
  }
  EvalReport report = evaluate(model.field(), test, integrator);
  report.model_size = count_parameters(model);
  return report;
}

double full_trajectory_rmse(const VectorFieldFn& field, const TrajectorySet& test,
                            const IntegratorOptions& integrator) {
  require_nonempty(test);
  double sse = 0.0;
  double count = 0.0;
  for (const Trajectory& t : test.trajectories()) {
    sse += rollout_sse(field, t, integrator);
    count += static_cast<double>(t.xs.size());
  }
  return std::sqrt(sse / count);
}

double next_step_rmse(const VectorFieldFn& field, const TrajectorySet& test,
                      const IntegratorOptions& integrator) {
  require_nonempty(test);
  double total = 0.0;
  double steps = 0.0;
  for (const Trajectory& t : test.trajectories()) {
    total += one_step_rmse_sum(field, t, integrator);
    steps += static_cast<double>(t.size() - 1);
  }
  return total / steps;
}

double full_trajectory_rmse(const RockModel& model, const TrajectorySet& test,
                            const IntegratorOptions& integrator) {
  return full_trajectory_rmse(model.field(), test, integrator);
}

double next_step_rmse(const RockModel& model, const TrajectorySet& test,
                      const IntegratorOptions& integrator) {
  return next_step_rmse(model.field(), test, integrator);
}

long long count_parameters(const RockModel& model) {
  return count_parameters(model.test_block.num_blocks(), model.p, model.dim());
}

long long count_parameters(long long n_blocks, int p, long long d) {
  return n_blocks * static_cast<long long>(p) * d;
}

nlohmann::json report_to_json(const EvalReport& report) {
  auto number = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return "inf";
  };
  nlohmann::json j;
  j["err"] = number(report.err);
  j["one_err"] = number(report.one_err);
  j["diverged"] = report.diverged;
  j["model_size"] = report.model_size;
  j["per_trajectory"] = nlohmann::json::array();
  for (const auto& s : report.per_trajectory) {
    j["per_trajectory"].push_back(
        {{"err", number(s.err)}, {"one_err", number(s.one_err)}, {"diverged", s.diverged}});
  }
  return j;
}

std::string report_to_table(const EvalReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(12) << "trajectory" << std::right << std::setw(16) << "err"
      << std::setw(16) << "one_err" << std::setw(10) << "diverged" << '\n';
  out << std::scientific << std::setprecision(6);
  for (std::size_t i = 0; i < report.per_trajectory.size(); ++i) {
    const auto& s = report.per_trajectory[i];
    out << std::left << std::setw(12) << i << std::right << std::setw(16) << s.err
        << std::setw(16) << s.one_err << std::setw(10) << (s.diverged ? "yes" : "no") << '\n';
  }
  out << std::left << std::setw(12) << "pooled" << std::right << std::setw(16) << report.err
      << std::setw(16) << report.one_err << std::setw(10) << (report.diverged ? "yes" : "no")
      << '\n';
  out << "model_size " << report.model_size << '\n';
  return out.str();
}

}  // namespace rock
