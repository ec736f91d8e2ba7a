#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rock/ode_learner.hpp"
#include "rock/trajectory.hpp"

namespace rock {

struct IntegratorOptions {
  Integrator method = Integrator::RK4;
  int substeps = 1;
};

struct TrajectoryScore {
  double err = 0.0;
  double one_err = 0.0;
  bool diverged = false;
};

/// err: RMSE of a free rollout from each trajectory's first sample, pooled
/// over samples, components and trajectories. one_err: mean over all
/// observed intervals of the per-step RMSE of a one-interval forecast from
/// the observed state. A divergent rollout sets err to +inf instead of
/// throwing.
struct EvalReport {
  double err = 0.0;
  double one_err = 0.0;
  bool diverged = false;
  std::vector<TrajectoryScore> per_trajectory;
  long long model_size = 0;
};

double full_trajectory_rmse(const VectorFieldFn& field, const TrajectorySet& test,
                            const IntegratorOptions& integrator = {});
double next_step_rmse(const VectorFieldFn& field, const TrajectorySet& test,
                      const IntegratorOptions& integrator = {});

double full_trajectory_rmse(const RockModel& model, const TrajectorySet& test,
                            const IntegratorOptions& integrator = {});
double next_step_rmse(const RockModel& model, const TrajectorySet& test,
                      const IntegratorOptions& integrator = {});

EvalReport evaluate(const VectorFieldFn& field, const TrajectorySet& test,
                    const IntegratorOptions& integrator = {});
EvalReport evaluate(const RockModel& model, const TrajectorySet& test,
                    const IntegratorOptions& integrator = {});

/// n_blocks * p * d: one coefficient per (block, test feature, dimension).
long long count_parameters(const RockModel& model);
long long count_parameters(long long n_blocks, int p, long long d);

nlohmann::json report_to_json(const EvalReport& report);
/// Aligned-column plain text table.
std::string report_to_table(const EvalReport& report);

}  // namespace rock
