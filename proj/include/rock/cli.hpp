#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rock/dynamics.hpp"
#include "rock/error.hpp"
#include "rock/evaluation.hpp"
#include "rock/kernels.hpp"
#include "rock/model_selection.hpp"
#include "rock/pde_learner.hpp"

namespace rock::cli {

enum class ModelKind { Ode, Pde };

struct GeneratorConfig {
  SystemSpec system;
  GenerateOptions trajectories;
  FieldOptions field;
};

struct ModelConfig {
  ModelKind kind = ModelKind::Ode;
  KernelSpec kernel;
  FeatureSpec features;
  double lambda = 1e-6;
  int p = 1;
  /// 0 keeps trajectories whole.
  int cut_length = 0;
  int coarsen = 4;
  IntegratorOptions integrator;
};

/// Parsed experiment file. Exactly one of dataset_path / generator is set.
struct ExperimentConfig {
  std::optional<std::filesystem::path> dataset_path;
  std::optional<GeneratorConfig> generator;
  ModelConfig model;
  std::optional<SearchSpace> search;
  std::filesystem::path output_dir = "rock_out";
  std::uint64_t seed = 0;
  /// The JSON the config was parsed from, after seed/output overrides.
  nlohmann::json source;

  /// Reseeds everything that draws random numbers.
  void apply_seed(std::uint64_t s);
};

/// Throws Error(Schema) for unknown keys, wrong types or violated
/// invariants; relative paths are resolved against `base_dir`.
ExperimentConfig parse_config(const nlohmann::json& j,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// 16 hex digits of FNV-1a over the canonical (sorted-key) JSON dump.
std::string config_hash(const nlohmann::json& j);

/// Exit code for an error category: 2 schema/config, 3 io,
/// 4 numerical, 1 otherwise.
int exit_code_for(ErrorCategory category);

struct ForecastRequest {
  std::filesystem::path model_path;
  std::vector<double> x0;
  std::optional<std::filesystem::path> u0_path;
  double horizon = 1.0;
  double dt = 0.01;
};

/// Each command returns the artifacts it wrote (or found up to date).
std::vector<std::filesystem::path> cmd_generate(const ExperimentConfig& cfg, bool force);
std::vector<std::filesystem::path> cmd_train(const ExperimentConfig& cfg, bool force);
std::vector<std::filesystem::path> cmd_evaluate(const ExperimentConfig& cfg,
                                                const std::filesystem::path& model_path,
                                                const std::filesystem::path& test_path,
                                                bool force);
std::vector<std::filesystem::path> cmd_sweep(const ExperimentConfig& cfg, bool force);
std::vector<std::filesystem::path> cmd_forecast(const ExperimentConfig& cfg,
                                                const ForecastRequest& request, bool force);

/// Full command line entry point; prints `error: <category>: <message>` on
/// failure and returns the exit code.
int run(int argc, char** argv);

}  // namespace rock::cli
