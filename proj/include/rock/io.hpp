#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "rock/kernels.hpp"
#include "rock/ode_learner.hpp"
#include "rock/pde_learner.hpp"
#include "rock/trajectory.hpp"

namespace rock::io {

/// CSV with header `t,x_1,...,x_d`, one sample per row, 17 significant digits.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory);
/// Throws Error(Io) naming the offending line for malformed input.
Trajectory read_trajectory_csv(const std::filesystem::path& path);

/// Dataset directory: manifest.json plus one CSV per trajectory. Returns the
/// manifest written (with the "files" list filled in).
nlohmann::json write_dataset(const std::filesystem::path& dir, const TrajectorySet& data,
                             nlohmann::json manifest);
/// Accepts a dataset directory, a manifest path, or a single trajectory CSV.
TrajectorySet read_dataset(const std::filesystem::path& path);

/// Field CSV: header `t,x_1,...,x_N`, one time per row. The mesh lives in the
/// accompanying manifest (x0, dx, periodic).
void write_field_csv(const std::filesystem::path& path, const FieldGrid& grid);
FieldGrid read_field_csv(const std::filesystem::path& path, double x0, double dx, bool periodic);

nlohmann::json write_field_dataset(const std::filesystem::path& dir, const FieldGrid& grid,
                                   nlohmann::json manifest);
FieldGrid read_field_dataset(const std::filesystem::path& path);

/// Versioned binary container: 8-byte magic "ROCKBIN1", little-endian uint64
/// header length, a UTF-8 JSON header, then float64 little-endian column-major
/// arrays. header["arrays"][name] = {rows, cols, offset} with offset in bytes
/// from the start of the array section.
struct Container {
  nlohmann::json header;
  std::map<std::string, Eigen::MatrixXd> arrays;
};

void write_container(const std::filesystem::path& path, const Container& container);
Container read_container(const std::filesystem::path& path);

nlohmann::json kernel_to_json(const KernelSpec& spec);
KernelSpec kernel_from_json(const nlohmann::json& j);
nlohmann::json features_to_json(const FeatureSpec& spec);
FeatureSpec features_from_json(const nlohmann::json& j);

/// "rock-model-v1". `metadata` is stored verbatim under header["metadata"].
void save_model(const std::filesystem::path& path, const RockModel& model,
                const nlohmann::json& metadata = nlohmann::json::object());
RockModel load_model(const std::filesystem::path& path);

/// "rock-pde-model-v1".
void save_pde_model(const std::filesystem::path& path, const PdeModel& model,
                    const nlohmann::json& metadata = nlohmann::json::object());
PdeModel load_pde_model(const std::filesystem::path& path);

/// "rock-field-v1".
void save_field(const std::filesystem::path& path, const FieldGrid& grid);
FieldGrid load_field(const std::filesystem::path& path);

/// Reads the JSON header of any container without loading arrays.
nlohmann::json read_container_header(const std::filesystem::path& path);

}  // namespace rock::io
