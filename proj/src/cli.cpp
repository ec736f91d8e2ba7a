#include "rock/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "rock/error.hpp"
#include "rock/io.hpp"
#include "rock/ode_learner.hpp"

namespace rock::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& msg) { throw Error(ErrorCategory::Schema, msg); }

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) schema_error(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) schema_error("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    schema_error(where + "." + key + " has the wrong type");
  }
}

Integrator integrator_from_string(const std::string& s) {
  if (s == "rk4") return Integrator::RK4;
  if (s == "euler") return Integrator::Euler;
  schema_error("unknown integrator '" + s + "'");
}

GeneratorConfig parse_generator(const json& g) {
  check_keys(g, "dataset.generator",
             {"system", "params", "dim", "noise_std", "n_traj", "samples_per_traj", "dt",
              "transient", "substeps", "n_space", "n_times", "refine"});
  GeneratorConfig out;
  const std::string where = "dataset.generator";
  SystemName name;
  try {
    name = system_from_string(get_or<std::string>(g, "system", "", where));
  } catch (const Error& e) {
    schema_error(e.what());
  }
  out.system = SystemSpec::with_defaults(name, get_or<int>(g, "dim", 0, where));
  for (const auto& [k, v] : get_or<std::map<std::string, double>>(g, "params", {}, where)) {
    out.system.params[k] = v;
  }
  out.system.noise_std = get_or<double>(g, "noise_std", 0.0, where);
  try {
    out.system.validate();
  } catch (const Error& e) {
    schema_error(e.what());
  }
  auto& t = out.trajectories;
  t.n_traj = get_or<int>(g, "n_traj", t.n_traj, where);
  t.samples_per_traj = get_or<int>(g, "samples_per_traj", t.samples_per_traj, where);
  t.dt = get_or<double>(g, "dt", t.dt, where);
  t.transient = get_or<double>(g, "transient", t.transient, where);
  t.substeps = get_or<int>(g, "substeps", t.substeps, where);
  auto& f = out.field;
  f.n_space = get_or<int>(g, "n_space", f.n_space, where);
  f.n_times = get_or<int>(g, "n_times", f.n_times, where);
  f.refine = get_or<int>(g, "refine", f.refine, where);
  f.dt = get_or<double>(g, "dt", f.dt, where);
  f.transient = t.transient;
  if (t.n_traj < 1 || t.samples_per_traj < 2 || t.substeps < 1 || !(t.dt > 0.0) ||
      t.transient < 0.0 || f.n_space < 3 || f.n_times < 2 || f.refine < 1) {
    schema_error("dataset.generator has out-of-range sizes or steps");
  }
  return out;
}

ModelConfig parse_model(const json& m) {
  check_keys(m, "model",
             {"kind", "kernel", "features", "lambda", "p", "cut_length", "coarsen", "integrator",
              "substeps"});
  ModelConfig out;
  const std::string kind = get_or<std::string>(m, "kind", "ode", "model");
  if (kind == "ode") {
    out.kind = ModelKind::Ode;
  } else if (kind == "pde") {
    out.kind = ModelKind::Pde;
  } else {
    schema_error("model.kind must be 'ode' or 'pde'");
  }
  try {
    if (m.contains("kernel")) {
      check_keys(m["kernel"], "model.kernel", {"family", "scale", "num_features", "seed", "period"});
      out.kernel = io::kernel_from_json(m["kernel"]);
    }
    if (m.contains("features")) {
      check_keys(m["features"], "model.features",
                 {"kind", "max_order", "degree", "include_constant", "num_features", "sigma", "seed",
                  "period"});
      out.features = io::features_from_json(m["features"]);
    }
  } catch (const Error& e) {
    schema_error(e.what());
  }
  out.lambda = get_or<double>(m, "lambda", out.lambda, "model");
  if (!(out.lambda > 0.0) || !std::isfinite(out.lambda)) schema_error("model.lambda must be > 0");
  out.p = get_or<int>(m, "p", out.p, "model");
  if (out.p < 1) schema_error("model.p must be >= 1");
  out.cut_length = get_or<int>(m, "cut_length", out.cut_length, "model");
  if (out.cut_length != 0 && out.cut_length < 2) schema_error("model.cut_length must be 0 or >= 2");
  out.coarsen = get_or<int>(m, "coarsen", out.coarsen, "model");
  if (out.coarsen < 1) schema_error("model.coarsen must be >= 1");
  out.integrator.method = integrator_from_string(get_or<std::string>(m, "integrator", "rk4", "model"));
  out.integrator.substeps = get_or<int>(m, "substeps", 1, "model");
  if (out.integrator.substeps < 1) schema_error("model.substeps must be >= 1");
  return out;
}

SearchSpace parse_search(const json& s) {
  check_keys(s, "search", {"kernels", "scales", "lambdas", "ps", "cut_lengths", "rff_features"});
  SearchSpace out;
  out.kernels.clear();
  try {
    for (const auto& k : get_or<std::vector<std::string>>(s, "kernels", {"gaussian"}, "search")) {
      out.kernels.push_back(kernel_family_from_string(k));
    }
  } catch (const Error& e) {
    schema_error(e.what());
  }
  out.scales = get_or<std::vector<double>>(s, "scales", {}, "search");
  out.lambdas = get_or<std::vector<double>>(s, "lambdas", out.lambdas, "search");
  out.ps = get_or<std::vector<int>>(s, "ps", out.ps, "search");
  out.cut_lengths = get_or<std::vector<int>>(s, "cut_lengths", out.cut_lengths, "search");
  out.rff_features = get_or<int>(s, "rff_features", out.rff_features, "search");
  if (!out.scales.empty()) {
    try {
      out.validate();
    } catch (const Error& e) {
      schema_error(e.what());
    }
  }
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Stamp files record which config produced the artifacts of a command.
struct Stamp {
  fs::path file;
  std::string hash;
};

Stamp make_stamp(const ExperimentConfig& cfg, const std::string& command, const json& extra) {
  json key{{"command", command}, {"config", cfg.source}, {"extra", extra}};
  return {cfg.output_dir / ("." + command + ".stamp.json"), config_hash(key)};
}

std::optional<std::vector<fs::path>> up_to_date(const Stamp& stamp, bool force) {
  if (force || !fs::exists(stamp.file)) return std::nullopt;
  std::ifstream in(stamp.file);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || j.value("hash", std::string{}) != stamp.hash) return std::nullopt;
  std::vector<fs::path> artifacts;
  for (const auto& a : j.value("artifacts", json::array())) {
    artifacts.emplace_back(a.get<std::string>());
    if (!fs::exists(artifacts.back())) return std::nullopt;
  }
  return artifacts;
}

void write_stamp(const Stamp& stamp, const std::vector<fs::path>& artifacts) {
  json j{{"hash", stamp.hash}, {"artifacts", json::array()}};
  for (const auto& a : artifacts) j["artifacts"].push_back(a.string());
  std::ofstream out(stamp.file);
  if (!out) throw Error(ErrorCategory::Io, "cannot write " + stamp.file.string());
  out << j.dump(2) << '\n';
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCategory::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCategory::Io, "cannot write " + path.string());
  out << text;
}

const GeneratorConfig& require_generator(const ExperimentConfig& cfg) {
  if (!cfg.generator) throw Error(ErrorCategory::Config, "this command needs dataset.generator");
  return *cfg.generator;
}

bool dataset_is_field(const ExperimentConfig& cfg) {
  if (cfg.generator) return cfg.generator->system.is_pde();
  return cfg.model.kind == ModelKind::Pde;
}

TrajectorySet load_trajectories(const ExperimentConfig& cfg, std::uint64_t seed_offset = 0) {
  if (cfg.dataset_path) return io::read_dataset(*cfg.dataset_path);
  const auto& g = require_generator(cfg);
  SystemSpec spec = g.system;
  GenerateOptions opts = g.trajectories;
  spec.seed += seed_offset;
  opts.seed += seed_offset;
  return generate(spec, opts);
}

FieldGrid load_field_data(const ExperimentConfig& cfg, std::uint64_t seed_offset = 0) {
  if (cfg.dataset_path) return io::read_field_dataset(*cfg.dataset_path);
  const auto& g = require_generator(cfg);
  FieldOptions opts = g.field;
  opts.seed += seed_offset;
  return generate_field(g.system, opts);
}

TrajectorySet maybe_cut(const TrajectorySet& data, int cut_length) {
  return cut_length >= 2 ? cut_trajectories(data, cut_length) : data;
}

// Scores a PDE model by rolling out from the first coarsened profile.
EvalReport evaluate_pde(const PdeModel& model, const FieldGrid& field) {
  const FieldGrid coarse = coarsen_grid(field, model.coarsen);
  const double dt = coarse.ts(1) - coarse.ts(0);
  const int steps = static_cast<int>(coarse.ts.size()) - 1;
  EvalReport report;
  TrajectoryScore score;
  try {
    const Eigen::MatrixXd roll = forecast_pde(model, coarse.u.row(0).transpose(), dt, steps);
    score.err = std::sqrt((roll - coarse.u).squaredNorm() / static_cast<double>(roll.size()));
  } catch (const DivergenceError&) {
    score.err = std::numeric_limits<double>::infinity();
    score.diverged = true;
  }
  double acc = 0.0;
  for (int j = 0; j < steps; ++j) {
    const Eigen::VectorXd u = coarse.u.row(j).transpose();
    const Eigen::VectorXd next = u + (coarse.ts(j + 1) - coarse.ts(j)) * model.rhs(u);
    acc += std::sqrt((next - coarse.u.row(j + 1).transpose()).squaredNorm() /
                     static_cast<double>(u.size()));
  }
  score.one_err = acc / steps;
  report.err = score.err;
  report.one_err = score.one_err;
  report.diverged = score.diverged;
  report.per_trajectory.push_back(score);
  report.model_size = model.alpha.size();
  return report;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

void ExperimentConfig::apply_seed(std::uint64_t s) {
  seed = s;
  if (generator) {
    generator->system.seed = s;
    generator->trajectories.seed = s;
    generator->field.seed = s;
  }
  if (model.kernel.rff) model.kernel.rff->seed = s;
  model.features.seed = s;
  if (search) search->seed = s;
  source["seed"] = s;
}

ExperimentConfig parse_config(const json& j, const fs::path& base_dir) {
  check_keys(j, "config", {"dataset", "model", "search", "output_dir", "seed"});
  ExperimentConfig cfg;
  cfg.source = j;
  if (!j.contains("dataset")) schema_error("config.dataset is required");
  const json& d = j["dataset"];
  check_keys(d, "dataset", {"path", "generator"});
  if (d.contains("path") == d.contains("generator")) {
    schema_error("dataset needs exactly one of 'path' or 'generator'");
  }
  if (d.contains("path")) {
    fs::path p = get_or<std::string>(d, "path", "", "dataset");
    if (p.is_relative()) p = base_dir / p;
    if (!fs::exists(p)) throw Error(ErrorCategory::Io, "dataset not found: " + p.string());
    cfg.dataset_path = p;
  } else {
    cfg.generator = parse_generator(d["generator"]);
  }
  cfg.model = parse_model(j.value("model", json::object()));
  if (j.contains("search")) cfg.search = parse_search(j["search"]);
  fs::path out = get_or<std::string>(j, "output_dir", "rock_out", "config");
  if (out.is_relative()) out = base_dir / out;
  cfg.output_dir = out;
  cfg.apply_seed(get_or<std::uint64_t>(j, "seed", 0, "config"));
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::Io, "cannot open config " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) schema_error(path.string() + " is not valid JSON");
  return parse_config(j, path.parent_path());
}

std::string config_hash(const json& j) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(j.dump())));
  return buf;
}

int exit_code_for(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Schema:
    case ErrorCategory::Config:
      return 2;
    case ErrorCategory::Io:
      return 3;
    case ErrorCategory::NumericalConditioning:
    case ErrorCategory::Divergence:
      return 4;
    default:
      return 1;
  }
}

std::vector<fs::path> cmd_generate(const ExperimentConfig& cfg, bool force) {
  const Stamp stamp = make_stamp(cfg, "generate", json::object());
  if (auto done = up_to_date(stamp, force)) return *done;
  const auto& g = require_generator(cfg);
  fs::create_directories(cfg.output_dir);
  const fs::path dir = cfg.output_dir / "data";
  json manifest{{"config_hash", stamp.hash},
                {"system", to_string(g.system.name)},
                {"seed", cfg.seed},
                {"noise_std", g.system.noise_std}};
  if (g.system.is_pde()) {
    io::write_field_dataset(dir, generate_field(g.system, g.field), manifest);
  } else {
    io::write_dataset(dir, generate(g.system, g.trajectories), manifest);
  }
  std::vector<fs::path> artifacts{dir / "manifest.json"};
  write_stamp(stamp, artifacts);
  return artifacts;
}

std::vector<fs::path> cmd_train(const ExperimentConfig& cfg, bool force) {
  const Stamp stamp = make_stamp(cfg, "train", json::object());
  if (auto done = up_to_date(stamp, force)) return *done;
  fs::create_directories(cfg.output_dir);
  const fs::path model_path = cfg.output_dir / "model.rock";
  const fs::path log_path = cfg.output_dir / "train_log.json";
  json log{{"config_hash", stamp.hash}, {"seed", cfg.seed}};
  if (cfg.model.kind == ModelKind::Pde) {
    if (!dataset_is_field(cfg)) throw Error(ErrorCategory::Config, "pde model needs a field dataset");
    const FieldGrid field = load_field_data(cfg);
    const PdeModel model = train_pde(field, cfg.model.features, cfg.model.lambda, cfg.model.coarsen);
    io::save_pde_model(model_path, model, {{"config_hash", stamp.hash}});
    log["kind"] = "pde";
    log["features"] = model.features.names();
    log["alpha"] = std::vector<double>(model.alpha.data(), model.alpha.data() + model.alpha.size());
  } else {
    if (dataset_is_field(cfg)) throw Error(ErrorCategory::Config, "ode model needs trajectories");
    const TrajectorySet data = maybe_cut(load_trajectories(cfg), cfg.model.cut_length);
    const RockModel model = train(data, cfg.model.kernel, cfg.model.lambda, cfg.model.p);
    io::save_model(model_path, model, {{"config_hash", stamp.hash}});
    log["kind"] = "ode";
    log["num_blocks"] = model.test_block.num_blocks();
    log["parameters"] = count_parameters(model);
  }
  write_json_file(log_path, log);
  std::vector<fs::path> artifacts{model_path, log_path};
  write_stamp(stamp, artifacts);
  return artifacts;
}

std::vector<fs::path> cmd_evaluate(const ExperimentConfig& cfg, const fs::path& model_path,
                                   const fs::path& test_path, bool force) {
  const fs::path mp = model_path.empty() ? cfg.output_dir / "model.rock" : model_path;
  if (!fs::exists(mp)) throw Error(ErrorCategory::Io, "model not found: " + mp.string());
  const json extra{{"model", mp.string()},
                   {"model_hash", io::read_container_header(mp)["metadata"].value("config_hash", "")},
                   {"test", test_path.string()}};
  const Stamp stamp = make_stamp(cfg, "evaluate", extra);
  if (auto done = up_to_date(stamp, force)) return *done;
  fs::create_directories(cfg.output_dir);
  const std::string format = io::read_container_header(mp).value("format", "");
  EvalReport report;
  if (format == "rock-pde-model-v1") {
    const PdeModel model = io::load_pde_model(mp);
    const FieldGrid test =
        test_path.empty() ? load_field_data(cfg, 1) : io::read_field_dataset(test_path);
    report = evaluate_pde(model, test);
  } else {
    const RockModel model = io::load_model(mp);
    // Held-out data: an explicit test set or a fresh draw from the generator.
    const TrajectorySet test =
        test_path.empty() ? load_trajectories(cfg, 1) : io::read_dataset(test_path);
    report = evaluate(model, test, cfg.model.integrator);
  }
  json j = report_to_json(report);
  j["config_hash"] = stamp.hash;
  const fs::path json_path = cfg.output_dir / "report.json";
  const fs::path table_path = cfg.output_dir / "report.txt";
  write_json_file(json_path, j);
  write_text_file(table_path, "# config_hash " + stamp.hash + "\n" + report_to_table(report));
  std::vector<fs::path> artifacts{json_path, table_path};
  write_stamp(stamp, artifacts);
  return artifacts;
}

std::vector<fs::path> cmd_sweep(const ExperimentConfig& cfg, bool force) {
  if (!cfg.search) throw Error(ErrorCategory::Config, "sweep needs a 'search' section");
  if (cfg.model.kind != ModelKind::Ode) throw Error(ErrorCategory::Unsupported, "sweep is ODE-only");
  const Stamp stamp = make_stamp(cfg, "sweep", json::object());
  if (auto done = up_to_date(stamp, force)) return *done;
  fs::create_directories(cfg.output_dir);
  const TrajectorySet data = load_trajectories(cfg);
  SearchSpace space = *cfg.search;
  space.integrator = cfg.model.integrator;
  if (space.scales.empty()) {
    const double med = median_pairwise_distance(data, 500, cfg.seed);
    space.scales = log_grid(med / 8.0, med * 2.0, 5);
  }
  const SearchResult result = two_stage_search(data, space);

  const fs::path model_path = cfg.output_dir / "model.rock";
  const fs::path log_path = cfg.output_dir / "sweep_log.jsonl";
  const fs::path result_path = cfg.output_dir / "sweep_result.json";
  io::save_model(model_path, result.model, {{"config_hash", stamp.hash}});
  write_text_file(log_path, search_log_to_jsonl(result.log));
  json summary{{"config_hash", stamp.hash},
               {"best", to_json(result.best)},
               {"validation", report_to_json(result.final_validation)}};
  write_json_file(result_path, summary);
  std::vector<fs::path> artifacts{model_path, log_path, result_path};
  write_stamp(stamp, artifacts);
  return artifacts;
}

std::vector<fs::path> cmd_forecast(const ExperimentConfig& cfg, const ForecastRequest& request,
                                   bool force) {
  const fs::path mp = request.model_path.empty() ? cfg.output_dir / "model.rock" : request.model_path;
  if (!fs::exists(mp)) throw Error(ErrorCategory::Io, "model not found: " + mp.string());
  if (!(request.dt > 0.0) || !(request.horizon > 0.0)) {
    throw Error(ErrorCategory::Schema, "forecast needs positive --horizon and --dt");
  }
  const json header = io::read_container_header(mp);
  const json extra{{"model", mp.string()},
                   {"model_hash", header["metadata"].value("config_hash", "")},
                   {"x0", request.x0},
                   {"u0", request.u0_path ? request.u0_path->string() : ""},
                   {"horizon", request.horizon},
                   {"dt", request.dt}};
  const Stamp stamp = make_stamp(cfg, "forecast", extra);
  if (auto done = up_to_date(stamp, force)) return *done;
  fs::create_directories(cfg.output_dir);
  const fs::path csv_path = cfg.output_dir / "forecast.csv";
  const fs::path meta_path = cfg.output_dir / "forecast.json";
  const int steps = static_cast<int>(std::llround(request.horizon / request.dt));
  const Eigen::VectorXd t_grid = Eigen::VectorXd::LinSpaced(steps + 1, 0.0, request.dt * steps);

  if (header.value("format", "") == "rock-pde-model-v1") {
    const PdeModel model = io::load_pde_model(mp);
    const FieldGrid source = request.u0_path ? io::read_field_dataset(*request.u0_path)
                                             : load_field_data(cfg);
    const FieldGrid coarse = coarsen_grid(source, model.coarsen);
    FieldGrid out;
    out.u = forecast_pde(model, coarse.u.row(0).transpose(), request.dt, steps);
    out.ts = t_grid;
    out.xs = coarse.xs;
    out.periodic = coarse.periodic;
    io::write_field_csv(csv_path, out);
  } else {
    const RockModel model = io::load_model(mp);
    Eigen::VectorXd x0;
    if (!request.x0.empty()) {
      x0 = Eigen::Map<const Eigen::VectorXd>(request.x0.data(),
                                             static_cast<Eigen::Index>(request.x0.size()));
    } else {
      x0 = load_trajectories(cfg, 1)[0].xs.col(0);
    }
    if (x0.size() != model.dim()) {
      throw Error(ErrorCategory::Shape, "x0 has " + std::to_string(x0.size()) +
                                            " entries, the model has dimension " +
                                            std::to_string(model.dim()));
    }
    Trajectory traj;
    traj.ts = t_grid;
    traj.xs = forecast(model, x0, t_grid, cfg.model.integrator.method, cfg.model.integrator.substeps);
    io::write_trajectory_csv(csv_path, traj);
  }
  write_json_file(meta_path, {{"config_hash", stamp.hash}, {"model", mp.string()}, {"steps", steps}});
  std::vector<fs::path> artifacts{csv_path, meta_path};
  write_stamp(stamp, artifacts);
  return artifacts;
}

int run(int argc, char** argv) {
  CLI::App app{"rock: occupation-kernel system identification"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string output;
  bool force = false;
  app.add_option("--config", config_path, "experiment config (JSON)");
  app.add_option("--seed", seed, "override config seed");
  app.add_option("--output", output, "override output directory");
  app.add_flag("--force", force, "rerun even when artifacts are up to date");

  auto* generate_cmd = app.add_subcommand("generate", "write a synthetic dataset");
  auto* train_cmd = app.add_subcommand("train", "fit a model");
  auto* evaluate_cmd = app.add_subcommand("evaluate", "score a model on held-out data");
  auto* sweep_cmd = app.add_subcommand("sweep", "two-stage hyperparameter search");
  auto* forecast_cmd = app.add_subcommand("forecast", "roll a model out from an initial state");

  std::string model_path, test_path, x0_text, u0_path;
  ForecastRequest request;
  evaluate_cmd->add_option("--model", model_path, "model file");
  evaluate_cmd->add_option("--test", test_path, "test dataset");
  forecast_cmd->add_option("--model", model_path, "model file");
  forecast_cmd->add_option("--x0", x0_text, "comma-separated initial state");
  forecast_cmd->add_option("--u0", u0_path, "field dataset whose first profile starts the rollout");
  forecast_cmd->add_option("--horizon", request.horizon, "forecast length in time units");
  forecast_cmd->add_option("--dt", request.dt, "output step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: schema: " << e.what() << '\n';
    return 2;
  }

  try {
    if (config_path.empty()) throw Error(ErrorCategory::Schema, "--config is required");
    ExperimentConfig cfg = load_config(config_path);
    if (seed) cfg.apply_seed(*seed);
    if (!output.empty()) {
      cfg.output_dir = output;
      cfg.source["output_dir"] = output;
    }
    std::vector<fs::path> artifacts;
    if (generate_cmd->parsed()) {
      artifacts = cmd_generate(cfg, force);
    } else if (train_cmd->parsed()) {
      artifacts = cmd_train(cfg, force);
    } else if (evaluate_cmd->parsed()) {
      artifacts = cmd_evaluate(cfg, model_path, test_path, force);
    } else if (sweep_cmd->parsed()) {
      artifacts = cmd_sweep(cfg, force);
    } else {
      request.model_path = model_path;
      if (!u0_path.empty()) request.u0_path = u0_path;
      for (const auto& item : split_list(x0_text)) {
        try {
          request.x0.push_back(std::stod(item));
        } catch (const std::exception&) {
          throw Error(ErrorCategory::Schema, "--x0 entry '" + item + "' is not a number");
        }
      }
      artifacts = cmd_forecast(cfg, request, force);
    }
    for (const auto& a : artifacts) std::cout << a.string() << '\n';
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << category_name(e.category()) << ": " << e.what() << '\n';
    return exit_code_for(e.category());
  } catch (const json::exception& e) {
    std::cerr << "error: schema: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: io: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace rock::cli
