#include "rock/io.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "rock/error.hpp"

namespace rock::io {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[8] = {'R', 'O', 'C', 'K', 'B', 'I', 'N', '1'};

[[noreturn]] void io_error(const std::string& msg) { throw Error(ErrorCategory::Io, msg); }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& cell, const fs::path& path, std::size_t line) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    io_error(path.string() + ":" + std::to_string(line) + ": malformed number '" + cell + "'");
  }
  return v;
}

// Rows of numbers after a header whose first column must be "t".
std::vector<std::vector<double>> read_numeric_csv(const fs::path& path,
                                                  std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) io_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) io_error(path.string() + ":1: missing header row");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);
  header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "t") {
    io_error(path.string() + ":1: header must start with 't' and name at least one column");
  }
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      io_error(path.string() + ":" + std::to_string(line_no) + ": expected " +
               std::to_string(header.size()) + " columns, got " + std::to_string(cells.size()));
    }
    std::vector<double> row(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) row[k] = parse_double(cells[k], path, line_no);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_numeric_csv(const fs::path& path, const Eigen::VectorXd& ts,
                       const Eigen::MatrixXd& values /* rows = times */) {
  std::ofstream out(path);
  if (!out) io_error("cannot write " + path.string());
  out << 't';
  for (Eigen::Index c = 0; c < values.cols(); ++c) out << ",x_" << (c + 1);
  out << '\n';
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    out << format_double(ts(r));
    for (Eigen::Index c = 0; c < values.cols(); ++c) out << ',' << format_double(values(r, c));
    out << '\n';
  }
  if (!out) io_error("failed writing " + path.string());
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(bytes, 8);
}

std::uint64_t get_u64(const unsigned char* bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

std::vector<unsigned char> read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error("cannot open " + path.string());
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in), {});
}

std::uint64_t check_preamble(const std::vector<unsigned char>& bytes, const fs::path& path) {
  if (bytes.size() < 16 || !std::equal(kMagic, kMagic + 8, bytes.begin(),
                                       [](char a, unsigned char b) { return a == static_cast<char>(b); })) {
    io_error(path.string() + ": not a rock container");
  }
  const std::uint64_t header_len = get_u64(bytes.data() + 8);
  if (16 + header_len > bytes.size()) io_error(path.string() + ": truncated header");
  return header_len;
}

void require_format(const nlohmann::json& header, const std::string& format, const fs::path& path) {
  if (header.value("format", std::string{}) != format) {
    io_error(path.string() + ": expected format " + format + ", found " +
             header.value("format", std::string{"<none>"}));
  }
}

fs::path resolve_manifest(const fs::path& path) {
  if (fs::is_directory(path)) return path / "manifest.json";
  return path;
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) io_error("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    io_error(path.string() + ": invalid JSON: " + e.what());
  }
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) io_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

void write_trajectory_csv(const fs::path& path, const Trajectory& trajectory) {
  write_numeric_csv(path, trajectory.ts, trajectory.xs.transpose());
}

Trajectory read_trajectory_csv(const fs::path& path) {
  std::vector<std::string> header;
  const auto rows = read_numeric_csv(path, header);
  Trajectory t;
  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(header.size() - 1);
  t.ts.resize(m);
  t.xs.resize(d, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    t.ts(k) = rows[k][0];
    for (Eigen::Index r = 0; r < d; ++r) t.xs(r, k) = rows[k][r + 1];
  }
  return t;
}

nlohmann::json write_dataset(const fs::path& dir, const TrajectorySet& data,
                             nlohmann::json manifest) {
  fs::create_directories(dir);
  manifest["kind"] = "trajectories";
  manifest["dim"] = data.dim();
  manifest["files"] = nlohmann::json::array();
  for (std::size_t i = 0; i < data.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "traj_%04zu.csv", i);
    write_trajectory_csv(dir / name, data[i]);
    manifest["files"].push_back(name);
  }
  write_json(dir / "manifest.json", manifest);
  return manifest;
}

TrajectorySet read_dataset(const fs::path& path) {
  if (!fs::exists(path)) io_error("dataset not found: " + path.string());
  if (path.extension() == ".csv") return TrajectorySet({read_trajectory_csv(path)});
  const fs::path manifest_path = resolve_manifest(path);
  const nlohmann::json manifest = read_json(manifest_path);
  if (manifest.value("kind", std::string{"trajectories"}) != "trajectories") {
    io_error(manifest_path.string() + ": not a trajectory dataset");
  }
  if (!manifest.contains("files") || !manifest["files"].is_array()) {
    io_error(manifest_path.string() + ": manifest lacks a files list");
  }
  std::vector<Trajectory> out;
  for (const auto& f : manifest["files"]) {
    out.push_back(read_trajectory_csv(manifest_path.parent_path() / f.get<std::string>()));
  }
  return TrajectorySet(std::move(out));
}

void write_field_csv(const fs::path& path, const FieldGrid& grid) {
  write_numeric_csv(path, grid.ts, grid.u);
}

FieldGrid read_field_csv(const fs::path& path, double x0, double dx, bool periodic) {
  std::vector<std::string> header;
  const auto rows = read_numeric_csv(path, header);
  FieldGrid g;
  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto n = static_cast<Eigen::Index>(header.size() - 1);
  g.ts.resize(m);
  g.u.resize(m, n);
  for (Eigen::Index j = 0; j < m; ++j) {
    g.ts(j) = rows[j][0];
    for (Eigen::Index i = 0; i < n; ++i) g.u(j, i) = rows[j][i + 1];
  }
  g.xs.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) g.xs(i) = x0 + dx * static_cast<double>(i);
  g.periodic = periodic;
  return g;
}

nlohmann::json write_field_dataset(const fs::path& dir, const FieldGrid& grid,
                                   nlohmann::json manifest) {
  fs::create_directories(dir);
  manifest["kind"] = "field";
  manifest["file"] = "field.csv";
  manifest["x0"] = grid.xs(0);
  manifest["dx"] = grid.dx();
  manifest["periodic"] = grid.periodic;
  write_field_csv(dir / "field.csv", grid);
  write_json(dir / "manifest.json", manifest);
  return manifest;
}

FieldGrid read_field_dataset(const fs::path& path) {
  if (!fs::exists(path)) io_error("field dataset not found: " + path.string());
  if (path.extension() == ".rock") return load_field(path);
  const fs::path manifest_path = resolve_manifest(path);
  const nlohmann::json manifest = read_json(manifest_path);
  if (manifest.value("kind", std::string{}) != "field") {
    io_error(manifest_path.string() + ": not a field dataset");
  }
  try {
    FieldGrid g = read_field_csv(manifest_path.parent_path() / manifest.at("file").get<std::string>(),
                                 manifest.at("x0").get<double>(), manifest.at("dx").get<double>(),
                                 manifest.at("periodic").get<bool>());
    return g;
  } catch (const nlohmann::json::exception& e) {
    io_error(manifest_path.string() + ": " + e.what());
  }
}

void write_container(const fs::path& path, const Container& container) {
  nlohmann::json header = container.header;
  header["arrays"] = nlohmann::json::object();
  std::uint64_t offset = 0;
  for (const auto& [name, m] : container.arrays) {
    header["arrays"][name] = {{"rows", m.rows()}, {"cols", m.cols()}, {"offset", offset}};
    offset += static_cast<std::uint64_t>(m.size()) * 8;
  }
  const std::string text = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) io_error("cannot write " + path.string());
  out.write(kMagic, 8);
  put_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& [name, m] : container.arrays) {
    for (Eigen::Index k = 0; k < m.size(); ++k) {
      std::uint64_t bits = 0;
      const double v = m.data()[k];
      std::memcpy(&bits, &v, 8);
      put_u64(out, bits);
    }
  }
  if (!out) io_error("failed writing " + path.string());
}

nlohmann::json read_container_header(const fs::path& path) {
  const auto bytes = read_all(path);
  const std::uint64_t len = check_preamble(bytes, path);
  try {
    return nlohmann::json::parse(bytes.begin() + 16, bytes.begin() + 16 + static_cast<long>(len));
  } catch (const nlohmann::json::parse_error& e) {
    io_error(path.string() + ": invalid container header: " + e.what());
  }
}

Container read_container(const fs::path& path) {
  const auto bytes = read_all(path);
  const std::uint64_t len = check_preamble(bytes, path);
  Container c;
  try {
    c.header = nlohmann::json::parse(bytes.begin() + 16, bytes.begin() + 16 + static_cast<long>(len));
  } catch (const nlohmann::json::parse_error& e) {
    io_error(path.string() + ": invalid container header: " + e.what());
  }
  const std::size_t base = 16 + len;
  const nlohmann::json index = c.header.value("arrays", nlohmann::json::object());
  for (const auto& [name, info] : index.items()) {
    const auto rows = info.at("rows").get<Eigen::Index>();
    const auto cols = info.at("cols").get<Eigen::Index>();
    const auto offset = info.at("offset").get<std::uint64_t>();
    const std::size_t need = base + offset + static_cast<std::size_t>(rows * cols) * 8;
    if (rows < 0 || cols < 0 || need > bytes.size()) io_error(path.string() + ": truncated array " + name);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index k = 0; k < m.size(); ++k) {
      const std::uint64_t bits = get_u64(bytes.data() + base + offset + 8 * k);
      std::memcpy(m.data() + k, &bits, 8);
    }
    c.arrays.emplace(name, std::move(m));
  }
  return c;
}

nlohmann::json kernel_to_json(const KernelSpec& spec) {
  nlohmann::json j{{"family", to_string(spec.family)}, {"scale", spec.scale}};
  if (spec.rff) {
    j["num_features"] = spec.rff->num_features;
    j["seed"] = spec.rff->seed;
    if (spec.rff->period) j["period"] = *spec.rff->period;
  }
  return j;
}

KernelSpec kernel_from_json(const nlohmann::json& j) {
  try {
    KernelSpec spec;
    spec.family = kernel_family_from_string(j.at("family").get<std::string>());
    spec.scale = j.at("scale").get<double>();
    if (spec.family == KernelFamily::RandomFourier) {
      RffConfig cfg;
      cfg.num_features = j.value("num_features", 256);
      cfg.seed = j.value("seed", std::uint64_t{0});
      if (j.contains("period")) cfg.period = j.at("period").get<double>();
      spec.rff = cfg;
    }
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCategory::Schema, std::string("kernel spec: ") + e.what());
  }
}

nlohmann::json features_to_json(const FeatureSpec& spec) {
  nlohmann::json j{{"kind", spec.kind == FeatureKind::Polynomial ? "polynomial" : "random_fourier"},
                   {"max_order", spec.max_order}};
  if (spec.kind == FeatureKind::Polynomial) {
    j["degree"] = spec.degree;
    j["include_constant"] = spec.include_constant;
  } else {
    j["num_features"] = spec.num_features;
    j["sigma"] = spec.sigma;
    j["seed"] = spec.seed;
    if (spec.period) j["period"] = *spec.period;
  }
  return j;
}

FeatureSpec features_from_json(const nlohmann::json& j) {
  try {
    FeatureSpec spec;
    const std::string kind = j.value("kind", std::string{"polynomial"});
    if (kind == "polynomial") {
      spec.kind = FeatureKind::Polynomial;
    } else if (kind == "random_fourier" || kind == "rff") {
      spec.kind = FeatureKind::RandomFourier;
    } else {
      throw Error(ErrorCategory::Schema, "unknown feature kind '" + kind + "'");
    }
    spec.max_order = j.value("max_order", 2);
    spec.degree = j.value("degree", 1);
    spec.include_constant = j.value("include_constant", true);
    spec.num_features = j.value("num_features", 200);
    spec.sigma = j.value("sigma", 1.0);
    spec.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("period")) spec.period = j.at("period").get<double>();
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCategory::Schema, std::string("feature spec: ") + e.what());
  }
}

void save_model(const fs::path& path, const RockModel& model, const nlohmann::json& metadata) {
  Container c;
  c.header["format"] = "rock-model-v1";
  c.header["kernel"] = kernel_to_json(model.kernel);
  c.header["lambda"] = model.lambda;
  c.header["p"] = model.p;
  c.header["dim"] = model.dim();
  std::vector<Eigen::Index> sizes;
  Eigen::VectorXd times(model.test_block.num_samples());
  Eigen::Index offset = 0;
  for (const auto& ts : model.sample_times) {
    sizes.push_back(ts.size());
    times.segment(offset, ts.size()) = ts;
    offset += ts.size();
  }
  c.header["block_sizes"] = sizes;
  c.header["metadata"] = metadata;
  c.arrays["train_points"] = model.train_points;
  c.arrays["sample_times"] = times;
  c.arrays["coeffs"] = model.coeffs;
  write_container(path, c);
}

RockModel load_model(const fs::path& path) {
  Container c = read_container(path);
  require_format(c.header, "rock-model-v1", path);
  try {
    const KernelSpec kernel = kernel_from_json(c.header.at("kernel"));
    const double lambda = c.header.at("lambda").get<double>();
    const int p = c.header.at("p").get<int>();
    const auto sizes = c.header.at("block_sizes").get<std::vector<Eigen::Index>>();
    const Eigen::MatrixXd& times = c.arrays.at("sample_times");
    Eigen::Index offset = 0;
    std::vector<Trajectory> blocks;
    const Eigen::MatrixXd& points = c.arrays.at("train_points");
    for (Eigen::Index m : sizes) {
      if (offset + m > points.cols() || offset + m > times.size()) {
        io_error(path.string() + ": block sizes exceed stored samples");
      }
      Trajectory t;
      t.ts = times.col(0).segment(offset, m);
      t.xs = points.middleCols(offset, m);
      blocks.push_back(std::move(t));
      offset += m;
    }
    const TrajectorySet data(std::move(blocks));
    TestBlock tb = build_test_block(data.time_vectors(), p - 1);
    return make_model(data, kernel, lambda, std::move(tb), c.arrays.at("coeffs"));
  } catch (const nlohmann::json::exception& e) {
    io_error(path.string() + ": malformed model header: " + e.what());
  } catch (const std::out_of_range&) {
    io_error(path.string() + ": model file is missing an array");
  }
}

void save_pde_model(const fs::path& path, const PdeModel& model, const nlohmann::json& metadata) {
  Container c;
  c.header["format"] = "rock-pde-model-v1";
  c.header["features"] = features_to_json(model.features);
  c.header["lambda"] = model.lambda;
  c.header["coarsen"] = model.coarsen;
  c.header["h"] = model.h;
  c.header["periodic"] = model.periodic;
  c.header["metadata"] = metadata;
  c.arrays["alpha"] = model.alpha;
  write_container(path, c);
}

PdeModel load_pde_model(const fs::path& path) {
  Container c = read_container(path);
  require_format(c.header, "rock-pde-model-v1", path);
  try {
    PdeModel m;
    m.features = features_from_json(c.header.at("features"));
    m.lambda = c.header.at("lambda").get<double>();
    m.coarsen = c.header.at("coarsen").get<int>();
    m.h = c.header.at("h").get<double>();
    m.periodic = c.header.at("periodic").get<bool>();
    m.alpha = c.arrays.at("alpha").col(0);
    return m;
  } catch (const nlohmann::json::exception& e) {
    io_error(path.string() + ": malformed pde model header: " + e.what());
  } catch (const std::out_of_range&) {
    io_error(path.string() + ": pde model file is missing alpha");
  }
}

void save_field(const fs::path& path, const FieldGrid& grid) {
  Container c;
  c.header["format"] = "rock-field-v1";
  c.header["periodic"] = grid.periodic;
  c.arrays["u"] = grid.u;
  c.arrays["ts"] = grid.ts;
  c.arrays["xs"] = grid.xs;
  write_container(path, c);
}

FieldGrid load_field(const fs::path& path) {
  Container c = read_container(path);
  require_format(c.header, "rock-field-v1", path);
  try {
    FieldGrid g;
    g.periodic = c.header.at("periodic").get<bool>();
    g.u = c.arrays.at("u");
    g.ts = c.arrays.at("ts").col(0);
    g.xs = c.arrays.at("xs").col(0);
    return g;
  } catch (const std::exception& e) {
    io_error(path.string() + ": malformed field file: " + e.what());
  }
}

}  // namespace rock::io
