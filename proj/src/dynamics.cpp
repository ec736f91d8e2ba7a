#include "rock/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "rock/error.hpp"

namespace rock {

namespace {

std::mt19937_64 sub_rng(std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), 0x524f434bu};
  return std::mt19937_64(seq);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Eigen::VectorXd double_pendulum_field(const SystemSpec& spec, const Eigen::VectorXd& x) {
  const double g = spec.param("g");
  const double th1 = x(0), th2 = x(1), p1 = x(2), p2 = x(3);
  const double delta = th1 - th2;
  const double s = std::sin(delta), c = std::cos(delta);
  const double den = 1.0 + s * s;
  const double c1 = p1 * p2 * s / den;
  const double c2 = (p1 * p1 + 2.0 * p2 * p2 - 2.0 * p1 * p2 * c) * std::sin(2.0 * delta) /
                    (2.0 * den * den);
  Eigen::VectorXd out(4);
  out << (p1 - p2 * c) / den, (2.0 * p2 - p1 * c) / den, -2.0 * g * std::sin(th1) - c1 + c2,
      -g * std::sin(th2) + c1 - c2;
  return out;
}

double pde_length(const SystemSpec& spec) { return spec.param("length"); }

Eigen::VectorXd pde_field(const SystemSpec& spec, const Eigen::VectorXd& u) {
  const double h = pde_length(spec) / static_cast<double>(u.size());
  if (spec.name == SystemName::Heat1D) {
    const Eigen::MatrixXd d = profile_derivatives(u, h, 2, true);
    return spec.param("c") * d.row(2).transpose();
  }
  const Eigen::MatrixXd d = profile_derivatives(u, h, 4, true);
  return (-(d.row(0).array() * d.row(1).array()) - d.row(2).array() - d.row(4).array())
      .transpose()
      .matrix();
}

}  // namespace

std::string to_string(SystemName name) {
  switch (name) {
    case SystemName::Lorenz63: return "lorenz63";
    case SystemName::Lorenz96: return "lorenz96";
    case SystemName::FitzHughNagumo: return "fitzhugh_nagumo";
    case SystemName::Rossler: return "rossler";
    case SystemName::DoublePendulum: return "double_pendulum";
    case SystemName::Heat1D: return "heat1d";
    case SystemName::KuramotoSivashinsky: return "kuramoto_sivashinsky";
  }
  return "unknown";
}

SystemName system_from_string(const std::string& name) {
  for (SystemName s : {SystemName::Lorenz63, SystemName::Lorenz96, SystemName::FitzHughNagumo,
                       SystemName::Rossler, SystemName::DoublePendulum, SystemName::Heat1D,
                       SystemName::KuramotoSivashinsky}) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorCategory::Config, "unknown system '" + name + "'");
}

SystemSpec SystemSpec::with_defaults(SystemName name, int dim) {
  SystemSpec spec;
  spec.name = name;
  switch (name) {
    case SystemName::Lorenz63:
      spec.params = {{"sigma", 10.0}, {"rho", 28.0}, {"beta", 8.0 / 3.0}};
      spec.dim = 3;
      break;
    case SystemName::Lorenz96:
      spec.params = {{"F", 8.0}};
      spec.dim = dim > 0 ? dim : 16;
      break;
    case SystemName::FitzHughNagumo:
      spec.params = {{"a", 0.7}, {"b", 0.8}, {"tau", 12.5}, {"I", 0.5}};
      spec.dim = 2;
      break;
    case SystemName::Rossler:
      spec.params = {{"a", 0.2}, {"b", 0.2}, {"c", 5.7}};
      spec.dim = 3;
      break;
    case SystemName::DoublePendulum:
      spec.params = {{"g", 9.81}};
      spec.dim = 4;
      break;
    case SystemName::Heat1D:
      spec.params = {{"c", 0.1}, {"length", 2.0 * std::numbers::pi}};
      spec.dim = dim > 0 ? dim : 512;
      break;
    case SystemName::KuramotoSivashinsky:
      spec.params = {{"length", 22.0}};
      spec.dim = dim > 0 ? dim : 64;
      break;
  }
  return spec;
}

bool SystemSpec::is_pde() const {
  return name == SystemName::Heat1D || name == SystemName::KuramotoSivashinsky;
}

double SystemSpec::param(const std::string& key) const {
  auto it = params.find(key);
  if (it != params.end()) return it->second;
  const SystemSpec defaults = with_defaults(name, dim);
  auto dit = defaults.params.find(key);
  if (dit == defaults.params.end()) {
    throw Error(ErrorCategory::Config, "system " + to_string(name) + " has no parameter " + key);
  }
  return dit->second;
}

void SystemSpec::validate() const {
  if (noise_std < 0.0) throw Error(ErrorCategory::Config, "noise_std must be >= 0");
  switch (name) {
    case SystemName::Lorenz63:
    case SystemName::Rossler:
      if (dim != 3) throw Error(ErrorCategory::Config, to_string(name) + " has dimension 3");
      break;
    case SystemName::Lorenz96:
      if (dim < 4) throw Error(ErrorCategory::Config, "lorenz96 requires dim >= 4");
      break;
    case SystemName::FitzHughNagumo:
      if (dim != 2) throw Error(ErrorCategory::Config, "fitzhugh_nagumo has dimension 2");
      break;
    case SystemName::DoublePendulum:
      if (dim != 4) throw Error(ErrorCategory::Config, "double_pendulum has dimension 4");
      break;
    case SystemName::Heat1D:
    case SystemName::KuramotoSivashinsky:
      if (dim < 8) throw Error(ErrorCategory::Config, "pde mesh needs at least 8 points");
      break;
  }
}

Eigen::VectorXd vector_field(const SystemSpec& spec, const Eigen::VectorXd& x) {
  if (x.size() != spec.dim) {
    throw Error(ErrorCategory::Shape, to_string(spec.name) + " expects a state of dimension " +
                                          std::to_string(spec.dim));
  }
  Eigen::VectorXd out(x.size());
  switch (spec.name) {
    case SystemName::Lorenz63: {
      const double s = spec.param("sigma"), r = spec.param("rho"), b = spec.param("beta");
      out << s * (x(1) - x(0)), x(0) * (r - x(2)) - x(1), x(0) * x(1) - b * x(2);
      return out;
    }
    case SystemName::Lorenz96: {
      const double F = spec.param("F");
      const Eigen::Index n = x.size();
      for (Eigen::Index k = 0; k < n; ++k) {
        const double next = x((k + 1) % n);
        const double prev = x((k + n - 1) % n);
        const double prev2 = x((k + n - 2) % n);
        out(k) = (next - prev2) * prev - x(k) + F;
      }
      return out;
    }
    case SystemName::FitzHughNagumo: {
      const double a = spec.param("a"), b = spec.param("b"), tau = spec.param("tau"),
                   I = spec.param("I");
      out << x(0) - x(0) * x(0) * x(0) / 3.0 - x(1) + I, (x(0) + a - b * x(1)) / tau;
      return out;
    }
    case SystemName::Rossler: {
      const double a = spec.param("a"), b = spec.param("b"), c = spec.param("c");
      out << -x(1) - x(2), x(0) + a * x(1), b + x(2) * (x(0) - c);
      return out;
    }
    case SystemName::DoublePendulum:
      return double_pendulum_field(spec, x);
    case SystemName::Heat1D:
    case SystemName::KuramotoSivashinsky:
      return pde_field(spec, x);
  }
  return out;
}

double double_pendulum_energy(const SystemSpec& spec, const Eigen::VectorXd& x) {
  const double g = spec.param("g");
  const double th1 = x(0), th2 = x(1), p1 = x(2), p2 = x(3);
  const double delta = th1 - th2;
  const double den = 1.0 + std::sin(delta) * std::sin(delta);
  const double kinetic = (p1 * p1 + 2.0 * p2 * p2 - 2.0 * p1 * p2 * std::cos(delta)) / (2.0 * den);
  return kinetic - 2.0 * g * std::cos(th1) - g * std::cos(th2);
}

Eigen::VectorXd initial_condition(const SystemSpec& spec, std::uint64_t seed, int index) {
  auto rng = sub_rng(seed, index);
  Eigen::VectorXd x0(spec.dim);
  switch (spec.name) {
    case SystemName::Lorenz63:
      x0 << uniform(rng, -15.0, 15.0), uniform(rng, -20.0, 20.0), uniform(rng, 5.0, 40.0);
      break;
    case SystemName::Lorenz96: {
      const double F = spec.param("F");
      for (Eigen::Index k = 0; k < x0.size(); ++k) x0(k) = F + uniform(rng, -1.0, 1.0);
      break;
    }
    case SystemName::FitzHughNagumo:
      x0 << uniform(rng, -2.5, 2.5), uniform(rng, -1.0, 2.0);
      break;
    case SystemName::Rossler:
      x0 << uniform(rng, -10.0, 10.0), uniform(rng, -10.0, 10.0), uniform(rng, 0.0, 5.0);
      break;
    case SystemName::DoublePendulum:
      x0 << uniform(rng, -std::numbers::pi / 2, std::numbers::pi / 2),
          uniform(rng, -std::numbers::pi / 2, std::numbers::pi / 2), uniform(rng, -1.0, 1.0),
          uniform(rng, -1.0, 1.0);
      break;
    case SystemName::Heat1D:
    case SystemName::KuramotoSivashinsky: {
      const double L = pde_length(spec);
      const double amp = spec.name == SystemName::Heat1D ? 1.0 : 0.1;
      std::normal_distribution<double> normal(0.0, 1.0);
      double a[3], b[3];
      for (int k = 0; k < 3; ++k) {
        a[k] = amp * normal(rng) / (k + 1);
        b[k] = amp * normal(rng) / (k + 1);
      }
      for (Eigen::Index i = 0; i < x0.size(); ++i) {
        const double x = L * static_cast<double>(i) / static_cast<double>(x0.size());
        double v = 0.0;
        for (int k = 0; k < 3; ++k) {
          const double w = 2.0 * std::numbers::pi * (k + 1) / L;
          v += a[k] * std::sin(w * x) + b[k] * std::cos(w * x);
        }
        x0(i) = v;
      }
      break;
    }
  }
  return x0;
}

TrajectorySet generate(const SystemSpec& spec, const GenerateOptions& opts) {
  spec.validate();
  if (spec.is_pde()) {
    throw Error(ErrorCategory::Unsupported, "use generate_field for PDE systems");
  }
  if (opts.n_traj < 1 || opts.samples_per_traj < 2) {
    throw Error(ErrorCategory::Config, "need n_traj >= 1 and samples_per_traj >= 2");
  }
  if (!(opts.dt > 0.0) || opts.transient < 0.0) {
    throw Error(ErrorCategory::Config, "dt must be positive and transient nonnegative");
  }
  const VectorFieldFn field = [&spec](const Eigen::VectorXd& x) { return vector_field(spec, x); };
  const Eigen::VectorXd grid =
      Eigen::VectorXd::LinSpaced(opts.samples_per_traj, 0.0, opts.dt * (opts.samples_per_traj - 1));

  std::vector<Trajectory> out(opts.n_traj);
  for (int i = 0; i < opts.n_traj; ++i) {
    Eigen::VectorXd x0 = initial_condition(spec, opts.seed, i);
    if (opts.transient > 0.0) {
      const int steps = std::max(1, static_cast<int>(std::ceil(opts.transient / opts.dt)));
      const Eigen::VectorXd warm = Eigen::VectorXd::LinSpaced(steps + 1, 0.0, opts.transient);
      x0 = integrate(field, x0, warm, Integrator::RK4, opts.substeps).col(steps);
    }
    Trajectory t;
    t.ts = grid;
    t.xs = integrate(field, x0, grid, Integrator::RK4, opts.substeps);
    if (spec.noise_std > 0.0) {
      auto rng = sub_rng(opts.seed ^ 0x9e3779b97f4a7c15ull, i);
      std::normal_distribution<double> noise(0.0, spec.noise_std);
      for (Eigen::Index c = 0; c < t.xs.cols(); ++c) {
        for (Eigen::Index r = 0; r < t.xs.rows(); ++r) t.xs(r, c) += noise(rng);
      }
    }
    out[i] = std::move(t);
  }
  return TrajectorySet(std::move(out));
}

FieldGrid generate_field(const SystemSpec& spec, const FieldOptions& opts) {
  spec.validate();
  if (!spec.is_pde()) throw Error(ErrorCategory::Unsupported, "generate_field needs a PDE system");
  if (opts.n_space < 3 || opts.refine < 1 || opts.n_times < 2 || !(opts.dt > 0.0)) {
    throw Error(ErrorCategory::Config, "invalid field generation options");
  }
  SystemSpec fine = spec;
  fine.dim = opts.n_space * opts.refine;
  const double L = pde_length(fine);
  const double h = L / fine.dim;

  Eigen::VectorXd u0(fine.dim);
  if (opts.initial) {
    for (int i = 0; i < fine.dim; ++i) u0(i) = opts.initial(h * i);
  } else {
    u0 = initial_condition(fine, opts.seed, 0);
  }

  // RK4 is stable for real negative eigenvalues down to about -2.78/dt
  double stiffness = 0.0;
  if (fine.name == SystemName::Heat1D) {
    stiffness = 4.0 * fine.param("c") / (h * h);
  } else {
    stiffness = 16.0 / std::pow(h, 4) + 4.0 / (h * h);
  }
  const double dt_max = 0.5 * 2.78 / stiffness;
  const int substeps = std::max(1, static_cast<int>(std::ceil(opts.dt / dt_max)));
  const VectorFieldFn field = [&fine](const Eigen::VectorXd& u) { return vector_field(fine, u); };

  if (opts.transient > 0.0) {
    const int steps = std::max(1, static_cast<int>(std::ceil(opts.transient / opts.dt)));
    const Eigen::VectorXd warm = Eigen::VectorXd::LinSpaced(steps + 1, 0.0, steps * opts.dt);
    u0 = integrate(field, u0, warm, Integrator::RK4, substeps).col(steps);
  }
  const Eigen::VectorXd ts = Eigen::VectorXd::LinSpaced(opts.n_times, 0.0, opts.dt * (opts.n_times - 1));
  const Eigen::MatrixXd path = integrate(field, u0, ts, Integrator::RK4, substeps);

  FieldGrid grid;
  grid.ts = ts;
  grid.periodic = true;
  grid.xs.resize(opts.n_space);
  grid.u.resize(opts.n_times, opts.n_space);
  for (int i = 0; i < opts.n_space; ++i) {
    grid.xs(i) = h * i * opts.refine;
    grid.u.col(i) = path.row(i * opts.refine).transpose();
  }
  if (spec.noise_std > 0.0) {
    auto rng = sub_rng(opts.seed ^ 0x9e3779b97f4a7c15ull, 0);
    std::normal_distribution<double> noise(0.0, spec.noise_std);
    for (Eigen::Index c = 0; c < grid.u.cols(); ++c) {
      for (Eigen::Index r = 0; r < grid.u.rows(); ++r) grid.u(r, c) += noise(rng);
    }
  }
  return grid;
}

}  // namespace rock
