#include "rock/pde_learner.hpp"

#include <cmath>
#include <string>

#include "rock/error.hpp"
#include "rock/kernels.hpp"
#include "rock/representer.hpp"

namespace rock {

void FieldGrid::validate() const {
  const Eigen::Index m = u.rows();
  const Eigen::Index n = u.cols();
  if (ts.size() != m || xs.size() != n) {
    throw Error(ErrorCategory::Shape, "field grid: u must be |ts| x |xs|");
  }
  if (m < 2) throw Error(ErrorCategory::GridTooSmall, "field grid needs at least 2 time samples");
  if (n < 3) throw Error(ErrorCategory::GridTooSmall, "field grid needs at least 3 space samples");
  for (Eigen::Index j = 1; j < m; ++j) {
    if (!(ts(j) > ts(j - 1))) {
      throw Error(ErrorCategory::InputDomain, "field grid times must be strictly increasing");
    }
  }
  const double h = xs(1) - xs(0);
  if (!(h > 0.0)) throw Error(ErrorCategory::InputDomain, "spatial mesh must be increasing");
  for (Eigen::Index i = 1; i < n; ++i) {
    if (std::abs((xs(i) - xs(i - 1)) - h) > 1e-10 * std::abs(h) * std::max<double>(1.0, n)) {
      throw Error(ErrorCategory::InputDomain, "spatial mesh must be uniform");
    }
  }
}

namespace {

Eigen::VectorXd first_derivative(const Eigen::VectorXd& v, double h, bool periodic) {
  const Eigen::Index n = v.size();
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 1; i + 1 < n; ++i) out(i) = (v(i + 1) - v(i - 1)) / (2.0 * h);
  if (periodic) {
    out(0) = (v(1) - v(n - 1)) / (2.0 * h);
    out(n - 1) = (v(0) - v(n - 2)) / (2.0 * h);
  } else {
    out(0) = (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h);
    out(n - 1) = (3.0 * v(n - 1) - 4.0 * v(n - 2) + v(n - 3)) / (2.0 * h);
  }
  return out;
}

Eigen::VectorXd second_derivative(const Eigen::VectorXd& v, double h, bool periodic) {
  const Eigen::Index n = v.size();
  const double h2 = h * h;
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 1; i + 1 < n; ++i) out(i) = (v(i + 1) - 2.0 * v(i) + v(i - 1)) / h2;
  if (periodic) {
    out(0) = (v(1) - 2.0 * v(0) + v(n - 1)) / h2;
    out(n - 1) = (v(0) - 2.0 * v(n - 1) + v(n - 2)) / h2;
  } else {
    out(0) = (2.0 * v(0) - 5.0 * v(1) + 4.0 * v(2) - v(3)) / h2;
    out(n - 1) = (2.0 * v(n - 1) - 5.0 * v(n - 2) + 4.0 * v(n - 3) - v(n - 4)) / h2;
  }
  return out;
}

void check_stencil_room(Eigen::Index n, int max_order, bool periodic) {
  const Eigen::Index need = std::max<Eigen::Index>(2 * max_order + 1, periodic ? 3 : 4);
  if (n < need) {
    throw Error(ErrorCategory::GridTooSmall,
                "derivatives up to order " + std::to_string(max_order) + " need at least " +
                    std::to_string(need) + " mesh points, got " + std::to_string(n));
  }
}

// Monomials as nondecreasing lists of input indices, ordered by total degree.
std::vector<std::vector<int>> monomials(int num_inputs, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  auto recurse = [&](auto&& self, int start, int remaining) -> void {
    if (remaining == 0) {
      out.push_back(current);
      return;
    }
    for (int v = start; v < num_inputs; ++v) {
      current.push_back(v);
      self(self, v, remaining - 1);
      current.pop_back();
    }
  };
  for (int t = 1; t <= degree; ++t) recurse(recurse, 0, t);
  return out;
}

std::string input_name(int order) {
  if (order == 0) return "u";
  if (order <= 4) return "u_" + std::string(order, 'x');
  return "d" + std::to_string(order) + "u";
}

KernelSpec rff_kernel(const FeatureSpec& spec) {
  return KernelSpec::random_fourier(spec.sigma, spec.num_features, spec.seed, spec.period);
}

}  // namespace

Eigen::MatrixXd profile_derivatives(const Eigen::Ref<const Eigen::VectorXd>& u, double h,
                                    int max_order, bool periodic) {
  if (max_order < 0) throw Error(ErrorCategory::Config, "derivative order must be >= 0");
  if (!(h > 0.0)) throw Error(ErrorCategory::InputDomain, "mesh spacing must be positive");
  check_stencil_room(u.size(), max_order, periodic);
  Eigen::MatrixXd out(max_order + 1, u.size());
  out.row(0) = u.transpose();
  Eigen::VectorXd even = u;  // D2^(k/2) u
  for (int k = 1; k <= max_order; ++k) {
    if (k % 2 == 1) {
      out.row(k) = first_derivative(even, h, periodic).transpose();
    } else {
      even = second_derivative(even, h, periodic);
      out.row(k) = even.transpose();
    }
  }
  return out;
}

FieldGrid coarsen_grid(const FieldGrid& grid, int coarsen) {
  if (coarsen < 1) throw Error(ErrorCategory::Config, "coarsening stride must be >= 1");
  const Eigen::Index n = grid.xs.size();
  if (grid.periodic && n % coarsen != 0) {
    throw Error(ErrorCategory::Config,
                "periodic grids need the point count to be divisible by the coarsening stride");
  }
  const Eigen::Index nc = (n + coarsen - 1) / coarsen;
  FieldGrid out;
  out.ts = grid.ts;
  out.periodic = grid.periodic;
  out.xs.resize(nc);
  out.u.resize(grid.u.rows(), nc);
  for (Eigen::Index i = 0; i < nc; ++i) {
    out.xs(i) = grid.xs(i * coarsen);
    out.u.col(i) = grid.u.col(i * coarsen);
  }
  return out;
}

DerivativeStack spatial_derivatives(const FieldGrid& grid, int max_order, int coarsen) {
  grid.validate();
  const FieldGrid coarse = coarsen_grid(grid, coarsen);
  const Eigen::Index m = coarse.u.rows();
  const Eigen::Index nc = coarse.xs.size();
  check_stencil_room(nc, max_order, grid.periodic);
  DerivativeStack stack;
  stack.xs = coarse.xs;
  stack.h = grid.dx() * coarsen;
  stack.orders.assign(max_order + 1, Eigen::MatrixXd(m, nc));
  for (Eigen::Index j = 0; j < m; ++j) {
    const Eigen::MatrixXd d =
        profile_derivatives(coarse.u.row(j).transpose(), stack.h, max_order, grid.periodic);
    for (int k = 0; k <= max_order; ++k) stack.orders[k].row(j) = d.row(k);
  }
  return stack;
}

void FeatureSpec::validate() const {
  if (max_order < 0) throw Error(ErrorCategory::Config, "feature max_order must be >= 0");
  if (kind == FeatureKind::Polynomial) {
    if (degree < 0 || degree > 3) {
      throw Error(ErrorCategory::Config, "polynomial feature degree must be in [0, 3]");
    }
    if (degree == 0 && !include_constant) {
      throw Error(ErrorCategory::Config, "polynomial features are empty");
    }
  } else {
    rff_kernel(*this).validate();
  }
}

int FeatureSpec::dimension() const {
  if (kind == FeatureKind::RandomFourier) return num_features;
  return static_cast<int>(monomials(num_inputs(), degree).size()) + (include_constant ? 1 : 0);
}

std::vector<std::string> FeatureSpec::names() const {
  std::vector<std::string> out;
  if (kind == FeatureKind::RandomFourier) {
    for (int i = 0; i < num_features; ++i) out.push_back("rff_" + std::to_string(i));
    return out;
  }
  if (include_constant) out.push_back("1");
  for (const auto& mono : monomials(num_inputs(), degree)) {
    std::string name;
    for (std::size_t k = 0; k < mono.size(); ++k) {
      if (k > 0) name += "*";
      name += input_name(mono[k]);
    }
    out.push_back(name);
  }
  return out;
}

Eigen::MatrixXd eval_features(const FeatureSpec& spec,
                              const Eigen::Ref<const Eigen::MatrixXd>& inputs) {
  spec.validate();
  if (inputs.rows() != spec.num_inputs()) {
    throw Error(ErrorCategory::Shape, "feature inputs must have max_order + 1 rows");
  }
  if (spec.kind == FeatureKind::RandomFourier) return rff_features(rff_kernel(spec), inputs);

  const auto monos = monomials(spec.num_inputs(), spec.degree);
  const Eigen::Index offset = spec.include_constant ? 1 : 0;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(monos.size()) + offset, inputs.cols());
  if (spec.include_constant) out.row(0).setOnes();
  for (std::size_t r = 0; r < monos.size(); ++r) {
    Eigen::RowVectorXd prod = Eigen::RowVectorXd::Ones(inputs.cols());
    for (int v : monos[r]) prod.array() *= inputs.row(v).array();
    out.row(static_cast<Eigen::Index>(r) + offset) = prod;
  }
  return out;
}

PdeSystem assemble_pde_system(const FieldGrid& grid, const DerivativeStack& derivs,
                              const FeatureSpec& spec) {
  spec.validate();
  if (static_cast<int>(derivs.orders.size()) != spec.num_inputs()) {
    throw Error(ErrorCategory::Shape, "derivative stack order does not match the feature spec");
  }
  const Eigen::Index m = derivs.orders[0].rows();
  const Eigen::Index nc = derivs.orders[0].cols();
  if (m != grid.ts.size()) throw Error(ErrorCategory::Shape, "derivative stack time mismatch");
  for (const auto& d : derivs.orders) {
    if (!d.allFinite()) throw Error(ErrorCategory::Data, "non-finite spatial derivatives");
  }
  const Eigen::Index q = spec.dimension();

  // features at every (time, point) pair, one q x N' block per time
  std::vector<Eigen::MatrixXd> per_time(m);
  Eigen::MatrixXd inputs(spec.num_inputs(), nc);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (int k = 0; k < spec.num_inputs(); ++k) inputs.row(k) = derivs.orders[k].row(j);
    per_time[j] = eval_features(spec, inputs);
  }

  const Eigen::MatrixXd& u = derivs.orders[0];
  PdeSystem sys;
  sys.phi.resize(q, nc * (m - 1));
  sys.y.resize(nc * (m - 1));
  for (Eigen::Index j = 0; j + 1 < m; ++j) {
    const double dt = grid.ts(j + 1) - grid.ts(j);
    sys.phi.middleCols(j * nc, nc) = 0.5 * dt * (per_time[j] + per_time[j + 1]);
    sys.y.segment(j * nc, nc) = (u.row(j + 1) - u.row(j)).transpose();
  }
  return sys;
}

Eigen::VectorXd PdeModel::rhs(const Eigen::Ref<const Eigen::VectorXd>& u) const {
  const Eigen::MatrixXd d = profile_derivatives(u, h, features.max_order, periodic);
  return eval_features(features, d).transpose() * alpha;
}

PdeModel train_pde(const FieldGrid& grid, const FeatureSpec& spec, double lambda, int coarsen) {
  if (!(lambda > 0.0)) throw Error(ErrorCategory::Config, "lambda must be positive");
  spec.validate();
  const DerivativeStack derivs = spatial_derivatives(grid, spec.max_order, coarsen);
  const PdeSystem sys = assemble_pde_system(grid, derivs, spec);
  Eigen::MatrixXd normal = sys.phi * sys.phi.transpose();
  normal = 0.5 * (normal + normal.transpose()).eval();
  const Eigen::MatrixXd rhs = sys.phi * sys.y;
  const Eigen::MatrixXd alpha = solve_regularized(RegularizedSystem{normal, rhs, lambda});

  PdeModel model;
  model.features = spec;
  model.alpha = alpha.col(0);
  model.lambda = lambda;
  model.coarsen = coarsen;
  model.h = derivs.h;
  model.periodic = grid.periodic;
  return model;
}

Eigen::MatrixXd forecast_pde(const PdeModel& model, const Eigen::Ref<const Eigen::VectorXd>& u0,
                             double dt, int steps) {
  if (!(dt > 0.0)) throw Error(ErrorCategory::Config, "forecast dt must be positive");
  if (steps < 0) throw Error(ErrorCategory::Config, "forecast steps must be >= 0");
  Eigen::MatrixXd out(steps + 1, u0.size());
  Eigen::VectorXd u = u0;
  out.row(0) = u.transpose();
  for (int k = 1; k <= steps; ++k) {
    u += dt * model.rhs(u);
    if (!u.allFinite() || u.cwiseAbs().maxCoeff() > 1e6) {
      throw DivergenceError("pde forecast blew up at step " + std::to_string(k), k);
    }
    out.row(k) = u.transpose();
  }
  return out;
}

}  // namespace rock
