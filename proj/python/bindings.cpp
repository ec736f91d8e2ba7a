#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "rock/dynamics.hpp"
#include "rock/error.hpp"
#include "rock/evaluation.hpp"
#include "rock/io.hpp"
#include "rock/kernels.hpp"
#include "rock/model_selection.hpp"
#include "rock/ode_learner.hpp"
#include "rock/pde_learner.hpp"
#include "rock/test_space.hpp"

namespace py = pybind11;
using namespace rock;

namespace {

using PyTrajectory = std::pair<Eigen::VectorXd, Eigen::MatrixXd>;

TrajectorySet to_set(const std::vector<PyTrajectory>& trajs) {
  std::vector<Trajectory> out;
  out.reserve(trajs.size());
  for (const auto& [ts, xs] : trajs) out.push_back({ts, xs});
  return TrajectorySet(std::move(out));
}

std::vector<PyTrajectory> from_set(const TrajectorySet& data) {
  std::vector<PyTrajectory> out;
  for (const auto& t : data.trajectories()) out.emplace_back(t.ts, t.xs);
  return out;
}

py::dict report_dict(const EvalReport& r) {
  py::dict d;
  d["err"] = r.err;
  d["one_err"] = r.one_err;
  d["diverged"] = r.diverged;
  d["model_size"] = r.model_size;
  return d;
}

Integrator integrator_from(const std::string& s) {
  if (s == "rk4") return Integrator::RK4;
  if (s == "euler") return Integrator::Euler;
  throw Error(ErrorCategory::Config, "integrator must be 'rk4' or 'euler'");
}

}  // namespace

PYBIND11_MODULE(_rock, m) {
  m.doc() = "Occupation-kernel learning of ODE and PDE vector fields";

  static py::exception<Error> rock_error(m, "RockError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(rock_error, (std::string(category_name(e.category())) + ": " + e.what()).c_str());
    }
  });

  py::class_<KernelSpec>(m, "KernelSpec")
      .def_static("gaussian", &KernelSpec::gaussian, py::arg("sigma"))
      .def_static("laplace", &KernelSpec::laplace, py::arg("gamma"))
      .def_static("matern10", &KernelSpec::matern10, py::arg("gamma"))
      .def_static("random_fourier", &KernelSpec::random_fourier, py::arg("sigma"),
                  py::arg("num_features"), py::arg("seed") = 0, py::arg("period") = py::none())
      .def_property_readonly("family", [](const KernelSpec& k) { return to_string(k.family); })
      .def_readonly("scale", &KernelSpec::scale)
      .def("__repr__", [](const KernelSpec& k) { return io::kernel_to_json(k).dump(); });

  m.def("gram", &gram, py::arg("kernel"), py::arg("X"), py::arg("Y"));
  m.def("legendre_features", &legendre_features, py::arg("ts"), py::arg("n"), py::arg("a"), py::arg("b"));
  m.def("trapezoid_weights", &trapezoid_weights, py::arg("ts"));

  m.def(
      "generate",
      [](const std::string& system, int n_traj, int samples, double dt, std::uint64_t seed,
         double noise_std, double transient) {
        SystemSpec spec = SystemSpec::with_defaults(system_from_string(system));
        spec.noise_std = noise_std;
        spec.seed = seed;
        GenerateOptions opts;
        opts.n_traj = n_traj;
        opts.samples_per_traj = samples;
        opts.dt = dt;
        opts.seed = seed;
        opts.transient = transient;
        return from_set(generate(spec, opts));
      },
      py::arg("system"), py::arg("n_traj") = 10, py::arg("samples") = 201, py::arg("dt") = 0.01,
      py::arg("seed") = 0, py::arg("noise_std") = 0.0, py::arg("transient") = 0.0,
      "List of (ts, xs) pairs with xs of shape (d, m).");

  m.def("cut_trajectories",
        [](const std::vector<PyTrajectory>& data, int length) {
          return from_set(cut_trajectories(to_set(data), length));
        },
        py::arg("data"), py::arg("length"));

  py::class_<RockModel>(m, "RockModel")
      .def_readonly("kernel", &RockModel::kernel)
      .def_readonly("lambda_", &RockModel::lambda)
      .def_readonly("p", &RockModel::p)
      .def_readonly("coeffs", &RockModel::coeffs)
      .def_property_readonly("dim", &RockModel::dim)
      .def("eval", [](const RockModel& model, const Eigen::MatrixXd& X) { return model.eval(X); },
           py::arg("X"), "Vector field at the columns of X (d x M).")
      .def("forecast",
           [](const RockModel& model, const Eigen::VectorXd& x0, const Eigen::VectorXd& t_grid,
              const std::string& method, int substeps) {
             return forecast(model, x0, t_grid, integrator_from(method), substeps);
           },
           py::arg("x0"), py::arg("t_grid"), py::arg("method") = "rk4", py::arg("substeps") = 1)
      .def("num_parameters", [](const RockModel& model) { return count_parameters(model); });

  m.def("train",
        [](const std::vector<PyTrajectory>& data, const KernelSpec& kernel, double lambda, int p) {
          return train(to_set(data), kernel, lambda, p);
        },
        py::arg("data"), py::arg("kernel"), py::arg("lam"), py::arg("p"));

  m.def("evaluate",
        [](const RockModel& model, const std::vector<PyTrajectory>& test, const std::string& method,
           int substeps) {
          return report_dict(evaluate(model, to_set(test), {integrator_from(method), substeps}));
        },
        py::arg("model"), py::arg("test"), py::arg("method") = "rk4", py::arg("substeps") = 1);

  m.def("count_parameters", py::overload_cast<long long, int, long long>(&count_parameters),
        py::arg("n_blocks"), py::arg("p"), py::arg("d"));

  m.def("save_model", [](const std::filesystem::path& path, const RockModel& model) {
    io::save_model(path, model);
  });
  m.def("load_model", &io::load_model, py::arg("path"));

  m.def(
      "two_stage_search",
      [](const std::vector<PyTrajectory>& data, const std::vector<std::string>& kernels,
         const std::vector<double>& scales, const std::vector<double>& lambdas,
         const std::vector<int>& ps, const std::vector<int>& cut_lengths, std::uint64_t seed) {
        SearchSpace space;
        space.kernels.clear();
        for (const auto& k : kernels) space.kernels.push_back(kernel_family_from_string(k));
        space.scales = scales;
        space.lambdas = lambdas;
        space.ps = ps;
        space.cut_lengths = cut_lengths;
        space.seed = seed;
        SearchResult r = two_stage_search(to_set(data), space);
        py::dict best;
        best["kernel"] = to_string(r.best.family);
        best["scale"] = r.best.scale;
        best["lambda"] = r.best.lambda;
        best["p"] = r.best.p;
        best["cut_length"] = r.best.cut_length;
        return py::make_tuple(best, std::move(r.model), report_dict(r.final_validation));
      },
      py::arg("data"), py::arg("kernels"), py::arg("scales"), py::arg("lambdas"), py::arg("ps"),
      py::arg("cut_lengths"), py::arg("seed") = 0);

  py::class_<PdeModel>(m, "PdeModel")
      .def_readonly("alpha", &PdeModel::alpha)
      .def_readonly("h", &PdeModel::h)
      .def_property_readonly("feature_names", [](const PdeModel& pm) { return pm.features.names(); })
      .def("rhs", [](const PdeModel& pm, const Eigen::VectorXd& u) { return pm.rhs(u); })
      .def("forecast",
           [](const PdeModel& pm, const Eigen::VectorXd& u0, double dt, int steps) {
             return forecast_pde(pm, u0, dt, steps);
           },
           py::arg("u0"), py::arg("dt"), py::arg("steps"));

  m.def(
      "generate_field",
      [](const std::string& system, int n_space, int n_times, double dt, std::uint64_t seed) {
        SystemSpec spec = SystemSpec::with_defaults(system_from_string(system));
        FieldOptions opts;
        opts.n_space = n_space;
        opts.n_times = n_times;
        opts.dt = dt;
        opts.seed = seed;
        const FieldGrid g = generate_field(spec, opts);
        return py::make_tuple(g.u, g.ts, g.xs);
      },
      py::arg("system"), py::arg("n_space") = 256, py::arg("n_times") = 200, py::arg("dt") = 0.05,
      py::arg("seed") = 0, "Returns (u, ts, xs) with u of shape (n_times, n_space).");

  m.def(
      "train_pde",
      [](const Eigen::MatrixXd& u, const Eigen::VectorXd& ts, const Eigen::VectorXd& xs,
         bool periodic, int max_order, int degree, double lambda, int coarsen) {
        FieldGrid g{u, ts, xs, periodic};
        FeatureSpec spec;
        spec.max_order = max_order;
        spec.degree = degree;
        return train_pde(g, spec, lambda, coarsen);
      },
      py::arg("u"), py::arg("ts"), py::arg("xs"), py::arg("periodic") = true,
      py::arg("max_order") = 2, py::arg("degree") = 1, py::arg("lam") = 1e-8, py::arg("coarsen") = 4);
}
