#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cda/commands.hpp"
#include "cda/errors.hpp"

namespace py = pybind11;
using namespace cda;

namespace {

RunConfig load_config(const std::string& text, const std::string& origin) {
  return RunConfig::from_document(ConfigDocument::parse_string(text, origin));
}

}  // namespace

PYBIND11_MODULE(_cda, m) {
  m.doc() = "Coefficient reconstruction by continuous data assimilation";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SolverFailure>(m, "SolverFailure", PyExc_RuntimeError);
  py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_ArithmeticError);

  m.def("problem_names", &known_problem_names);
  m.def("command_names", &command_names);

  m.def(
      "xi_star",
      [](double c1, double c2, double M, double beta) { return xi_star({c1, c2, M, beta}); },
      py::arg("c1"), py::arg("c2"), py::arg("M"), py::arg("beta"));

  m.def(
      "simulate_ode_bound",
      [](double c1, double c2, double M, double beta, double theta0, double z_end, double dz) {
        const auto traj = simulate_ode_bound({c1, c2, M, beta}, theta0, z_end, dz);
        Eigen::VectorXd z(traj.size()), theta(traj.size());
        for (size_t i = 0; i < traj.size(); ++i) {
          z[i] = traj[i].z;
          theta[i] = traj[i].theta;
        }
        return py::make_tuple(z, theta);
      },
      py::arg("c1"), py::arg("c2"), py::arg("M"), py::arg("beta"), py::arg("theta0") = 0.0,
      py::arg("z_end") = 50.0, py::arg("dz") = 1e-3);

  m.def(
      "interpolation_reference",
      [](const std::string& problem, const std::string& target, int recon_n) {
        const ProblemSpec s = problem_by_name(problem);
        return interpolation_reference(parse_target(target) == Target::Conductivity ? s.q.field()
                                                                                    : s.f.field(),
                                       recon_n);
      },
      py::arg("problem"), py::arg("target") = "q", py::arg("recon_n") = 8);

  m.def(
      "forward",
      [](const std::string& problem, int n, int degree) {
        const FeFunction u = solve_forward(problem_by_name(problem), n, degree);
        return u.coefficients();
      },
      py::arg("problem"), py::arg("n") = 64, py::arg("degree") = 2,
      "Nodal coefficients of the forward solution, dofs numbered row by row.");

  m.def("spearman", &spearman, py::arg("x"), py::arg("y"));

  m.def(
      "run",
      [](const std::string& command, const std::string& config, std::optional<std::string> out,
         std::optional<std::uint64_t> seed, int jobs, bool check) {
        CommandOptions opt;
        if (out) opt.out_dir = *out;
        opt.seed = seed;
        opt.jobs = jobs;
        opt.check = check;
        RunConfig cfg = load_config(config, "<python>");
        CommandOutcome res;
        {
          py::gil_scoped_release release;
          res = run_command(command, std::move(cfg), opt);
        }
        py::dict d;
        d["out_dir"] = res.out_dir;
        d["files"] = res.files;
        d["check_failures"] = res.check_failures;
        return d;
      },
      py::arg("command"), py::arg("config") = "", py::arg("out") = py::none(),
      py::arg("seed") = py::none(), py::arg("jobs") = 1, py::arg("check") = false,
      "Runs a cda-recon command on config text; returns the written files.");
}
