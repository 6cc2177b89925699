#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "sigmalab/candidate_json.hpp"
#include "sigmalab/candidates.hpp"
#include "sigmalab/error.hpp"
#include "sigmalab/he_reduction.hpp"
#include "sigmalab/kahler.hpp"
#include "sigmalab/legendre.hpp"
#include "sigmalab/solver.hpp"
#include "sigmalab/studies.hpp"

namespace py = pybind11;
using namespace sigmalab;

namespace {

SymMatrix to_sym(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 1 || m.rows() > kMaxDim) {
    throw Error(ErrorKind::InvalidArgument, "expected a square matrix of size 1..3");
  }
  return SymMatrix::from_dense(m);
}

py::array_t<double> field_array(const ScalarField& f) {
  std::vector<py::ssize_t> shape;
  for (int k = 0; k < f.grid().dim(); ++k) shape.push_back(f.grid().nodes(k));
  py::array_t<double> out(shape);
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

ComplexPoint point(const std::array<double, 4>& p) { return {p[0], p[1], p[2], p[3]}; }

py::dict solve_dict(const SolveReport& r) {
  py::dict d;
  d["converged"] = r.converged;
  d["iterations"] = r.iterations;
  d["residual_norm"] = r.residual_norm;
  d["residual_max"] = r.residual_max;
  d["min_u11"] = r.min_u11;
  d["tol"] = r.tol;
  d["start"] = r.start;
  d["levels"] = r.levels;
  d["residual_history"] = r.residual_history;
  d["solution"] = field_array(r.solution);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Numerical tools for the partial sigma_2 equation";
  m.attr("__version__") = SIGMALAB_VERSION;
  py::register_exception<Error>(m, "SigmalabError", PyExc_RuntimeError);

  m.def("sigma2_tilde", [](const Eigen::MatrixXd& h) { return sigma2_tilde(to_sym(h)); }, py::arg("hessian"));
  m.def("sigma2_linearization", [](const Eigen::MatrixXd& h) { return sigma2_linearization(to_sym(h)).dense(); },
        py::arg("hessian"));

  py::class_<CandidateSolution>(m, "Candidate")
      .def_static("counterexample", &CandidateSolution::counterexample, py::arg("kappa") = 0.25)
      .def_static("default_quadratic", &CandidateSolution::default_quadratic, py::arg("dim") = 3)
      .def_static("quadratic", &CandidateSolution::quadratic, py::arg("A"), py::arg("b"), py::arg("c") = 0.0,
                  py::arg("allow_non_solution") = false)
      .def_static(
          "radial_exp",
          [](const std::vector<std::tuple<double, int, double>>& terms) {
            std::vector<ProfileTerm> p;
            for (const auto& [c, k, r] : terms) p.push_back({c, k, r});
            return CandidateSolution::radial_exp(p);
          },
          py::arg("terms"), "u = r^2 e^t + sum c t^k e^{rate t} from (c, k, rate) triples")
      .def_static(
          "he_form",
          [](int dim, double a, const std::map<std::pair<int, int>, double>& b) {
            std::map<Exponent, double> c;
            for (const auto& [e, v] : b) c[{e.first, e.second}] = v;
            return make_he_form(dim, a, HarmonicPolynomial(Polynomial(dim - 1, c)));
          },
          py::arg("dim"), py::arg("a"), py::arg("b"), "b maps exponent pairs to coefficients")
      .def_static("from_json", [](const std::string& s) { return candidate_from_json(nlohmann::json::parse(s)); })
      .def("to_json", [](const CandidateSolution& u) { return to_json(u).dump(); })
      .def_property_readonly("dim", &CandidateSolution::dim)
      .def_property_readonly("tag", &CandidateSolution::tag)
      .def("value", [](const CandidateSolution& u, const Eigen::VectorXd& x) { return u.value(x); })
      .def("gradient", [](const CandidateSolution& u, const Eigen::VectorXd& x) { return u.gradient(x); })
      .def("hessian", [](const CandidateSolution& u, const Eigen::VectorXd& x) { return u.hessian(x).dense(); })
      .def("residual", [](const CandidateSolution& u, const Eigen::VectorXd& x) { return u.residual(x); })
      .def("eval", [](const CandidateSolution& u, const Eigen::VectorXd& x, const DerivIndex& a) { return u.eval(x, a); });

  m.def("metric", [](const CandidateSolution& u, const std::array<double, 4>& p, double scale) {
    return Eigen::Matrix2cd(complex_hessian(u, point(p), scale).g);
  }, py::arg("u"), py::arg("point"), py::arg("scale") = 1.0);
  m.def("ricci", [](const CandidateSolution& u, const std::array<double, 4>& p, double scale) {
    return Eigen::Matrix2cd(ricci(u, point(p), scale));
  }, py::arg("u"), py::arg("point"), py::arg("scale") = 1.0);
  m.def("riemann", [](const CandidateSolution& u, const std::array<double, 4>& p, double scale) {
    const CurvatureTensor r = riemann(u, point(p), scale);
    py::array_t<std::complex<double>> out({2, 2, 2, 2});
    std::copy(r.r.begin(), r.r.end(), out.mutable_data());
    return out;
  }, py::arg("u"), py::arg("point"), py::arg("scale") = 1.0);
  m.def("riemann_norm", [](const CandidateSolution& u, const std::array<double, 4>& p, double scale) {
    return riemann_norm(u, point(p), scale);
  }, py::arg("u"), py::arg("point"), py::arg("scale") = 1.0, "squared norm |Rm|^2");
  m.def("ma_residual", [](const CandidateSolution& u, const std::array<double, 4>& p, bool rescaled) {
    return ma_residual(u, point(p), rescaled);
  }, py::arg("u"), py::arg("point"), py::arg("rescaled") = false);

  m.def("residual_sweep", [](const CandidateSolution& u, int samples, std::uint64_t seed) {
    const ResidualSweep s = residual_sweep(u, default_residual_box(u.dim()), samples, seed);
    py::dict d;
    d["max_abs_residual"] = s.max_abs_residual;
    d["max_ode_identity_error"] = s.max_ode_identity_error;
    return d;
  }, py::arg("u"), py::arg("samples") = 10000, py::arg("seed") = 0);

  m.def("solve", [](const CandidateSolution& u, double lo, double hi, int nodes, std::optional<double> tol,
                    int max_iter) {
    SolveOptions o;
    o.tol = tol;
    o.max_iter = max_iter;
    const Grid g = Grid::cube(u.dim(), {lo, hi}, nodes);
    return solve_dict(newton_solve(DirichletProblem::from_candidate(g, u), std::nullopt, o));
  }, py::arg("u"), py::arg("lo") = -1.0, py::arg("hi") = 1.0, py::arg("nodes") = 21, py::arg("tol") = py::none(),
     py::arg("max_iter") = 50, "Dirichlet solve with boundary data taken from u");

  m.def("barrier_trial", [](const CandidateSolution& u, double level) {
    const BarrierTrial t = barrier_trial(u, level);
    py::dict d;
    d["value"] = t.value;
    d["bound"] = t.bound;
    d["shrink"] = t.shrink;
    d["pass"] = t.pass;
    return d;
  }, py::arg("u"), py::arg("level"));
  m.def("random_barrier_suite", [](int count, std::uint64_t seed) {
    py::list out;
    for (const BarrierTrial& t : random_barrier_suite(count, seed)) {
      py::dict d;
      d["source"] = t.source;
      d["level"] = t.level;
      d["value"] = t.value;
      d["bound"] = t.bound;
      d["pass"] = t.pass;
      out.append(d);
    }
    return out;
  }, py::arg("count") = 200, py::arg("seed") = 0);

  m.def("classify", [](const CandidateSolution& u) {
    const HeReductionReport r = he_reduction_report(u);
    py::dict d;
    d["he_form"] = r.he_form;
    d["u11_oscillation"] = r.u11_oscillation;
    d["theta_laplacian"] = r.theta_laplacian;
    d["a"] = r.a;
    return d;
  }, py::arg("u"));

  m.def("legendre", [](const CandidateSolution& u, std::pair<double, double> t_range, int nodes) {
    LegendreOptions o = HeReductionOptions::default_legendre();
    o.t_range = {t_range.first, t_range.second};
    o.z_nodes = nodes;
    o.x_nodes = {nodes, nodes};
    const LegendreResult r = partial_legendre(CandidateFunction(u), o);
    py::dict d;
    d["theta"] = field_array(r.theta);
    d["z_range"] = std::make_pair(r.z_range.lo, r.z_range.hi);
    d["max_abs_laplacian"] = harmonicity_test(r.theta).max_abs_laplacian;
    return d;
  }, py::arg("u"), py::arg("t_range") = std::make_pair(-0.5, 0.5), py::arg("nodes") = 11);

  m.def("rigidity_sweep", [](double epsilon, std::vector<double> boxes, int nodes) {
    RigidityOptions o;
    o.epsilon = epsilon;
    o.box_sizes = std::move(boxes);
    o.nodes_per_axis = nodes;
    std::vector<double> osc;
    for (const RigidityRow& r : rigidity_sweep(CandidateSolution::default_quadratic(), o)) osc.push_back(r.u11_oscillation);
    return osc;
  }, py::arg("epsilon") = 0.1, py::arg("boxes") = std::vector<double>{1, 2, 4}, py::arg("nodes") = 21);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::vector<std::string> full{"sigmalab"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : full) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "runs the command-line tool in-process; returns (exit_code, stdout, stderr)");
}
