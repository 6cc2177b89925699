#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sigmalab/candidate_json.hpp"
#include "sigmalab/candidates.hpp"
#include "sigmalab/error.hpp"
#include "sigmalab/field_io.hpp"
#include "sigmalab/he_reduction.hpp"
#include "sigmalab/kahler.hpp"
#include "sigmalab/legendre.hpp"
#include "sigmalab/smooth_function.hpp"
#include "sigmalab/solver.hpp"
#include "sigmalab/studies.hpp"

namespace sigmalab::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string subcommand;
  std::string candidate;
  std::string field;
  std::string grid;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool rescaled = false;
  std::string matrix;
  double kappa = 0.25;
  int dim = 3;
  std::optional<int> samples;
  std::string box;
  // curvature
  std::string points = "0,0,1,0";
  int ricci_samples = 100;
  // solve
  std::string problem;
  std::string init = "auto";
  int max_iter = 50;
  // rigidity
  double epsilon = 0.1;
  std::string box_sizes = "1,2,4";
  int nodes = 21;
  // barrier
  std::string levels = "0.1,0.5,1,2,10,100";
  int random_trials = 200;
  // legendre / classify
  std::string t_range;
  std::string x_box;
  std::string z_range;
  int legendre_nodes = 0;
  // convergence
  std::string node_list = "21,41";
};

ojson config_json(const Config& c) {
  ojson j;
  j["subcommand"] = c.subcommand;
  j["candidate"] = c.candidate;
  j["field"] = c.field;
  j["grid"] = c.grid;
  j["tol"] = c.tol ? ojson(*c.tol) : ojson(nullptr);
  j["seed"] = c.seed;
  j["out"] = c.out_dir;
  j["rescaled"] = c.rescaled;
  j["A"] = c.matrix;
  j["kappa"] = c.kappa;
  j["dim"] = c.dim;
  j["samples"] = c.samples ? ojson(*c.samples) : ojson(nullptr);
  j["box"] = c.box;
  if (c.subcommand == "curvature") {
    j["points"] = c.points;
    j["ricci_samples"] = c.ricci_samples;
  } else if (c.subcommand == "solve") {
    j["problem"] = c.problem;
    j["init"] = c.init;
    j["max_iter"] = c.max_iter;
  } else if (c.subcommand == "rigidity") {
    j["epsilon"] = c.epsilon;
    j["box_sizes"] = c.box_sizes;
    j["nodes"] = c.nodes;
  } else if (c.subcommand == "barrier") {
    j["levels"] = c.levels;
    j["random"] = c.random_trials;
  } else if (c.subcommand == "legendre" || c.subcommand == "classify") {
    j["t_range"] = c.t_range;
    j["x_box"] = c.x_box;
    j["z_range"] = c.z_range;
    j["legendre_nodes"] = c.legendre_nodes;
  } else if (c.subcommand == "convergence") {
    j["node_list"] = c.node_list;
  }
  return j;
}

class Report {
 public:
  ojson results = ojson::object();
  ojson tolerances = ojson::object();

  void check(const std::string& name, double value, double tolerance, bool pass, const std::string& relation) {
    checks_.push_back({{"name", name}, {"value", value}, {"tolerance", tolerance}, {"relation", relation}, {"pass", pass}});
    if (!pass) failed_.push_back(name);
  }
  void check_le(const std::string& name, double value, double tolerance) {
    check(name, value, tolerance, value <= tolerance, "<=");
  }
  void check_band(const std::string& name, double value, double lo, double hi) {
    checks_.push_back({{"name", name}, {"value", value}, {"tolerance", {lo, hi}}, {"relation", "in"},
                       {"pass", value >= lo && value <= hi}});
    if (!(value >= lo && value <= hi)) failed_.push_back(name);
  }
  void check_flag(const std::string& name, bool pass) {
    checks_.push_back({{"name", name}, {"value", pass}, {"relation", "true"}, {"pass", pass}});
    if (!pass) failed_.push_back(name);
  }
  bool all_pass() const { return failed_.empty(); }
  const ojson& checks() const { return checks_; }
  const std::vector<std::string>& failed() const { return failed_; }

 private:
  ojson checks_ = ojson::array();
  std::vector<std::string> failed_;
};

// ---- parsing helpers

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (s.find_first_not_of(" \t", used) != std::string::npos) throw ConfigError("bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("bad number '" + s + "'");
  }
}

int parse_int(const std::string& s) {
  const double v = parse_double(s);
  if (v != std::floor(v)) throw ConfigError("expected an integer, got '" + s + "'");
  return static_cast<int>(v);
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> v;
  for (const auto& p : split(s, ',')) v.push_back(parse_double(p));
  if (v.empty()) throw ConfigError("empty list");
  return v;
}

Interval parse_interval(const std::string& s) {
  const auto pos = s.find("..");
  if (pos == std::string::npos) throw ConfigError("expected lo..hi, got '" + s + "'");
  Interval r{parse_double(s.substr(0, pos)), parse_double(s.substr(pos + 2))};
  if (!(r.lo < r.hi)) throw ConfigError("interval '" + s + "' is empty");
  return r;
}

std::vector<Interval> parse_intervals(const std::string& s, int dim) {
  std::vector<Interval> out;
  for (const auto& p : split(s, ',')) out.push_back(parse_interval(p));
  if (out.size() == 1) out.assign(static_cast<std::size_t>(dim), out[0]);
  if (static_cast<int>(out.size()) != dim) throw ConfigError("expected 1 or " + std::to_string(dim) + " intervals");
  return out;
}

// "n,lo..hi,m" for every axis alike, or "n,lo..hi,m,lo..hi,m,..." per axis.
Grid parse_grid(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() < 3) throw ConfigError("grid spec needs n,lo..hi,m");
  const int n = parse_int(parts[0]);
  if (n < 2 || n > kMaxDim) throw ConfigError("grid dimension must be 2 or 3");
  const std::size_t pairs = (parts.size() - 1) / 2;
  if ((parts.size() - 1) % 2 != 0 || (pairs != 1 && static_cast<int>(pairs) != n)) {
    throw ConfigError("grid spec must give one lo..hi,m pair or one per axis");
  }
  std::array<Interval, kMaxDim> bounds{};
  std::array<int, kMaxDim> res{1, 1, 1};
  for (int k = 0; k < n; ++k) {
    const std::size_t at = 1 + 2 * (pairs == 1 ? 0 : static_cast<std::size_t>(k));
    bounds[static_cast<std::size_t>(k)] = parse_interval(parts[at]);
    res[static_cast<std::size_t>(k)] = parse_int(parts[at + 1]);
  }
  return Grid(n, bounds, res);
}

Eigen::MatrixXd parse_matrix(const std::string& s) {
  const auto rows = split(s, ';');
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto v = parse_doubles(rows[static_cast<std::size_t>(i)]);
    if (static_cast<Eigen::Index>(v.size()) != n) throw ConfigError("--A must be square, rows separated by ';'");
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = v[static_cast<std::size_t>(j)];
  }
  return m;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot read '" + p.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CandidateSolution he_form_example() {
  return make_he_form(3, 0.5, HarmonicPolynomial(Polynomial(2, {{{2, 0}, 1.0}, {{0, 2}, -1.0}})));
}

CandidateSolution resolve_candidate(const Config& c, const std::string& fallback) {
  const std::string spec = c.candidate.empty() ? fallback : c.candidate;
  try {
    if (!spec.empty() && (spec[0] == '{' || spec[0] == '@')) {
      const std::string text = spec[0] == '@' ? read_text(spec.substr(1)) : spec;
      return candidate_from_json(nlohmann::json::parse(text));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("candidate JSON: ") + e.what());
  }
  if (spec == "counterexample") return CandidateSolution::counterexample(c.kappa);
  if (spec == "quadratic") {
    if (c.matrix.empty()) return CandidateSolution::default_quadratic(c.dim);
    const Eigen::MatrixXd a = parse_matrix(c.matrix);
    return CandidateSolution::quadratic(a, Eigen::VectorXd::Zero(a.rows()), 0.0);
  }
  if (spec == "he_form") return he_form_example();
  throw ConfigError("unknown candidate '" + spec + "' (counterexample, quadratic, he_form, JSON or @file)");
}

ojson point_json(const Eigen::VectorXd& x) {
  ojson j = ojson::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) j.push_back(x[i]);
  return j;
}

ojson complex_point_json(const ComplexPoint& p) { return ojson::array({p.t, p.s, p.x, p.y}); }

ojson cmatrix_json(const CMatrix2& m) {
  ojson j = ojson::array();
  for (int i = 0; i < 2; ++i) {
    ojson row = ojson::array();
    for (int k = 0; k < 2; ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    j.push_back(row);
  }
  return j;
}

class Csv {
 public:
  Csv(const Config& c, const std::string& name, const std::vector<std::string>& header) {
    if (c.out_dir.empty()) return;
    out_.open(fs::path(c.out_dir) / name);
    if (!out_) throw Error(ErrorKind::Io, "cannot write " + name);
    out_ << std::setprecision(17);
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << "\n";
  }
  template <class... T>
  void row(const T&... v) {
    if (!out_.is_open()) return;
    std::size_t i = 0;
    ((out_ << (i++ ? "," : "") << v), ...);
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

LegendreOptions legendre_options(const Config& c) {
  LegendreOptions o = HeReductionOptions::default_legendre();
  if (!c.t_range.empty()) o.t_range = parse_interval(c.t_range);
  if (!c.x_box.empty()) {
    const auto b = parse_intervals(c.x_box, 2);
    o.x_box = {b[0], b[1]};
  }
  if (!c.z_range.empty()) o.z_range = parse_interval(c.z_range);
  if (c.legendre_nodes > 0) {
    if (c.legendre_nodes < 5) throw ConfigError("--legendre-nodes must be at least 5");
    o.z_nodes = c.legendre_nodes;
    o.x_nodes = {c.legendre_nodes, c.legendre_nodes};
  }
  return o;
}

std::shared_ptr<const SmoothFunction> resolve_source(const Config& c, const std::string& fallback) {
  if (!c.field.empty()) return std::make_shared<const FieldInterpolant>(read_field(c.field));
  return std::make_shared<const CandidateFunction>(resolve_candidate(c, fallback));
}

// ---- subcommands

void cmd_verify(const Config& c, Report& r) {
  const CandidateSolution u = resolve_candidate(c, "counterexample");
  const double tol = c.tol.value_or(1e-12);
  const int samples = c.samples.value_or(10000);
  const auto box = c.box.empty() ? default_residual_box(u.dim()) : parse_intervals(c.box, u.dim());
  r.tolerances["residual"] = tol;
  const ResidualSweep s = residual_sweep(u, box, samples, c.seed);
  r.results["candidate"] = to_json(u);
  r.results["samples"] = s.samples;
  r.results["max_abs_residual"] = s.max_abs_residual;
  r.results["worst_point"] = point_json(s.worst_point);
  r.check_le("max_abs_residual", s.max_abs_residual, tol);
  if (s.max_ode_identity_error) {
    r.tolerances["ode_identity"] = tol;
    r.results["max_ode_identity_error"] = *s.max_ode_identity_error;
    r.check_le("ode_identity", *s.max_ode_identity_error, tol);
  }
}

void cmd_curvature(const Config& c, Report& r) {
  const CandidateSolution u = resolve_candidate(c, "counterexample");
  const double scale = c.rescaled ? 4.0 : 1.0;
  const double ricci_tol = c.tol.value_or(1e-8);
  const double det_tol = 1e-10;
  r.tolerances["ricci_entry"] = ricci_tol;
  r.tolerances["det_deviation"] = det_tol;
  r.results["candidate"] = to_json(u);
  r.results["potential_scale"] = scale;

  Csv csv(c, "curvature_points.csv", {"t", "s", "x", "y", "det", "ricci_norm", "riemann_norm"});
  ojson pts = ojson::array();
  double worst_ricci = 0.0;
  for (const auto& p : split(c.points, ';')) {
    const auto v = parse_doubles(p);
    if (v.size() != 4) throw ConfigError("--points expects t,s,x,y groups separated by ';'");
    const ComplexPoint q{v[0], v[1], v[2], v[3]};
    const HermitianMetric g = complex_hessian(u, q, scale);
    const CMatrix2 ric = ricci(u, q, scale);
    const double rm = riemann_norm(u, q, scale);
    worst_ricci = std::max(worst_ricci, ric.cwiseAbs().maxCoeff());
    pts.push_back({{"point", complex_point_json(q)},
                   {"g", cmatrix_json(g.g)},
                   {"det", g.det()},
                   {"ricci", cmatrix_json(ric)},
                   {"ricci_norm", ric.norm()},
                   {"riemann_norm", rm}});
    csv.row(q.t, q.s, q.x, q.y, g.det(), ric.norm(), rm);
  }
  r.results["points"] = pts;

  const MongeAmpereSweep ma = monge_ampere_sweep(u, c.samples.value_or(1000), c.seed, c.rescaled);
  r.results["monge_ampere"] = {{"samples", ma.samples}, {"target", ma.target}, {"det_min", ma.det_min},
                               {"det_max", ma.det_max}, {"max_abs_deviation", ma.max_abs_deviation}};
  const RicciSweep rs = ricci_sweep(u, c.ricci_samples, c.seed + 1, scale);
  r.results["ricci_sweep"] = {{"samples", rs.samples}, {"max_abs_entry", rs.max_abs_entry},
                              {"worst_point", complex_point_json(rs.worst_point)}};
  r.check_le("det_constant", ma.max_abs_deviation, det_tol);
  r.check_le("ricci_flat", std::max(worst_ricci, rs.max_abs_entry), ricci_tol);
}

ojson solve_report_json(const SolveReport& s) {
  return {{"converged", s.converged},
          {"iterations", s.iterations},
          {"residual_norm", s.residual_norm},
          {"residual_max", s.residual_max},
          {"min_u11", s.min_u11},
          {"tol", s.tol},
          {"start", s.start},
          {"levels", s.levels},
          {"continuation_steps", s.continuation_steps},
          {"init_constant", s.init_constant},
          {"residual_history", s.residual_history},
          {"step_lengths", s.step_lengths}};
}

void load_problem_file(Config& c) {
  if (c.problem.empty()) return;
  try {
    const auto j = nlohmann::json::parse(read_text(c.problem));
    if (j.contains("grid")) c.grid = j.at("grid").get<std::string>();
    if (j.contains("candidate")) {
      c.candidate = j.at("candidate").is_string() ? j.at("candidate").get<std::string>() : j.at("candidate").dump();
    }
    if (j.contains("field")) c.field = j.at("field").get<std::string>();
    if (j.contains("tol") && !c.tol) c.tol = j.at("tol").get<double>();
    if (j.contains("max_iter")) c.max_iter = j.at("max_iter").get<int>();
    if (j.contains("init")) c.init = j.at("init").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("problem file: ") + e.what());
  }
}

int cmd_solve(const Config& c, Report& r) {
  std::optional<CandidateSolution> u;
  DirichletProblem problem{ScalarField()};
  if (!c.field.empty()) {
    problem = DirichletProblem::from_field(read_field(c.field));
  } else {
    u = resolve_candidate(c, "counterexample");
    problem = DirichletProblem::from_candidate(parse_grid(c.grid.empty() ? "3,-1..1,21" : c.grid), *u);
    r.results["candidate"] = to_json(*u);
  }
  std::optional<ScalarField> init;
  if (c.init != "auto") init = read_field(c.init);
  SolveOptions opts;
  opts.tol = c.tol;
  opts.max_iter = c.max_iter;
  r.tolerances["newton_tol"] = c.tol ? ojson(*c.tol) : ojson("1e-10*sqrt(interior nodes)");
  r.tolerances["linear_rel_residual"] = opts.linear_tol;
  const Grid& grid = problem.grid();
  ojson g;
  g["dim"] = grid.dim();
  for (int k = 0; k < grid.dim(); ++k) {
    g["bounds"].push_back({grid.bounds(k).lo, grid.bounds(k).hi});
    g["nodes"].push_back(grid.nodes(k));
  }
  r.results["grid"] = g;

  SolveReport rep;
  try {
    rep = newton_solve(problem, init, opts);
  } catch (const SolverError& e) {
    r.results["solve"] = solve_report_json(e.report());
    r.results["error"] = e.what();
    r.check_flag("converged", false);
    return kNotConverged;
  }
  r.results["solve"] = solve_report_json(rep);
  if (u) {
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      err = std::max(err, std::abs(rep.solution[i] - u->value(grid.point(grid.unflat(i)))));
    }
    r.results["max_error_vs_closed_form"] = err;
  }
  if (!c.out_dir.empty()) {
    write_field(rep.solution, fs::path(c.out_dir) / "solution.fld.json");
    r.results["solution_file"] = "solution.fld.json";
  }
  r.check_flag("converged", rep.converged);
  r.check_le("residual_norm", rep.residual_norm, rep.tol);
  return kPass;
}

int cmd_rigidity(const Config& c, Report& r) {
  const CandidateSolution base = resolve_candidate(c, "quadratic");
  RigidityOptions o;
  o.epsilon = c.epsilon;
  o.box_sizes = parse_doubles(c.box_sizes);
  o.nodes_per_axis = c.nodes;
  o.solve.tol = c.tol;
  r.results["candidate"] = to_json(base);
  const auto rows = rigidity_sweep(base, o);
  Csv csv(c, "rigidity.csv", {"L", "h", "converged", "iterations", "u11_oscillation", "max_abs_u1_axis"});
  ojson jr = ojson::array();
  bool all_converged = true;
  for (const auto& row : rows) {
    jr.push_back({{"L", row.box_size}, {"h", row.spacing}, {"converged", row.converged},
                  {"iterations", row.iterations}, {"u11_oscillation", row.u11_oscillation},
                  {"max_abs_u1_axis", row.max_abs_u1_axis}, {"failure", row.failure}});
    csv.row(row.box_size, row.spacing, row.converged ? 1 : 0, row.iterations, row.u11_oscillation,
            row.max_abs_u1_axis);
    all_converged = all_converged && row.converged;
  }
  r.results["rows"] = jr;
  if (!all_converged) {
    r.check_flag("all_converged", false);
    return kNotConverged;
  }
  bool monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    monotone = monotone && rows[i].u11_oscillation <= rows[i - 1].u11_oscillation;
  }
  r.check_flag("oscillation_non_increasing", monotone);
  if (c.epsilon == 0.0) {
    r.tolerances["unperturbed_oscillation"] = 1e-8;
    double worst = 0.0;
    for (const auto& row : rows) worst = std::max(worst, row.u11_oscillation);
    r.check_le("unperturbed_oscillation", worst, 1e-8);
  }
  return kPass;
}

ojson trial_json(const BarrierTrial& t) {
  return {{"source", t.source}, {"level", t.level}, {"value", t.value}, {"bound", t.bound},
          {"shrink", t.shrink}, {"containment_excess", t.containment_excess}, {"pass", t.pass}};
}

void cmd_barrier(const Config& c, Report& r) {
  const auto levels = parse_doubles(c.levels);
  r.tolerances["barrier_slack"] = 1e-12;
  Csv csv(c, "barrier.csv", {"source", "level", "value", "bound", "shrink", "containment_excess", "pass"});
  ojson jl = ojson::array();
  bool levels_pass = true;
  std::optional<double> equality_gap;
  std::optional<CandidateSolution> u;
  std::shared_ptr<const SmoothFunction> field_source;
  Eigen::VectorXd start;
  if (!c.field.empty()) {
    const ScalarField f = read_field(c.field);
    start = Eigen::VectorXd(f.grid().dim());
    for (int k = 0; k < f.grid().dim(); ++k) start[k] = 0.5 * (f.grid().bounds(k).lo + f.grid().bounds(k).hi);
    field_source = std::make_shared<const FieldInterpolant>(f);
  } else {
    u = resolve_candidate(c, "quadratic");
    r.results["candidate"] = to_json(*u);
    if (const auto* q = std::get_if<QuadraticSolution>(&u->variant())) {
      const Eigen::MatrixXd off = q->A - Eigen::MatrixXd(q->A.diagonal().asDiagonal());
      if (off.cwiseAbs().maxCoeff() == 0.0) equality_gap = 0.0;
    }
  }
  for (double h : levels) {
    const BarrierTrial t = u ? barrier_trial(*u, h) : barrier_trial(field_source, h, start);
    jl.push_back(trial_json(t));
    csv.row(t.source, t.level, t.value, t.bound, t.shrink, t.containment_excess, t.pass ? 1 : 0);
    levels_pass = levels_pass && t.pass;
    if (equality_gap) equality_gap = std::max(*equality_gap, std::abs(t.value * 4.0 * h * h - 1.0));
  }
  r.results["levels"] = jl;
  r.check_flag("levels_pass", levels_pass);
  if (equality_gap) {
    r.tolerances["equality_case"] = 1e-8;
    r.results["equality_gap"] = *equality_gap;
    r.check_le("equality_case", *equality_gap, 1e-8);
  }
  if (c.random_trials > 0) {
    const auto suite = random_barrier_suite(c.random_trials, c.seed);
    int passed = 0;
    double worst_ratio = std::numeric_limits<double>::infinity();
    for (const auto& t : suite) {
      passed += t.pass ? 1 : 0;
      worst_ratio = std::min(worst_ratio, t.value / t.bound);
      csv.row(t.source, t.level, t.value, t.bound, t.shrink, t.containment_excess, t.pass ? 1 : 0);
    }
    r.results["random_suite"] = {{"trials", suite.size()}, {"passed", passed}, {"min_value_over_bound", worst_ratio}};
    r.check_flag("random_suite_pass", passed == static_cast<int>(suite.size()));
  }
}

void cmd_legendre(const Config& c, Report& r) {
  const auto source = resolve_source(c, "counterexample");
  const LegendreOptions o = legendre_options(c);
  const double tol = c.tol.value_or(1e-10);
  r.tolerances["round_trip"] = tol;
  const LegendreResult res = partial_legendre(*source, o);
  const ScalarField& theta = res.theta;
  const Grid& g = theta.grid();
  const HarmonicityReport hr = harmonicity_test(theta);

  Csv csv(c, "theta.csv", g.dim() == 3 ? std::vector<std::string>{"z", "x2", "x3", "theta"}
                                       : std::vector<std::string>{"z", "x2", "theta"});
  double round_trip = 0.0;
  double slope = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const NodeIndex node = g.unflat(i);
    const Eigen::VectorXd zx = g.point(node);
    Eigen::VectorXd tx = zx;
    tx[0] = theta[i];
    round_trip = std::max(round_trip, std::abs(source->u1(tx) - zx[0]));
    if (node[0] > 0 && node[0] + 1 < g.nodes(0)) {
      const double dthdz = (theta[i + g.stride(0)] - theta[i - g.stride(0)]) / (2.0 * g.spacing(0));
      slope = std::max(slope, std::abs(dthdz * source->u11(tx) - 1.0));
    }
    if (g.dim() == 3) {
      csv.row(zx[0], zx[1], zx[2], theta[i]);
    } else {
      csv.row(zx[0], zx[1], theta[i]);
    }
  }
  r.results["z_range"] = {res.z_range.lo, res.z_range.hi};
  r.results["nodes"] = {o.z_nodes, o.x_nodes[0], o.x_nodes[1]};
  r.results["max_abs_laplacian"] = hr.max_abs_laplacian;
  r.results["worst_node"] = {hr.worst_node[0], hr.worst_node[1], hr.worst_node[2]};
  r.results["round_trip_error"] = round_trip;
  r.results["slope_identity_deviation"] = slope;
  if (!c.out_dir.empty()) {
    write_field(theta, fs::path(c.out_dir) / "theta.fld.json");
    r.results["theta_file"] = "theta.fld.json";
  }
  r.check_le("round_trip", round_trip, tol);
}

ojson poly_or_null(const std::optional<Polynomial>& p) {
  return p ? ojson::parse(polynomial_to_json(*p).dump()) : ojson(nullptr);
}

void cmd_classify(const Config& c, Report& r) {
  HeReductionOptions o;
  o.legendre = legendre_options(c);
  const bool field = !c.field.empty();
  const double tol = c.tol.value_or(field ? 1e-4 : 1e-8);
  o.tolerance = tol;
  r.tolerances["u11_oscillation"] = tol;
  r.tolerances["he_residuals"] = tol;
  HeReductionReport rep;
  if (field) {
    rep = he_reduction_report(read_field(c.field), o);
  } else {
    const CandidateSolution u = resolve_candidate(c, "counterexample");
    r.results["candidate"] = to_json(u);
    rep = he_reduction_report(u, o);
    Csv csv(c, "u11_probe.csv", {"t", "x2", "x3", "u11"});
    const Grid probe = Grid::cube(u.dim(), {-o.probe_half_width, o.probe_half_width}, 9);
    for (std::size_t i = 0; i < probe.size(); ++i) {
      const Eigen::VectorXd x = probe.point(probe.unflat(i));
      csv.row(x[0], x[1], u.dim() == 3 ? x[2] : 0.0, u.eval(x, {2, 0, 0}));
    }
  }
  r.results["verdict"] = rep.he_form ? "he_form" : "not_he_form";
  r.results["u11_min"] = rep.u11_min;
  r.results["u11_max"] = rep.u11_max;
  r.results["u11_oscillation"] = rep.u11_oscillation;
  r.results["theta_max_abs_laplacian"] = rep.theta_laplacian ? ojson(*rep.theta_laplacian) : ojson(nullptr);
  if (!rep.theta_error.empty()) r.results["theta_error"] = rep.theta_error;
  if (rep.he_form) {
    r.results["a"] = rep.a;
    r.results["b"] = poly_or_null(rep.b);
    r.results["g"] = poly_or_null(rep.g);
    r.results["fit_residual"] = rep.fit_residual;
    r.results["laplacian_b_residual"] = rep.laplacian_b_residual;
    r.results["poisson_residual"] = rep.poisson_residual;
    r.check_le("laplacian_b_residual", rep.laplacian_b_residual, tol);
    r.check_le("poisson_residual", rep.poisson_residual, tol);
  }
}

int cmd_convergence(const Config& c, Report& r) {
  const CandidateSolution u = resolve_candidate(c, "counterexample");
  const double lo = 3.5;
  const double hi = 4.5;
  r.tolerances["order2_ratio"] = {lo, hi};
  r.results["candidate"] = to_json(u);
  Csv csv(c, "convergence.csv", {"study", "spacing", "error"});

  Eigen::VectorXd x = Eigen::VectorXd::Zero(u.dim());
  x[0] = 0.3;
  x[1] = 0.4;
  if (u.dim() == 3) x[2] = -0.2;
  const FdOrderStudy fd = fd_order_study(u, x, 0.1);
  r.results["fd_hessian"] = {{"point", point_json(x)}, {"spacing", fd.spacing}, {"error_coarse", fd.error_coarse},
                             {"error_fine", fd.error_fine}, {"ratio", fd.ratio}};
  csv.row("fd_hessian", fd.spacing, fd.error_coarse);
  csv.row("fd_hessian", 0.5 * fd.spacing, fd.error_fine);
  if (fd.error_coarse > 1e-9) {
    r.check_band("fd_hessian_ratio", fd.ratio, lo, hi);
  }

  std::vector<int> nodes;
  for (double v : parse_doubles(c.node_list)) nodes.push_back(static_cast<int>(v));
  const Interval box = c.box.empty() ? Interval{-1.0, 1.0} : parse_interval(c.box);
  SolveOptions so;
  so.tol = c.tol;
  const auto rows = solver_convergence(u, box, nodes, so);
  ojson jr = ojson::array();
  std::vector<double> errs;
  bool converged = true;
  for (const auto& row : rows) {
    jr.push_back({{"nodes", row.nodes}, {"spacing", row.spacing}, {"converged", row.converged},
                  {"iterations", row.iterations}, {"start", row.start}, {"max_error", row.max_error},
                  {"min_u11", row.min_u11}, {"failure", row.failure}});
    csv.row("solver", row.spacing, row.max_error);
    converged = converged && row.converged;
    errs.push_back(row.max_error);
  }
  r.results["solver"] = jr;
  if (!converged) {
    r.check_flag("solver_converged", false);
    return kNotConverged;
  }
  const auto ratios = refinement_ratios(errs);
  r.results["solver_ratios"] = ratios;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (errs[i] > 1e-9) r.check_band("solver_ratio_" + std::to_string(i), ratios[i], lo, hi);
  }

  LegendreOptions lo_opts = legendre_options(c);
  if (c.legendre_nodes == 0) {
    lo_opts.z_nodes = 21;
    lo_opts.x_nodes = {21, 21};
  }
  if (u.dim() == 3) {
    const auto th = theta_refinement(u, lo_opts, 2);
    ojson jt = ojson::array();
    for (const auto& row : th) {
      jt.push_back({{"z_nodes", row.z_nodes}, {"spacing", row.spacing}, {"max_abs_laplacian", row.max_abs_laplacian}});
      csv.row("theta_laplacian", row.spacing, row.max_abs_laplacian);
    }
    r.results["theta"] = jt;
    if (th[0].max_abs_laplacian > 1e-9) {
      r.check_band("theta_ratio", th[0].max_abs_laplacian / th[1].max_abs_laplacian, lo, hi);
    } else {
      r.results["theta_note"] = "theta is reproduced exactly by the stencil; no ratio";
    }
  }
  return kPass;
}

int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::MaxIterExceeded:
    case ErrorKind::EllipticityLost:
    case ErrorKind::LineSearchStalled:
    case ErrorKind::LinearSolveFailure:
      return kNotConverged;
    case ErrorKind::NotPositiveDefinite:
    case ErrorKind::NotConvex:
    case ErrorKind::NoInteriorPoint:
    case ErrorKind::NotMonotone:
    case ErrorKind::ZOutOfRange:
      return kCheckFailed;
    default:
      return kConfigError;
  }
}

void add_common(CLI::App* s, Config& c) {
  s->add_option("--candidate", c.candidate, "counterexample | quadratic | he_form | JSON | @file");
  s->add_option("--field", c.field, "input field (.fld.json)");
  s->add_option("--grid", c.grid, "n,lo..hi,m (one pair for all axes or one per axis)");
  s->add_option("--tol", c.tol, "tolerance of the primary check");
  s->add_option("--seed", c.seed, "random seed");
  s->add_option("--out", c.out_dir, "directory for report, fields and CSV dumps");
  s->add_flag("--rescaled", c.rescaled, "use the rescaled potential 4u");
  s->add_option("--A", c.matrix, "quadratic matrix, rows separated by ';'");
  s->add_option("--kappa", c.kappa, "counterexample coefficient");
  s->add_option("--dim", c.dim, "dimension of the default quadratic")->check(CLI::Range(2, 3));
  s->add_option("--samples", c.samples, "number of random samples")->check(CLI::PositiveNumber);
  s->add_option("--box", c.box, "sampling box, lo..hi per axis");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"sigma2-tilde numerical laboratory", "sigmalab"};
  app.set_version_flag("--version", SIGMALAB_VERSION);
  app.require_subcommand(1);
  Config c;

  auto* verify = app.add_subcommand("verify", "residual sweep of a closed-form candidate");
  auto* curvature = app.add_subcommand("curvature", "Kahler metric, Ricci and Riemann report");
  auto* solve = app.add_subcommand("solve", "finite-difference Dirichlet solve");
  auto* rigidity = app.add_subcommand("rigidity", "perturbed-quadratic sweep over growing boxes");
  auto* barrier = app.add_subcommand("barrier", "inscribed-ellipsoid barrier check");
  auto* legendre = app.add_subcommand("legendre", "partial Legendre transform and harmonicity");
  auto* classify = app.add_subcommand("classify", "He-form classification and reduction");
  auto* convergence = app.add_subcommand("convergence", "h-refinement study");
  for (auto* s : {verify, curvature, solve, rigidity, barrier, legendre, classify, convergence}) add_common(s, c);

  curvature->add_option("--points", c.points, "t,s,x,y groups separated by ';'");
  curvature->add_option("--ricci-samples", c.ricci_samples, "random points for the Ricci sweep")
      ->check(CLI::PositiveNumber);
  solve->add_option("--problem", c.problem, "JSON problem description");
  solve->add_option("--init", c.init, "auto or an initial field file");
  solve->add_option("--max-iter", c.max_iter, "Newton iteration limit")->check(CLI::PositiveNumber);
  rigidity->add_option("--epsilon", c.epsilon, "boundary perturbation size");
  rigidity->add_option("--boxes", c.box_sizes, "box half-widths L");
  rigidity->add_option("--nodes", c.nodes, "nodes per axis (odd)");
  barrier->add_option("--levels", c.levels, "sublevel values h");
  barrier->add_option("--random", c.random_trials, "randomized triples (0 disables)")->check(CLI::NonNegativeNumber);
  for (auto* s : {legendre, classify, convergence}) {
    s->add_option("--t-range", c.t_range, "t extent of the x-lines, lo..hi");
    s->add_option("--x-box", c.x_box, "transverse box, lo..hi[,lo..hi]");
    s->add_option("--z-range", c.z_range, "z range, lo..hi");
    s->add_option("--legendre-nodes", c.legendre_nodes, "nodes per axis of the theta grid");
  }
  convergence->add_option("--nodes-list", c.node_list, "solver node counts per axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kConfigError;
  }
  c.subcommand = app.get_subcommands().front()->get_name();

  ojson report;
  report["tool"] = "sigmalab";
  report["version"] = SIGMALAB_VERSION;
  report["subcommand"] = c.subcommand;

  Report r;
  int code = kPass;
  try {
    if (c.subcommand == "solve") load_problem_file(c);
    if (!c.field.empty() && !fs::exists(field_stem(c.field).string() + ".fld.json")) {
      throw ConfigError("field file '" + c.field + "' not found");
    }
    if (!c.out_dir.empty()) {
      std::error_code ec;
      fs::create_directories(c.out_dir, ec);
      if (ec || !fs::is_directory(c.out_dir)) throw ConfigError("cannot create output directory '" + c.out_dir + "'");
    }
    if (c.subcommand == "verify") cmd_verify(c, r);
    else if (c.subcommand == "curvature") cmd_curvature(c, r);
    else if (c.subcommand == "solve") code = cmd_solve(c, r);
    else if (c.subcommand == "rigidity") code = cmd_rigidity(c, r);
    else if (c.subcommand == "barrier") cmd_barrier(c, r);
    else if (c.subcommand == "legendre") cmd_legendre(c, r);
    else if (c.subcommand == "classify") cmd_classify(c, r);
    else if (c.subcommand == "convergence") code = cmd_convergence(c, r);
  } catch (const ConfigError& e) {
    code = kConfigError;
    report["error"] = e.what();
  } catch (const Error& e) {
    code = exit_for(e.kind());
    report["error"] = e.what();
    if (code == kCheckFailed) r.check_flag("precondition", false);
  }
  if (code == kPass && !r.all_pass()) code = kCheckFailed;

  report["config"] = config_json(c);
  report["tolerances"] = r.tolerances;
  report["checks"] = r.checks();
  report["failed_checks"] = r.failed();
  report["results"] = r.results;
  report["status"] = code == kPass ? "pass"
                     : code == kCheckFailed ? "check_failed"
                     : code == kNotConverged ? "not_converged"
                                             : "config_error";
  report["exit_code"] = code;

  const std::string text = report.dump(2) + "\n";
  out << text;
  if (report.contains("error")) err << "sigmalab " << c.subcommand << ": " << report["error"].get<std::string>() << "\n";
  if (!c.out_dir.empty() && code != kConfigError) {
    std::ofstream f(fs::path(c.out_dir) / (c.subcommand + ".json"));
    f << text;
  }
  return code;
}

}  // namespace sigmalab::cli
