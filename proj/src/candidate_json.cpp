#include "sigmalab/candidate_json.hpp"

#include "sigmalab/error.hpp"

namespace sigmalab {

using nlohmann::json;

json polynomial_to_json(const Polynomial& p) {
  json terms = json::array();
  for (const auto& [e, c] : p.coeffs()) {
    json exp = p.vars() == 1 ? json::array({e[0]}) : json::array({e[0], e[1]});
    terms.push_back({{"exp", exp}, {"coeff", c}});
  }
  return terms;
}

Polynomial polynomial_from_json(const json& j, int vars) {
  Polynomial p(vars);
  for (const auto& term : j) {
    const auto& e = term.at("exp");
    if (e.size() != static_cast<std::size_t>(vars)) {
      throw Error(ErrorKind::InvalidArgument, "polynomial exponent length must equal n - 1");
    }
    Exponent ex{e[0].get<int>(), vars == 2 ? e[1].get<int>() : 0};
    p.add_term(ex, term.at("coeff").get<double>());
  }
  return p;
}

json to_json(const CandidateSolution& u) {
  return std::visit(
      [&](const auto& s) -> json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, QuadraticSolution>) {
          json A = json::array();
          for (Eigen::Index i = 0; i < s.A.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index k = 0; k < s.A.cols(); ++k) row.push_back(s.A(i, k));
            A.push_back(row);
          }
          json b = json::array();
          for (Eigen::Index i = 0; i < s.b.size(); ++i) b.push_back(s.b[i]);
          return {{"type", "quadratic"}, {"A", A}, {"b", b}, {"c", s.c}};
        } else if constexpr (std::is_same_v<S, RadialExpSolution>) {
          json prof = json::array();
          for (const auto& t : s.profile) prof.push_back({{"coeff", t.coeff}, {"power", t.power}, {"rate", t.rate}});
          return {{"type", "counterexample"}, {"profile", prof}};
        } else {
          return {{"type", "he_form"},
                  {"dim", s.dim},
                  {"a", s.a},
                  {"b", polynomial_to_json(s.b.poly())},
                  {"g", polynomial_to_json(s.g)}};
        }
      },
      u.variant());
}

CandidateSolution candidate_from_json(const json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "quadratic") {
      const auto& rows = j.at("A");
      const auto n = static_cast<Eigen::Index>(rows.size());
      Eigen::MatrixXd A(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (rows[i].size() != static_cast<std::size_t>(n)) throw Error(ErrorKind::InvalidArgument, "A must be square");
        for (Eigen::Index k = 0; k < n; ++k) A(i, k) = rows[i][k].get<double>();
      }
      Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
      if (j.contains("b")) {
        if (j["b"].size() != static_cast<std::size_t>(n)) throw Error(ErrorKind::InvalidArgument, "b length");
        for (Eigen::Index i = 0; i < n; ++i) b[i] = j["b"][i].get<double>();
      }
      return CandidateSolution::quadratic(A, b, j.value("c", 0.0), j.value("allow_non_solution", false));
    }
    if (type == "counterexample") {
      if (j.contains("profile")) {
        std::vector<ProfileTerm> profile;
        for (const auto& t : j["profile"]) {
          profile.push_back({t.at("coeff").get<double>(), t.value("power", 0), t.value("rate", 0.0)});
        }
        return CandidateSolution::radial_exp(std::move(profile));
      }
      return CandidateSolution::counterexample(j.value("kappa", 0.25));
    }
    if (type == "he_form") {
      const int dim = j.value("dim", 3);
      if (dim < 2 || dim > kMaxDim) throw Error(ErrorKind::InvalidArgument, "He form needs n = 2 or 3");
      const double a = j.value("a", 0.5);
      HarmonicPolynomial b(polynomial_from_json(j.value("b", json::array()), dim - 1));
      if (j.contains("g")) return CandidateSolution::he_form(dim, a, b, polynomial_from_json(j["g"], dim - 1));
      return make_he_form(dim, a, b);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown candidate type '" + type + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed candidate description: ") + e.what());
  }
}

}  // namespace sigmalab
