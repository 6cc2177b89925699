#pragma once

#include <json.hpp>

#include "sigmalab/candidates.hpp"

namespace sigmalab {

// Candidate descriptions:
//   {"type":"quadratic","A":[[..],..],"b":[..],"c":0}
//   {"type":"counterexample","kappa":0.25}
//   {"type":"counterexample","profile":[{"coeff":c,"power":p,"rate":r},..]}
//   {"type":"he_form","dim":3,"a":0.5,"b":[{"exp":[2,0],"coeff":1},..],"g":[..]}   (g optional)
nlohmann::json to_json(const CandidateSolution& u);
CandidateSolution candidate_from_json(const nlohmann::json& j);

nlohmann::json polynomial_to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j, int vars);

}  // namespace sigmalab
