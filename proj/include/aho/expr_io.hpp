#pragma once

#include <string>

#include <json.hpp>

#include "aho/hyp_expr.hpp"

namespace aho {

// JSON form {nu, m, terms:[{num,den,a,b,eh,em,ew}]}. Coefficients travel as
// decimal strings so the round trip is bit exact. Log-generator terms are
// rejected; they never appear in finished coefficients.
nlohmann::ordered_json expr_to_json(const HypExpr& e);
HypExpr expr_from_json(const nlohmann::ordered_json& j);

// Multi-angle sinh/cosh rendering.
std::string expr_to_latex(const HypExpr& e);

}  // namespace aho
