#pragma once

#include <string>

#include <json.hpp>

#include "rgnf/rg_core.hpp"

namespace rgnf {

enum class OutputFormat { json, text, latex };

OutputFormat parse_output_format(const std::string& name);

// One scalar polynomial, e.g. "z1 - 1/2*z1^2*z2".
std::string poly_to_text(const Poly& p, const std::string& var = "z");
// LaTeX, monomials rendered z_{1}^{q_1} z_{2}^{q_2}.
std::string poly_to_latex(const Poly& p, const std::string& var = "z");

nlohmann::json normal_form_json(const NormalFormResult& nf);
std::string normal_form_text(const NormalFormResult& nf);
std::string normal_form_latex(const NormalFormResult& nf);

}  // namespace rgnf
