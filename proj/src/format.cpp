#include "rgnf/format.hpp"

#include <sstream>

#include "rgnf/errors.hpp"

namespace rgnf {

namespace {

std::string monomial_text(const MultiIndex& q, const std::string& var) {
  std::string out;
  for (int v = 0; v < q.dim(); ++v) {
    if (!q[v]) continue;
    if (!out.empty()) out += "*";
    out += var + std::to_string(v + 1);
    if (q[v] > 1) out += "^" + std::to_string(q[v]);
  }
  return out;
}

std::string monomial_latex(const MultiIndex& q, const std::string& var) {
  std::string out;
  for (int v = 0; v < q.dim(); ++v) {
    if (!q[v]) continue;
    if (!out.empty()) out += " ";
    out += var + "_{" + std::to_string(v + 1) + "}";
    if (q[v] > 1) out += "^{" + std::to_string(q[v]) + "}";
  }
  return out;
}

std::string eps_prefix_text(int k) { return k == 1 ? "eps" : "eps^" + std::to_string(k); }
std::string eps_prefix_latex(int k) {
  return k == 1 ? "\\varepsilon" : "\\varepsilon^{" + std::to_string(k) + "}";
}

std::string linear_text(const DiagLinearPart& A, int comp) {
  Poly p = Poly::monomial(MultiIndex::unit(A.dim(), comp),
                          A.is_exact() ? A.exact_eigenvalues()[comp] : GaussianRational(1));
  return poly_to_text(p);
}

}  // namespace

OutputFormat parse_output_format(const std::string& name) {
  if (name == "json") return OutputFormat::json;
  if (name == "text") return OutputFormat::text;
  if (name == "latex") return OutputFormat::latex;
  throw ConfigError("unknown output format '" + name + "' (json|text|latex)");
}

std::string poly_to_text(const Poly& p, const std::string& var) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [q, c] : p.terms()) {
    std::string mono = monomial_text(q, var);
    std::string coeff = c.to_string();
    bool negative = c.is_real() ? sgn(c.re()) < 0 : (c.is_imaginary() && sgn(c.im()) < 0);
    if (negative) coeff = (-c).to_string();
    if (out.empty())
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    if (mono.empty())
      out += coeff;
    else if (coeff == "1")
      out += mono;
    else
      out += coeff + "*" + mono;
  }
  return out;
}

std::string poly_to_latex(const Poly& p, const std::string& var) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [q, c] : p.terms()) {
    std::string mono = monomial_latex(q, var);
    bool negative = c.is_real() ? sgn(c.re()) < 0 : (c.is_imaginary() && sgn(c.im()) < 0);
    GaussianRational a = negative ? -c : c;
    std::string coeff = a.to_latex();
    if (out.empty())
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    if (mono.empty())
      out += coeff;
    else if (a == GaussianRational(1))
      out += mono;
    else
      out += coeff + " " + mono;
  }
  return out;
}

nlohmann::json normal_form_json(const NormalFormResult& nf) {
  nlohmann::json lambda = nlohmann::json::array();
  for (const auto& l : nf.A.exact_eigenvalues())
    lambda.push_back({rational_to_string(l.re()), rational_to_string(l.im())});
  nlohmann::json nform = nlohmann::json::array(), transform = nlohmann::json::array(),
                 rk = nlohmann::json::array();
  for (int k = 1; k <= nf.order; ++k) {
    nform.push_back({{"order", k}, {"field", to_json(nf.PK_Rk[k - 1])}});
    transform.push_back({{"order", k}, {"field", to_json(nf.QPI_Rk[k - 1])}});
    rk.push_back({{"order", k}, {"field", to_json(nf.Rk[k - 1])}});
  }
  nlohmann::json out = {{"order", nf.order},
                        {"lambda", lambda},
                        {"normal_form", nform},
                        {"near_identity", transform},
                        {"R", rk}};
  if (nf.degree_cap) out["degree_cap"] = *nf.degree_cap;
  return out;
}

std::string normal_form_text(const NormalFormResult& nf) {
  std::ostringstream os;
  os << "normal form (order " << nf.order;
  if (nf.degree_cap) os << ", degrees <= " << *nf.degree_cap;
  os << "):\n";
  for (int i = 0; i < nf.A.dim(); ++i) {
    os << "  dz" << i + 1 << "/dt = " << linear_text(nf.A, i);
    for (int k = 1; k <= nf.order; ++k) {
      const Poly& p = nf.PK_Rk[k - 1].component(i);
      if (!p.is_zero()) os << "\n      + " << eps_prefix_text(k) << " * (" << poly_to_text(p) << ")";
    }
    os << "\n";
  }
  os << "near-identity transformation:\n";
  for (int i = 0; i < nf.A.dim(); ++i) {
    os << "  x" << i + 1 << " = z" << i + 1;
    for (int k = 1; k <= nf.order; ++k) {
      const Poly& p = nf.QPI_Rk[k - 1].component(i);
      if (!p.is_zero()) os << "\n      + " << eps_prefix_text(k) << " * (" << poly_to_text(p) << ")";
    }
    os << "\n";
  }
  return os.str();
}

std::string normal_form_latex(const NormalFormResult& nf) {
  std::ostringstream os;
  os << "\\begin{align*}\n";
  for (int i = 0; i < nf.A.dim(); ++i) {
    Poly lin = Poly::monomial(MultiIndex::unit(nf.A.dim(), i), nf.A.exact_eigenvalues()[i]);
    os << "\\dot{z}_{" << i + 1 << "} &= " << poly_to_latex(lin);
    for (int k = 1; k <= nf.order; ++k) {
      const Poly& p = nf.PK_Rk[k - 1].component(i);
      if (!p.is_zero()) os << " + " << eps_prefix_latex(k) << "\\left(" << poly_to_latex(p) << "\\right)";
    }
    os << " \\\\\n";
  }
  for (int i = 0; i < nf.A.dim(); ++i) {
    os << "x_{" << i + 1 << "} &= z_{" << i + 1 << "}";
    for (int k = 1; k <= nf.order; ++k) {
      const Poly& p = nf.QPI_Rk[k - 1].component(i);
      if (!p.is_zero()) os << " + " << eps_prefix_latex(k) << "\\left(" << poly_to_latex(p) << "\\right)";
    }
    os << (i + 1 < nf.A.dim() ? " \\\\\n" : "\n");
  }
  os << "\\end{align*}\n";
  return os.str();
}

}  // namespace rgnf
