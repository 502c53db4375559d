#include "rgnf/config.hpp"

#include <fstream>
#include <sstream>

#include "rgnf/errors.hpp"

namespace rgnf {

using nlohmann::json;

namespace {

Rational rational_field(const json& v, const std::string& where) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return parse_rational(os.str());
  }
  throw ConfigError(where + ": expected a rational number");
}

GaussianRational complex_field(const json& v, const std::string& where) {
  if (v.is_array() && v.size() == 2)
    return GaussianRational(rational_field(v[0], where), rational_field(v[1], where));
  if (v.is_string() || v.is_number()) return GaussianRational(rational_field(v, where));
  throw ConfigError(where + ": expected [re, im]");
}

Complex float_complex(const json& v, const std::string& where) {
  return complex_field(v, where).to_complex();
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("option '") + key + "' has the wrong type");
  }
}

const std::set<std::string> kTopKeys = {"dim",   "lambda",     "A",          "mode",
                                        "order", "parameters", "perturbation", "options"};
const std::set<std::string> kOptionKeys = {
    "taylor_degree", "degree_cap", "samples",   "base_frequency", "allow_long_time_average",
    "delta",         "mollifier_extent", "eps", "grid",           "points",
    "x0",            "t_span",     "integrator", "sample_every",  "real_basis"};

JobOptions parse_options(const json& o, int dim) {
  JobOptions opt;
  if (o.is_null()) return opt;
  if (!o.is_object()) throw ConfigError("options must be an object");
  for (const auto& [k, v] : o.items())
    if (!kOptionKeys.count(k)) throw ConfigError("unknown option '" + k + "'");

  opt.taylor_degree = get_or(o, "taylor_degree", opt.taylor_degree);
  if (opt.taylor_degree < 1) throw ConfigError("taylor_degree must be >= 1");
  if (o.contains("degree_cap") && !o["degree_cap"].is_null())
    opt.degree_cap = get_or(o, "degree_cap", 0);
  opt.samples = get_or(o, "samples", opt.samples);
  opt.base_frequency = get_or(o, "base_frequency", opt.base_frequency);
  opt.allow_long_time_average = get_or(o, "allow_long_time_average", false);
  opt.delta = get_or(o, "delta", opt.delta);
  if (!(opt.delta > 0.0)) throw ConfigError("delta must be positive");
  opt.mollifier_extent = get_or(o, "mollifier_extent", opt.mollifier_extent);
  if (o.contains("eps")) {
    const auto& e = o["eps"];
    opt.eps.clear();
    if (e.is_array())
      for (const auto& v : e) opt.eps.push_back(v.get<double>());
    else if (e.is_number())
      opt.eps.push_back(e.get<double>());
    else
      throw ConfigError("eps must be a number or a list");
  }
  if (o.contains("grid")) {
    const auto& g = o["grid"];
    opt.r_min = get_or(g, "r_min", opt.r_min);
    opt.r_max = get_or(g, "r_max", opt.r_max);
    opt.r_count = get_or(g, "count", opt.r_count);
    if (opt.r_count < 1 || !(opt.r_max >= opt.r_min)) throw ConfigError("invalid grid");
  }
  if (o.contains("points")) {
    for (const auto& p : o["points"]) {
      if (!p.is_array() || static_cast<int>(p.size()) != dim)
        throw ConfigError("every point needs " + std::to_string(dim) + " entries");
      CVector x;
      for (const auto& c : p) x.push_back(float_complex(c, "points"));
      opt.points.push_back(x);
    }
  }
  if (o.contains("real_basis")) {
    const auto& b = o["real_basis"];
    if (!b.is_array() || static_cast<int>(b.size()) != dim)
      throw ConfigError("real_basis must be a " + std::to_string(dim) + " x " +
                        std::to_string(dim) + " matrix");
    std::vector<Complex> T;
    for (const auto& row : b) {
      if (!row.is_array() || static_cast<int>(row.size()) != dim)
        throw ConfigError("real_basis rows must have " + std::to_string(dim) + " entries");
      for (const auto& c : row) T.push_back(float_complex(c, "real_basis"));
    }
    opt.real_basis = T;
  }
  if (o.contains("x0")) {
    const auto& x = o["x0"];
    if (!x.is_array()) throw ConfigError("x0 must be a list");
    CVector v;
    for (const auto& c : x) v.push_back(c.is_array() ? float_complex(c, "x0") : Complex(c.get<double>()));
    opt.x0 = v;
  }
  if (o.contains("t_span")) {
    const auto& t = o["t_span"];
    if (!t.is_array() || t.size() != 2) throw ConfigError("t_span must be [t0, t1]");
    opt.t0 = t[0].get<double>();
    opt.t1 = t[1].get<double>();
    if (!(opt.t1 > opt.t0)) throw ConfigError("t_span must be increasing");
  }
  if (o.contains("integrator")) {
    const auto& in = o["integrator"];
    opt.integrator.method = get_or<std::string>(in, "method", opt.integrator.method);
    if (opt.integrator.method != "rk4" && opt.integrator.method != "dopri5")
      throw ConfigError("integrator.method must be rk4 or dopri5");
    opt.integrator.step = get_or(in, "step", opt.integrator.step);
    opt.integrator.rtol = get_or(in, "rtol", opt.integrator.rtol);
    opt.integrator.atol = get_or(in, "atol", opt.integrator.atol);
    if (!(opt.integrator.step > 0)) throw ConfigError("integrator.step must be positive");
  }
  opt.sample_every = get_or(o, "sample_every", opt.sample_every);
  if (opt.sample_every < 1) throw ConfigError("sample_every must be >= 1");
  return opt;
}

}  // namespace

expr::ParamValues JobConfig::numeric_parameters() const {
  expr::ParamValues out;
  for (const auto& [k, v] : parameters) out[k] = v.to_complex();
  return out;
}

PerturbationSeries JobConfig::taylor_series() const {
  std::vector<PolyVF> g;
  for (const auto& vf : perturbation) g.push_back(expr::taylor(vf, options.taylor_degree, parameters));
  return PerturbationSeries(A, g, std::max<int>(kDefaultMaxOrder, order));
}

JobConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!kTopKeys.count(k)) throw ConfigError("unknown key '" + k + "'");
  JobConfig c;
  if (!j.contains("dim") || !j["dim"].is_number_integer()) throw ConfigError("'dim' is required");
  c.dim = j["dim"].get<int>();
  if (c.dim < 1 || c.dim > static_cast<int>(kMaxDim))
    throw ConfigError("dim must lie in 1.." + std::to_string(kMaxDim));

  if (j.contains("lambda") == j.contains("A"))
    throw ConfigError("exactly one of 'lambda' and 'A' is required");
  if (j.contains("lambda")) {
    const auto& l = j["lambda"];
    if (!l.is_array() || static_cast<int>(l.size()) != c.dim)
      throw ConfigError("lambda must list " + std::to_string(c.dim) + " eigenvalues");
    std::vector<GaussianRational> lam;
    for (const auto& v : l) lam.push_back(complex_field(v, "lambda"));
    c.A = DiagLinearPart::exact(lam);
  } else {
    const auto& a = j["A"];
    if (!a.is_array() || static_cast<int>(a.size()) != c.dim)
      throw ConfigError("A must be a " + std::to_string(c.dim) + " x " + std::to_string(c.dim) +
                        " matrix");
    std::vector<GaussianRational> m;
    for (const auto& row : a) {
      if (!row.is_array() || static_cast<int>(row.size()) != c.dim)
        throw ConfigError("A rows must have " + std::to_string(c.dim) + " entries");
      for (const auto& v : row) m.push_back(complex_field(v, "A"));
    }
    c.A = DiagLinearPart::from_matrix(c.dim, m);
  }

  std::string mode = get_or<std::string>(j, "mode", "poly");
  if (mode == "poly")
    c.mode = NfMode::poly;
  else if (mode == "cinf")
    c.mode = NfMode::cinf;
  else
    throw ConfigError("mode must be 'poly' or 'cinf'");
  c.order = get_or(j, "order", 1);
  if (c.order < 1 || c.order > kDefaultMaxOrder)
    throw ConfigError("order must lie in 1.." + std::to_string(kDefaultMaxOrder));

  if (j.contains("parameters")) {
    if (!j["parameters"].is_object()) throw ConfigError("parameters must be an object");
    for (const auto& [k, v] : j["parameters"].items())
      c.parameters[k] = complex_field(v, "parameters." + k);
  }

  c.options = parse_options(j.contains("options") ? j["options"] : json(), c.dim);

  expr::ParseOptions po;
  po.dim = c.dim;
  for (const auto& [k, v] : c.parameters) po.parameters.insert(k);
  po.mollifier_delta = c.options.delta;
  po.mollifier_extent = c.options.mollifier_extent;
  if (!j.contains("perturbation") || !j["perturbation"].is_array())
    throw ConfigError("'perturbation' must be a list of per-order component lists");
  for (const auto& order : j["perturbation"]) {
    if (!order.is_array() || static_cast<int>(order.size()) != c.dim)
      throw ConfigError("each perturbation order needs " + std::to_string(c.dim) + " components");
    std::vector<std::string> src;
    std::string joined;
    for (const auto& e : order) {
      if (!e.is_string()) throw ConfigError("perturbation components must be strings");
      src.push_back(e.get<std::string>());
      joined += e.get<std::string>() + "\n";
    }
    auto vf = expr::parse(joined, po);
    expr::check_fixed_point(vf, c.numeric_parameters());
    c.perturbation.push_back(vf);
    c.sources.push_back(src);
  }
  return c;
}

JobConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
  return parse_config(j);
}

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      double v = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("invalid eps value '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty eps list");
  return out;
}

}  // namespace rgnf
