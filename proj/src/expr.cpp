#include "rgnf/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "rgnf/errors.hpp"

namespace rgnf::expr {

// ---------------------------------------------------------------- mollifier

namespace {

double bump_tail(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
double bump_tail_d(double u) { return u > 0.0 ? std::exp(-1.0 / u) / (u * u) : 0.0; }

// C∞ step: 0 for u <= 0, 1 for u >= 1, S(u) + S(1-u) = 1.
double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  double a = bump_tail(u), b = bump_tail(1.0 - u);
  return a / (a + b);
}

double smooth_step_d(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  double a = bump_tail(u), b = bump_tail(1.0 - u);
  double da = bump_tail_d(u), db = -bump_tail_d(1.0 - u);
  double s = a + b;
  return (da * s - a * (da + db)) / (s * s);
}

}  // namespace

MollifiedPiecewise::MollifiedPiecewise(std::vector<double> breakpoints, std::vector<double> slopes,
                                       double delta)
    : breakpoints_(std::move(breakpoints)), slopes_(std::move(slopes)), delta_(delta) {
  if (!(delta_ > 0.0)) throw DomainError("mollifier width must be positive");
  if (slopes_.size() != breakpoints_.size() + 1)
    throw DomainError("mollified piecewise: need one more slope than breakpoints");
  for (std::size_t k = 1; k < breakpoints_.size(); ++k)
    if (breakpoints_[k] - breakpoints_[k - 1] < 2.0 * delta_)
      throw DomainError("mollified piecewise: breakpoints closer than 2δ");
}

MollifiedPiecewise MollifiedPiecewise::alternating(double delta, int extent) {
  std::vector<double> bp, sl;
  auto sign = [](int n) { return n % 2 == 0 ? 1.0 : -1.0; };
  sl.push_back(sign(extent));
  for (int k = extent; k >= 1; --k) {
    bp.push_back(-k);
    sl.push_back(k > 1 ? sign(k - 1) : 1.0);
  }
  for (int k = 1; k <= extent; ++k) {
    bp.push_back(k);
    sl.push_back(sign(k));
  }
  return MollifiedPiecewise(std::move(bp), std::move(sl), delta);
}

double MollifiedPiecewise::raw(double x) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return slopes_[it - breakpoints_.begin()] * x;
}

double MollifiedPiecewise::value(double x) const {
  auto lo = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x - delta_);
  std::size_t k = lo - breakpoints_.begin();
  double s = slopes_[k];
  if (k < breakpoints_.size() && breakpoints_[k] - delta_ < x) {
    double u = (x - breakpoints_[k] + delta_) / (2.0 * delta_);
    s += (slopes_[k + 1] - slopes_[k]) * smooth_step(u);
  }
  return s * x;
}

double MollifiedPiecewise::derivative(double x) const {
  auto lo = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x - delta_);
  std::size_t k = lo - breakpoints_.begin();
  double s = slopes_[k], ds = 0.0;
  if (k < breakpoints_.size() && breakpoints_[k] - delta_ < x) {
    double u = (x - breakpoints_[k] + delta_) / (2.0 * delta_);
    double jump = slopes_[k + 1] - slopes_[k];
    s += jump * smooth_step(u);
    ds = jump * smooth_step_d(u) / (2.0 * delta_);
  }
  return s + ds * x;
}

// ---------------------------------------------------------------- builders

NodePtr variable(int index) {
  auto n = std::make_shared<Node>();
  n->op = Op::variable;
  n->index = index;
  return n;
}

NodePtr parameter(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::parameter;
  n->name = std::move(name);
  return n;
}

NodePtr literal(GaussianRational value) {
  auto n = std::make_shared<Node>();
  n->op = Op::literal;
  n->value = std::move(value);
  return n;
}

NodePtr binary(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args = {std::move(a), std::move(b)};
  return n;
}

NodePtr unary(Op op, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args = {std::move(a)};
  return n;
}

NodePtr power(NodePtr base, int exponent) {
  auto n = std::make_shared<Node>();
  n->op = Op::pow;
  n->exponent = exponent;
  n->args = {std::move(base)};
  return n;
}

NodePtr mollified(NodePtr arg, std::shared_ptr<const MollifiedPiecewise> pw) {
  auto n = std::make_shared<Node>();
  n->op = Op::mollipw;
  n->args = {std::move(arg)};
  n->piecewise = std::move(pw);
  return n;
}

// ---------------------------------------------------------------- parser

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  Lexer(const std::string& src, int line) : src_(src), line_(line) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      int col = static_cast<int>(pos_) + 1;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::end, "", line_, col});
        return out;
      }
      char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        out.push_back({Tok::number, number(), line_, col});
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          ++pos_;
        out.push_back({Tok::ident, src_.substr(start, pos_ - start), line_, col});
      } else {
        Tok k;
        switch (c) {
          case '+': k = Tok::plus; break;
          case '-': k = Tok::minus; break;
          case '*': k = Tok::star; break;
          case '/': k = Tok::slash; break;
          case '^': k = Tok::caret; break;
          case '(': k = Tok::lparen; break;
          case ')': k = Tok::rparen; break;
          default:
            throw SyntaxError(std::string("unexpected character '") + c + "'", line_, col);
        }
        ++pos_;
        out.push_back({k, std::string(1, c), line_, col});
      }
    }
  }

 private:
  std::string number() {
    std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    } else if (pos_ + 1 < src_.size() && src_[pos_] == '/' &&
               std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      // p/q written without spaces is one rational literal.
      ++pos_;
      digits();
    }
    return src_.substr(start, pos_ - start);
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, const ParseOptions& opt) : toks_(std::move(toks)), opt_(opt) {}

  NodePtr parse_all() {
    NodePtr e = expr();
    if (peek().kind != Tok::end) fail("unexpected '" + peek().text + "'");
    return e;
  }

  int max_variable() const { return max_var_; }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    throw SyntaxError(t.kind == Tok::end ? what + " (unexpected end of expression)" : what, t.line,
                      t.column);
  }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    ++pos_;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      Op op = take().kind == Tok::plus ? Op::add : Op::sub;
      lhs = binary(op, lhs, term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary_expr();
    while (peek().kind == Tok::star || peek().kind == Tok::slash) {
      Op op = take().kind == Tok::star ? Op::mul : Op::div;
      lhs = binary(op, lhs, unary_expr());
    }
    return lhs;
  }

  NodePtr unary_expr() {
    if (peek().kind == Tok::minus) {
      ++pos_;
      return unary(Op::neg, unary_expr());
    }
    return factor();
  }

  NodePtr factor() {
    NodePtr b = base();
    if (peek().kind == Tok::caret) {
      ++pos_;
      const Token& t = peek();
      if (t.kind != Tok::number || t.text.find_first_not_of("0123456789") != std::string::npos)
        fail("expected a non-negative integer exponent");
      ++pos_;
      b = power(b, std::stoi(t.text));
    }
    return b;
  }

  NodePtr base() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::number: {
        ++pos_;
        try {
          return literal(GaussianRational(parse_rational(t.text)));
        } catch (const ConfigError&) {
          throw SyntaxError("malformed number '" + t.text + "'", t.line, t.column);
        }
      }
      case Tok::lparen: {
        ++pos_;
        NodePtr e = expr();
        expect(Tok::rparen, "')'");
        return e;
      }
      case Tok::ident:
        return identifier();
      default:
        fail(t.kind == Tok::end ? "expected an operand" : "unexpected '" + t.text + "'");
    }
  }

  NodePtr identifier() {
    const Token t = take();
    const std::string& s = t.text;
    if (s == "sin" || s == "cos" || s == "exp" || s == "mollipw") {
      expect(Tok::lparen, "'(' after function name");
      NodePtr arg = expr();
      expect(Tok::rparen, "')'");
      if (s == "sin") return unary(Op::sin, arg);
      if (s == "cos") return unary(Op::cos, arg);
      if (s == "exp") return unary(Op::exp, arg);
      auto pw = std::make_shared<const MollifiedPiecewise>(
          MollifiedPiecewise::alternating(opt_.mollifier_delta, opt_.mollifier_extent));
      return mollified(arg, pw);
    }
    if (s == "I") return literal(GaussianRational::i());
    if (s.size() > 1 && s[0] == 'x' && s.find_first_not_of("0123456789", 1) == std::string::npos) {
      int idx = std::stoi(s.substr(1));
      if (idx < 1) throw SyntaxError("variables are numbered from x1", t.line, t.column);
      if (opt_.dim > 0 && idx > opt_.dim)
        throw DimensionError("variable " + s + " exceeds the declared dimension " +
                             std::to_string(opt_.dim) + " (line " + std::to_string(t.line) + ")");
      max_var_ = std::max(max_var_, idx);
      return variable(idx - 1);
    }
    if (opt_.parameters.count(s)) return parameter(s);
    throw SyntaxError("unknown identifier '" + s + "'", t.line, t.column);
  }

  std::vector<Token> toks_;
  const ParseOptions& opt_;
  std::size_t pos_ = 0;
  int max_var_ = 0;
};

std::vector<std::pair<std::string, int>> split_components(const std::string& src) {
  std::vector<std::pair<std::string, int>> out;
  int line = 1;
  std::string current;
  auto flush = [&] {
    bool blank = std::all_of(current.begin(), current.end(),
                             [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (!blank) out.emplace_back(current, line);
    current.clear();
  };
  for (char c : src) {
    if (c == '\n') {
      flush();
      ++line;
    } else if (c == ';') {
      flush();
    } else {
      current += c;
    }
  }
  flush();
  return out;
}

}  // namespace

NodePtr parse_expression(const std::string& src, const ParseOptions& options) {
  Lexer lex(src, 1);
  Parser p(lex.run(), options);
  return p.parse_all();
}

VectorFieldDef parse(const std::string& src, const ParseOptions& options) {
  VectorFieldDef vf;
  int max_var = 0;
  for (const auto& [text, line] : split_components(src)) {
    Lexer lex(text, line);
    Parser p(lex.run(), options);
    vf.components.push_back(p.parse_all());
    max_var = std::max(max_var, p.max_variable());
  }
  vf.dim = options.dim > 0 ? options.dim : static_cast<int>(vf.components.size());
  if (vf.components.empty()) throw SyntaxError("no components given", 1, 1);
  if (static_cast<int>(vf.components.size()) != vf.dim)
    throw DimensionError("expected " + std::to_string(vf.dim) + " components, got " +
                         std::to_string(vf.components.size()));
  if (max_var > vf.dim)
    throw DimensionError("variable x" + std::to_string(max_var) + " exceeds dimension " +
                         std::to_string(vf.dim));
  return vf;
}

VectorFieldDef from_polyvf(const PolyVF& f) {
  VectorFieldDef vf;
  vf.dim = f.dim();
  for (int i = 0; i < f.dim(); ++i) {
    NodePtr sum;
    for (const auto& [q, c] : f.component(i).terms()) {
      NodePtr term = literal(c);
      for (int v = 0; v < q.dim(); ++v)
        if (q[v]) term = binary(Op::mul, term, q[v] == 1 ? variable(v) : power(variable(v), q[v]));
      sum = sum ? binary(Op::add, sum, term) : term;
    }
    vf.components.push_back(sum ? sum : literal(GaussianRational()));
  }
  vf.fixed_point_at_origin = f.is_constant_free();
  return vf;
}

// ---------------------------------------------------------------- evaluation

namespace {

struct Dual {
  Complex v;
  Complex d;
};

Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
Dual operator-(Dual a) { return {-a.v, -a.d}; }
Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
Dual operator/(Dual a, Dual b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }

template <class T>
T constant_of(Complex c) {
  if constexpr (std::is_same_v<T, Dual>)
    return Dual{c, Complex{}};
  else
    return c;
}

Complex value_of(const Complex& c) { return c; }
Complex value_of(const Dual& d) { return d.v; }

Complex fsin(Complex z) { return std::sin(z); }
Complex fcos(Complex z) { return std::cos(z); }
Complex fexp(Complex z) { return std::exp(z); }
Dual fsin(Dual a) { return {std::sin(a.v), std::cos(a.v) * a.d}; }
Dual fcos(Dual a) { return {std::cos(a.v), -std::sin(a.v) * a.d}; }
Dual fexp(Dual a) {
  Complex e = std::exp(a.v);
  return {e, e * a.d};
}

template <class T>
T ipow(T b, int e) {
  T r = constant_of<T>(Complex(1.0, 0.0));
  for (int k = 0; k < e; ++k) r = r * b;
  return r;
}

double real_argument(Complex z) {
  if (std::abs(z.imag()) > 1e-9 * (1.0 + std::abs(z.real())))
    throw DomainError("mollipw is defined on real arguments only");
  return z.real();
}

template <class T>
T eval_node(const Node& n, std::span<const T> x, const ParamValues& params) {
  switch (n.op) {
    case Op::variable:
      if (n.index >= static_cast<int>(x.size())) throw DimensionMismatch("point dimension too small");
      return x[n.index];
    case Op::parameter: {
      auto it = params.find(n.name);
      if (it == params.end()) throw DomainError("no value for parameter '" + n.name + "'");
      return constant_of<T>(it->second);
    }
    case Op::literal:
      return constant_of<T>(n.value.to_complex());
    case Op::add:
      return eval_node<T>(*n.args[0], x, params) + eval_node<T>(*n.args[1], x, params);
    case Op::sub:
      return eval_node<T>(*n.args[0], x, params) - eval_node<T>(*n.args[1], x, params);
    case Op::mul:
      return eval_node<T>(*n.args[0], x, params) * eval_node<T>(*n.args[1], x, params);
    case Op::div: {
      T den = eval_node<T>(*n.args[1], x, params);
      if (value_of(den) == Complex{}) throw DomainError("division by zero");
      return eval_node<T>(*n.args[0], x, params) / den;
    }
    case Op::neg:
      return -eval_node<T>(*n.args[0], x, params);
    case Op::pow:
      return ipow(eval_node<T>(*n.args[0], x, params), n.exponent);
    case Op::sin:
      return fsin(eval_node<T>(*n.args[0], x, params));
    case Op::cos:
      return fcos(eval_node<T>(*n.args[0], x, params));
    case Op::exp:
      return fexp(eval_node<T>(*n.args[0], x, params));
    case Op::mollipw: {
      T a = eval_node<T>(*n.args[0], x, params);
      double r = real_argument(value_of(a));
      if constexpr (std::is_same_v<T, Dual>)
        return Dual{n.piecewise->value(r), n.piecewise->derivative(r) * a.d};
      else
        return Complex(n.piecewise->value(r), 0.0);
    }
  }
  throw DomainError("unknown expression node");
}

void require_point(const VectorFieldDef& vf, std::size_t size) {
  if (static_cast<int>(size) != vf.dim)
    throw DimensionMismatch("point has dimension " + std::to_string(size) + ", field has " +
                            std::to_string(vf.dim));
}

}  // namespace

Complex eval(const NodePtr& e, std::span<const Complex> x, const ParamValues& params) {
  return eval_node<Complex>(*e, x, params);
}

CVector eval(const VectorFieldDef& vf, std::span<const Complex> x, const ParamValues& params) {
  require_point(vf, x.size());
  CVector out;
  out.reserve(vf.components.size());
  for (const auto& c : vf.components) out.push_back(eval_node<Complex>(*c, x, params));
  return out;
}

CVector forward_derivative(const VectorFieldDef& vf, std::span<const Complex> x,
                           std::span<const Complex> direction, const ParamValues& params) {
  require_point(vf, x.size());
  require_point(vf, direction.size());
  std::vector<Dual> xd(x.size());
  for (std::size_t v = 0; v < x.size(); ++v) xd[v] = {x[v], direction[v]};
  CVector out;
  for (const auto& c : vf.components)
    out.push_back(eval_node<Dual>(*c, std::span<const Dual>(xd), params).d);
  return out;
}

void check_fixed_point(const VectorFieldDef& vf, const ParamValues& params) {
  CVector origin(vf.dim);
  CVector v = eval(vf, origin, params);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > 1e-14)
      throw DomainError("component " + std::to_string(i + 1) + " does not vanish at the origin");
}

// ---------------------------------------------------------------- Taylor

namespace {

class TaylorBuilder {
 public:
  TaylorBuilder(int dim, int degree, const ExactParams& params)
      : dim_(dim), degree_(degree), params_(params) {}

  Poly build(const Node& n) {
    switch (n.op) {
      case Op::variable:
        if (n.index >= dim_) throw DimensionMismatch("variable outside the field dimension");
        return Poly::variable(dim_, n.index).truncated(degree_);
      case Op::parameter: {
        auto it = params_.find(n.name);
        if (it == params_.end())
          throw DomainError("Taylor expansion needs an exact value for parameter '" + n.name + "'");
        return Poly::constant(dim_, it->second);
      }
      case Op::literal:
        return Poly::constant(dim_, n.value);
      case Op::add:
        return build(*n.args[0]) + build(*n.args[1]);
      case Op::sub:
        return build(*n.args[0]) - build(*n.args[1]);
      case Op::neg:
        return -build(*n.args[0]);
      case Op::mul:
        return build(*n.args[0]).multiplied(build(*n.args[1]), degree_);
      case Op::div:
        return build(*n.args[0]).multiplied(reciprocal(build(*n.args[1])), degree_);
      case Op::pow: {
        Poly b = build(*n.args[0]);
        Poly r = Poly::constant(dim_, GaussianRational(1));
        for (int k = 0; k < n.exponent; ++k) r = r.multiplied(b, degree_);
        return r;
      }
      case Op::sin:
        return series(build(*n.args[0]), "sin", [](int k) -> std::optional<GaussianRational> {
          if (k % 2 == 0) return std::nullopt;
          return GaussianRational(Rational(((k - 1) / 2) % 2 == 0 ? 1 : -1));
        });
      case Op::cos:
        return series(build(*n.args[0]), "cos", [](int k) -> std::optional<GaussianRational> {
          if (k % 2 == 1) return std::nullopt;
          return GaussianRational(Rational((k / 2) % 2 == 0 ? 1 : -1));
        });
      case Op::exp:
        return series(build(*n.args[0]), "exp",
                      [](int) -> std::optional<GaussianRational> { return GaussianRational(1); });
      case Op::mollipw:
        throw NotAnalyticAtOrigin(
            "mollipw has no convergent Taylor expansion with finitely many rational terms; use the "
            "smooth averaging engine");
    }
    throw DomainError("unknown expression node");
  }

 private:
  // Σ_k sign(k) u^k / k! for u(0) = 0, where sign(k) = nullopt skips k.
  template <class Sign>
  Poly series(const Poly& u, const char* name, Sign sign) {
    if (!u.coefficient(MultiIndex(dim_)).is_zero())
      throw DomainError(std::string(name) +
                        " of an argument with nonzero value at the origin has irrational Taylor "
                        "coefficients");
    Poly out(dim_);
    Poly upow = Poly::constant(dim_, GaussianRational(1));
    mpz_class fact = 1;
    for (int k = 0; k <= degree_; ++k) {
      if (k > 0) {
        upow = upow.multiplied(u, degree_);
        fact *= k;
      }
      if (upow.is_zero()) break;
      if (auto s = sign(k)) out += upow.scaled(*s * GaussianRational(Rational(1, fact)));
    }
    return out;
  }

  Poly reciprocal(const Poly& b) {
    GaussianRational b0 = b.coefficient(MultiIndex(dim_));
    if (b0.is_zero()) throw NotAnalyticAtOrigin("division by a series vanishing at the origin");
    GaussianRational inv0 = b0.inverse();
    Poly rest = b - Poly::constant(dim_, b0);
    Poly v = rest.scaled(-inv0);  // 1/b = inv0 Σ v^k
    Poly out(dim_);
    Poly vpow = Poly::constant(dim_, GaussianRational(1));
    for (int k = 0; k <= degree_; ++k) {
      if (k > 0) vpow = vpow.multiplied(v, degree_);
      if (vpow.is_zero()) break;
      out += vpow;
    }
    return out.scaled(inv0);
  }

  int dim_;
  int degree_;
  const ExactParams& params_;
};

}  // namespace

PolyVF taylor(const VectorFieldDef& vf, int degree, const ExactParams& params) {
  if (degree < 0) throw DomainError("taylor: negative degree");
  TaylorBuilder b(vf.dim, degree, params);
  std::vector<Poly> comps;
  for (const auto& c : vf.components) comps.push_back(b.build(*c));
  return PolyVF(std::move(comps));
}

}  // namespace rgnf::expr
