#include "borelsum/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <unordered_map>

namespace borelsum {

Expr::Ptr make_node(Expr::Kind k, cx v, int e, Expr::Ptr a, Expr::Ptr b) {
  auto n = std::shared_ptr<Expr>(new Expr(k));
  n->value_ = v;
  n->expo_ = e;
  n->a_ = std::move(a);
  n->b_ = std::move(b);
  return n;
}

Expr::Ptr Expr::constant(cx v) { return make_node(Kind::kConst, v, 0, nullptr, nullptr); }
Expr::Ptr Expr::var() { return make_node(Kind::kVar, {}, 0, nullptr, nullptr); }

Expr::Ptr Expr::add(Ptr a, Ptr b) {
  if (a->is_const(cx(0.0))) return b;
  if (b->is_const(cx(0.0))) return a;
  if (a->kind() == Kind::kConst && b->kind() == Kind::kConst)
    return constant(a->value() + b->value());
  return make_node(Kind::kAdd, {}, 0, std::move(a), std::move(b));
}

Expr::Ptr Expr::sub(Ptr a, Ptr b) {
  if (b->is_const(cx(0.0))) return a;
  if (a->kind() == Kind::kConst && b->kind() == Kind::kConst)
    return constant(a->value() - b->value());
  if (a->is_const(cx(0.0))) return neg(std::move(b));
  return make_node(Kind::kSub, {}, 0, std::move(a), std::move(b));
}

Expr::Ptr Expr::mul(Ptr a, Ptr b) {
  if (a->is_const(cx(0.0)) || b->is_const(cx(0.0))) return constant(cx(0.0));
  if (a->is_const(cx(1.0))) return b;
  if (b->is_const(cx(1.0))) return a;
  if (a->kind() == Kind::kConst && b->kind() == Kind::kConst)
    return constant(a->value() * b->value());
  return make_node(Kind::kMul, {}, 0, std::move(a), std::move(b));
}

Expr::Ptr Expr::div(Ptr a, Ptr b) {
  if (a->is_const(cx(0.0))) return constant(cx(0.0));
  if (b->is_const(cx(1.0))) return a;
  if (a->kind() == Kind::kConst && b->kind() == Kind::kConst &&
      b->value() != cx(0.0))
    return constant(a->value() / b->value());
  return make_node(Kind::kDiv, {}, 0, std::move(a), std::move(b));
}

Expr::Ptr Expr::pow(Ptr a, int n) {
  if (n == 0) return constant(cx(1.0));
  if (n == 1) return a;
  if (a->kind() == Kind::kConst) return constant(std::pow(a->value(), n));
  return make_node(Kind::kPow, {}, n, std::move(a), nullptr);
}

Expr::Ptr Expr::exp(Ptr a) {
  if (a->kind() == Kind::kConst) return constant(std::exp(a->value()));
  return make_node(Kind::kExp, {}, 0, std::move(a), nullptr);
}

Expr::Ptr Expr::log(Ptr a) {
  return make_node(Kind::kLog, {}, 0, std::move(a), nullptr);
}

Expr::Ptr Expr::neg(Ptr a) {
  if (a->kind() == Kind::kConst) return constant(-a->value());
  return make_node(Kind::kNeg, {}, 0, std::move(a), nullptr);
}

namespace {

// Shared-subexpression-aware evaluation: derivative() reuses child nodes, so
// expression graphs are DAGs; memoizing on node identity keeps evaluation
// linear in the DAG size instead of exponential in its depth.
cx eval_node(const Expr* e, cx x, std::unordered_map<const Expr*, cx>& memo) {
  const auto it = memo.find(e);
  if (it != memo.end()) return it->second;
  cx r;
  switch (e->kind()) {
    case Expr::Kind::kConst: r = e->value(); break;
    case Expr::Kind::kVar: r = x; break;
    case Expr::Kind::kAdd:
      r = eval_node(e->left().get(), x, memo) + eval_node(e->right().get(), x, memo);
      break;
    case Expr::Kind::kSub:
      r = eval_node(e->left().get(), x, memo) - eval_node(e->right().get(), x, memo);
      break;
    case Expr::Kind::kMul:
      r = eval_node(e->left().get(), x, memo) * eval_node(e->right().get(), x, memo);
      break;
    case Expr::Kind::kDiv: {
      const cx d = eval_node(e->right().get(), x, memo);
      if (std::abs(d) < 1e-300)
        throw evaluation_error("division by zero while evaluating coefficient at x=" +
                               std::to_string(x.real()) + (x.imag() < 0 ? "-" : "+") +
                               std::to_string(std::abs(x.imag())) + "i");
      r = eval_node(e->left().get(), x, memo) / d;
      break;
    }
    case Expr::Kind::kPow: {
      const cx base = eval_node(e->left().get(), x, memo);
      if (e->exponent() < 0 && std::abs(base) < 1e-300)
        throw evaluation_error("zero raised to a negative power");
      cx v(1.0);
      const int p = std::abs(e->exponent());
      for (int j = 0; j < p; ++j) v *= base;
      r = e->exponent() < 0 ? cx(1.0) / v : v;
      break;
    }
    case Expr::Kind::kExp: r = std::exp(eval_node(e->left().get(), x, memo)); break;
    case Expr::Kind::kLog: {
      const cx v = eval_node(e->left().get(), x, memo);
      if (std::abs(v) < 1e-300) throw evaluation_error("log of zero");
      r = std::log(v);
      break;
    }
    case Expr::Kind::kNeg: r = -eval_node(e->left().get(), x, memo); break;
    default: throw evaluation_error("corrupt expression node");
  }
  memo.emplace(e, r);
  return r;
}

}  // namespace

cx Expr::eval(cx x) const {
  std::unordered_map<const Expr*, cx> memo;
  return eval_node(this, x, memo);
}

Jet Expr::eval_jet(cx x, int L) const {
  switch (kind_) {
    case Kind::kConst: return jet_const(value_, L);
    case Kind::kVar: {
      Jet j = jet_const(x, L);
      if (L > 1) j[1] = cx(1.0);
      return j;
    }
    case Kind::kAdd: return jet_add(a_->eval_jet(x, L), b_->eval_jet(x, L));
    case Kind::kSub: return jet_sub(a_->eval_jet(x, L), b_->eval_jet(x, L));
    case Kind::kMul: return jet_mul(a_->eval_jet(x, L), b_->eval_jet(x, L), L);
    case Kind::kDiv: return jet_div(a_->eval_jet(x, L), b_->eval_jet(x, L), L);
    case Kind::kPow: return jet_ipow(a_->eval_jet(x, L), expo_, L);
    case Kind::kExp: return jet_exp(a_->eval_jet(x, L), L);
    case Kind::kLog: return jet_log(a_->eval_jet(x, L), L);
    case Kind::kNeg: return jet_scale(a_->eval_jet(x, L), cx(-1.0));
  }
  throw evaluation_error("corrupt expression node");
}

namespace {

// Memoized on node identity for the same DAG-sharing reason as eval_node:
// differentiating a shared subtree once keeps the result graph (and repeated
// differentiation) polynomial in size.
Expr::Ptr deriv_node(const Expr* e,
                     std::unordered_map<const Expr*, Expr::Ptr>& memo) {
  const auto it = memo.find(e);
  if (it != memo.end()) return it->second;
  Expr::Ptr r;
  switch (e->kind()) {
    case Expr::Kind::kConst: r = Expr::constant(cx(0.0)); break;
    case Expr::Kind::kVar: r = Expr::constant(cx(1.0)); break;
    case Expr::Kind::kAdd:
      r = Expr::add(deriv_node(e->left().get(), memo),
                    deriv_node(e->right().get(), memo));
      break;
    case Expr::Kind::kSub:
      r = Expr::sub(deriv_node(e->left().get(), memo),
                    deriv_node(e->right().get(), memo));
      break;
    case Expr::Kind::kMul:
      r = Expr::add(Expr::mul(deriv_node(e->left().get(), memo), e->right()),
                    Expr::mul(e->left(), deriv_node(e->right().get(), memo)));
      break;
    case Expr::Kind::kDiv:
      r = Expr::div(
          Expr::sub(Expr::mul(deriv_node(e->left().get(), memo), e->right()),
                    Expr::mul(e->left(), deriv_node(e->right().get(), memo))),
          Expr::pow(e->right(), 2));
      break;
    case Expr::Kind::kPow:
      r = Expr::mul(
          Expr::mul(Expr::constant(cx(static_cast<double>(e->exponent()))),
                    Expr::pow(e->left(), e->exponent() - 1)),
          deriv_node(e->left().get(), memo));
      break;
    case Expr::Kind::kExp:
      r = Expr::mul(Expr::exp(e->left()), deriv_node(e->left().get(), memo));
      break;
    case Expr::Kind::kLog:
      r = Expr::div(deriv_node(e->left().get(), memo), e->left());
      break;
    case Expr::Kind::kNeg:
      r = Expr::neg(deriv_node(e->left().get(), memo));
      break;
    default: throw evaluation_error("corrupt expression node");
  }
  memo.emplace(e, r);
  return r;
}

}  // namespace

Expr::Ptr Expr::derivative() const {
  std::unordered_map<const Expr*, Ptr> memo;
  return deriv_node(this, memo);
}

std::string Expr::to_string() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::kConst: {
      if (value_.imag() == 0.0) {
        os << value_.real();
      } else {
        os << "(" << value_.real() << (value_.imag() < 0 ? "-" : "+")
           << std::abs(value_.imag()) << "*i)";
      }
      break;
    }
    case Kind::kVar: os << "x"; break;
    case Kind::kAdd: os << "(" << a_->to_string() << "+" << b_->to_string() << ")"; break;
    case Kind::kSub: os << "(" << a_->to_string() << "-" << b_->to_string() << ")"; break;
    case Kind::kMul: os << "(" << a_->to_string() << "*" << b_->to_string() << ")"; break;
    case Kind::kDiv: os << "(" << a_->to_string() << "/" << b_->to_string() << ")"; break;
    case Kind::kPow: os << a_->to_string() << "^" << expo_; break;
    case Kind::kExp: os << "exp(" << a_->to_string() << ")"; break;
    case Kind::kLog: os << "log(" << a_->to_string() << ")"; break;
    case Kind::kNeg: os << "(-" << a_->to_string() << ")"; break;
  }
  return os.str();
}

Expr::Ptr derivative_n(Expr::Ptr e, int d) {
  for (int j = 0; j < d; ++j) e = e->derivative();
  return e;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Expr::Ptr parse() {
    auto e = expr();
    skip_ws();
    if (pos_ != s_.size())
      fail("unexpected trailing input");
    return e;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw validation_error("expression parse error at position " +
                           std::to_string(pos_) + ": " + what + " in \"" + s_ + "\"");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  Expr::Ptr expr() {
    auto e = term();
    for (;;) {
      if (consume('+')) e = Expr::add(e, term());
      else if (consume('-')) e = Expr::sub(e, term());
      else return e;
    }
  }

  Expr::Ptr term() {
    auto e = factor();
    for (;;) {
      if (consume('*')) e = Expr::mul(e, factor());
      else if (consume('/')) e = Expr::div(e, factor());
      else return e;
    }
  }

  Expr::Ptr factor() {
    if (consume('-')) return Expr::neg(factor());
    if (consume('+')) return factor();
    return power();
  }

  Expr::Ptr power() {
    auto base = atom();
    if (consume('^')) {
      skip_ws();
      bool negexp = consume('-');
      skip_ws();
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
        fail("exponent must be an integer literal");
      int v = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        v = v * 10 + (s_[pos_++] - '0');
      return Expr::pow(base, negexp ? -v : v);
    }
    return base;
  }

  Expr::Ptr atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expr();
      if (!consume(')')) fail("missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "x") return Expr::var();
      if (name == "i") return Expr::constant(cx(0.0, 1.0));
      if (name == "exp" || name == "log") {
        if (!consume('(')) fail("expected '(' after " + name);
        auto arg = expr();
        if (!consume(')')) fail("missing ')'");
        return name == "exp" ? Expr::exp(arg) : Expr::log(arg);
      }
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr::Ptr number() {
    size_t end = pos_;
    while (end < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.'))
      ++end;
    // Exponent part: e/E followed by optional sign and digits.
    if (end < s_.size() && (s_[end] == 'e' || s_[end] == 'E')) {
      size_t e2 = end + 1;
      if (e2 < s_.size() && (s_[e2] == '+' || s_[e2] == '-')) ++e2;
      if (e2 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[e2]))) {
        while (e2 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[e2]))) ++e2;
        end = e2;
      }
    }
    const std::string lit = s_.substr(pos_, end - pos_);
    char* stop = nullptr;
    const double v = std::strtod(lit.c_str(), &stop);
    if (stop != lit.c_str() + lit.size()) fail("malformed number '" + lit + "'");
    pos_ = end;
    return Expr::constant(cx(v));
  }
};

}  // namespace

Expr::Ptr parse_expression(const std::string& text) {
  return Parser(text).parse();
}

}  // namespace borelsum
