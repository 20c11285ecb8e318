// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include <fmt/format.h>

#include "leafindex/error.hpp"

namespace leafindex {

struct Expression::Node {
  enum class Op { constant, variable, add, sub, mul, div, pow, neg, call };
  Op op = Op::constant;
  cplx value = 0.0;
  int slot = -1;
  cplx (*fn)(cplx) = nullptr;
  std::shared_ptr<const Node> lhs, rhs;

  cplx eval(const cplx* v) const {
    switch (op) {
      case Op::constant: return value;
      case Op::variable: return v[slot];
      case Op::add: return lhs->eval(v) + rhs->eval(v);
      case Op::sub: return lhs->eval(v) - rhs->eval(v);
      case Op::mul: return lhs->eval(v) * rhs->eval(v);
      case Op::div: return lhs->eval(v) / rhs->eval(v);
      case Op::neg: return -lhs->eval(v);
      case Op::call: return fn(lhs->eval(v));
      case Op::pow: {
        const cplx base = lhs->eval(v), e = rhs->eval(v);
        // Integer powers stay exact (and defined at 0).
        if (e.imag() == 0.0 && e.real() == std::round(e.real()) && std::abs(e.real()) <= 64) {
          const int n = static_cast<int>(e.real());
          cplx acc = 1.0;
          for (int k = 0; k < std::abs(n); ++k) acc *= base;
          return n >= 0 ? acc : 1.0 / acc;
        }
        return std::pow(base, e);
      }
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

struct Function {
  const char* name;
  cplx (*fn)(cplx);
};

const Function kFunctions[] = {
    {"sin", [](cplx z) { return std::sin(z); }},   {"cos", [](cplx z) { return std::cos(z); }},
    {"exp", [](cplx z) { return std::exp(z); }},   {"log", [](cplx z) { return std::log(z); }},
    {"sqrt", [](cplx z) { return std::sqrt(z); }}, {"abs", [](cplx z) { return cplx(std::abs(z)); }},
    {"conj", [](cplx z) { return std::conj(z); }}, {"re", [](cplx z) { return cplx(z.real()); }},
    {"im", [](cplx z) { return cplx(z.imag()); }}, {"tanh", [](cplx z) { return std::tanh(z); }},
};

// expr := term (('+'|'-') term)* ; term := unary (('*'|'/') unary)* ;
// unary := '-' unary | power ; power := atom ('^' unary)?
class Parser {
 public:
  Parser(const std::string& s, const std::vector<std::string>& vars) : s_(s), vars_(vars) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) error(fmt::format("unexpected '{}'", s_[pos_]));
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::validation, fmt::format("expression '{}': {} at column {}", s_, what, pos_ + 1));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr a = term();
    for (;;) {
      if (accept('+'))
        a = make(Op::add, a, term());
      else if (accept('-'))
        a = make(Op::sub, a, term());
      else
        return a;
    }
  }
  NodePtr term() {
    NodePtr a = unary();
    for (;;) {
      if (accept('*'))
        a = make(Op::mul, a, unary());
      else if (accept('/'))
        a = make(Op::div, a, unary());
      else
        return a;
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr a = atom();
    if (accept('^')) return make(Op::pow, a, unary());
    return a;
  }
  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end");
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')')) error("missing ')'");
      return e;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) error("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Expression::Node>();
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      for (std::size_t k = 0; k < vars_.size(); ++k)
        if (vars_[k] == name) {
          auto n = std::make_shared<Expression::Node>();
          n->op = Op::variable;
          n->slot = static_cast<int>(k);
          return n;
        }
      if (name == "i" || name == "pi") {
        auto n = std::make_shared<Expression::Node>();
        n->value = name == "i" ? kI : cplx(kPi);
        return n;
      }
      for (const Function& f : kFunctions)
        if (name == f.name) {
          if (!accept('(')) error(fmt::format("'{}' needs an argument", name));
          auto n = std::make_shared<Expression::Node>();
          n->op = Op::call;
          n->fn = f.fn;
          n->lhs = expr();
          if (!accept(')')) error("missing ')'");
          return n;
        }
      pos_ = start;
      error(fmt::format("unknown name '{}'", name));
    }
    error(fmt::format("unexpected '{}'", c));
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text, const std::vector<std::string>& variables) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(e.text_, variables).parse();
  return e;
}

cplx Expression::operator()(const cplx* values) const { return root_->eval(values); }

}  // namespace leafindex
