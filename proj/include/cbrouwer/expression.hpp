#ifndef CBROUWER_EXPRESSION_HPP
#define CBROUWER_EXPRESSION_HPP

/**
 * Arithmetic expressions over x1…xd and named per-atom constants.
 *
 *   expr    := term (('+' | '-') term)*
 *   term    := unary (('*' | '/') unary)*
 *   unary   := ('-' | '+') unary | power
 *   power   := primary ('^' unary)?
 *   primary := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
 *
 * Names are x1…xd, declared constants, `pi` and `e`.  Functions: sin cos exp
 * log abs sqrt (one argument), min max (two or more), clamp(v, lo, hi).
 * Expressions compile to a postfix program.
 */

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace cbrouwer {

class ParseError : public Error {
 public:
  ParseError(std::size_t column, const std::string& message)
      : Error(ErrorCode::ParseError, "column " + std::to_string(column) + ": " + message), column_(column), message_(message) {}
  /// 1-based column of the offending character (one past the end for truncated input).
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t column_;
  std::string message_;
};

class Expression {
 public:
  enum class Op : unsigned char {
    Const, Var, Named, Neg, Add, Sub, Mul, Div, Pow,
    Sin, Cos, Exp, Log, Abs, Sqrt, Min, Max, Clamp,
  };

  struct Instr {
    Op op;
    double value = 0.0;
    std::size_t index = 0;  // variable/constant index or argument count
  };

  Expression() = default;

  /// Compiles `text`; `constants` lists the names usable besides x1…x`dim`.
  static Expression parse(std::string_view text, std::size_t dim, const std::vector<std::string>& constants = {}) {
    Parser p{text, dim, constants, 0, {}, 0, 0};
    p.skip();
    p.expr();
    p.skip();
    if (p.pos < text.size()) throw ParseError(p.pos + 1, "unexpected '" + std::string(1, text[p.pos]) + "'");
    Expression e;
    e.text_ = std::string(text);
    e.code_ = std::move(p.code);
    e.max_depth_ = p.max_depth;
    return e;
  }

  const std::string& text() const noexcept { return text_; }
  const std::vector<Instr>& code() const noexcept { return code_; }

  /// Evaluates with x = variables and c = constant values in declaration order.
  double eval(const double* x, const double* c = nullptr) const {
    std::array<double, 64> small;
    std::vector<double> large;
    double* st = small.data();
    if (max_depth_ > small.size()) {
      large.resize(max_depth_);
      st = large.data();
    }
    std::size_t sp = 0;
    for (const Instr& in : code_) {
      switch (in.op) {
        case Op::Const: st[sp++] = in.value; break;
        case Op::Var: st[sp++] = x[in.index]; break;
        case Op::Named: st[sp++] = c[in.index]; break;
        case Op::Neg: st[sp - 1] = -st[sp - 1]; break;
        case Op::Add: --sp; st[sp - 1] += st[sp]; break;
        case Op::Sub: --sp; st[sp - 1] -= st[sp]; break;
        case Op::Mul: --sp; st[sp - 1] *= st[sp]; break;
        case Op::Div: --sp; st[sp - 1] /= st[sp]; break;
        case Op::Pow: --sp; st[sp - 1] = std::pow(st[sp - 1], st[sp]); break;
        case Op::Sin: st[sp - 1] = std::sin(st[sp - 1]); break;
        case Op::Cos: st[sp - 1] = std::cos(st[sp - 1]); break;
        case Op::Exp: st[sp - 1] = std::exp(st[sp - 1]); break;
        case Op::Log: st[sp - 1] = std::log(st[sp - 1]); break;
        case Op::Abs: st[sp - 1] = std::abs(st[sp - 1]); break;
        case Op::Sqrt: st[sp - 1] = std::sqrt(st[sp - 1]); break;
        case Op::Min:
          for (std::size_t k = 1; k < in.index; ++k) {
            --sp;
            st[sp - 1] = std::min(st[sp - 1], st[sp]);
          }
          break;
        case Op::Max:
          for (std::size_t k = 1; k < in.index; ++k) {
            --sp;
            st[sp - 1] = std::max(st[sp - 1], st[sp]);
          }
          break;
        case Op::Clamp:
          sp -= 2;
          st[sp - 1] = std::min(std::max(st[sp - 1], st[sp]), st[sp + 1]);
          break;
      }
    }
    const double v = st[0];
    if (!std::isfinite(v)) throw Error(ErrorCode::EvalError, "'" + text_ + "' evaluates to " + std::to_string(v));
    return v;
  }

 private:
  struct Parser {
    std::string_view s;
    std::size_t dim;
    const std::vector<std::string>& constants;
    std::size_t pos;
    std::vector<Instr> code;
    std::size_t depth;
    std::size_t max_depth;

    void skip() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
      skip();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }
    void expect(char c) {
      if (!eat(c)) {
        skip();
        const std::string got = pos < s.size() ? "'" + std::string(1, s[pos]) + "'" : "end of input";
        throw ParseError(pos + 1, "expected '" + std::string(1, c) + "' but found " + got);
      }
    }
    void emit(Op op, double value = 0.0, std::size_t index = 0, int stack_delta = 0) {
      code.push_back(Instr{op, value, index});
      depth = static_cast<std::size_t>(static_cast<long>(depth) + stack_delta);
      if (depth > max_depth) max_depth = depth;
    }

    void expr() {
      term();
      for (;;) {
        if (eat('+')) {
          term();
          emit(Op::Add, 0, 0, -1);
        } else if (eat('-')) {
          term();
          emit(Op::Sub, 0, 0, -1);
        } else {
          return;
        }
      }
    }
    void term() {
      unary();
      for (;;) {
        if (eat('*')) {
          unary();
          emit(Op::Mul, 0, 0, -1);
        } else if (eat('/')) {
          unary();
          emit(Op::Div, 0, 0, -1);
        } else {
          return;
        }
      }
    }
    void unary() {
      if (eat('-')) {
        unary();
        emit(Op::Neg);
      } else if (eat('+')) {
        unary();
      } else {
        power();
      }
    }
    void power() {
      primary();
      if (eat('^')) {
        unary();
        emit(Op::Pow, 0, 0, -1);
      }
    }
    void primary() {
      skip();
      if (pos >= s.size()) throw ParseError(pos + 1, "unexpected end of input");
      const char c = s[pos];
      if (c == '(') {
        ++pos;
        expr();
        expect(')');
        return;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        number();
        return;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        name();
        return;
      }
      throw ParseError(pos + 1, "unexpected '" + std::string(1, c) + "'");
    }
    void number() {
      const std::size_t start = pos;
      const std::string rest(s.substr(pos));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) throw ParseError(start + 1, "malformed number");
      pos += static_cast<std::size_t>(end - rest.c_str());
      emit(Op::Const, v, 0, 1);
    }
    void name() {
      const std::size_t start = pos;
      while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
      const std::string id(s.substr(start, pos - start));
      skip();
      if (pos < s.size() && s[pos] == '(') {
        call(id, start);
        return;
      }
      if (id.size() > 1 && id[0] == 'x' && std::all_of(id.begin() + 1, id.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
        const std::size_t k = std::stoul(id.substr(1));
        if (k < 1 || k > dim) throw ParseError(start + 1, "variable " + id + " outside x1..x" + std::to_string(dim));
        emit(Op::Var, 0, k - 1, 1);
        return;
      }
      for (std::size_t i = 0; i < constants.size(); ++i)
        if (constants[i] == id) {
          emit(Op::Named, 0, i, 1);
          return;
        }
      if (id == "pi") {
        emit(Op::Const, 3.14159265358979323846, 0, 1);
        return;
      }
      if (id == "e") {
        emit(Op::Const, 2.71828182845904523536, 0, 1);
        return;
      }
      throw ParseError(start + 1, "unknown name '" + id + "'");
    }
    void call(const std::string& id, std::size_t start) {
      struct Fn {
        const char* name;
        Op op;
        std::size_t min_args, max_args;
      };
      static constexpr Fn table[] = {
          {"sin", Op::Sin, 1, 1},  {"cos", Op::Cos, 1, 1},  {"exp", Op::Exp, 1, 1},   {"log", Op::Log, 1, 1},
          {"abs", Op::Abs, 1, 1},  {"sqrt", Op::Sqrt, 1, 1}, {"min", Op::Min, 2, 64}, {"max", Op::Max, 2, 64},
          {"clamp", Op::Clamp, 3, 3},
      };
      const Fn* fn = nullptr;
      for (const Fn& f : table)
        if (id == f.name) fn = &f;
      if (!fn) throw ParseError(start + 1, "unknown function '" + id + "'");
      expect('(');
      std::size_t args = 0;
      do {
        expr();
        ++args;
      } while (eat(','));
      expect(')');
      if (args < fn->min_args || args > fn->max_args)
        throw ParseError(start + 1, id + " takes " + std::to_string(fn->min_args) +
                                        (fn->max_args == fn->min_args ? "" : " or more") + " argument(s), got " +
                                        std::to_string(args));
      emit(fn->op, 0, args, 1 - static_cast<int>(args));
    }
  };

  std::string text_;
  std::vector<Instr> code_;
  std::size_t max_depth_ = 0;
};

}  // namespace cbrouwer

#endif  // CBROUWER_EXPRESSION_HPP
