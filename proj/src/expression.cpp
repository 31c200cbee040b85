#include "hjcvx/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string_view>

namespace hjcvx {

namespace {

enum Op : int {
  kConst,
  kVar,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,
  kNeg,
  kLt,
  kLe,
  kGt,
  kGe,
  // unary functions
  kSin,
  kCos,
  kTan,
  kAsin,
  kAcos,
  kAtan,
  kSinh,
  kCosh,
  kTanh,
  kExp,
  kLog,
  kSqrt,
  kAbs,
  kSign,
  // binary functions
  kMin,
  kMax,
  kAtan2,
  // ternary
  kIfElse,
};

struct FunctionName {
  std::string_view name;
  int op;
  int arity;
};

constexpr FunctionName kFunctions[] = {
    {"sin", kSin, 1},   {"cos", kCos, 1},     {"tan", kTan, 1},   {"asin", kAsin, 1},
    {"acos", kAcos, 1}, {"atan", kAtan, 1},   {"sinh", kSinh, 1}, {"cosh", kCosh, 1},
    {"tanh", kTanh, 1}, {"exp", kExp, 1},     {"log", kLog, 1},   {"sqrt", kSqrt, 1},
    {"abs", kAbs, 1},   {"sign", kSign, 1},   {"min", kMin, 2},   {"max", kMax, 2},
    {"pow", kPow, 2},   {"atan2", kAtan2, 2}, {"ifelse", kIfElse, 3},
};

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  std::vector<Expression::Instr> run() {
    comparison();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    return std::move(code_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression error at offset " + std::to_string(pos_) + ": " + what +
                                " in \"" + std::string(src_) + "\"");
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_space();
    if (src_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void emit(int op, double value = 0.0) { code_.push_back({op, value}); }

  void comparison() {
    additive();
    if (accept("<=")) {
      additive();
      emit(kLe);
    } else if (accept(">=")) {
      additive();
      emit(kGe);
    } else if (accept("<")) {
      additive();
      emit(kLt);
    } else if (accept(">")) {
      additive();
      emit(kGt);
    }
  }

  void additive() {
    term();
    for (;;) {
      if (accept("+")) {
        term();
        emit(kAdd);
      } else if (accept("-")) {
        term();
        emit(kSub);
      } else {
        return;
      }
    }
  }

  void term() {
    unary();
    for (;;) {
      if (accept("*")) {
        unary();
        emit(kMul);
      } else if (accept("/")) {
        unary();
        emit(kDiv);
      } else {
        return;
      }
    }
  }

  void unary() {
    if (accept("-")) {
      unary();
      emit(kNeg);
    } else if (accept("+")) {
      unary();
    } else {
      power();
    }
  }

  void power() {
    primary();
    if (accept("^")) {
      unary();
      emit(kPow);
    }
  }

  void primary() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      identifier();
      return;
    }
    if (accept("(")) {
      comparison();
      if (!accept(")")) fail("expected ')'");
      return;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  void number() {
    const char* begin = src_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    emit(kConst, v);
  }

  void identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view id = src_.substr(start, pos_ - start);
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      for (const auto& f : kFunctions) {
        if (f.name != id) continue;
        ++pos_;
        for (int a = 0; a < f.arity; ++a) {
          if (a > 0 && !accept(",")) fail("expected ',' in call to " + std::string(id));
          comparison();
        }
        if (!accept(")")) fail("expected ')' after arguments of " + std::string(id));
        emit(f.op);
        return;
      }
      fail("unknown function '" + std::string(id) + "'");
    }
    if (id == "x") return emit(kVar, 0);
    if (id == "y") return emit(kVar, 1);
    if (id == "p1" || id == "px") return emit(kVar, 2);
    if (id == "p2" || id == "py") return emit(kVar, 3);
    if (id == "pi") return emit(kConst, std::numbers::pi);
    if (id == "e") return emit(kConst, std::numbers::e);
    fail("unknown identifier '" + std::string(id) + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<Expression::Instr> code_;
};

struct Dual {
  double v = 0.0;
  double d0 = 0.0;
  double d1 = 0.0;
};

Dual scale(const Dual& a, double value, double factor) { return {value, a.d0 * factor, a.d1 * factor}; }

double value_of(double a) { return a; }
double value_of(const Dual& a) { return a.v; }
double make_const(double c, double*) { return c; }
Dual make_const(double c, Dual*) { return {c, 0.0, 0.0}; }

double apply_unary(int op, double a, double) {
  switch (op) {
    case kNeg: return -a;
    case kSin: return std::sin(a);
    case kCos: return std::cos(a);
    case kTan: return std::tan(a);
    case kAsin: return std::asin(a);
    case kAcos: return std::acos(a);
    case kAtan: return std::atan(a);
    case kSinh: return std::sinh(a);
    case kCosh: return std::cosh(a);
    case kTanh: return std::tanh(a);
    case kExp: return std::exp(a);
    case kLog: return std::log(a);
    case kSqrt: return std::sqrt(a);
    case kAbs: return std::abs(a);
    case kSign: return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
  }
  throw std::logic_error("bad unary opcode");
}

Dual apply_unary(int op, const Dual& a, double mu) {
  const double v = apply_unary(op, a.v, mu);
  switch (op) {
    case kNeg: return scale(a, v, -1.0);
    case kSin: return scale(a, v, std::cos(a.v));
    case kCos: return scale(a, v, -std::sin(a.v));
    case kTan: return scale(a, v, 1.0 + v * v);
    case kAsin: return scale(a, v, 1.0 / std::sqrt(1.0 - a.v * a.v));
    case kAcos: return scale(a, v, -1.0 / std::sqrt(1.0 - a.v * a.v));
    case kAtan: return scale(a, v, 1.0 / (1.0 + a.v * a.v));
    case kSinh: return scale(a, v, std::cosh(a.v));
    case kCosh: return scale(a, v, std::sinh(a.v));
    case kTanh: return scale(a, v, 1.0 - v * v);
    case kExp: return scale(a, v, v);
    case kLog: return scale(a, v, 1.0 / a.v);
    case kSqrt: return scale(a, v, 0.5 / v);
    case kAbs: return scale(a, v, a.v / std::sqrt(a.v * a.v + mu * mu));
    case kSign: return {v, 0.0, 0.0};
  }
  throw std::logic_error("bad unary opcode");
}

double apply_binary(int op, double a, double b) {
  switch (op) {
    case kAdd: return a + b;
    case kSub: return a - b;
    case kMul: return a * b;
    case kDiv: return a / b;
    case kPow: return std::pow(a, b);
    case kLt: return a < b ? 1.0 : 0.0;
    case kLe: return a <= b ? 1.0 : 0.0;
    case kGt: return a > b ? 1.0 : 0.0;
    case kGe: return a >= b ? 1.0 : 0.0;
    case kMin: return std::min(a, b);
    case kMax: return std::max(a, b);
    case kAtan2: return std::atan2(a, b);
  }
  throw std::logic_error("bad binary opcode");
}

Dual apply_binary(int op, const Dual& a, const Dual& b) {
  const double v = apply_binary(op, a.v, b.v);
  switch (op) {
    case kAdd: return {v, a.d0 + b.d0, a.d1 + b.d1};
    case kSub: return {v, a.d0 - b.d0, a.d1 - b.d1};
    case kMul: return {v, a.d0 * b.v + a.v * b.d0, a.d1 * b.v + a.v * b.d1};
    case kDiv: {
      const double inv = 1.0 / b.v;
      return {v, (a.d0 - v * b.d0) * inv, (a.d1 - v * b.d1) * inv};
    }
    case kPow: {
      // d(a^b) = b a^(b-1) da + a^b log(a) db; the log term only when b varies.
      const double da = b.v == 0.0 ? 0.0 : b.v * std::pow(a.v, b.v - 1.0);
      const bool b_varies = b.d0 != 0.0 || b.d1 != 0.0;
      const double db = b_varies ? v * std::log(a.v) : 0.0;
      return {v, da * a.d0 + db * b.d0, da * a.d1 + db * b.d1};
    }
    case kLt:
    case kLe:
    case kGt:
    case kGe: return {v, 0.0, 0.0};
    case kMin: return a.v <= b.v ? a : b;
    case kMax: return a.v >= b.v ? a : b;
    case kAtan2: {
      const double r2 = a.v * a.v + b.v * b.v;
      return {v, (b.v * a.d0 - a.v * b.d0) / r2, (b.v * a.d1 - a.v * b.d1) / r2};
    }
  }
  throw std::logic_error("bad binary opcode");
}

bool is_unary(int op) { return op == kNeg || (op >= kSin && op <= kSign); }

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.code_ = Parser(text).run();
  return e;
}

bool Expression::uses(Var v) const {
  for (const auto& ins : code_) {
    if (ins.op == kVar && static_cast<int>(ins.value) == static_cast<int>(v)) return true;
  }
  return false;
}

template <class T>
T Expression::run(const T* vars, double mu) const {
  std::vector<T> stack;
  stack.reserve(code_.size());
  for (const auto& ins : code_) {
    if (ins.op == kConst) {
      stack.push_back(make_const(ins.value, static_cast<T*>(nullptr)));
    } else if (ins.op == kVar) {
      stack.push_back(vars[static_cast<int>(ins.value)]);
    } else if (is_unary(ins.op)) {
      stack.back() = apply_unary(ins.op, stack.back(), mu);
    } else if (ins.op == kIfElse) {
      const T b = stack.back();
      stack.pop_back();
      const T a = stack.back();
      stack.pop_back();
      const bool cond = value_of(stack.back()) != 0.0;
      stack.back() = cond ? a : b;
    } else {
      const T b = stack.back();
      stack.pop_back();
      stack.back() = apply_binary(ins.op, stack.back(), b);
    }
  }
  return stack.back();
}

double Expression::eval(const Point& x, const Point& p) const {
  const double vars[4] = {x[0], x[1], p[0], p[1]};
  return run<double>(vars, 0.0);
}

Expression::Gradient Expression::eval_dp(const Point& x, const Point& p, double mu) const {
  const Dual vars[4] = {{x[0]}, {x[1]}, {p[0], 1.0, 0.0}, {p[1], 0.0, 1.0}};
  const Dual r = run<Dual>(vars, mu);
  return {r.v, {r.d0, r.d1}};
}

Expression::Gradient Expression::eval_dx(const Point& x, const Point& p, double mu) const {
  const Dual vars[4] = {{x[0], 1.0, 0.0}, {x[1], 0.0, 1.0}, {p[0]}, {p[1]}};
  const Dual r = run<Dual>(vars, mu);
  return {r.v, {r.d0, r.d1}};
}

}  // namespace hjcvx
