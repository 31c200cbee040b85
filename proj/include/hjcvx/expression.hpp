#pragma once

#include <string>
#include <vector>

#include "hjcvx/grid.hpp"

namespace hjcvx {

/// A compiled arithmetic expression in the variables x, y (position) and
/// p1, p2 (gradient components).
///
/// Supports + - * / ^, unary minus, comparisons (< <= > >=, yielding 1 or 0),
/// the constants pi and e, the unary functions sin cos tan asin acos atan sinh
/// cosh tanh exp log sqrt abs sign, and the binary functions min, max, pow,
/// atan2 as well as ifelse(cond, a, b).
///
/// Derivatives are forward-mode. |t| is differentiated as t / sqrt(t^2 + mu^2)
/// so that the derivative path stays smooth at t = 0.
class Expression {
 public:
  enum class Var { x, y, p1, p2 };

  struct Gradient {
    double value;
    Point d;  // derivatives with respect to the two seeded variables
  };

  static Expression parse(const std::string& text);

  const std::string& text() const { return text_; }
  bool uses(Var v) const;

  double eval(const Point& x, const Point& p = {0.0, 0.0}) const;
  /// Value and partial derivatives with respect to (p1, p2).
  Gradient eval_dp(const Point& x, const Point& p, double mu) const;
  /// Value and partial derivatives with respect to (x, y).
  Gradient eval_dx(const Point& x, const Point& p, double mu) const;

  struct Instr {
    int op;
    double value = 0.0;
  };

 private:
  template <class T>
  T run(const T* vars, double mu) const;

  std::string text_;
  std::vector<Instr> code_;
};

}  // namespace hjcvx
