#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace finsler {

// Arithmetic expression in coordinates x1..xn, compiled once to a postfix
// program.  Grammar: + - * / ^ (right assoc), unary minus, parentheses,
// sin cos exp sqrt, constants pi and e, implicit multiplication after a
// number ("2pi", "3x1", "2sin(x1)").
class Expression {
 public:
  Expression() = default;

  static Expression compile(const std::string& text, int dim);
  static Expression constant(double value);

  double operator()(const Eigen::VectorXd& x) const;

  // Value of an expression that uses no coordinates; throws otherwise.
  double evalConstant() const;

  bool usesCoordinates() const { return usesCoords_; }
  const std::string& text() const { return text_; }

 private:
  enum class Op : unsigned char {
    Push, Coord, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Sqrt
  };
  struct Instr {
    Op op;
    double value = 0.0;  // Push
    int index = 0;       // Coord
  };

  std::vector<Instr> prog_;
  std::string text_;
  bool usesCoords_ = false;

  friend class ExprParser;
};

}  // namespace finsler
