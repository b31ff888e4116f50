#include "finsler/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

struct Token {
  enum Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } kind;
  double value = 0.0;
  std::string name;
};

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> toks;
  size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* start = text.c_str() + i;
      char* end = nullptr;
      const double v = std::strtod(start, &end);
      if (end == start) throw ConfigError("bad number in expression: " + text);
      i += static_cast<size_t>(end - start);
      toks.push_back({Token::Number, v, {}});
      // Implicit multiplication: "2pi", "3x1", "2sin(x1)", "2(x1+1)".
      if (i < text.size() &&
          (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '(')) {
        toks.push_back({Token::Star, 0.0, {}});
      }
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      toks.push_back({Token::Ident, 0.0, text.substr(i, j - i)});
      i = j;
      continue;
    }
    switch (c) {
      case '+': toks.push_back({Token::Plus, 0.0, {}}); break;
      case '-': toks.push_back({Token::Minus, 0.0, {}}); break;
      case '*': toks.push_back({Token::Star, 0.0, {}}); break;
      case '/': toks.push_back({Token::Slash, 0.0, {}}); break;
      case '^': toks.push_back({Token::Caret, 0.0, {}}); break;
      case '(': toks.push_back({Token::LParen, 0.0, {}}); break;
      case ')': toks.push_back({Token::RParen, 0.0, {}}); break;
      default:
        throw ConfigError(std::string("unexpected character '") + c + "' in expression: " + text);
    }
    ++i;
  }
  toks.push_back({Token::End, 0.0, {}});
  return toks;
}

}  // namespace

class ExprParser {
 public:
  ExprParser(std::vector<Token> toks, int dim, Expression& out)
      : toks_(std::move(toks)), dim_(dim), out_(out) {}

  void run() {
    parseSum();
    expect(Token::End, "trailing input");
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  int dim_;
  Expression& out_;

  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  void expect(Token::Kind k, const char* what) {
    if (peek().kind != k)
      throw ConfigError(std::string("expression parse error (") + what + "): " + out_.text_);
    ++pos_;
  }
  void emit(Expression::Op op) { out_.prog_.push_back({op, 0.0, 0}); }

  void parseSum() {
    parseProduct();
    while (peek().kind == Token::Plus || peek().kind == Token::Minus) {
      const auto k = take().kind;
      parseProduct();
      emit(k == Token::Plus ? Expression::Op::Add : Expression::Op::Sub);
    }
  }

  void parseProduct() {
    parseUnary();
    while (peek().kind == Token::Star || peek().kind == Token::Slash) {
      const auto k = take().kind;
      parseUnary();
      emit(k == Token::Star ? Expression::Op::Mul : Expression::Op::Div);
    }
  }

  void parseUnary() {
    if (peek().kind == Token::Minus) {
      take();
      parseUnary();
      emit(Expression::Op::Neg);
      return;
    }
    if (peek().kind == Token::Plus) {
      take();
      parseUnary();
      return;
    }
    parsePower();
  }

  void parsePower() {
    parseAtom();
    if (peek().kind == Token::Caret) {
      take();
      parseUnary();  // right associative, allows x1^-2
      emit(Expression::Op::Pow);
    }
  }

  void parseAtom() {
    const Token t = take();
    switch (t.kind) {
      case Token::Number:
        out_.prog_.push_back({Expression::Op::Push, t.value, 0});
        return;
      case Token::LParen:
        parseSum();
        expect(Token::RParen, "missing ')'");
        return;
      case Token::Ident:
        parseIdent(t.name);
        return;
      default:
        throw ConfigError("expression parse error (unexpected token): " + out_.text_);
    }
  }

  void parseIdent(const std::string& name) {
    if (name == "pi") {
      out_.prog_.push_back({Expression::Op::Push, M_PI, 0});
      return;
    }
    if (name == "e") {
      out_.prog_.push_back({Expression::Op::Push, M_E, 0});
      return;
    }
    Expression::Op fn;
    if (name == "sin") fn = Expression::Op::Sin;
    else if (name == "cos") fn = Expression::Op::Cos;
    else if (name == "exp") fn = Expression::Op::Exp;
    else if (name == "sqrt") fn = Expression::Op::Sqrt;
    else {
      if (name.size() >= 2 && name[0] == 'x') {
        char* end = nullptr;
        const long idx = std::strtol(name.c_str() + 1, &end, 10);
        if (*end == '\0' && idx >= 1) {
          if (idx > dim_)
            throw ConfigError("coordinate " + name + " exceeds chart dimension in: " + out_.text_);
          out_.prog_.push_back({Expression::Op::Coord, 0.0, static_cast<int>(idx - 1)});
          out_.usesCoords_ = true;
          return;
        }
      }
      throw ConfigError("unknown identifier '" + name + "' in expression: " + out_.text_);
    }
    expect(Token::LParen, "function call needs '('");
    parseSum();
    expect(Token::RParen, "missing ')'");
    emit(fn);
  }
};

Expression Expression::compile(const std::string& text, int dim) {
  Expression e;
  e.text_ = text;
  ExprParser(lex(text), dim, e).run();
  int depth = 0, maxDepth = 0;
  for (const Instr& in : e.prog_) {
    switch (in.op) {
      case Op::Push:
      case Op::Coord: ++depth; break;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div:
      case Op::Pow: --depth; break;
      default: break;
    }
    maxDepth = std::max(maxDepth, depth);
  }
  if (maxDepth > 63) throw ConfigError("expression too deeply nested: " + text);
  return e;
}

Expression Expression::constant(double value) {
  Expression e;
  e.text_ = std::to_string(value);
  e.prog_.push_back({Op::Push, value, 0});
  return e;
}

double Expression::operator()(const Eigen::VectorXd& x) const {
  double stack[64];
  int top = -1;
  for (const Instr& in : prog_) {
    switch (in.op) {
      case Op::Push: stack[++top] = in.value; break;
      case Op::Coord: stack[++top] = x[in.index]; break;
      case Op::Add: --top; stack[top] += stack[top + 1]; break;
      case Op::Sub: --top; stack[top] -= stack[top + 1]; break;
      case Op::Mul: --top; stack[top] *= stack[top + 1]; break;
      case Op::Div: --top; stack[top] /= stack[top + 1]; break;
      case Op::Pow: --top; stack[top] = std::pow(stack[top], stack[top + 1]); break;
      case Op::Neg: stack[top] = -stack[top]; break;
      case Op::Sin: stack[top] = std::sin(stack[top]); break;
      case Op::Cos: stack[top] = std::cos(stack[top]); break;
      case Op::Exp: stack[top] = std::exp(stack[top]); break;
      case Op::Sqrt: stack[top] = std::sqrt(stack[top]); break;
    }
  }
  return stack[0];
}

double Expression::evalConstant() const {
  if (usesCoords_) throw ConfigError("expected constant expression: " + text_);
  return (*this)(Eigen::VectorXd());
}

}  // namespace finsler
