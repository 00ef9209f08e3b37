#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hlab {

/// Arithmetic expression in the variables x and y, compiled to a postfix program.
///
/// Grammar (whitespace ignored):
///   expr   := term (('+' | '-') term)*
///   term   := factor (('*' | '/') factor)*
///   factor := base ('^' factor)?
///   base   := number | 'x' | 'y' | '(' expr ')' | func '(' args ')'
///   func   := sqrt | exp | log | abs  (one argument)  |  min | max | pow  (two)
///
/// Errors carry the 1-based character position of the offending token.
class Expression {
 public:
  enum class Variables { x_only, x_and_y };

  static Expression parse(std::string_view text, Variables allowed = Variables::x_and_y);

  double operator()(double x, double y = 0.0) const noexcept;

  const std::string& source() const noexcept { return source_; }
  bool uses_y() const noexcept { return uses_y_; }
  /// True when neither x nor y appears.
  bool is_constant() const noexcept;

 private:
  enum class Op : std::uint8_t {
    push, load_x, load_y, add, sub, mul, div, pow, sqrt, exp, log, abs, min, max
  };
  struct Instr {
    Op op;
    double value;
  };
  friend class ExpressionParser;

  std::string source_;
  std::vector<Instr> program_;
  int max_depth_ = 0;
  bool uses_y_ = false;
};

}  // namespace hlab
