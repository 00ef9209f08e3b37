#include "hlab/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

#include "hlab/errors.hpp"

namespace hlab {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, Expression::Variables allowed)
      : text_(text), allowed_(allowed) {}

  Expression run() {
    Expression e;
    e.source_ = std::string(text_);
    out_ = &e;
    expr();
    skip_space();
    if (pos_ < text_.size()) fail({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
    e.max_depth_ = max_depth_;
    return e;
  }

 private:
  using Op = Expression::Op;

  void expr() {
    term();
    for (;;) {
      skip_space();
      if (accept('+')) {
        term();
        emit(Op::add);
      } else if (accept('-')) {
        term();
        emit(Op::sub);
      } else {
        return;
      }
    }
  }

  void term() {
    factor();
    for (;;) {
      skip_space();
      if (accept('*')) {
        factor();
        emit(Op::mul);
      } else if (accept('/')) {
        factor();
        emit(Op::div);
      } else {
        return;
      }
    }
  }

  void factor() {
    base();
    skip_space();
    if (accept('^')) {
      factor();
      emit(Op::pow);
    }
  }

  void base() {
    skip_space();
    if (pos_ >= text_.size()) fail(base_expected());
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      number();
      return;
    }
    if (c == '(') {
      ++pos_;
      expr();
      expect(')');
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      if (name == "x") {
        emit(Op::load_x);
        return;
      }
      if (name == "y" && allowed_ == Expression::Variables::x_and_y) {
        out_->uses_y_ = true;
        emit(Op::load_y);
        return;
      }
      int arity = 0;
      Op op{};
      if (name == "sqrt") op = Op::sqrt, arity = 1;
      else if (name == "exp") op = Op::exp, arity = 1;
      else if (name == "log") op = Op::log, arity = 1;
      else if (name == "abs") op = Op::abs, arity = 1;
      else if (name == "min") op = Op::min, arity = 2;
      else if (name == "max") op = Op::max, arity = 2;
      else if (name == "pow") op = Op::pow, arity = 2;
      else throw UnknownIdentifierError(name, start + 1);
      skip_space();
      expect('(');
      expr();
      if (arity == 2) {
        skip_space();
        expect(',');
        expr();
      }
      skip_space();
      expect(')');
      emit(op);
      return;
    }
    fail(base_expected());
  }

  void number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
          ++pos_;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    // from_chars rejects a leading '.', so prefix a zero in that case.
    std::string buffer;
    if (*first == '.') {
      buffer = "0" + std::string(first, last);
      first = buffer.data();
      last = buffer.data() + buffer.size();
    }
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail({"number"});
    }
    out_->program_.push_back({Op::push, value});
    bump(1);
  }

  void emit(Op op) {
    out_->program_.push_back({op, 0.0});
    switch (op) {
      case Op::load_x:
      case Op::load_y:
        bump(1);
        break;
      case Op::add:
      case Op::sub:
      case Op::mul:
      case Op::div:
      case Op::pow:
      case Op::min:
      case Op::max:
        bump(-1);
        break;
      default:
        break;
    }
  }

  void bump(int delta) {
    depth_ += delta;
    max_depth_ = std::max(max_depth_, depth_);
  }

  std::vector<std::string> base_expected() const {
    std::vector<std::string> e{"number", "'x'"};
    if (allowed_ == Expression::Variables::x_and_y) e.emplace_back("'y'");
    e.emplace_back("'('");
    e.emplace_back("function");
    return e;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_space();
    if (!accept(c)) fail({std::string("'") + c + "'"});
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string what = "syntax error at position " + std::to_string(pos_ + 1);
    if (pos_ < text_.size())
      what += " near '" + std::string(1, text_[pos_]) + "'";
    else
      what += " (end of input)";
    what += ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) what += i + 1 == expected.size() ? " or " : ", ";
      what += expected[i];
    }
    throw ParseError(what, pos_ + 1, std::move(expected));
  }

  std::string_view text_;
  Expression::Variables allowed_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  int max_depth_ = 0;
  Expression* out_ = nullptr;
};

Expression Expression::parse(std::string_view text, Variables allowed) {
  return ExpressionParser(text, allowed).run();
}

double Expression::operator()(double x, double y) const noexcept {
  constexpr int kInline = 32;
  std::array<double, kInline> small{};
  std::vector<double> large;
  double* stack = small.data();
  if (max_depth_ > kInline) {
    large.resize(static_cast<std::size_t>(max_depth_));
    stack = large.data();
  }
  int top = -1;
  for (const auto& ins : program_) {
    switch (ins.op) {
      case Op::push: stack[++top] = ins.value; break;
      case Op::load_x: stack[++top] = x; break;
      case Op::load_y: stack[++top] = y; break;
      case Op::add: --top; stack[top] += stack[top + 1]; break;
      case Op::sub: --top; stack[top] -= stack[top + 1]; break;
      case Op::mul: --top; stack[top] *= stack[top + 1]; break;
      case Op::div: --top; stack[top] /= stack[top + 1]; break;
      case Op::pow: --top; stack[top] = std::pow(stack[top], stack[top + 1]); break;
      case Op::min: --top; stack[top] = std::min(stack[top], stack[top + 1]); break;
      case Op::max: --top; stack[top] = std::max(stack[top], stack[top + 1]); break;
      case Op::sqrt: stack[top] = std::sqrt(stack[top]); break;
      case Op::exp: stack[top] = std::exp(stack[top]); break;
      case Op::log: stack[top] = std::log(stack[top]); break;
      case Op::abs: stack[top] = std::abs(stack[top]); break;
    }
  }
  return stack[0];
}

bool Expression::is_constant() const noexcept {
  for (const auto& i : program_)
    if (i.op == Op::load_x || i.op == Op::load_y) return false;
  return true;
}

}  // namespace hlab
