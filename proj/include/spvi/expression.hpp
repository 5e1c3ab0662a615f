#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spvi {

/// Tiny arithmetic grammar for problem descriptors. Supports numbers, the
/// variables x, y and r = sqrt(x^2 + y^2), the operators + - * / and unary
/// minus, exp/ln/sqrt, parentheses, and one comparison (<=, <, >=, >) at the
/// top level for piecewise predicates (result 1 or 0). Compiled to a small
/// stack program.
class Expression {
public:
    static Expression parse(const std::string& text);
    double operator()(double x, double y) const;

private:
    enum class Op : unsigned char {
        PushConst, PushX, PushY, PushR,
        Add, Sub, Mul, Div, Neg,
        Exp, Ln, Sqrt,
        Le, Lt, Ge, Gt,
    };
    struct Instr {
        Op op;
        double value = 0.0;
    };
    std::vector<Instr> program_;
    friend class ExpressionParser;
};

class ExpressionError : public std::runtime_error {
public:
    explicit ExpressionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spvi
