#include "spvi/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace spvi {

class ExpressionParser {
public:
    explicit ExpressionParser(const std::string& text) : text_(text) {}

    Expression run() {
        Expression e;
        out_ = &e.program_;
        comparison();
        skip_space();
        if (pos_ != text_.size())
            throw ExpressionError("unexpected input at '" + text_.substr(pos_) + "'");
        return e;
    }

private:
    using Op = decltype(Expression::Instr::op);

    void comparison() {
        additive();
        skip_space();
        if (match("<=")) { additive(); emit(Op::Le); }
        else if (match(">=")) { additive(); emit(Op::Ge); }
        else if (match("<")) { additive(); emit(Op::Lt); }
        else if (match(">")) { additive(); emit(Op::Gt); }
    }

    void additive() {
        multiplicative();
        while (true) {
            skip_space();
            if (match("+")) { multiplicative(); emit(Op::Add); }
            else if (match("-")) { multiplicative(); emit(Op::Sub); }
            else break;
        }
    }

    void multiplicative() {
        unary();
        while (true) {
            skip_space();
            if (match("*")) { unary(); emit(Op::Mul); }
            else if (match("/")) { unary(); emit(Op::Div); }
            else break;
        }
    }

    void unary() {
        skip_space();
        if (match("-")) {
            unary();
            emit(Op::Neg);
            return;
        }
        primary();
    }

    void primary() {
        skip_space();
        if (pos_ >= text_.size()) throw ExpressionError("unexpected end of expression");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            char* end = nullptr;
            const double v = std::strtod(text_.c_str() + pos_, &end);
            pos_ = static_cast<std::size_t>(end - text_.c_str());
            emit_const(v);
            return;
        }
        if (match("(")) {
            comparison();
            expect(")");
            return;
        }
        if (match_word("exp")) { function(Op::Exp); return; }
        if (match_word("ln")) { function(Op::Ln); return; }
        if (match_word("sqrt")) { function(Op::Sqrt); return; }
        if (match_word("x")) { emit(Op::PushX); return; }
        if (match_word("y")) { emit(Op::PushY); return; }
        if (match_word("r")) { emit(Op::PushR); return; }
        throw ExpressionError("unexpected character '" + std::string(1, c) + "'");
    }

    void function(Op op) {
        skip_space();
        expect("(");
        comparison();
        expect(")");
        emit(op);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool match(const char* s) {
        const std::size_t len = std::char_traits<char>::length(s);
        if (text_.compare(pos_, len, s) == 0) {
            pos_ += len;
            return true;
        }
        return false;
    }
    // Word match that does not eat the prefix of a longer identifier.
    bool match_word(const char* s) {
        const std::size_t len = std::char_traits<char>::length(s);
        if (text_.compare(pos_, len, s) != 0) return false;
        const std::size_t next = pos_ + len;
        if (next < text_.size() &&
            (std::isalnum(static_cast<unsigned char>(text_[next])) || text_[next] == '_'))
            return false;
        pos_ += len;
        return true;
    }
    void expect(const char* s) {
        skip_space();
        if (!match(s)) throw ExpressionError(std::string("expected '") + s + "'");
    }
    void emit(Op op) { out_->push_back({op, 0.0}); }
    void emit_const(double v) { out_->push_back({Op::PushConst, v}); }

    const std::string& text_;
    std::size_t pos_ = 0;
    std::vector<Expression::Instr>* out_ = nullptr;
};

Expression Expression::parse(const std::string& text) {
    return ExpressionParser(text).run();
}

double Expression::operator()(double x, double y) const {
    double stack[64];
    int top = -1;
    for (const Instr& in : program_) {
        switch (in.op) {
            case Op::PushConst: stack[++top] = in.value; break;
            case Op::PushX: stack[++top] = x; break;
            case Op::PushY: stack[++top] = y; break;
            case Op::PushR: stack[++top] = std::hypot(x, y); break;
            case Op::Neg: stack[top] = -stack[top]; break;
            case Op::Exp: stack[top] = std::exp(stack[top]); break;
            case Op::Ln: stack[top] = std::log(stack[top]); break;
            case Op::Sqrt: stack[top] = std::sqrt(stack[top]); break;
            default: {
                const double b = stack[top--];
                const double a = stack[top];
                switch (in.op) {
                    case Op::Add: stack[top] = a + b; break;
                    case Op::Sub: stack[top] = a - b; break;
                    case Op::Mul: stack[top] = a * b; break;
                    case Op::Div: stack[top] = a / b; break;
                    case Op::Le: stack[top] = a <= b ? 1.0 : 0.0; break;
                    case Op::Lt: stack[top] = a < b ? 1.0 : 0.0; break;
                    case Op::Ge: stack[top] = a >= b ? 1.0 : 0.0; break;
                    case Op::Gt: stack[top] = a > b ? 1.0 : 0.0; break;
                    default: break;
                }
            }
        }
    }
    return stack[top];
}

}  // namespace spvi
