#pragma once

/// \file expr.hpp
/// Small arithmetic expression language for forcing and initial data:
/// numbers, the variables t, x, y, r (r is an alias of x), the constant pi,
/// sin, cos, exp, sqrt, + - * / and parentheses.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsi/dual.hpp"

namespace fsi {

class ExprError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class Expr {
public:
    Expr() : src_("0"), prog_{{Op::Num, 0.0}} {}
    static Expr parse(const std::string& src);
    static Expr constant(double v);

    const std::string& source() const { return src_; }
    bool depends_on_space() const { return space_; }

    template <class T>
    T eval(double t, const T& x, const T& y) const;
    double operator()(double t, double x, double y) const { return eval<double>(t, x, y); }

    /// Maximal stack depth the evaluator supports.
    static constexpr int kMaxDepth = 64;

    enum class Op { Num, T, X, Y, Add, Sub, Mul, Div, Neg, Sin, Cos, Exp, Sqrt };
    struct Instr {
        Op op;
        double value;
    };

private:
    std::string src_;
    std::vector<Instr> prog_;
    bool space_ = false;
    friend class ExprParser;
};

template <class T>
T Expr::eval(double t, const T& x, const T& y) const
{
    std::array<T, kMaxDepth> st;
    int sp = 0;
    for (const Instr& in : prog_) {
        switch (in.op) {
        case Op::Num: st[sp++] = T(in.value); break;
        case Op::T: st[sp++] = T(t); break;
        case Op::X: st[sp++] = x; break;
        case Op::Y: st[sp++] = y; break;
        case Op::Add: --sp; st[sp - 1] = st[sp - 1] + st[sp]; break;
        case Op::Sub: --sp; st[sp - 1] = st[sp - 1] - st[sp]; break;
        case Op::Mul: --sp; st[sp - 1] = st[sp - 1] * st[sp]; break;
        case Op::Div: --sp; st[sp - 1] = st[sp - 1] / st[sp]; break;
        case Op::Neg: st[sp - 1] = -st[sp - 1]; break;
        case Op::Sin: st[sp - 1] = sin(st[sp - 1]); break;
        case Op::Cos: st[sp - 1] = cos(st[sp - 1]); break;
        case Op::Exp: {
            using std::exp;
            st[sp - 1] = exp(st[sp - 1]);
            break;
        }
        case Op::Sqrt: st[sp - 1] = sqrt(st[sp - 1]); break;
        }
    }
    return st[0];
}

}  // namespace fsi
