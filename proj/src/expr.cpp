#include "fsi/expr.hpp"

#include <cctype>
#include <cstdlib>
#include <numbers>

#include "fsi/format.hpp"

namespace fsi {

class ExprParser {
public:
    explicit ExprParser(const std::string& s) : s_(s) {}

    Expr run()
    {
        Expr e;
        e.src_ = s_;
        e.prog_.clear();
        out_ = &e.prog_;
        expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        if (max_depth_ > Expr::kMaxDepth) fail("expression nests too deeply");
        for (const auto& in : e.prog_)
            if (in.op == Expr::Op::X || in.op == Expr::Op::Y) e.space_ = true;
        return e;
    }

private:
    void fail(const std::string& msg) const
    {
        throw ExprError("in expression '" + s_ + "' at column " + std::to_string(pos_ + 1) + ": " + msg);
    }
    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void emit(Expr::Op op, double v = 0.0, int delta = 0)
    {
        out_->push_back({op, v});
        depth_ += delta;
        max_depth_ = std::max(max_depth_, depth_);
    }

    void expr()
    {
        term();
        for (;;) {
            if (accept('+')) { term(); emit(Expr::Op::Add, 0, -1); }
            else if (accept('-')) { term(); emit(Expr::Op::Sub, 0, -1); }
            else return;
        }
    }
    void term()
    {
        unary();
        for (;;) {
            if (accept('*')) { unary(); emit(Expr::Op::Mul, 0, -1); }
            else if (accept('/')) { unary(); emit(Expr::Op::Div, 0, -1); }
            else return;
        }
    }
    void unary()
    {
        if (accept('-')) { unary(); emit(Expr::Op::Neg); return; }
        if (accept('+')) { unary(); return; }
        primary();
    }
    void primary()
    {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (accept('(')) {
            expr();
            if (!accept(')')) fail("expected ')'");
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("malformed number");
            pos_ += static_cast<std::size_t>(end - begin);
            emit(Expr::Op::Num, v, 1);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t b = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string id = s_.substr(b, pos_ - b);
            if (id == "t") return emit(Expr::Op::T, 0, 1);
            if (id == "x" || id == "r") return emit(Expr::Op::X, 0, 1);
            if (id == "y") return emit(Expr::Op::Y, 0, 1);
            if (id == "pi") return emit(Expr::Op::Num, std::numbers::pi, 1);
            Expr::Op op;
            if (id == "sin") op = Expr::Op::Sin;
            else if (id == "cos") op = Expr::Op::Cos;
            else if (id == "exp") op = Expr::Op::Exp;
            else if (id == "sqrt") op = Expr::Op::Sqrt;
            else {
                pos_ = b;
                fail("unknown identifier '" + id + "'");
            }
            if (!accept('(')) fail("expected '(' after " + id);
            expr();
            if (!accept(')')) fail("expected ')'");
            emit(op);
            return;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    std::vector<Expr::Instr>* out_ = nullptr;
    int depth_ = 0, max_depth_ = 0;
};

Expr Expr::parse(const std::string& src) { return ExprParser(src).run(); }

Expr Expr::constant(double v) { return parse(fmt17(v)); }

}  // namespace fsi
