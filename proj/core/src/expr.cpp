#include "liftgeo/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <functional>

namespace liftgeo {

namespace {

struct Token {
    enum class Kind { Number, Ident, Op, LParen, RParen, End };
    Kind kind;
    size_t pos;
    std::string text;
    double value = 0.0;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
        tok_.pos = i_;
        if (i_ >= src_.size()) {
            tok_.kind = Token::Kind::End;
            tok_.text.clear();
            return;
        }
        const char c = src_[i_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t j = i_;
            while (j < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[j])) || src_[j] == '.')) ++j;
            if (j < src_.size() && (src_[j] == 'e' || src_[j] == 'E')) {
                size_t k = j + 1;
                if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
                if (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) {
                    ++k;
                    while (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) ++k;
                    j = k;
                }
            }
            tok_.kind = Token::Kind::Number;
            tok_.text = src_.substr(i_, j - i_);
            double v = 0.0;
            auto res = std::from_chars(tok_.text.data(), tok_.text.data() + tok_.text.size(), v);
            if (res.ec != std::errc() || res.ptr != tok_.text.data() + tok_.text.size())
                throw SyntaxError(i_, "malformed number '" + tok_.text + "'");
            tok_.value = v;
            i_ = j;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i_;
            while (j < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
                ++j;
            tok_.kind = Token::Kind::Ident;
            tok_.text = src_.substr(i_, j - i_);
            i_ = j;
            return;
        }
        if (c == '(') {
            tok_.kind = Token::Kind::LParen;
            tok_.text = "(";
            ++i_;
            return;
        }
        if (c == ')') {
            tok_.kind = Token::Kind::RParen;
            tok_.text = ")";
            ++i_;
            return;
        }
        if (std::strchr("+-*/^", c)) {
            tok_.kind = Token::Kind::Op;
            tok_.text = std::string(1, c);
            ++i_;
            return;
        }
        throw SyntaxError(i_, std::string("unexpected character '") + c + "'");
    }

    const std::string& src_;
    size_t i_ = 0;
    Token tok_;
};

ExprPtr make_const(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Constant;
    n->cvalue = v;
    return n;
}

ExprPtr make_var(int index, bool fiber) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Variable;
    n->var_index = index;
    n->var_fiber = fiber;
    return n;
}

ExprPtr make_unary(UnaryFn fn, ExprPtr a) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Unary;
    n->fn = fn;
    n->lhs = std::move(a);
    return n;
}

ExprPtr make_binary(BinOp op, ExprPtr a, ExprPtr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Binary;
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

ExprPtr make_power(ExprPtr base, double exponent) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Power;
    n->exponent = exponent;
    n->lhs = std::move(base);
    return n;
}

class Parser {
public:
    Parser(const std::string& src, int dim, bool fiber_ok)
        : lex_(src), dim_(dim), fiber_ok_(fiber_ok) {}

    ExprPtr parse_all() {
        ExprPtr e = parse_sum();
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::End)
            throw SyntaxError(t.pos, "unexpected trailing input '" + t.text + "'");
        return e;
    }

private:
    ExprPtr parse_sum() {
        ExprPtr e = parse_product();
        while (lex_.peek().kind == Token::Kind::Op &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            const bool add = lex_.take().text == "+";
            ExprPtr r = parse_product();
            e = make_binary(add ? BinOp::Add : BinOp::Sub, e, r);
        }
        return e;
    }

    ExprPtr parse_product() {
        ExprPtr e = parse_unary();
        while (lex_.peek().kind == Token::Kind::Op &&
               (lex_.peek().text == "*" || lex_.peek().text == "/")) {
            const bool mul = lex_.take().text == "*";
            ExprPtr r = parse_unary();
            e = make_binary(mul ? BinOp::Mul : BinOp::Div, e, r);
        }
        return e;
    }

    ExprPtr parse_unary() {
        if (lex_.peek().kind == Token::Kind::Op && lex_.peek().text == "-") {
            lex_.take();
            return make_unary(UnaryFn::Neg, parse_unary());
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr e = parse_atom();
        while (lex_.peek().kind == Token::Kind::Op && lex_.peek().text == "^") {
            lex_.take();
            e = make_power(e, parse_exponent());
        }
        return e;
    }

    // Exponent: a numeric literal with optional sign, possibly parenthesized.
    // Only integers and 0.5 are accepted; anything else must be spelled
    // through exp/log by the caller.
    double parse_exponent() {
        bool paren = false;
        if (lex_.peek().kind == Token::Kind::LParen) {
            paren = true;
            lex_.take();
        }
        double sign = 1.0;
        while (lex_.peek().kind == Token::Kind::Op && lex_.peek().text == "-") {
            lex_.take();
            sign = -sign;
        }
        const Token t = lex_.take();
        if (t.kind != Token::Kind::Number)
            throw SyntaxError(t.pos, "exponent must be a numeric literal");
        const double e = sign * t.value;
        const bool is_int = std::rint(e) == e && std::fabs(e) < 1e9;
        if (!is_int && e != 0.5)
            throw SyntaxError(t.pos,
                              "exponent must be an integer or 0.5; use exp/log for general powers");
        if (paren) {
            const Token r = lex_.take();
            if (r.kind != Token::Kind::RParen) throw SyntaxError(r.pos, "expected ')' in exponent");
        }
        return e;
    }

    ExprPtr parse_atom() {
        const Token t = lex_.take();
        switch (t.kind) {
            case Token::Kind::Number:
                return make_const(t.value);
            case Token::Kind::LParen: {
                ExprPtr e = parse_sum();
                const Token r = lex_.take();
                if (r.kind != Token::Kind::RParen) throw SyntaxError(r.pos, "expected ')'");
                return e;
            }
            case Token::Kind::Ident:
                return parse_ident(t);
            default:
                throw SyntaxError(t.pos, "expected operand");
        }
    }

    ExprPtr parse_ident(const Token& t) {
        static const std::pair<const char*, UnaryFn> fns[] = {
            {"sin", UnaryFn::Sin},   {"cos", UnaryFn::Cos},   {"tan", UnaryFn::Tan},
            {"exp", UnaryFn::Exp},   {"log", UnaryFn::Log},   {"sqrt", UnaryFn::Sqrt},
            {"sinh", UnaryFn::Sinh}, {"cosh", UnaryFn::Cosh}, {"tanh", UnaryFn::Tanh},
            {"abs", UnaryFn::Abs}};
        for (const auto& [name, fn] : fns) {
            if (t.text == name) {
                const Token l = lex_.take();
                if (l.kind != Token::Kind::LParen)
                    throw SyntaxError(l.pos, "expected '(' after function name");
                ExprPtr arg = parse_sum();
                const Token r = lex_.take();
                if (r.kind != Token::Kind::RParen) throw SyntaxError(r.pos, "expected ')'");
                return make_unary(fn, arg);
            }
        }
        if ((t.text[0] == 'x' || t.text[0] == 'y') && t.text.size() > 1) {
            bool digits = true;
            for (size_t i = 1; i < t.text.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(t.text[i]))) digits = false;
            if (digits) {
                const bool fiber = t.text[0] == 'y';
                if (fiber && !fiber_ok_)
                    throw UnknownIdentifier(t.pos, "fiber variable '" + t.text +
                                                       "' not allowed in this context");
                int index = 0;
                try {
                    index = std::stoi(t.text.substr(1));
                } catch (const std::exception&) {
                    index = dim_;  // out-of-range literal: treat as exceeding
                }
                if (index >= dim_)
                    throw DimensionExceeded(t.pos, "variable '" + t.text + "' exceeds dimension " +
                                                       std::to_string(dim_));
                return make_var(index, fiber);
            }
        }
        throw UnknownIdentifier(t.pos, "unknown identifier '" + t.text + "'");
    }

    Lexer lex_;
    int dim_;
    bool fiber_ok_;
};

double eval_node(const ExprNode& n, std::span<const double> x, std::span<const double> y) {
    switch (n.kind) {
        case ExprNode::Kind::Constant:
            return n.cvalue;
        case ExprNode::Kind::Variable:
            return n.var_fiber ? y[n.var_index] : x[n.var_index];
        case ExprNode::Kind::Unary: {
            const double u = eval_node(*n.lhs, x, y);
            switch (n.fn) {
                case UnaryFn::Neg: return -u;
                case UnaryFn::Sin: return std::sin(u);
                case UnaryFn::Cos: return std::cos(u);
                case UnaryFn::Tan: return std::tan(u);
                case UnaryFn::Exp: return std::exp(u);
                case UnaryFn::Log:
                    if (u <= 0.0) throw DomainError("log of non-positive value");
                    return std::log(u);
                case UnaryFn::Sqrt:
                    if (u < 0.0) throw DomainError("sqrt of negative value");
                    return std::sqrt(u);
                case UnaryFn::Sinh: return std::sinh(u);
                case UnaryFn::Cosh: return std::cosh(u);
                case UnaryFn::Tanh: return std::tanh(u);
                case UnaryFn::Abs: return std::fabs(u);
            }
            break;
        }
        case ExprNode::Kind::Binary: {
            const double a = eval_node(*n.lhs, x, y);
            const double b = eval_node(*n.rhs, x, y);
            switch (n.op) {
                case BinOp::Add: return a + b;
                case BinOp::Sub: return a - b;
                case BinOp::Mul: return a * b;
                case BinOp::Div:
                    if (b == 0.0) throw DomainError("division by zero");
                    return a / b;
            }
            break;
        }
        case ExprNode::Kind::Power: {
            const double a = eval_node(*n.lhs, x, y);
            if (n.exponent == 0.5) {
                if (a < 0.0) throw DomainError("sqrt of negative value");
                return std::sqrt(a);
            }
            return std::pow(a, n.exponent);
        }
    }
    return 0.0;
}

Jet eval_node_jet(const ExprNode& n, std::span<const double> x, std::span<const double> y,
                  int nvars, int order, int fiber_offset) {
    switch (n.kind) {
        case ExprNode::Kind::Constant:
            return Jet::constant(nvars, order, n.cvalue);
        case ExprNode::Kind::Variable:
            return n.var_fiber
                       ? Jet::variable(nvars, order, fiber_offset + n.var_index, y[n.var_index])
                       : Jet::variable(nvars, order, n.var_index, x[n.var_index]);
        case ExprNode::Kind::Unary: {
            Jet u = eval_node_jet(*n.lhs, x, y, nvars, order, fiber_offset);
            switch (n.fn) {
                case UnaryFn::Neg: return -u;
                case UnaryFn::Sin: return sin(u);
                case UnaryFn::Cos: return cos(u);
                case UnaryFn::Tan: return tan(u);
                case UnaryFn::Exp: return exp(u);
                case UnaryFn::Log: return log(u);
                case UnaryFn::Sqrt: return sqrt(u);
                case UnaryFn::Sinh: return sinh(u);
                case UnaryFn::Cosh: return cosh(u);
                case UnaryFn::Tanh: return tanh(u);
                case UnaryFn::Abs: return abs(u);
            }
            break;
        }
        case ExprNode::Kind::Binary: {
            Jet a = eval_node_jet(*n.lhs, x, y, nvars, order, fiber_offset);
            Jet b = eval_node_jet(*n.rhs, x, y, nvars, order, fiber_offset);
            switch (n.op) {
                case BinOp::Add: return a + b;
                case BinOp::Sub: return a - b;
                case BinOp::Mul: return a * b;
                case BinOp::Div: return a / b;
            }
            break;
        }
        case ExprNode::Kind::Power: {
            Jet a = eval_node_jet(*n.lhs, x, y, nvars, order, fiber_offset);
            if (n.exponent == 0.5) return sqrt(a);
            return pow_int(a, static_cast<long long>(n.exponent));
        }
    }
    return Jet::constant(nvars, order, 0.0);
}

int node_prec(const ExprNode& n) {
    switch (n.kind) {
        case ExprNode::Kind::Constant:
        case ExprNode::Kind::Variable:
            return 5;
        case ExprNode::Kind::Power:
            return 4;
        case ExprNode::Kind::Unary:
            return n.fn == UnaryFn::Neg ? 3 : 5;
        case ExprNode::Kind::Binary:
            return (n.op == BinOp::Mul || n.op == BinOp::Div) ? 2 : 1;
    }
    return 5;
}

void print_number(std::string& out, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

void print_node(std::string& out, const ExprNode& n, int parent_prec) {
    const int prec = node_prec(n);
    const bool paren = prec < parent_prec;
    if (paren) out += '(';
    switch (n.kind) {
        case ExprNode::Kind::Constant:
            if (n.cvalue < 0.0) {
                out += '(';
                print_number(out, n.cvalue);
                out += ')';
            } else {
                print_number(out, n.cvalue);
            }
            break;
        case ExprNode::Kind::Variable:
            out += n.var_fiber ? 'y' : 'x';
            out += std::to_string(n.var_index);
            break;
        case ExprNode::Kind::Unary:
            if (n.fn == UnaryFn::Neg) {
                out += '-';
                print_node(out, *n.lhs, 3);
            } else {
                static const char* names[] = {"",    "sin",  "cos",  "tan",  "exp", "log",
                                              "sqrt", "sinh", "cosh", "tanh", "abs"};
                out += names[static_cast<int>(n.fn)];
                out += '(';
                print_node(out, *n.lhs, 0);
                out += ')';
            }
            break;
        case ExprNode::Kind::Binary: {
            const char* ops[] = {" + ", " - ", "*", "/"};
            print_node(out, *n.lhs, prec);
            out += ops[static_cast<int>(n.op)];
            // Left-associative: the right operand needs strictly higher binding.
            print_node(out, *n.rhs, prec + 1);
            break;
        }
        case ExprNode::Kind::Power:
            print_node(out, *n.lhs, 5);
            out += '^';
            if (n.exponent < 0.0) {
                out += '(';
                print_number(out, n.exponent);
                out += ')';
            } else {
                print_number(out, n.exponent);
            }
            break;
    }
    if (paren) out += ')';
}

bool node_equal(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprNode::Kind::Constant:
            return a.cvalue == b.cvalue;
        case ExprNode::Kind::Variable:
            return a.var_index == b.var_index && a.var_fiber == b.var_fiber;
        case ExprNode::Kind::Unary:
            return a.fn == b.fn && node_equal(*a.lhs, *b.lhs);
        case ExprNode::Kind::Binary:
            return a.op == b.op && node_equal(*a.lhs, *b.lhs) && node_equal(*a.rhs, *b.rhs);
        case ExprNode::Kind::Power:
            return a.exponent == b.exponent && node_equal(*a.lhs, *b.lhs);
    }
    return false;
}

bool node_uses_fiber(const ExprNode& n) {
    switch (n.kind) {
        case ExprNode::Kind::Constant:
            return false;
        case ExprNode::Kind::Variable:
            return n.var_fiber;
        case ExprNode::Kind::Unary:
        case ExprNode::Kind::Power:
            return node_uses_fiber(*n.lhs);
        case ExprNode::Kind::Binary:
            return node_uses_fiber(*n.lhs) || node_uses_fiber(*n.rhs);
    }
    return false;
}

}  // namespace

ScalarField parse(const std::string& source, int dim, bool allow_fiber_vars) {
    if (source.empty()) throw SyntaxError(0, "empty expression");
    Parser p(source, dim, allow_fiber_vars);
    ScalarField f;
    f.dim_ = dim;
    f.fiber_ok_ = allow_fiber_vars;
    f.root_ = p.parse_all();
    return f;
}

ScalarField constant_field(int dim, double value, bool allow_fiber_vars) {
    ScalarField f;
    f.dim_ = dim;
    f.fiber_ok_ = allow_fiber_vars;
    f.root_ = make_const(value);
    return f;
}

bool ScalarField::uses_fiber_vars() const { return root_ && node_uses_fiber(*root_); }

double ScalarField::eval(std::span<const double> x, std::span<const double> y) const {
    const double v = eval_node(*root_, x, y);
    if (!std::isfinite(v)) throw DomainError("expression evaluated to a non-finite value");
    return v;
}

Jet ScalarField::eval_jet(std::span<const double> x, int order) const {
    Jet j = eval_node_jet(*root_, x, {}, dim_, order, dim_);
    if (!j.finite()) throw DomainError("expression jet has a non-finite component");
    return j;
}

Jet ScalarField::eval_jet_tm(std::span<const double> x, std::span<const double> y,
                             int order) const {
    Jet j = eval_node_jet(*root_, x, y, 2 * dim_, order, dim_);
    if (!j.finite()) throw DomainError("expression jet has a non-finite component");
    return j;
}

std::string ScalarField::print() const {
    std::string out;
    print_node(out, *root_, 0);
    return out;
}

bool ast_equal(const ScalarField& a, const ScalarField& b) {
    return a.dim_ == b.dim_ && node_equal(*a.root_, *b.root_);
}

}  // namespace liftgeo
