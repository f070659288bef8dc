#include "wso/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "wso/format.hpp"

namespace wso {

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

class ExprParser {
public:
    ExprParser(std::string_view src, int arity) : src_(src), arity_(arity) {}

    Expr run() {
        if (src_.empty())
            throw ParseError(0, "empty expression");
        Expr e;
        e.arity_ = arity_;
        out_ = &e;
        e.root_ = parse_expr();
        skip_ws();
        if (pos_ != src_.size())
            throw ParseError(pos_, "expected end of input, operator, or ')'");
        return e;
    }

private:
    int parse_expr() {
        int lhs = parse_term();
        for (;;) {
            skip_ws();
            if (peek() == '+' || peek() == '-') {
                char op = take();
                int rhs = parse_term();
                lhs = add_node(op == '+' ? BinaryOp::Add : BinaryOp::Sub, lhs, rhs);
            } else {
                return lhs;
            }
        }
    }

    int parse_term() {
        int lhs = parse_factor();
        for (;;) {
            skip_ws();
            if (peek() == '*' || peek() == '/') {
                char op = take();
                int rhs = parse_factor();
                lhs = add_node(op == '*' ? BinaryOp::Mul : BinaryOp::Div, lhs, rhs);
            } else {
                return lhs;
            }
        }
    }

    int parse_factor() {
        int base = parse_atom();
        skip_ws();
        if (peek() == '^') {
            take();
            skip_ws();
            // Exponents are numeric literals; a leading '-' is accepted here
            // (and only here) so reciprocal powers stay writable.
            bool negate = false;
            if (peek() == '-') {
                take();
                negate = true;
            }
            double expo = parse_number_literal();
            Expr::Node n;
            n.kind = Expr::Kind::Pow;
            n.value = negate ? -expo : expo;
            n.a = base;
            return push(n);
        }
        return base;
    }

    int parse_atom() {
        skip_ws();
        if (pos_ >= src_.size())
            throw ParseError(pos_, "expected number, identifier, or '('");
        char c = peek();
        if (c == '(') {
            take();
            int inner = parse_expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Expr::Node n;
            n.kind = Expr::Kind::Const;
            n.value = parse_number_literal();
            return push(n);
        }
        if (std::isalpha(static_cast<unsigned char>(c)))
            return parse_ident();
        throw ParseError(pos_, std::string("unexpected character '") + c +
                                   "', expected number, identifier, or '('");
    }

    int parse_ident() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        std::string_view name = src_.substr(start, pos_ - start);

        if (name.size() >= 2 && name[0] == 'x' &&
            std::isdigit(static_cast<unsigned char>(name[1]))) {
            int index = 0;
            auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
            if (ec == std::errc() && ptr == name.data() + name.size()) {
                if (index < 1 || index > arity_)
                    throw ParseError(start, "variable " + std::string(name) +
                                                " exceeds declared arity " +
                                                std::to_string(arity_));
                Expr::Node n;
                n.kind = Expr::Kind::Var;
                n.var = index - 1;
                return push(n);
            }
        }

        UnaryOp op;
        if (name == "abs") op = UnaryOp::Abs;
        else if (name == "exp") op = UnaryOp::Exp;
        else if (name == "ln") op = UnaryOp::Ln;
        else if (name == "sqrt") op = UnaryOp::Sqrt;
        else
            throw ParseError(start, "unknown identifier '" + std::string(name) + "'");

        expect('(');
        int arg = parse_expr();
        expect(')');
        Expr::Node n;
        n.kind = Expr::Kind::Unary;
        n.uop = op;
        n.a = arg;
        return push(n);
    }

    double parse_number_literal() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(peek())))
            throw ParseError(pos_, "expected number");
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
                throw ParseError(pos_, "expected digit after decimal point");
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
                throw ParseError(pos_, "expected digit in exponent");
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (ec != std::errc() || ptr != src_.data() + pos_)
            throw ParseError(start, "malformed number");
        return value;
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= src_.size() || src_[pos_] != c)
            throw ParseError(pos_, std::string("expected '") + c + "'");
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
    }

    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
    char take() { return src_[pos_++]; }

    int push(const Expr::Node& n) {
        out_->nodes_.push_back(n);
        return static_cast<int>(out_->nodes_.size()) - 1;
    }

    int add_node(BinaryOp op, int a, int b) {
        Expr::Node n;
        n.kind = Expr::Kind::Binary;
        n.bop = op;
        n.a = a;
        n.b = b;
        return push(n);
    }

    std::string_view src_;
    int arity_;
    std::size_t pos_ = 0;
    Expr* out_ = nullptr;
};

Expr Expr::parse(std::string_view source, int arity) {
    if (arity < 0)
        throw ValidationError("arity must be nonnegative");
    return ExprParser(source, arity).run();
}

// ---------------------------------------------------------------------------
// Programmatic construction
// ---------------------------------------------------------------------------

Expr Expr::constant(double value) {
    Expr e;
    Node n;
    n.kind = Kind::Const;
    n.value = value;
    e.nodes_.push_back(n);
    e.root_ = 0;
    return e;
}

Expr Expr::variable(int index, int arity) {
    if (index < 1 || index > arity)
        throw ValidationError("variable index out of range");
    Expr e;
    e.arity_ = arity;
    Node n;
    n.kind = Kind::Var;
    n.var = index - 1;
    e.nodes_.push_back(n);
    e.root_ = 0;
    return e;
}

Expr Expr::with_arity(int arity) const {
    if (arity < arity_)
        throw ValidationError("with_arity cannot shrink the declared arity");
    Expr e = *this;
    e.arity_ = arity;
    return e;
}

int Expr::merge(const Expr& other) {
    const int offset = static_cast<int>(nodes_.size());
    for (Node n : other.nodes_) {
        if (n.a >= 0) n.a += offset;
        if (n.b >= 0) n.b += offset;
        nodes_.push_back(n);
    }
    if (other.arity_ > arity_) arity_ = other.arity_;
    return other.root_ + offset;
}

Expr Expr::unary(UnaryOp op, Expr operand) {
    Expr e = std::move(operand);
    Node n;
    n.kind = Kind::Unary;
    n.uop = op;
    n.a = e.root_;
    e.nodes_.push_back(n);
    e.root_ = static_cast<int>(e.nodes_.size()) - 1;
    return e;
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
    Expr e = std::move(lhs);
    int rhs_root = e.merge(rhs);
    Node n;
    n.kind = Kind::Binary;
    n.bop = op;
    n.a = e.root_;
    n.b = rhs_root;
    e.nodes_.push_back(n);
    e.root_ = static_cast<int>(e.nodes_.size()) - 1;
    return e;
}

Expr Expr::pow(Expr base, double exponent) {
    Expr e = std::move(base);
    Node n;
    n.kind = Kind::Pow;
    n.value = exponent;
    n.a = e.root_;
    e.nodes_.push_back(n);
    e.root_ = static_cast<int>(e.nodes_.size()) - 1;
    return e;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

double Expr::eval(std::span<const double> point) const {
    if (static_cast<int>(point.size()) != arity_)
        throw ValidationError("point length " + std::to_string(point.size()) +
                              " does not match arity " + std::to_string(arity_));
    return eval_node(root_, point);
}

double Expr::eval_scalar(double x) const { return eval(std::span<const double>(&x, 1)); }

double Expr::eval_node(int id, std::span<const double> point) const {
    const Node& n = nodes_[id];
    switch (n.kind) {
        case Kind::Const:
            return n.value;
        case Kind::Var:
            return point[n.var];
        case Kind::Unary: {
            double v = eval_node(n.a, point);
            switch (n.uop) {
                case UnaryOp::Neg: return -v;
                case UnaryOp::Abs: return std::fabs(v);
                case UnaryOp::Exp: return std::exp(v);
                case UnaryOp::Ln:
                    if (!(v > 0.0))
                        throw EvalError("ln of non-positive value " + format_double(v));
                    return std::log(v);
                case UnaryOp::Sqrt:
                    if (v < 0.0)
                        throw EvalError("sqrt of negative value " + format_double(v));
                    return std::sqrt(v);
            }
            break;
        }
        case Kind::Binary: {
            double a = eval_node(n.a, point);
            double b = eval_node(n.b, point);
            switch (n.bop) {
                case BinaryOp::Add: return a + b;
                case BinaryOp::Sub: return a - b;
                case BinaryOp::Mul: return a * b;
                case BinaryOp::Div:
                    if (b == 0.0) throw EvalError("division by zero");
                    return a / b;
            }
            break;
        }
        case Kind::Pow: {
            double base = eval_node(n.a, point);
            double r = std::pow(base, n.value);
            if (!std::isfinite(r))
                throw EvalError("pow(" + format_double(base) + ", " + format_double(n.value) +
                                ") is not finite");
            return r;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();  // unreachable
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {
constexpr int kPrecSum = 1;
constexpr int kPrecProduct = 2;
constexpr int kPrecPow = 3;
constexpr int kPrecAtom = 4;
}  // namespace

std::string Expr::str() const {
    std::string out;
    print_node(root_, out, 0, false);
    return out;
}

void Expr::print_node(int id, std::string& out, int parent_prec, bool parenthesize_same) const {
    const Node& n = nodes_[id];
    switch (n.kind) {
        case Kind::Const:
            out += format_double(n.value);
            return;
        case Kind::Var:
            out += "x" + std::to_string(n.var + 1);
            return;
        case Kind::Unary: {
            if (n.uop == UnaryOp::Neg) {
                // The grammar has no unary minus; render negation as a
                // subtraction from zero so the output stays parseable. The
                // parenthesization must match what a sub(0, e) node would
                // print, or printing would not be idempotent.
                bool need = parent_prec > kPrecSum || (parent_prec == kPrecSum && parenthesize_same);
                if (need) out += "(";
                out += "0 - ";
                print_node(n.a, out, kPrecSum, true);
                if (need) out += ")";
                return;
            }
            switch (n.uop) {
                case UnaryOp::Abs: out += "abs("; break;
                case UnaryOp::Exp: out += "exp("; break;
                case UnaryOp::Ln: out += "ln("; break;
                case UnaryOp::Sqrt: out += "sqrt("; break;
                case UnaryOp::Neg: break;
            }
            print_node(n.a, out, 0, false);
            out += ")";
            return;
        }
        case Kind::Binary: {
            int prec = (n.bop == BinaryOp::Add || n.bop == BinaryOp::Sub) ? kPrecSum : kPrecProduct;
            bool need = parent_prec > prec || (parent_prec == prec && parenthesize_same);
            if (need) out += "(";
            print_node(n.a, out, prec, false);
            switch (n.bop) {
                case BinaryOp::Add: out += " + "; break;
                case BinaryOp::Sub: out += " - "; break;
                case BinaryOp::Mul: out += " * "; break;
                case BinaryOp::Div: out += " / "; break;
            }
            // Always parenthesize a same-precedence right operand: floating
            // point addition is not associative, so grouping must survive a
            // print/parse round trip bit-exactly.
            print_node(n.b, out, prec, true);
            if (need) out += ")";
            return;
        }
        case Kind::Pow: {
            bool need = parent_prec >= kPrecPow;
            if (need) out += "(";
            const Node& base = nodes_[n.a];
            if (base.kind == Kind::Const || base.kind == Kind::Var) {
                print_node(n.a, out, kPrecPow, true);
            } else {
                out += "(";
                print_node(n.a, out, 0, false);
                out += ")";
            }
            out += "^" + format_double(n.value);
            if (need) out += ")";
            return;
        }
    }
}

}  // namespace wso
