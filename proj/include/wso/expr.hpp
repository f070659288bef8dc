#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wso/errors.hpp"

namespace wso {

enum class UnaryOp { Neg, Abs, Exp, Ln, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div };

// Immutable arithmetic expression over variables x1..xm.
//
// Grammar (standard precedence, left-associative sums/products):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' number)?
//   atom   := number | ident | func '(' expr ')' | '(' expr ')'
// Functions: abs, exp, ln, sqrt. Pow exponents are numeric literals, so
// variable exponents are unrepresentable by construction.
//
// Expr values are immutable after construction and safe to evaluate from
// multiple threads concurrently.
class Expr {
public:
    static Expr parse(std::string_view source, int arity);

    // Programmatic constructors (used by tests and by named map families).
    static Expr constant(double value);
    static Expr variable(int index, int arity);  // index is 1-based
    static Expr unary(UnaryOp op, Expr operand);
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
    static Expr pow(Expr base, double exponent);

    // IEEE double evaluation. Throws EvalError on ln(x<=0), sqrt(x<0),
    // division by zero, or a pow producing a non-finite value.
    double eval(std::span<const double> point) const;
    double eval_scalar(double x) const;

    int arity() const { return arity_; }

    // Copy with a larger declared arity (evaluation then expects points of
    // that length even if some variables are unused).
    Expr with_arity(int arity) const;

    // Re-parseable rendering; str() is a fixed point of parse . str.
    std::string str() const;

private:
    enum class Kind { Const, Var, Unary, Binary, Pow };
    struct Node {
        Kind kind;
        UnaryOp uop{};
        BinaryOp bop{};
        double value{};  // Const payload or Pow exponent
        int var{};       // Var payload, 0-based
        int a{-1}, b{-1};
    };

    Expr() = default;
    int merge(const Expr& other);  // append other's nodes, return new root

    double eval_node(int id, std::span<const double> point) const;
    void print_node(int id, std::string& out, int parent_prec, bool parenthesize_same) const;

    std::vector<Node> nodes_;
    int root_ = -1;
    int arity_ = 0;

    friend class ExprParser;
};

}  // namespace wso
