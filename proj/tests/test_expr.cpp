#include "doctest.h"

#include <cmath>
#include <vector>

#include "wso/expr.hpp"
#include "wso/prng.hpp"

using wso::BinaryOp;
using wso::Expr;
using wso::UnaryOp;

namespace {

double ev(const Expr& e, std::vector<double> pt) { return e.eval(pt); }

// Random ASTs restricted to total operations, so evaluation never throws
// and the print/parse equality can be asserted bit-exactly.
Expr random_ast(wso::Prng& rng, int arity, int depth) {
    const double leaf_pool[] = {0.5, 1.0, 1.5, 2.0, 0.25, 3.0};
    if (depth == 0 || rng.below(5) == 0) {
        if (arity > 0 && rng.below(2) == 0)
            return Expr::variable(1 + static_cast<int>(rng.below(arity)), arity);
        return Expr::constant(leaf_pool[rng.below(6)]);
    }
    switch (rng.below(6)) {
        case 0:
            return Expr::binary(BinaryOp::Add, random_ast(rng, arity, depth - 1),
                                random_ast(rng, arity, depth - 1));
        case 1:
            return Expr::binary(BinaryOp::Sub, random_ast(rng, arity, depth - 1),
                                random_ast(rng, arity, depth - 1));
        case 2:
            return Expr::binary(BinaryOp::Mul, random_ast(rng, arity, depth - 1),
                                random_ast(rng, arity, depth - 1));
        case 3:
            return Expr::unary(rng.below(2) ? UnaryOp::Abs : UnaryOp::Exp,
                               random_ast(rng, arity, depth - 1));
        case 4:
            return Expr::unary(UnaryOp::Neg, random_ast(rng, arity, depth - 1));
        default:
            return Expr::pow(random_ast(rng, arity, depth - 1),
                             static_cast<double>(2 + rng.below(2)));
    }
}

}  // namespace

TEST_CASE("parse and evaluate basic expressions") {
    CHECK(ev(Expr::parse("2*x1/(1+x1)", 1), {1.0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ev(Expr::parse("abs(x1-0.5)+x2^2", 2), {0.5, 2.0}) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(ev(Expr::parse("exp(0)", 0), {}) == 1.0);
    CHECK(ev(Expr::parse("1+x1+2*x2", 2), {0.0, 1.0}) == 3.0);
    CHECK(ev(Expr::parse("sqrt(x1)", 1), {9.0}) == 3.0);
    CHECK(ev(Expr::parse("ln(exp(1))", 0), {}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("precedence and associativity") {
    CHECK(ev(Expr::parse("2*x1^2", 1), {3.0}) == 18.0);   // ^ binds over *
    CHECK(ev(Expr::parse("1+2*3", 0), {}) == 7.0);        // * binds over +
    CHECK(ev(Expr::parse("2-1-1", 0), {}) == 0.0);        // left associative
    CHECK(ev(Expr::parse("8/4/2", 0), {}) == 1.0);
    CHECK(ev(Expr::parse("(1+2)*3", 0), {}) == 9.0);
    CHECK(ev(Expr::parse("2^3", 0), {}) == 8.0);
    CHECK(ev(Expr::parse("x1^-1", 1), {4.0}) == 0.25);
}

TEST_CASE("syntax errors carry byte offsets") {
    try {
        Expr::parse("1+", 1);
        FAIL("expected ParseError");
    } catch (const wso::ParseError& e) {
        CHECK(e.offset == 2);
    }
    CHECK_THROWS_AS(Expr::parse("", 1), wso::ParseError);
    CHECK_THROWS_AS(Expr::parse("1 + (2", 1), wso::ParseError);
    CHECK_THROWS_AS(Expr::parse("1 2", 1), wso::ParseError);
    CHECK_THROWS_AS(Expr::parse("x1^x1", 1), wso::ParseError);  // variable exponent
}

TEST_CASE("unknown identifiers and arity violations") {
    CHECK_THROWS_AS(Expr::parse("foo(x1)", 1), wso::ParseError);
    CHECK_THROWS_AS(Expr::parse("x2+1", 1), wso::ParseError);
    CHECK_THROWS_AS(Expr::parse("x0", 1), wso::ParseError);
    CHECK_NOTHROW(Expr::parse("x2", 2));
}

TEST_CASE("evaluation domain errors") {
    CHECK_THROWS_AS(ev(Expr::parse("ln(x1)", 1), {0.0}), wso::EvalError);
    CHECK_THROWS_AS(ev(Expr::parse("ln(x1)", 1), {-1.0}), wso::EvalError);
    CHECK_THROWS_AS(ev(Expr::parse("sqrt(0-x1)", 1), {4.0}), wso::EvalError);
    CHECK_THROWS_AS(ev(Expr::parse("1/x1", 1), {0.0}), wso::EvalError);
    CHECK_THROWS_AS(ev(Expr::parse("x1^-1", 1), {0.0}), wso::EvalError);   // 0^-1 = inf
    CHECK_THROWS_AS(ev(Expr::parse("(0-1)^0.5", 0), {}), wso::EvalError);  // nan
    CHECK_THROWS_AS(ev(Expr::parse("x1", 1), {}), wso::ValidationError);   // wrong point size
}

TEST_CASE("printing is a fixed point of parse . str") {
    const char* samples[] = {
        "2*x1/(1+x1)",
        "abs(x1-0.5)+x2^2",
        "1 - x1 + 2*x2",
        "ln(1+x1)*sqrt(x2)/(x1+x2)",
        "((x1))",
        "2^3+x1^2*x2",
        "1/(2-x1)^2",
    };
    for (const char* s : samples) {
        Expr e = Expr::parse(s, 2);
        std::string printed = e.str();
        Expr reparsed = Expr::parse(printed, 2);
        CHECK(reparsed.str() == printed);
    }
}

TEST_CASE("print/parse preserves evaluation exactly on random ASTs") {
    wso::Prng rng(42);
    int checked = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const int arity = 1 + static_cast<int>(rng.below(3));
        Expr ast = random_ast(rng, arity, 4).with_arity(arity);
        std::vector<double> pt(arity);
        for (auto& x : pt) x = rng.uniform(0.1, 2.0);

        const std::string printed = ast.str();
        Expr reparsed = Expr::parse(printed, arity);
        CHECK(reparsed.str() == printed);  // idempotent printing

        double a = ast.eval(pt);
        double b = reparsed.eval(pt);
        if (std::isfinite(a)) {
            CHECK(a == b);  // identical tree shape => identical IEEE result
            ++checked;
        }
    }
    CHECK(checked > 400);
}
