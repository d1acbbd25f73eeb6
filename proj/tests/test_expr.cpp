#include "doctest.h"

#include "ocm/errors.hpp"
#include "ocm/expr.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

using namespace ocm;
using ocm::testing::kCorpus;

namespace {


Expr jet(int j, MultiIndex a) { return Expr::jet(j, std::move(a)); }

} // namespace

TEST_CASE("parse: single derivative slot") {
    Expr e = parse_expression("D(u1,(1))", 1, 1, 1);
    CHECK(e == jet(1, {1}));
    CHECK(print(e) == "D(u1,(1))");
}

TEST_CASE("parse: power binds tighter than plus, u_j is the zeroth-order slot") {
    Expr e = parse_expression("D(u1,(1))^2 + u1", 1, 1, 1);
    Expr expected = Expr::binary(Op::Add, Expr::power(jet(1, {1}), 2), jet(1, {0}));
    CHECK(e == expected);
}

TEST_CASE("print: fully parenthesised canonical form") {
    CHECK(print(parse_expression("u1 + 2*x1", 1, 1, 1)) == "u1 + (2 * x1)");
}

TEST_CASE("parse: left associativity and unary minus") {
    Expr a = parse_expression("x1 - x2 - u2", 2, 2, 2);
    CHECK(a == Expr::binary(Op::Sub, Expr::binary(Op::Sub, Expr::coordinate(1), Expr::coordinate(2)), jet(2, {0, 0})));
    Expr b = parse_expression("-x1^2", 2, 2, 2);
    CHECK(b == Expr::unary(Op::Neg, Expr::power(Expr::coordinate(1), 2)));
}

TEST_CASE("round trip over the corpus") {
    REQUIRE(kCorpus.size() == 20);
    for (const auto& s : kCorpus) {
        CAPTURE(s);
        Expr t = parse_expression(s, 2, 2, 2);
        std::string p = print(t);
        Expr back = parse_expression(p, 2, 2, 2);
        CHECK(back == t);
        CHECK(print(back) == p);
    }
}

TEST_CASE("parse errors carry line and column") {
    auto expect_error = [](const std::string& text, int n, int K, int m, std::size_t line, std::size_t col) {
        CAPTURE(text);
        try {
            parse_system(text, n, K, m);
            FAIL("no error");
        } catch (const ParseError& e) {
            CHECK(e.line() == line);
            CHECK(e.column() == col);
        }
    };
    // order 3 > m = 2
    expect_error("D(u2,(3))\nu1", 1, 2, 2, 1, 1);
    // u3 with K = 2, on the second line
    expect_error("u1\nu1 + u3", 1, 2, 1, 2, 6);
    // x2 with n = 1
    expect_error("x1 * x2", 1, 1, 1, 1, 6);
    // multi-index of the wrong length, located at the tuple
    expect_error("D(u1,(1,0))", 1, 1, 1, 1, 7);
    // syntax: dangling operator
    expect_error("u1 +", 1, 1, 1, 1, 5);
    // syntax: unknown function
    expect_error("tan(u1)", 1, 1, 1, 1, 1);
    // u0 is not a component
    expect_error("u0", 1, 1, 1, 1, 1);
}

TEST_CASE("parse error message names the problem") {
    try {
        parse_expression("D(u2,(3))", 1, 2, 2);
        FAIL("no error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("order") != std::string::npos);
    }
}

TEST_CASE("parse_system needs exactly K expressions") {
    CHECK_THROWS_AS(parse_system("u1", 1, 2, 1), ParseError);
    CHECK_THROWS_AS(parse_system("u1\nu2\nu1", 1, 2, 1), ParseError);
    PdeSystem sys = parse_system("u1\n\nu2", 1, 2, 1);
    CHECK(sys.K() == 2);
}

TEST_CASE("jet dimension M = K * C(n+m, n)") {
    PdeSystem sys = parse_system("u1\nu2", 2, 2, 2);
    CHECK(sys.alphas().size() == 6);
    CHECK(sys.M() == 12);
    CHECK(MultiIndexSet::count(3, 3) == 20);
    // lexicographic order of the multi-indices
    CHECK(sys.alphas()[0] == MultiIndex{0, 0});
    CHECK(sys.alphas()[1] == MultiIndex{0, 1});
    CHECK(sys.alphas()[3] == MultiIndex{1, 0});
    CHECK(sys.alphas()[5] == MultiIndex{2, 0});
}

TEST_CASE("eval_F examples") {
    PdeSystem proj = parse_system("D(u1,(1))", 1, 1, 1);
    std::vector<double> x{0.5};
    std::vector<double> xi{7.0, 0.45};
    CHECK(eval_F(proj, x, xi)[0] == 0.45);

    PdeSystem sq = parse_system("D(u1,(1))^2 + u1", 1, 1, 1);
    std::vector<double> xi2{3.0, 0.0};
    CHECK(eval_F(sq, x, xi2)[0] == 3.0);

    PdeSystem s = parse_system("sin(u1)", 1, 1, 0);
    std::vector<double> xi3{std::numbers::pi / 2};
    CHECK(std::abs(eval_F(s, x, xi3)[0] - std::sin(std::numbers::pi / 2)) <= 1e-12);
}

TEST_CASE("eval_F domain errors") {
    std::vector<double> x{0.0};
    std::vector<double> xi{-1.0};
    CHECK_THROWS_AS(eval_F(parse_system("log(u1)", 1, 1, 0), x, xi), EvalUndefined);
    CHECK_THROWS_AS(eval_F(parse_system("sqrt(u1)", 1, 1, 0), x, xi), EvalUndefined);
    CHECK_THROWS_AS(eval_F(parse_system("1 / x1", 1, 1, 0), x, xi), EvalUndefined);
}

TEST_CASE("evaluation matches a direct formula and is repeatable") {
    PdeSystem sys = parse_system("exp(-(x1^2 + x2^2)) * sin(3 * u1) + D(u2,(1,1)) / (1 + u2^2)\nabs(u1 - x2)^3", 2, 2, 2);
    std::vector<double> x{0.3, -0.7};
    std::vector<double> xi(sys.M());
    for (std::size_t s = 0; s < xi.size(); ++s) xi[s] = 0.1 * static_cast<double>(s) - 0.4;
    const double u1 = xi[0];
    const double u2 = xi[6];
    const double u2xy = xi[6 + 4];
    auto a = eval_F(sys, x, xi);
    auto b = eval_F(sys, x, xi);
    const double f1 = std::exp(-(0.09 + 0.49)) * std::sin(3 * u1) + u2xy / (1 + u2 * u2);
    const double f2 = std::pow(std::abs(u1 + 0.7), 3);
    CHECK(a[0] == doctest::Approx(f1).epsilon(1e-14));
    CHECK(a[1] == doctest::Approx(f2).epsilon(1e-14));
    CHECK(a == b);
}

TEST_CASE("rhs expressions may only use coordinates") {
    CHECK_THROWS_AS(Rhs::parse({"u1"}, 1), ParseError);
    Rhs f = Rhs::parse({"1 + x1"}, 1);
    std::vector<double> x{2.0};
    CHECK(f(x)[0] == 3.0);
}
