#include "tslice/error.hpp"
#include "tslice/expr.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using tslice::Env;
using tslice::Error;
using tslice::ErrorKind;
using tslice::Expr;

namespace {

double eval(const char* src, Env env = {}) { return Expr::parse(src).eval(env); }

struct Case {
    const char* src;
    Env env;
    double expected;
};

Env at(double t, double x = 0.0, double y = 0.0, double z = 0.0) {
    Env e;
    e.t = t;
    e.x = x;
    e.y = y;
    e.z = z;
    return e;
}

} // namespace

TEST(Expr, ReferenceTable) {
    Env xi;
    xi.xi1 = 3.0;
    xi.xi2 = 4.0;
    const std::vector<Case> table{
        {"1+t", at(1.5), 2.5},
        {"sin(pi*x)", at(0, 0.5), 1.0},
        {"2^3^2", {}, 512.0},
        {"-2^2", {}, -4.0},
        {"(-2)^2", {}, 4.0},
        {"2+3*4", {}, 14.0},
        {"10-4-3", {}, 3.0},
        {"64/4/2", {}, 8.0},
        {"2^-1", {}, 0.5},
        {"exp(0)", {}, 1.0},
        {"log(e)", {}, 1.0},
        {"sqrt(16)", {}, 4.0},
        {"abs(-3.5)", {}, 3.5},
        {"min(2, -1)", {}, -1.0},
        {"max(2, -1)", {}, 2.0},
        {"sign(-0.3) + sign(0)", {}, -1.0},
        {"1.5e2 - 2.5E-1", {}, 149.75},
        {"cos(pi)", {}, -1.0},
        {"x*y - z", at(0, 2, 3, 1), 5.0},
        {"xi1^2 + xi2^2", xi, 25.0},
        {"-(x - 1)*-(y)", at(0, 3, 2), 4.0},
    };
    ASSERT_GE(table.size(), 20u);
    for (const auto& c : table) {
        const double got = eval(c.src, c.env);
        EXPECT_LE(std::abs(got - c.expected), 1e-15 * std::max(1.0, std::abs(c.expected))) << c.src;
    }
}

TEST(Expr, UnaryMinusBindsLooserThanPower) {
    EXPECT_EQ(eval("-x^2", at(0, 3)), -9.0);
    EXPECT_EQ(eval("2*-3"), -6.0);
}

TEST(Expr, RadiusVariable) {
    Env e;
    e.r = 0.25;
    EXPECT_EQ(eval("2*r", e), 0.5);
}

TEST(Expr, SyntaxErrorsCarryPosition) {
    try {
        Expr::parse("1 +\n (2 *");
        FAIL() << "expected a parse error";
    } catch (const tslice::ParseError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::parse);
        EXPECT_EQ(e.line(), 2);
        EXPECT_GE(e.column(), 5);
    }
    EXPECT_THROW(Expr::parse("1 2"), tslice::ParseError);
    EXPECT_THROW(Expr::parse(""), tslice::ParseError);
    EXPECT_THROW(Expr::parse("sin(1, 2)"), tslice::ParseError);
    EXPECT_THROW(Expr::parse("max(1)"), tslice::ParseError);
}

TEST(Expr, UnknownIdentifierNamed) {
    try {
        Expr::parse("viscosity*x");
        FAIL();
    } catch (const tslice::ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("viscosity"), std::string::npos);
        EXPECT_EQ(e.column(), 1);
    }
    EXPECT_THROW(Expr::parse("tan(x)"), tslice::ParseError);
}

TEST(Expr, EvaluationErrorsNameSubterm) {
    for (const char* src : {"1/(x-x)", "log(x - 2)", "sqrt(-1 - x)"}) {
        try {
            eval(src, at(0, 1));
            FAIL() << src;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::numeric_evaluation);
            EXPECT_NE(std::string(e.what()).find("subterm"), std::string::npos) << e.what();
        }
    }
    EXPECT_THROW(eval("exp(1000)"), Error);
}

TEST(Expr, PrintParseRoundTrip) {
    for (const char* src : {"1+t", "2^3^2", "-x^2", "sin(pi*x)*exp(-t)", "min(x, max(y, 0.1))", "1/3 + 0.1",
                            "x - (y - z)", "(x - y) - z", "abs(xi1)^(0.5)*xi1", "1e-300*x", "-(-(x))", "e^t"}) {
        const Expr a = Expr::parse(src);
        const Expr b = Expr::parse(a.to_string());
        EXPECT_TRUE(a == b) << src << " -> " << a.to_string();
        EXPECT_EQ(a.to_string(), b.to_string());
        Env env = at(0.3, 0.7, -0.2, 1.1);
        env.xi1 = 0.4;
        EXPECT_EQ(a.eval(env), b.eval(env)) << src;
    }
}

TEST(Expr, StructuralEquality) {
    EXPECT_TRUE(Expr::parse("x+1") == Expr::parse("x + 1"));
    EXPECT_FALSE(Expr::parse("x+1") == Expr::parse("1+x"));
    EXPECT_FALSE(Expr::parse("0.1") == Expr::parse("0.10000000000000002"));
}

TEST(Expr, Queries) {
    EXPECT_TRUE(Expr().is_zero());
    EXPECT_TRUE(Expr::parse("0").is_zero());
    EXPECT_FALSE(Expr::parse("x").is_zero());
    EXPECT_EQ(Expr::parse("2*3").constant_value().value_or(0.0), 6.0);
    EXPECT_FALSE(Expr::parse("2*t").constant_value().has_value());
    const Expr e = Expr::parse("sin(z)*xi1");
    EXPECT_TRUE(e.uses(tslice::Var::z));
    EXPECT_TRUE(e.uses(tslice::Var::xi1));
    EXPECT_FALSE(e.uses(tslice::Var::x));
    EXPECT_EQ(Expr::constant(std::numbers::pi).eval({}), std::numbers::pi);
    EXPECT_THROW(Expr::constant(NAN), Error);
}
