#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tslice {

// Free variables recognised by the expression language.
enum class Var : std::uint8_t { t, x, y, z, xi1, xi2, r };

struct Env {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double xi1 = 0.0;
    double xi2 = 0.0;
    double r = 0.0;
};

/// Immutable arithmetic expression over the variables in `Var`.
///
/// Grammar, loosest to tightest binding:
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?          (right associative)
///   primary := number | name | name '(' args ')' | '(' sum ')'
///
/// Copies share the parsed tree, so an Expr is cheap to pass around and
/// safe to read from several threads.
class Expr {
public:
    /// The constant 0.
    Expr();

    static Expr parse(std::string_view src);
    static Expr constant(double value);

    /// Throws Error(numeric_evaluation) naming the offending subterm for
    /// log/sqrt of negatives, division by zero, or a non-finite result.
    double eval(const Env& env) const;

    /// Fully parenthesised text; parse(to_string()) rebuilds an equal tree.
    std::string to_string() const;

    std::optional<double> constant_value() const;
    bool is_zero() const;
    bool uses(Var v) const;

    friend bool operator==(const Expr& a, const Expr& b);

    enum class Op : std::uint8_t {
        number, constant_pi, constant_e, variable,
        neg, add, sub, mul, div, pow,
        sin, cos, exp, log, abs, sqrt, sign, min, max,
    };

    struct Node {
        Op op;
        double value = 0.0;
        Var var = Var::t;
        std::int32_t lhs = -1;
        std::int32_t rhs = -1;
    };

private:
    Expr(std::shared_ptr<const std::vector<Node>> nodes, std::int32_t root);

    double eval_node(std::int32_t i, const Env& env) const;
    std::string print_node(std::int32_t i) const;
    bool equal_nodes(std::int32_t i, const Expr& other, std::int32_t j) const;

    std::shared_ptr<const std::vector<Node>> nodes_;
    std::int32_t root_ = 0;
};

const char* var_name(Var v);

} // namespace tslice
