#include "tslice/expr.hpp"

#include "tslice/error.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace tslice {

const char* var_name(Var v) {
    switch (v) {
    case Var::t: return "t";
    case Var::x: return "x";
    case Var::y: return "y";
    case Var::z: return "z";
    case Var::xi1: return "xi1";
    case Var::xi2: return "xi2";
    case Var::r: return "r";
    }
    return "?";
}

namespace {

using Op = Expr::Op;
using Node = Expr::Node;

struct NamedFn {
    std::string_view name;
    Op op;
    int arity;
};

constexpr NamedFn kFunctions[] = {
    {"sin", Op::sin, 1},   {"cos", Op::cos, 1},   {"exp", Op::exp, 1},
    {"log", Op::log, 1},   {"abs", Op::abs, 1},   {"sqrt", Op::sqrt, 1},
    {"sign", Op::sign, 1}, {"min", Op::min, 2},   {"max", Op::max, 2},
};

constexpr std::pair<std::string_view, Var> kVariables[] = {
    {"t", Var::t}, {"x", Var::x}, {"y", Var::y}, {"z", Var::z},
    {"xi1", Var::xi1}, {"xi2", Var::xi2}, {"r", Var::r},
};

const char* op_name(Op op) {
    for (const auto& f : kFunctions)
        if (f.op == op) return f.name.data();
    return "";
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    std::vector<Node> run(std::int32_t& root) {
        root = sum();
        skip_space();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return std::move(nodes_);
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }

    [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
        int line = 1;
        int col = 1;
        for (std::size_t i = 0; i < at && i < src_.size(); ++i) {
            if (src_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(msg, line, col);
    }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    std::int32_t push(Node n) {
        nodes_.push_back(n);
        return static_cast<std::int32_t>(nodes_.size() - 1);
    }

    std::int32_t sum() {
        std::int32_t lhs = product();
        for (;;) {
            if (accept('+')) {
                lhs = push({Op::add, 0.0, Var::t, lhs, product()});
            } else if (accept('-')) {
                lhs = push({Op::sub, 0.0, Var::t, lhs, product()});
            } else {
                return lhs;
            }
        }
    }

    std::int32_t product() {
        std::int32_t lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = push({Op::mul, 0.0, Var::t, lhs, unary()});
            } else if (accept('/')) {
                lhs = push({Op::div, 0.0, Var::t, lhs, unary()});
            } else {
                return lhs;
            }
        }
    }

    std::int32_t unary() {
        if (accept('-')) return push({Op::neg, 0.0, Var::t, unary(), -1});
        return power();
    }

    std::int32_t power() {
        std::int32_t base = primary();
        if (accept('^')) return push({Op::pow, 0.0, Var::t, base, unary()});
        return base;
    }

    std::int32_t primary() {
        skip_space();
        if (pos_ >= src_.size()) fail("unexpected end of expression");
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
        if (accept('(')) {
            std::int32_t inner = sum();
            expect(')');
            return inner;
        }
        fail(std::string("unexpected '") + c + "'");
    }

    std::int32_t number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                pos_ = look;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
        }
        double value = 0.0;
        const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (res.ec != std::errc{} || res.ptr != src_.data() + pos_)
            fail_at("malformed number '" + std::string(src_.substr(start, pos_ - start)) + "'", start);
        if (!std::isfinite(value)) fail_at("number out of range", start);
        return push({Op::number, value});
    }

    std::int32_t name() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string_view id = src_.substr(start, pos_ - start);
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == '(') {
            for (const auto& f : kFunctions) {
                if (f.name != id) continue;
                ++pos_;
                std::int32_t a = sum();
                std::int32_t b = -1;
                if (f.arity == 2) {
                    expect(',');
                    b = sum();
                }
                expect(')');
                return push({f.op, 0.0, Var::t, a, b});
            }
            fail_at("unknown function '" + std::string(id) + "'", start);
        }
        if (id == "pi") return push({Op::constant_pi});
        if (id == "e") return push({Op::constant_e});
        for (const auto& [vname, v] : kVariables)
            if (vname == id) return push({Op::variable, 0.0, v});
        fail_at("unknown identifier '" + std::string(id) + "'", start);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::vector<Node> nodes_;
};

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

Expr::Expr() : Expr(std::make_shared<const std::vector<Node>>(std::vector<Node>{{Op::number, 0.0}}), 0) {}

Expr::Expr(std::shared_ptr<const std::vector<Node>> nodes, std::int32_t root)
    : nodes_(std::move(nodes)), root_(root) {}

Expr Expr::parse(std::string_view src) {
    Parser parser(src);
    std::int32_t root = 0;
    auto nodes = parser.run(root);
    return Expr(std::make_shared<const std::vector<Node>>(std::move(nodes)), root);
}

Expr Expr::constant(double value) {
    if (!std::isfinite(value)) throw Error(ErrorKind::numeric_input, "non-finite constant expression");
    if (value < 0.0) {
        std::vector<Node> nodes{{Op::number, -value}, {Op::neg, 0.0, Var::t, 0, -1}};
        return Expr(std::make_shared<const std::vector<Node>>(std::move(nodes)), 1);
    }
    return Expr(std::make_shared<const std::vector<Node>>(std::vector<Node>{{Op::number, value}}), 0);
}

double Expr::eval(const Env& env) const { return eval_node(root_, env); }

double Expr::eval_node(std::int32_t i, const Env& env) const {
    const Node& n = (*nodes_)[static_cast<std::size_t>(i)];
    auto bad = [&](const char* why) -> double {
        throw Error(ErrorKind::numeric_evaluation, std::string(why) + " in subterm " + print_node(i));
    };
    double out = 0.0;
    switch (n.op) {
    case Op::number: return n.value;
    case Op::constant_pi: return std::numbers::pi;
    case Op::constant_e: return std::numbers::e;
    case Op::variable:
        switch (n.var) {
        case Var::t: return env.t;
        case Var::x: return env.x;
        case Var::y: return env.y;
        case Var::z: return env.z;
        case Var::xi1: return env.xi1;
        case Var::xi2: return env.xi2;
        case Var::r: return env.r;
        }
        return 0.0;
    case Op::neg: return -eval_node(n.lhs, env);
    case Op::add: out = eval_node(n.lhs, env) + eval_node(n.rhs, env); break;
    case Op::sub: out = eval_node(n.lhs, env) - eval_node(n.rhs, env); break;
    case Op::mul: out = eval_node(n.lhs, env) * eval_node(n.rhs, env); break;
    case Op::div: {
        const double num = eval_node(n.lhs, env);
        const double den = eval_node(n.rhs, env);
        if (den == 0.0) return bad("division by zero");
        out = num / den;
        break;
    }
    case Op::pow: out = std::pow(eval_node(n.lhs, env), eval_node(n.rhs, env)); break;
    case Op::sin: out = std::sin(eval_node(n.lhs, env)); break;
    case Op::cos: out = std::cos(eval_node(n.lhs, env)); break;
    case Op::exp: out = std::exp(eval_node(n.lhs, env)); break;
    case Op::log: {
        const double a = eval_node(n.lhs, env);
        if (a <= 0.0) return bad("log of non-positive value");
        out = std::log(a);
        break;
    }
    case Op::abs: out = std::abs(eval_node(n.lhs, env)); break;
    case Op::sqrt: {
        const double a = eval_node(n.lhs, env);
        if (a < 0.0) return bad("sqrt of negative value");
        out = std::sqrt(a);
        break;
    }
    case Op::sign: {
        const double a = eval_node(n.lhs, env);
        out = a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
        break;
    }
    case Op::min: out = std::min(eval_node(n.lhs, env), eval_node(n.rhs, env)); break;
    case Op::max: out = std::max(eval_node(n.lhs, env), eval_node(n.rhs, env)); break;
    }
    if (!std::isfinite(out)) return bad("non-finite result");
    return out;
}

std::string Expr::to_string() const { return print_node(root_); }

std::string Expr::print_node(std::int32_t i) const {
    const Node& n = (*nodes_)[static_cast<std::size_t>(i)];
    auto bin = [&](const char* sym) { return "(" + print_node(n.lhs) + " " + sym + " " + print_node(n.rhs) + ")"; };
    switch (n.op) {
    case Op::number: return format_number(n.value);
    case Op::constant_pi: return "pi";
    case Op::constant_e: return "e";
    case Op::variable: return var_name(n.var);
    case Op::neg: return "(-" + print_node(n.lhs) + ")";
    case Op::add: return bin("+");
    case Op::sub: return bin("-");
    case Op::mul: return bin("*");
    case Op::div: return bin("/");
    case Op::pow: return bin("^");
    case Op::min:
    case Op::max: return std::string(op_name(n.op)) + "(" + print_node(n.lhs) + ", " + print_node(n.rhs) + ")";
    default: return std::string(op_name(n.op)) + "(" + print_node(n.lhs) + ")";
    }
}

std::optional<double> Expr::constant_value() const {
    for (const auto& n : *nodes_)
        if (n.op == Op::variable) return std::nullopt;
    try {
        return eval(Env{});
    } catch (const Error&) {
        return std::nullopt;
    }
}

bool Expr::is_zero() const {
    const auto v = constant_value();
    return v && *v == 0.0;
}

bool Expr::uses(Var v) const {
    for (const auto& n : *nodes_)
        if (n.op == Op::variable && n.var == v) return true;
    return false;
}

bool Expr::equal_nodes(std::int32_t i, const Expr& other, std::int32_t j) const {
    const Node& a = (*nodes_)[static_cast<std::size_t>(i)];
    const Node& b = (*other.nodes_)[static_cast<std::size_t>(j)];
    if (a.op != b.op) return false;
    if (a.op == Op::number) return std::bit_cast<std::uint64_t>(a.value) == std::bit_cast<std::uint64_t>(b.value);
    if (a.op == Op::variable) return a.var == b.var;
    if ((a.lhs < 0) != (b.lhs < 0) || (a.rhs < 0) != (b.rhs < 0)) return false;
    if (a.lhs >= 0 && !equal_nodes(a.lhs, other, b.lhs)) return false;
    if (a.rhs >= 0 && !equal_nodes(a.rhs, other, b.rhs)) return false;
    return true;
}

bool operator==(const Expr& a, const Expr& b) { return a.equal_nodes(a.root_, b, b.root_); }

} // namespace tslice
