#include "tslice/flux.hpp"

#include "tslice/error.hpp"

#include <cmath>
#include <random>

namespace tslice {

const char* to_string(FluxKind kind) {
    switch (kind) {
    case FluxKind::p_laplacian: return "p_laplacian";
    case FluxKind::linear_diffusion: return "linear_diffusion";
    case FluxKind::z_modulated: return "z_modulated";
    case FluxKind::custom: return "custom";
    }
    return "?";
}

FluxModel FluxModel::p_laplacian(double p, double eps_reg) {
    FluxModel f;
    f.kind = FluxKind::p_laplacian;
    f.p = p;
    f.eps_reg = eps_reg;
    return f;
}

FluxModel FluxModel::linear_diffusion() {
    FluxModel f;
    f.kind = FluxKind::linear_diffusion;
    f.p = 2.0;
    f.eps_reg = 0.0;
    return f;
}

FluxModel FluxModel::z_modulated(double p, double eps_reg) {
    FluxModel f;
    f.kind = FluxKind::z_modulated;
    f.p = p;
    f.eps_reg = eps_reg;
    // m ranges over [1, 3/2] and |m'| = |sin z cos z| <= 1/2 <= 1.
    f.constants.growth_c = 1.5;
    f.constants.z_lipschitz = 1.0;
    return f;
}

FluxModel FluxModel::custom(Expr a1, Expr a2, double p, StructuralConstants constants) {
    FluxModel f;
    f.kind = FluxKind::custom;
    f.p = p;
    f.eps_reg = 0.0;
    f.constants = std::move(constants);
    f.a1 = std::move(a1);
    f.a2 = std::move(a2);
    return f;
}

bool FluxModel::depends_on_z() const {
    if (kind == FluxKind::z_modulated) return true;
    if (kind == FluxKind::custom) return a1.uses(Var::z) || a2.uses(Var::z);
    return false;
}

std::vector<std::string> FluxModel::problems() const {
    std::vector<std::string> out;
    if (!(p > 1.0) || !std::isfinite(p)) out.push_back("p must exceed 1 (1 < p < infinity)");
    if (!(eps_reg >= 0.0)) out.push_back("eps_reg must be nonnegative");
    if (!(constants.growth_c > 0.0)) out.push_back("growth constant c must be positive");
    if (!(constants.coercivity_alpha > 0.0)) out.push_back("coercivity constant alpha must be positive");
    if (!(constants.lower_b >= 0.0)) out.push_back("lower-order bound b must be nonnegative");
    if (!(constants.lower_d >= 0.0)) out.push_back("lower-order bound d must be nonnegative");
    if (!(constants.z_lipschitz >= 0.0)) out.push_back("z-Lipschitz constant C_z must be nonnegative");
    if (kind == FluxKind::linear_diffusion && p != 2.0) out.push_back("linear_diffusion requires p = 2");
    return out;
}

namespace {

void check_finite(double t, const Point& x, double z, const Vec2& xi) {
    if (!std::isfinite(t) || !std::isfinite(x[0]) || !std::isfinite(x[1]) || !std::isfinite(z) ||
        !std::isfinite(xi[0]) || !std::isfinite(xi[1]))
        throw Error(ErrorKind::numeric_input, "flux evaluated at a non-finite argument");
}

double norm2(const Vec2& xi, int dim) { return dim > 1 ? xi[0] * xi[0] + xi[1] * xi[1] : xi[0] * xi[0]; }

double modulation(double z) {
    const double s = std::sin(z);
    return 1.0 + 0.5 * s * s;
}

Env custom_env(double t, const Point& x, double z, const Vec2& xi) {
    Env env;
    env.t = t;
    env.x = x[0];
    env.y = x[1];
    env.z = z;
    env.xi1 = xi[0];
    env.xi2 = xi[1];
    return env;
}

// Regularised p-Laplacian coefficient (|xi|^2 + eps^2)^((p-2)/2); zero at
// xi = 0 when eps = 0 so that A(0) = 0 for every p.
double plap_coefficient(double p, double eps, double s2) {
    if (p == 2.0) return 1.0;
    const double s = s2 + eps * eps;
    if (s == 0.0) return 0.0;
    return std::pow(s, 0.5 * (p - 2.0));
}

Vec2 builtin_base(const FluxModel& f, const Vec2& xi, int dim) {
    const double a = plap_coefficient(f.p, f.eps_reg, norm2(xi, dim));
    return {a * xi[0], dim > 1 ? a * xi[1] : 0.0};
}

Mat2 builtin_base_jacobian(const FluxModel& f, const Vec2& xi, int dim) {
    Mat2 J{};
    if (f.p == 2.0) {
        J[0][0] = 1.0;
        if (dim > 1) J[1][1] = 1.0;
        return J;
    }
    const double s = norm2(xi, dim) + f.eps_reg * f.eps_reg;
    if (f.p < 2.0 && s < 1e-28)
        throw Error(ErrorKind::singularity, "flux Jacobian is singular at xi = 0 for p < 2 without regularisation");
    if (s == 0.0) return J;
    const double q = 0.5 * (f.p - 2.0);
    const double a = std::pow(s, q);
    const double b = 2.0 * q * std::pow(s, q - 1.0);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) J[i][j] = (i == j ? a : 0.0) + b * xi[i] * xi[j];
    return J;
}

} // namespace

Vec2 evaluate(const FluxModel& f, double t, const Point& x, double z, const Vec2& xi_in, int dim) {
    check_finite(t, x, z, xi_in);
    Vec2 xi = xi_in;
    if (dim < 2) xi[1] = 0.0;
    switch (f.kind) {
    case FluxKind::linear_diffusion: return xi;
    case FluxKind::p_laplacian: return builtin_base(f, xi, dim);
    case FluxKind::z_modulated: {
        const double m = modulation(z);
        const Vec2 b = builtin_base(f, xi, dim);
        return {m * b[0], m * b[1]};
    }
    case FluxKind::custom: {
        const Env env = custom_env(t, x, z, xi);
        return {f.a1.eval(env), dim > 1 ? f.a2.eval(env) : 0.0};
    }
    }
    return {0.0, 0.0};
}

Mat2 jacobian_xi(const FluxModel& f, double t, const Point& x, double z, const Vec2& xi_in, int dim) {
    check_finite(t, x, z, xi_in);
    Vec2 xi = xi_in;
    if (dim < 2) xi[1] = 0.0;
    switch (f.kind) {
    case FluxKind::linear_diffusion:
    case FluxKind::p_laplacian: return builtin_base_jacobian(f, xi, dim);
    case FluxKind::z_modulated: {
        Mat2 J = builtin_base_jacobian(f, xi, dim);
        const double m = modulation(z);
        for (auto& row : J)
            for (auto& v : row) v *= m;
        return J;
    }
    case FluxKind::custom: {
        Mat2 J{};
        const double h = kFiniteDifferenceStep;
        for (int j = 0; j < dim; ++j) {
            Vec2 up = xi;
            Vec2 dn = xi;
            up[j] += h;
            dn[j] -= h;
            const Vec2 fu = evaluate(f, t, x, z, up, dim);
            const Vec2 fd = evaluate(f, t, x, z, dn, dim);
            for (int i = 0; i < dim; ++i) J[i][j] = (fu[i] - fd[i]) / (2.0 * h);
        }
        return J;
    }
    }
    return {};
}

Vec2 derivative_z(const FluxModel& f, double t, const Point& x, double z, const Vec2& xi_in, int dim) {
    check_finite(t, x, z, xi_in);
    Vec2 xi = xi_in;
    if (dim < 2) xi[1] = 0.0;
    switch (f.kind) {
    case FluxKind::linear_diffusion:
    case FluxKind::p_laplacian: return {0.0, 0.0};
    case FluxKind::z_modulated: {
        const double dm = std::sin(z) * std::cos(z);
        const Vec2 b = builtin_base(f, xi, dim);
        return {dm * b[0], dm * b[1]};
    }
    case FluxKind::custom: {
        if (!f.depends_on_z()) return {0.0, 0.0};
        const double h = kFiniteDifferenceStep;
        const Vec2 fu = evaluate(f, t, x, z + h, xi, dim);
        const Vec2 fd = evaluate(f, t, x, z - h, xi, dim);
        return {(fu[0] - fd[0]) / (2.0 * h), (fu[1] - fd[1]) / (2.0 * h)};
    }
    }
    return {0.0, 0.0};
}

// ---------------------------------------------------------------------------

bool StructureReport::pass() const {
    for (const auto& c : conditions)
        if (!c.pass) return false;
    return true;
}

namespace {

class Sampler {
public:
    Sampler(const SampleBox& box, std::uint64_t seed) : box_(box), rng_(seed) {}

    double in(const Interval& iv) { return std::uniform_real_distribution<double>(iv.lo, iv.hi)(rng_); }
    double t() { return in(box_.t); }
    double z() { return in(box_.z); }
    Point x() { return {in(box_.x), box_.dim > 1 ? in(box_.x) : 0.0}; }
    Vec2 xi() { return {in(box_.xi), box_.dim > 1 ? in(box_.xi) : 0.0}; }

private:
    SampleBox box_;
    std::mt19937_64 rng_;
};

double norm(const Vec2& v) { return std::hypot(v[0], v[1]); }
double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

struct Tracker {
    ConditionResult result;
    bool seen = false;

    void record(double lhs, double rhs, double scale) {
        const double raw = rhs - lhs;
        const double normalized = raw / std::max(1.0, scale);
        if (!seen || normalized < result.worst_margin) {
            result.worst_margin = normalized;
            result.worst_raw_margin = raw;
            seen = true;
        }
    }
};

} // namespace

StructureReport check_structure(const FluxModel& f, int samples, std::uint64_t seed, const SampleBox& box) {
    if (samples < 1) throw Error(ErrorKind::validation, "check_structure needs at least one sample");
    StructureReport report;
    report.samples = samples;
    report.seed = seed;
    const int dim = box.dim;
    const auto& k = f.constants;
    const double p = f.p;
    const double pm1 = p - 1.0;
    std::array<Tracker, 5> tr;
    const char* names[5] = {"L1 growth", "L2 coercivity", "L3 monotonicity", "L4 continuity", "L5 zero flux"};

    Sampler s(box, seed);
    for (int i = 0; i < samples; ++i) {
        const double t = s.t();
        const Point x = s.x();
        const double z = s.z();
        const Vec2 xi = s.xi();
        const Vec2 xi_star = s.xi();
        const Vec2 A = evaluate(f, t, x, z, xi, dim);
        const Vec2 A_star = evaluate(f, t, x, z, xi_star, dim);
        const double nxi = norm(xi);

        const double growth = k.growth_c * std::pow(nxi, pm1) + k.lower_b;
        tr[0].record(norm(A), growth, std::max(norm(A), growth));

        const double coerc = k.coercivity_alpha * std::pow(nxi, p) - k.lower_d;
        const double pairing = dot(A, xi);
        tr[1].record(coerc, pairing, std::max(std::abs(pairing), std::abs(coerc)));

        const Vec2 dA{A[0] - A_star[0], A[1] - A_star[1]};
        const Vec2 dxi{xi[0] - xi_star[0], xi[1] - xi_star[1]};
        tr[2].record(0.0, dot(dA, dxi), (norm(A) + norm(A_star)) * (nxi + norm(xi_star)));

        const double s_t = s.t();
        const Point y = s.x();
        const double w = s.z();
        const Vec2 B = evaluate(f, s_t, y, w, xi, dim);
        Env env;
        env.r = std::abs(t - s_t) + std::hypot(x[0] - y[0], x[1] - y[1]);
        const double modulus = k.time_modulus.eval(env);
        const double cont = (modulus + k.z_lipschitz * std::abs(z - w)) * std::pow(nxi, pm1);
        const double diff = std::hypot(A[0] - B[0], A[1] - B[1]);
        tr[3].record(diff, cont, std::max({diff, cont, norm(A)}));

        const Vec2 A0 = evaluate(f, t, x, z, Vec2{0.0, 0.0}, dim);
        tr[4].record(norm(A0), 0.0, 1.0);
    }
    for (std::size_t c = 0; c < 5; ++c) {
        report.conditions[c] = tr[c].result;
        report.conditions[c].name = names[c];
        report.conditions[c].pass = tr[c].result.worst_margin >= -report.tolerance;
    }
    return report;
}

} // namespace tslice
