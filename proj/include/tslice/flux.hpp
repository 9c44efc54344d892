#pragma once

#include "tslice/expr.hpp"
#include "tslice/geometry.hpp"
#include "tslice/grid.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace tslice {

using Mat2 = std::array<std::array<double, 2>, 2>;

inline constexpr double kDefaultEpsReg = 1e-8;
inline constexpr double kFiniteDifferenceStep = 1e-6;

enum class FluxKind { p_laplacian, linear_diffusion, z_modulated, custom };

const char* to_string(FluxKind kind);

/// Structural constants: |A| <= c|xi|^(p-1) + b, A.xi >= alpha|xi|^p - d,
/// |A(t,x,z,xi) - A(s,y,w,xi)| <= (omega(|t-s|+|x-y|) + C_z|z-w|)|xi|^(p-1).
struct StructuralConstants {
    double growth_c = 1.0;
    double coercivity_alpha = 1.0;
    double lower_b = 0.0;
    double lower_d = 0.0;
    double z_lipschitz = 0.0;
    Expr time_modulus;  // omega(r)
};

/// Flux field A(t, x, z, xi) of a Leray-Lions operator.
///
/// Builtins use the regularised form (|xi|^2 + eps^2)^((p-2)/2) xi; the
/// z-modulated builtin multiplies it by m(z) = 1 + sin(z)^2 / 2.
struct FluxModel {
    FluxKind kind = FluxKind::linear_diffusion;
    double p = 2.0;
    double eps_reg = kDefaultEpsReg;
    StructuralConstants constants;
    Expr a1;  // custom components, variables t x y z xi1 xi2
    Expr a2;

    static FluxModel p_laplacian(double p, double eps_reg = kDefaultEpsReg);
    static FluxModel linear_diffusion();
    static FluxModel z_modulated(double p, double eps_reg = kDefaultEpsReg);
    static FluxModel custom(Expr a1, Expr a2, double p, StructuralConstants constants);

    double conjugate_exponent() const { return p / (p - 1.0); }
    bool depends_on_z() const;
    bool is_builtin() const { return kind != FluxKind::custom; }

    /// Invariant violations as messages (empty when valid).
    std::vector<std::string> problems() const;
};

Vec2 evaluate(const FluxModel& flux, double t, const Point& x, double z, const Vec2& xi, int dim);

/// dA/dxi; only the leading dim x dim block is meaningful.
Mat2 jacobian_xi(const FluxModel& flux, double t, const Point& x, double z, const Vec2& xi, int dim);

/// dA/dz.
Vec2 derivative_z(const FluxModel& flux, double t, const Point& x, double z, const Vec2& xi, int dim);

/// Sampling box for the structure check.
struct SampleBox {
    int dim = 1;
    Interval t{0.0, 1.0};
    Interval x{-1.0, 1.0};
    Interval z{-2.0, 2.0};
    Interval xi{-3.0, 3.0};
};

struct ConditionResult {
    std::string name;
    /// Smallest (rhs - lhs) / max(1, scale) over all samples.
    double worst_margin = 0.0;
    /// Unnormalised rhs - lhs at the worst sample.
    double worst_raw_margin = 0.0;
    bool pass = true;
};

struct StructureReport {
    std::array<ConditionResult, 5> conditions;  // L1 growth .. L5 zero flux
    double tolerance = 1e-12;
    int samples = 0;
    std::uint64_t seed = 0;

    bool pass() const;
    const ConditionResult& condition(int number) const { return conditions.at(static_cast<std::size_t>(number - 1)); }
};

StructureReport check_structure(const FluxModel& flux, int samples, std::uint64_t seed, const SampleBox& box = {});

} // namespace tslice
