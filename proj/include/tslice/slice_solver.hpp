#pragma once

#include "tslice/expr.hpp"
#include "tslice/flux.hpp"
#include "tslice/geometry.hpp"

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace tslice {

/// Dirichlet data psi(t, x) with optional analytic derivatives; missing
/// derivatives fall back to central finite differences.
struct BoundaryData {
    Expr psi;
    std::optional<Expr> psi_t;
    std::array<std::optional<Expr>, 2> grad_psi;

    double value(double t, const Point& x) const;
    double time_derivative(double t, const Point& x) const;
    Vec2 gradient(double t, const Point& x, int dim) const;
};

struct SolverConfig {
    double newton_tol = 1e-10;
    int max_newton = 50;
    int max_picard = 200;
    double line_search_shrink = 0.5;
    double min_step = 1.0 / 1048576.0;  // 2^-20
};

/// Frozen-domain problem on one slice [t_k, t_{k+1}).
///
/// Frames are full-grid arrays: finite on active and ghost nodes, quiet NaN
/// elsewhere.
struct SliceProblem {
    DomainMask mask;
    FluxModel flux;
    double freeze_time = 0.0;
    double span_begin = 0.0;
    double span_end = 1.0;
    int substeps = 1;
    BoundaryData boundary;
    std::vector<double> initial;
    Expr source;
    SolverConfig solver;

    /// Throws ValidationError listing every violated invariant.
    void validate() const;
};

struct StepStats {
    int newton_iterations = 0;
    int picard_iterations = 0;
    double residual_norm = 0.0;  // final infinity norm
    std::vector<double> residual_history;
};

struct SliceSolution {
    std::vector<double> times;
    std::vector<std::vector<double>> frames;
    std::vector<int> newton_iterations;   // per step
    std::vector<int> picard_iterations;   // per step
    std::vector<double> residual_norms;   // per step
};

/// Face-flux divergence on the active nodes (in mask.active order).
std::vector<double> discrete_flux_divergence(const DomainMask& mask, const FluxModel& flux, double t_freeze,
                                             std::span<const double> frame);

/// One backward Euler step: on active nodes
///   u - u_in - tau * (div_h A(t_k, x, u, grad_h u) + f(t_to, x)) = 0,
/// with ghosts set to psi(t_to). Converged when the infinity norm of that
/// residual is <= newton_tol.
std::pair<std::vector<double>, StepStats> implicit_step(const SliceProblem& problem,
                                                        std::span<const double> frame_in, double t_from,
                                                        double t_to);

SliceSolution solve_slice(const SliceProblem& problem);

/// Infinity norm of the step residual for a candidate frame.
double step_residual_norm(const SliceProblem& problem, std::span<const double> frame_in,
                          std::span<const double> frame_out, double t_from, double t_to);

} // namespace tslice
