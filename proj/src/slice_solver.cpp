#include "tslice/slice_solver.hpp"

#include "tslice/discretization.hpp"
#include "tslice/error.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tslice {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Env point_env(double t, const Point& x) {
    Env env;
    env.t = t;
    env.x = x[0];
    env.y = x[1];
    return env;
}

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return std::isfinite(m) ? m : std::numeric_limits<double>::infinity();
}

double two_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

} // namespace

double BoundaryData::value(double t, const Point& x) const { return psi.eval(point_env(t, x)); }

double BoundaryData::time_derivative(double t, const Point& x) const {
    if (psi_t) return psi_t->eval(point_env(t, x));
    const double h = kFiniteDifferenceStep * std::max(1.0, std::abs(t));
    return (value(t + h, x) - value(t - h, x)) / (2.0 * h);
}

Vec2 BoundaryData::gradient(double t, const Point& x, int dim) const {
    Vec2 g{0.0, 0.0};
    for (int a = 0; a < dim; ++a) {
        if (grad_psi[static_cast<std::size_t>(a)]) {
            g[static_cast<std::size_t>(a)] = grad_psi[static_cast<std::size_t>(a)]->eval(point_env(t, x));
            continue;
        }
        const double h = kFiniteDifferenceStep * std::max(1.0, std::abs(x[a]));
        Point up = x;
        Point dn = x;
        up[a] += h;
        dn[a] -= h;
        g[static_cast<std::size_t>(a)] = (value(t, up) - value(t, dn)) / (2.0 * h);
    }
    return g;
}

void SliceProblem::validate() const {
    std::vector<std::string> problems;
    const Grid& g = mask.grid;
    if (initial.size() != g.node_count()) problems.push_back("initial frame size does not match the grid");
    if (substeps < 1) problems.push_back("substeps must be at least 1");
    if (!(solver.newton_tol > 0.0)) problems.push_back("newton_tol must be positive");
    if (solver.max_newton < 0 || solver.max_picard < 0) problems.push_back("iteration limits must be nonnegative");
    if (!(solver.line_search_shrink > 0.0 && solver.line_search_shrink < 1.0))
        problems.push_back("line_search_shrink must lie in (0, 1)");
    if (!(span_end > span_begin)) problems.push_back("slice span must have positive length");
    for (auto& p : flux.problems()) problems.push_back(p);
    if (initial.size() == g.node_count()) {
        for (std::size_t n : mask.active) {
            if (!std::isfinite(initial[n])) {
                problems.push_back("initial frame is not finite on an active node");
                break;
            }
        }
        for (std::size_t n : mask.ghost) {
            const double want = boundary.value(freeze_time, g.position(n));
            if (!(std::abs(initial[n] - want) <= 1e-12 * (1.0 + std::abs(want)))) {
                problems.push_back("initial ghost values must equal psi(t_k, x)");
                break;
            }
        }
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

namespace {

// Nonlinear solver for the backward Euler steps of one slice. Holds the face
// list, the active-node numbering and the sparse LU symbolic analysis.
class StepSolver {
public:
    explicit StepSolver(const SliceProblem& pb)
        : pb_(pb), grid_(pb.mask.grid), faces_(FaceSet::build(pb.mask)), local_(grid_.node_count(), -1) {
        for (std::size_t i = 0; i < pb.mask.active.size(); ++i) local_[pb.mask.active[i]] = static_cast<int>(i);
    }

    std::size_t unknowns() const { return pb_.mask.active.size(); }

    // Full-grid frame with active values taken from `active_source`, ghosts
    // at psi(t) and NaN elsewhere.
    std::vector<double> embed(std::span<const double> active_source, double t) const {
        std::vector<double> u(grid_.node_count(), kNaN);
        for (std::size_t n : pb_.mask.active) u[n] = active_source[n];
        for (std::size_t n : pb_.mask.ghost) u[n] = pb_.boundary.value(t, grid_.position(n));
        return u;
    }

    std::vector<double> divergence(std::span<const double> u) const {
        std::vector<double> div(unknowns(), 0.0);
        for (const Face& f : faces_.faces) {
            const double F = face_flux(f, u);
            const double h = grid_.spacing[f.axis];
            if (local_[f.lo] >= 0) div[static_cast<std::size_t>(local_[f.lo])] += F / h;
            if (local_[f.hi] >= 0) div[static_cast<std::size_t>(local_[f.hi])] -= F / h;
        }
        return div;
    }

    std::vector<double> residual(std::span<const double> u, std::span<const double> u_in,
                                 const std::vector<double>& src, double tau) const {
        std::vector<double> r = divergence(u);
        for (std::size_t i = 0; i < r.size(); ++i) {
            const std::size_t n = pb_.mask.active[i];
            r[i] = u[n] - u_in[n] - tau * (r[i] + src[i]);
        }
        return r;
    }

    std::vector<double> source(double t) const {
        std::vector<double> s(unknowns(), 0.0);
        if (pb_.source.is_zero()) return s;
        for (std::size_t i = 0; i < s.size(); ++i)
            s[i] = pb_.source.eval(point_env(t, grid_.position(pb_.mask.active[i])));
        return s;
    }

    std::pair<std::vector<double>, StepStats> step(std::span<const double> frame_in, double t_from, double t_to) {
        if (!(t_to > t_from)) throw Error(ErrorKind::validation, "implicit step needs t_from < t_to");
        if (frame_in.size() != grid_.node_count()) throw Error(ErrorKind::validation, "frame size does not match grid");
        StepStats stats;
        std::vector<double> u = embed(frame_in, t_to);
        if (unknowns() == 0) return {u, stats};

        const double tau = t_to - t_from;
        const auto src = source(t_to);
        const SolverConfig& cfg = pb_.solver;
        std::vector<double> r = residual(u, frame_in, src, tau);
        double rn = inf_norm(r);
        stats.residual_history.push_back(rn);
        bool newton_mode = true;

        for (;;) {
            if (stats.newton_iterations + stats.picard_iterations > 0 && rn <= cfg.newton_tol) break;
            if (newton_mode && stats.newton_iterations < cfg.max_newton) {
                ++stats.newton_iterations;
                std::vector<double> delta;
                if (!linear_solve(u, tau, false, r, delta)) {
                    newton_mode = false;
                    continue;
                }
                const double r2 = two_norm(r);
                bool accepted = false;
                for (double lambda = 1.0; lambda >= cfg.min_step; lambda *= cfg.line_search_shrink) {
                    std::vector<double> trial = u;
                    for (std::size_t i = 0; i < delta.size(); ++i) trial[pb_.mask.active[i]] += lambda * delta[i];
                    std::vector<double> rt;
                    try {
                        rt = residual(trial, frame_in, src, tau);
                    } catch (const Error&) {
                        continue;
                    }
                    const double rt_inf = inf_norm(rt);
                    if (std::isfinite(rt_inf) && (two_norm(rt) <= (1.0 - 1e-4 * lambda) * r2 || rt_inf <= cfg.newton_tol)) {
                        u = std::move(trial);
                        r = std::move(rt);
                        accepted = true;
                        break;
                    }
                }
                if (!accepted) {
                    if (rn <= cfg.newton_tol) break;
                    newton_mode = false;
                }
            } else if (stats.picard_iterations < cfg.max_picard) {
                ++stats.picard_iterations;
                std::vector<double> delta;
                if (!linear_solve(u, tau, true, r, delta))
                    throw SolverStallError("Picard linear system is singular", stats.residual_history);
                for (std::size_t i = 0; i < delta.size(); ++i) u[pb_.mask.active[i]] += delta[i];
                r = residual(u, frame_in, src, tau);
            } else {
                std::ostringstream os;
                os << "nonlinear solver stalled at residual " << rn << " after " << stats.newton_iterations
                   << " Newton and " << stats.picard_iterations << " Picard iterations";
                throw SolverStallError(os.str(), stats.residual_history);
            }
            rn = inf_norm(r);
            stats.residual_history.push_back(rn);
        }
        stats.residual_norm = rn;
        return {u, stats};
    }

private:
    double face_flux(const Face& f, std::span<const double> u) const {
        const Vec2 xi = FaceSet::gradient(f, grid_, u);
        const double z = FaceSet::midpoint_value(f, u);
        return evaluate(pb_.flux, pb_.freeze_time, f.mid, z, xi, grid_.dim)[static_cast<std::size_t>(f.axis)];
    }

    // Solves M delta = -r where M is the Newton Jacobian, or with `picard`
    // the frozen-coefficient (secant) matrix. Returns false if singular.
    bool linear_solve(std::span<const double> u, double tau, bool picard, const std::vector<double>& r,
                      std::vector<double>& delta) {
        using Triplet = Eigen::Triplet<double>;
        const auto n = static_cast<Eigen::Index>(unknowns());
        std::vector<Triplet> trip;
        trip.reserve(static_cast<std::size_t>(n) + faces_.faces.size() * 12);
        for (Eigen::Index i = 0; i < n; ++i) trip.emplace_back(i, i, 1.0);
        const bool z_dep = pb_.flux.depends_on_z();
        const int dim = grid_.dim;

        std::array<std::pair<std::size_t, double>, 6> dF{};
        for (const Face& f : faces_.faces) {
            const auto a = static_cast<std::size_t>(f.axis);
            const double h = grid_.spacing[f.axis];
            const Vec2 xi = FaceSet::gradient(f, grid_, u);
            const double z = FaceSet::midpoint_value(f, u);
            int count = 0;
            if (picard) {
                const double Fa = evaluate(pb_.flux, pb_.freeze_time, f.mid, z, xi, dim)[a];
                double k = 0.0;
                if (std::abs(xi[a]) > 1e-12) {
                    k = Fa / xi[a];
                } else {
                    k = jacobian_xi(pb_.flux, pb_.freeze_time, f.mid, z, xi, dim)[a][a];
                }
                k = std::max(k, 1e-12);
                dF[0] = {f.hi, k / h};
                dF[1] = {f.lo, -k / h};
                count = 2;
                for (int t = 0; t < f.n_trans; ++t)
                    dF[static_cast<std::size_t>(count++)] = {f.trans_node[static_cast<std::size_t>(t)], 0.0};
            } else {
                const Mat2 J = jacobian_xi(pb_.flux, pb_.freeze_time, f.mid, z, xi, dim);
                const double dz = z_dep ? derivative_z(pb_.flux, pb_.freeze_time, f.mid, z, xi, dim)[a] : 0.0;
                dF[0] = {f.hi, J[a][a] / h + 0.5 * dz};
                dF[1] = {f.lo, -J[a][a] / h + 0.5 * dz};
                count = 2;
                const std::size_t tr = 1 - a;
                for (int t = 0; t < f.n_trans; ++t) {
                    const auto k = static_cast<std::size_t>(t);
                    dF[static_cast<std::size_t>(count++)] = {f.trans_node[k], dim > 1 ? J[a][tr] * f.trans_weight[k] : 0.0};
                }
            }
            for (int row_side = 0; row_side < 2; ++row_side) {
                const std::size_t row_node = row_side == 0 ? f.lo : f.hi;
                const int row = local_[row_node];
                if (row < 0) continue;
                const double sgn = row_side == 0 ? -tau / h : tau / h;
                for (int c = 0; c < count; ++c) {
                    const int col = local_[dF[static_cast<std::size_t>(c)].first];
                    if (col < 0) continue;
                    trip.emplace_back(row, col, sgn * dF[static_cast<std::size_t>(c)].second);
                }
            }
        }
        Eigen::SparseMatrix<double> M(n, n);
        M.setFromTriplets(trip.begin(), trip.end());
        M.makeCompressed();
        if (!analyzed_) {
            lu_.analyzePattern(M);
            analyzed_ = true;
        }
        lu_.factorize(M);
        if (lu_.info() != Eigen::Success) return false;
        Eigen::VectorXd rhs(n);
        for (Eigen::Index i = 0; i < n; ++i) rhs[i] = -r[static_cast<std::size_t>(i)];
        const Eigen::VectorXd sol = lu_.solve(rhs);
        if (lu_.info() != Eigen::Success || !sol.allFinite()) return false;
        delta.assign(sol.data(), sol.data() + n);
        return true;
    }

    const SliceProblem& pb_;
    const Grid& grid_;
    FaceSet faces_;
    std::vector<int> local_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
    bool analyzed_ = false;
};

} // namespace

std::vector<double> discrete_flux_divergence(const DomainMask& mask, const FluxModel& flux, double t_freeze,
                                             std::span<const double> frame) {
    SliceProblem pb;
    pb.mask = mask;
    pb.flux = flux;
    pb.freeze_time = t_freeze;
    return StepSolver(pb).divergence(frame);
}

std::pair<std::vector<double>, StepStats> implicit_step(const SliceProblem& problem,
                                                        std::span<const double> frame_in, double t_from,
                                                        double t_to) {
    StepSolver solver(problem);
    return solver.step(frame_in, t_from, t_to);
}

double step_residual_norm(const SliceProblem& problem, std::span<const double> frame_in,
                          std::span<const double> frame_out, double t_from, double t_to) {
    StepSolver solver(problem);
    const auto src = solver.source(t_to);
    return inf_norm(solver.residual(frame_out, frame_in, src, t_to - t_from));
}

SliceSolution solve_slice(const SliceProblem& problem) {
    problem.validate();
    StepSolver solver(problem);
    SliceSolution sol;
    sol.times.push_back(problem.span_begin);
    sol.frames.push_back(problem.initial);
    const double len = problem.span_end - problem.span_begin;
    for (int j = 0; j < problem.substeps; ++j) {
        const double t_from = sol.times.back();
        const double t_to = j + 1 == problem.substeps ? problem.span_end
                                                      : problem.span_begin + len * (j + 1) / problem.substeps;
        try {
            auto [frame, stats] = solver.step(sol.frames.back(), t_from, t_to);
            sol.times.push_back(t_to);
            sol.frames.push_back(std::move(frame));
            sol.newton_iterations.push_back(stats.newton_iterations);
            sol.picard_iterations.push_back(stats.picard_iterations);
            sol.residual_norms.push_back(stats.residual_norm);
        } catch (const SolverStallError& e) {
            throw e.with_substep(j);
        }
    }
    return sol;
}

} // namespace tslice
