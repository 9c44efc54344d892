#include "tslice/stitcher.hpp"

#include "tslice/error.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace tslice {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double eval_at(const Expr& e, double t, const Point& x) {
    Env env;
    env.t = t;
    env.x = x[0];
    env.y = x[1];
    return e.eval(env);
}

} // namespace

std::vector<std::string> Scenario::problems() const {
    std::vector<std::string> out;
    try {
        grid.validate();
    } catch (const ValidationError& e) {
        out.insert(out.end(), e.problems().begin(), e.problems().end());
        return out;
    }
    if (domain.dim() != grid.dim) out.push_back("domain dimension does not match grid dimension");
    if (n_slices < 1) out.push_back("time.slices must be at least 1");
    if (substeps < 1) out.push_back("time.substeps must be at least 1");
    for (auto& p : flux.problems()) out.push_back("flux: " + p);
    if (!(solver.newton_tol > 0.0)) out.push_back("solver.newton_tol must be positive");
    if (solver.max_newton < 0) out.push_back("solver.max_newton must be nonnegative");
    if (solver.max_picard < 0) out.push_back("solver.max_picard must be nonnegative");
    for (auto& p : domain.check()) out.push_back("domain: " + p);
    if (!out.empty()) return out;

    // Sections must stay 2 cells inside the grid box at all sampled times.
    const double T = horizon();
    std::vector<double> times;
    for (int i = 0; i <= 64; ++i) times.push_back(T * i / 64.0);
    for (double j : domain.jump_times()) times.push_back(j);
    for (double t : times) {
        try {
            auto [minus, plus] = side_limits(domain, t);
            (void)rasterize(plus, grid);
            (void)rasterize(minus, grid);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::domain_range) {
                out.push_back(std::string("grid: ") + e.what());
                break;
            }
        }
    }
    try {
        const DomainMask m0 = rasterize(section(domain, 0.0), grid);
        for (std::size_t n : m0.active) {
            if (!std::isfinite(eval_at(u0, 0.0, grid.position(n)))) {
                out.push_back("data: u0 is not finite on the initial domain");
                break;
            }
        }
    } catch (const Error& e) {
        out.push_back(std::string("initial domain: ") + e.what());
    }
    try {
        for (int i = 0; i <= 8; ++i) {
            const double t = T * i / 8.0;
            for (std::size_t n = 0; n < grid.node_count(); ++n) (void)boundary.value(t, grid.position(n));
        }
    } catch (const Error& e) {
        out.push_back(std::string("data: psi must evaluate finitely on Q_T: ") + e.what());
    }
    return out;
}

std::pair<std::size_t, std::size_t> SpaceTimeField::slice_stamps(int k) const {
    std::size_t first = stamp_count();
    std::size_t last = 0;
    for (std::size_t i = 0; i < stamp_count(); ++i) {
        if (slice_of[i] != k) continue;
        first = std::min(first, i);
        last = i;
    }
    if (first == stamp_count()) throw Error(ErrorKind::index_range, "slice " + std::to_string(k) + " has no stamps");
    return {first, last};
}

std::vector<double> transfer(std::span<const double> end_frame_prev, const DomainMask& mask_prev,
                             const DomainMask& mask_next, const BoundaryData& boundary, double t_k) {
    const Grid& g = mask_next.grid;
    std::vector<double> out(g.node_count(), kNaN);
    for (std::size_t n : mask_next.active)
        out[n] = mask_prev.is_active(n) ? end_frame_prev[n] : boundary.value(t_k, g.position(n));
    for (std::size_t n : mask_next.ghost) out[n] = boundary.value(t_k, g.position(n));
    return out;
}

std::vector<double> initial_frame(const Scenario& sc, const DomainMask& mask0) {
    const Grid& g = mask0.grid;
    std::vector<double> out(g.node_count(), kNaN);
    for (std::size_t n : mask0.active) out[n] = eval_at(sc.u0, 0.0, g.position(n));
    for (std::size_t n : mask0.ghost) out[n] = sc.boundary.value(0.0, g.position(n));
    return out;
}

std::pair<SpaceTimeField, RunReport> run_scheme(const Scenario& sc) {
    const auto start = std::chrono::steady_clock::now();
    if (auto problems = sc.problems(); !problems.empty()) throw ValidationError(std::move(problems));

    SpaceTimeField field;
    RunReport report;
    field.plan = build_slice_plan(sc.domain, sc.grid, sc.n_slices);
    const SlicePlan& plan = field.plan;
    const Grid& g = sc.grid;

    std::vector<double> carry;
    for (std::size_t k = 0; k < plan.slice_count(); ++k) {
        const int slice = static_cast<int>(k);
        SliceProblem pb;
        pb.mask = plan.masks[k];
        pb.flux = sc.flux;
        pb.freeze_time = plan.knots[k];
        pb.span_begin = plan.knots[k];
        pb.span_end = plan.knots[k + 1];
        pb.substeps = sc.substeps;
        pb.boundary = sc.boundary;
        pb.source = sc.source;
        pb.solver = sc.solver;
        try {
            pb.initial = k == 0 ? initial_frame(sc, pb.mask)
                                : transfer(carry, plan.masks[k - 1], pb.mask, sc.boundary, plan.knots[k]);
        } catch (const Error& e) {
            throw Error(e.kind(), std::string(e.what()) + " (slice " + std::to_string(k) + ")");
        }

        SliceSolution sol;
        try {
            sol = solve_slice(pb);
        } catch (const SolverStallError& e) {
            throw e.with_slice(slice);
        } catch (const ValidationError&) {
            throw;
        } catch (const Error& e) {
            throw Error(e.kind(), std::string(e.what()) + " (slice " + std::to_string(k) + ")");
        }

        SliceRunStats stats;
        stats.slice = slice;
        stats.t_begin = pb.span_begin;
        stats.t_end = pb.span_end;
        stats.active_nodes = pb.mask.active.size();
        for (std::size_t j = 0; j < sol.newton_iterations.size(); ++j) {
            stats.newton_iterations += sol.newton_iterations[j];
            stats.picard_iterations += sol.picard_iterations[j];
            stats.max_residual = std::max(stats.max_residual, sol.residual_norms[j]);
        }
        report.slices.push_back(stats);

        for (std::size_t j = 0; j < sol.frames.size(); ++j) {
            const double t = sol.times[j];
            std::vector<double> ext(g.node_count());
            for (std::size_t n = 0; n < g.node_count(); ++n)
                ext[n] = pb.mask.is_active(n) ? sol.frames[j][n] : sc.boundary.value(t, g.position(n));
            field.slice_of.push_back(slice);
            field.times.push_back(t);
            field.frames.push_back(sol.frames[j]);
            field.extended_frames.push_back(std::move(ext));
        }
        carry = sol.frames.back();
    }
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {std::move(field), report};
}

std::pair<std::vector<double>, std::vector<double>> knot_traces(const SpaceTimeField& field, int k) {
    const int n = static_cast<int>(field.plan.slice_count());
    if (k < 1 || k > n - 1) {
        std::ostringstream os;
        os << "knot index " << k << " outside [1, " << n - 1 << "]";
        throw Error(ErrorKind::index_range, os.str());
    }
    const auto prev = field.slice_stamps(k - 1);
    const auto next = field.slice_stamps(k);
    return {field.frames[prev.second], field.frames[next.first]};
}

} // namespace tslice
