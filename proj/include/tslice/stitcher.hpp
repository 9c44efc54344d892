#pragma once

#include "tslice/expr.hpp"
#include "tslice/flux.hpp"
#include "tslice/geometry.hpp"
#include "tslice/slice_solver.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tslice {

enum class FrameMode { knots, all };

struct OutputOptions {
    std::string dir = "out";
    FrameMode frames = FrameMode::knots;
};

struct Scenario {
    Grid grid;
    TimeDomain domain;
    int n_slices = 1;
    int substeps = 1;
    FluxModel flux;
    BoundaryData boundary;
    Expr u0;
    Expr source;
    SolverConfig solver;
    OutputOptions output;

    double horizon() const { return domain.horizon(); }
    /// Every invariant problem found (grid, domain, flux, data); empty when valid.
    std::vector<std::string> problems() const;
};

/// Glued solution u^Delta and its extension by psi.
///
/// Stamp i belongs to slice slice_of[i]; each slice contributes substeps + 1
/// stamps from t_k to t_{k+1}, so every interior knot appears twice (end of
/// slice k-1, start of slice k).
struct SpaceTimeField {
    SlicePlan plan;
    std::vector<int> slice_of;
    std::vector<double> times;
    std::vector<std::vector<double>> frames;           // NaN off active and ghost nodes
    std::vector<std::vector<double>> extended_frames;  // psi off active nodes

    std::size_t stamp_count() const { return times.size(); }
    /// [first, last] stamp indices of slice k.
    std::pair<std::size_t, std::size_t> slice_stamps(int k) const;
    const DomainMask& mask_at(std::size_t stamp) const {
        return plan.masks[static_cast<std::size_t>(slice_of[stamp])];
    }
};

struct SliceRunStats {
    int slice = 0;
    double t_begin = 0.0;
    double t_end = 0.0;
    std::size_t active_nodes = 0;
    int newton_iterations = 0;
    int picard_iterations = 0;
    double max_residual = 0.0;
};

struct RunReport {
    std::vector<SliceRunStats> slices;
    double wall_seconds = 0.0;
};

/// Initial data for the next slice: copy on the common active set, psi(t_k)
/// on newly active nodes and on ghosts, NaN elsewhere.
std::vector<double> transfer(std::span<const double> end_frame_prev, const DomainMask& mask_prev,
                             const DomainMask& mask_next, const BoundaryData& boundary, double t_k);

/// Slice-0 initial data: u0 on active nodes, psi(0) on ghosts.
std::vector<double> initial_frame(const Scenario& sc, const DomainMask& mask0);

std::pair<SpaceTimeField, RunReport> run_scheme(const Scenario& sc);

/// (last frame of slice k-1, first frame of slice k) for 1 <= k <= N-1.
std::pair<std::vector<double>, std::vector<double>> knot_traces(const SpaceTimeField& field, int k);

} // namespace tslice
