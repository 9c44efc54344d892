#pragma once

#include "tslice/stitcher.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace tslice {

/// Self-verifying record: pass == (margin >= -tolerance), margin == rhs - lhs.
struct EstimateReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    nlohmann::json details = nlohmann::json::object();

    static EstimateReport make(std::string name, double lhs, double rhs, double tolerance);
};

inline constexpr double kIdentityTolerance = 1e-10;

/// max(|u0| on active nodes of Omega(0), |psi| on every node at every stamp).
/// An estimate of the data bound: expressions are only sampled.
double data_bound(const Scenario& sc, const SpaceTimeField& field);

EstimateReport max_principle_report(const SpaceTimeField& field, const Scenario& sc);

/// Slice-wise discrete energy inequality, with psi-differences in time and
/// face differences in space. Exact for the scheme in 1D and for linear
/// diffusion in 2D.
EstimateReport energy_report(const SpaceTimeField& field, const Scenario& sc);

EstimateReport l1_contraction_report(const Scenario& sc, const Expr& u0_a, const Expr& u0_b);

/// L1 distance of u_a - u_b over the active set at each stamp.
std::vector<double> l1_distance_series(const SpaceTimeField& a, const SpaceTimeField& b);

/// ||ext_a - ext_b||_{L1(Q_T)} by node-value quadrature and previous-frame
/// hold on the merged stamp set. Both fields must share the grid.
double space_time_l1_distance(const SpaceTimeField& a, const SpaceTimeField& b);

struct RefinementLevel {
    int n_slices = 0;
    int substeps = 0;
    double delta = 0.0;
    double tau = 0.0;
    double slab_hausdorff = 0.0;
};

struct RefinementStudy {
    std::vector<RefinementLevel> levels;
    /// distances[i] = ||ext_i - ext_{i+1}||_{L1(Q_T)}.
    std::vector<double> distances;
    double lipschitz = 0.0;

    std::vector<double> distance_ratios() const;
    std::vector<double> hausdorff_ratios() const;
};

/// Level i uses n_slices * 2^i slices with the per-slice substep count held,
/// so tau halves with Delta. A nonpositive resolution selects delta / 32 per
/// level for the Hausdorff samples.
RefinementStudy refinement_study(const Scenario& sc, int levels, double hausdorff_resolution = 0.0);

struct MmsErrors {
    double linf = 0.0;
    double l1 = 0.0;
    double final_time = 0.0;
    std::size_t active_nodes = 0;
};

/// Error of the last frame against `exact` on the last slice's active nodes.
MmsErrors mms_errors(const SpaceTimeField& field, const Expr& exact);
MmsErrors mms_report(const Scenario& sc, const Expr& exact);

/// log(e_coarse / e_fine) / log(factor).
double observed_order(double e_coarse, double e_fine, double factor);

} // namespace tslice
