#pragma once

#include "tslice/scenario_io.hpp"
#include "tslice/stitcher.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace tslice::testing {

inline Grid line_grid(double lo, double hi, double h) {
    Grid g;
    g.dim = 1;
    g.origin = {lo, 0.0};
    g.spacing = {h, 1.0};
    g.counts = {static_cast<int>(std::lround((hi - lo) / h)), 1};
    return g;
}

struct Piece {
    double start;
    const char* left;
    const char* right;
};

inline TimeDomain intervals(std::vector<Piece> pieces, double T) {
    IntervalTrack tr;
    tr.starts.clear();
    for (const auto& p : pieces) {
        tr.starts.push_back(p.start);
        tr.left.push_back(Expr::parse(p.left));
        tr.right.push_back(Expr::parse(p.right));
    }
    return TimeDomain::moving_intervals({tr}, T);
}

inline Scenario scenario_1d(Grid grid, TimeDomain dom, int slices, int substeps, FluxModel flux, const char* u0,
                            const char* psi, const char* source = "0") {
    Scenario sc;
    sc.grid = grid;
    sc.domain = std::move(dom);
    sc.n_slices = slices;
    sc.substeps = substeps;
    sc.flux = std::move(flux);
    sc.u0 = Expr::parse(u0);
    sc.boundary.psi = Expr::parse(psi);
    sc.source = Expr::parse(source);
    return sc;
}

inline double eval_tx(const Expr& e, double t, const Point& x) {
    Env env;
    env.t = t;
    env.x = x[0];
    env.y = x[1];
    return e.eval(env);
}

} // namespace tslice::testing
