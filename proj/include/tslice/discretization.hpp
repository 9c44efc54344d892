#pragma once

#include "tslice/geometry.hpp"
#include "tslice/grid.hpp"

#include <array>
#include <span>
#include <vector>

namespace tslice {

/// Grid face between nodes lo and hi = lo + e_axis.
///
/// The face gradient has the one-sided quotient (u[hi] - u[lo]) / h along
/// `axis`; in 2D the transverse component averages the central (or, next to
/// the mask edge, one-sided) differences at both endpoints, stored as the
/// weighted node list `trans_node` / `trans_weight`.
struct Face {
    std::size_t lo = 0;
    std::size_t hi = 0;
    int axis = 0;
    Point mid{0.0, 0.0};
    int n_trans = 0;
    std::array<std::size_t, 4> trans_node{};
    std::array<double, 4> trans_weight{};
};

/// Faces of a mask that touch at least one active node.
struct FaceSet {
    std::vector<Face> faces;

    static FaceSet build(const DomainMask& mask);

    static Vec2 gradient(const Face& f, const Grid& grid, std::span<const double> u);
    static double midpoint_value(const Face& f, std::span<const double> u) { return 0.5 * (u[f.lo] + u[f.hi]); }
};

} // namespace tslice
