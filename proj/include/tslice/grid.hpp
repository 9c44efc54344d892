#pragma once

#include <array>
#include <cstddef>
#include <optional>

namespace tslice {

using Point = std::array<double, 2>;
using Vec2 = std::array<double, 2>;

// Uniform node lattice covering the box Q0 = [origin, origin + counts*spacing].
// counts are cells per axis, so axis a carries counts[a] + 1 nodes.
struct Grid {
    int dim = 1;
    Point origin{0.0, 0.0};
    Vec2 spacing{1.0, 1.0};
    std::array<int, 2> counts{1, 1};

    int nodes_along(int axis) const { return axis < dim ? counts[axis] + 1 : 1; }
    std::size_t node_count() const {
        return static_cast<std::size_t>(nodes_along(0)) * static_cast<std::size_t>(nodes_along(1));
    }
    std::size_t index(int i, int j = 0) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nodes_along(0)) + static_cast<std::size_t>(i);
    }
    std::array<int, 2> coords(std::size_t n) const {
        const auto nx = static_cast<std::size_t>(nodes_along(0));
        return {static_cast<int>(n % nx), static_cast<int>(n / nx)};
    }
    Point position(std::size_t n) const {
        const auto c = coords(n);
        return {origin[0] + c[0] * spacing[0], dim > 1 ? origin[1] + c[1] * spacing[1] : 0.0};
    }
    Point upper() const {
        return {origin[0] + counts[0] * spacing[0], dim > 1 ? origin[1] + counts[1] * spacing[1] : 0.0};
    }
    double cell_volume() const { return dim > 1 ? spacing[0] * spacing[1] : spacing[0]; }

    // Node one step along `axis` in direction `dir` (+1 or -1), if it exists.
    std::optional<std::size_t> neighbor(std::size_t n, int axis, int dir) const {
        auto c = coords(n);
        c[axis] += dir;
        if (c[axis] < 0 || c[axis] >= nodes_along(axis)) return std::nullopt;
        return index(c[0], c[1]);
    }

    /// Throws ValidationError unless dim is 1 or 2, spacing > 0 and counts >= 3.
    void validate() const;

    friend bool operator==(const Grid&, const Grid&) = default;
};

} // namespace tslice
