#pragma once

#include "tslice/expr.hpp"
#include "tslice/grid.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace tslice {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    friend bool operator==(const Interval&, const Interval&) = default;
};

struct Box {
    Point lo{0.0, 0.0};
    Point hi{0.0, 0.0};
};

/// A spatial section: a finite union of open intervals in 1D, or the open
/// sublevel set {level < 0} of a function in 2D.
class Region {
public:
    Region() = default;

    static Region from_intervals(std::vector<Interval> parts);
    static Region from_level_set(std::function<double(const Point&)> level, Box bbox);
    static Region empty(int dim);

    int dim() const { return dim_; }
    bool is_interval_set() const { return dim_ == 1; }
    bool is_empty() const;

    /// Sorted, pairwise disjoint, nondegenerate. Empty for 2D regions.
    std::span<const Interval> intervals() const { return intervals_; }
    const Box& bounding_box() const { return bbox_; }

    bool contains(const Point& p) const;
    bool contains_closure(const Point& p) const;

    /// Set difference this \ other.
    Region minus(const Region& other) const;

private:
    int dim_ = 1;
    std::vector<Interval> intervals_;
    std::function<double(const Point&)> level_;
    Box bbox_{};
    bool known_empty_ = false;
};

/// One component of a moving-interval domain. Piece j is in force on
/// [starts[j], starts[j+1]); starts[0] == 0 and every later start is a jump.
struct IntervalTrack {
    std::vector<double> starts{0.0};
    std::vector<Expr> left;
    std::vector<Expr> right;
};

/// Description of t -> Omega(t) on [0, T].
class TimeDomain {
public:
    enum class Kind { moving_intervals, implicit };

    static TimeDomain moving_intervals(std::vector<IntervalTrack> tracks, double horizon);
    /// Omega(t) = {phi_j(t, x) < 0} with phi_j in force from starts[j];
    /// `search` bounds the sublevel sets (used to locate 1D roots).
    static TimeDomain implicit(int dim, std::vector<double> starts, std::vector<Expr> phi, Box search,
                               double horizon);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    double horizon() const { return horizon_; }
    const std::vector<IntervalTrack>& tracks() const { return tracks_; }
    const std::vector<double>& implicit_starts() const { return starts_; }
    const std::vector<Expr>& implicit_phi() const { return phi_; }
    const Box& search_box() const { return search_; }

    /// Sorted jump times in (0, T).
    std::vector<double> jump_times() const;
    bool is_jump_time(double t) const;

    /// Checks the sampled invariants; returns human-readable problems.
    std::vector<std::string> check(int samples = 257) const;

private:
    friend Region section(const TimeDomain&, double);
    friend std::pair<Region, Region> side_limits(const TimeDomain&, double);

    Region evaluate(double t, bool left_limit) const;

    Kind kind_ = Kind::moving_intervals;
    int dim_ = 1;
    double horizon_ = 1.0;
    std::vector<IntervalTrack> tracks_;
    std::vector<double> starts_;
    std::vector<Expr> phi_;
    Box search_{};
};

enum class NodeState : std::int8_t { outside = -1, ghost = 0, active = 1 };

/// Discrete carrier of a section: active nodes are unknowns, ghost nodes
/// carry Dirichlet data.
struct DomainMask {
    Grid grid;
    std::vector<NodeState> state;
    std::vector<std::size_t> active;
    std::vector<std::size_t> ghost;

    bool is_active(std::size_t n) const { return state[n] == NodeState::active; }
    bool is_ghost(std::size_t n) const { return state[n] == NodeState::ghost; }
    bool in_mask(std::size_t n) const { return state[n] != NodeState::outside; }
    bool empty() const { return active.empty(); }
};

struct SlicePlan {
    std::vector<double> knots;
    std::vector<Region> regions;  // Omega(t_k+) per slice
    std::vector<DomainMask> masks;
    double delta = 0.0;

    std::size_t slice_count() const { return masks.size(); }
};

Region section(const TimeDomain& dom, double t);
/// (Omega(t-), Omega(t+)); Omega(0-) is Omega(0+).
std::pair<Region, Region> side_limits(const TimeDomain& dom, double t);
/// (Omega(t+) \ Omega(t-), Omega(t-) \ Omega(t+)); both empty off the jump set.
std::pair<Region, Region> classify_jump(const TimeDomain& dom, double t);

/// Active: node in the region with every axis neighbour in its closure.
/// Ghost: inactive axis neighbours of active nodes.
DomainMask rasterize(const Region& region, const Grid& grid);

SlicePlan build_slice_plan(const TimeDomain& dom, const Grid& grid, int n_slices);

/// Sampled point set in space-time; each point is (t, x) or (t, x, y).
struct PointCloud {
    int dim = 2;
    std::vector<double> coords;

    std::size_t size() const { return coords.size() / static_cast<std::size_t>(dim); }
    std::span<const double> point(std::size_t i) const {
        return {coords.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
    void add(std::initializer_list<double> p) { coords.insert(coords.end(), p); }
};

using PointSampler = std::function<PointCloud(double resolution)>;

/// Symmetric Hausdorff distance between two clouds. Throws
/// Error(undefined_distance) if either is empty.
double hausdorff_distance(const PointCloud& a, const PointCloud& b);
double hausdorff_distance(const PointSampler& a, const PointSampler& b, double resolution);

/// Samples of a fixed-time section at x spacing `resolution` (t coordinate 0).
PointSampler section_sampler(Region region);
/// Samples of the closure of the space-time domain.
PointSampler space_time_sampler(const TimeDomain& dom);
/// Samples of the closure of the slab union of [t_k, t_{k+1}) x Omega(t_k+).
PointSampler slab_sampler(const TimeDomain& dom, std::vector<double> knots);

/// Space-time Hausdorff distance between the slab union of a plan and the
/// domain it approximates.
double slab_hausdorff(const TimeDomain& dom, const SlicePlan& plan, double resolution);

/// Largest |d/dt| of any interval endpoint, estimated by finite differences
/// on each smooth piece. Zero for implicit domains.
double endpoint_lipschitz(const TimeDomain& dom, int samples = 1025);

} // namespace tslice
