#include "tslice/geometry.hpp"

#include "tslice/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace tslice {

void Grid::validate() const {
    std::vector<std::string> problems;
    if (dim != 1 && dim != 2) problems.push_back("grid dim must be 1 or 2");
    for (int a = 0; a < std::min(dim, 2); ++a) {
        if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a]))
            problems.push_back("grid spacing must be positive on axis " + std::to_string(a));
        if (counts[a] < 3) problems.push_back("grid needs at least 3 cells on axis " + std::to_string(a));
        if (!std::isfinite(origin[a])) problems.push_back("grid origin must be finite");
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

// ---------------------------------------------------------------------------
// Region

Region Region::from_intervals(std::vector<Interval> parts) {
    std::erase_if(parts, [](const Interval& iv) { return !(iv.hi > iv.lo); });
    std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const auto& iv : parts) {
        if (!merged.empty() && iv.lo < merged.back().hi) {
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        } else {
            merged.push_back(iv);
        }
    }
    Region r;
    r.dim_ = 1;
    r.intervals_ = std::move(merged);
    return r;
}

Region Region::from_level_set(std::function<double(const Point&)> level, Box bbox) {
    Region r;
    r.dim_ = 2;
    r.level_ = std::move(level);
    r.bbox_ = bbox;
    return r;
}

Region Region::empty(int dim) {
    Region r;
    r.dim_ = dim;
    r.known_empty_ = dim == 2;
    return r;
}

bool Region::is_empty() const { return dim_ == 1 ? intervals_.empty() : (known_empty_ || !level_); }

bool Region::contains(const Point& p) const {
    if (dim_ == 1) {
        return std::any_of(intervals_.begin(), intervals_.end(),
                           [&](const Interval& iv) { return iv.lo < p[0] && p[0] < iv.hi; });
    }
    return !is_empty() && level_(p) < 0.0;
}

bool Region::contains_closure(const Point& p) const {
    if (dim_ == 1) {
        return std::any_of(intervals_.begin(), intervals_.end(),
                           [&](const Interval& iv) { return iv.lo <= p[0] && p[0] <= iv.hi; });
    }
    return !is_empty() && level_(p) <= 0.0;
}

Region Region::minus(const Region& other) const {
    if (dim_ != other.dim_) throw Error(ErrorKind::validation, "region dimension mismatch");
    if (dim_ == 1) {
        std::vector<Interval> out;
        for (const auto& a : intervals_) {
            std::vector<Interval> pieces{a};
            for (const auto& b : other.intervals_) {
                std::vector<Interval> next;
                for (const auto& p : pieces) {
                    if (b.hi <= p.lo || b.lo >= p.hi) {
                        next.push_back(p);
                        continue;
                    }
                    if (p.lo < b.lo) next.push_back({p.lo, b.lo});
                    if (b.hi < p.hi) next.push_back({b.hi, p.hi});
                }
                pieces = std::move(next);
            }
            out.insert(out.end(), pieces.begin(), pieces.end());
        }
        return from_intervals(std::move(out));
    }
    if (is_empty()) return empty(2);
    if (other.is_empty()) return *this;
    auto la = level_;
    auto lb = other.level_;
    return from_level_set([la, lb](const Point& p) { return std::max(la(p), -lb(p)); }, bbox_);
}

// ---------------------------------------------------------------------------
// TimeDomain

TimeDomain TimeDomain::moving_intervals(std::vector<IntervalTrack> tracks, double horizon) {
    std::vector<std::string> problems;
    if (!(horizon > 0.0)) problems.push_back("time horizon T must be positive");
    if (tracks.empty()) problems.push_back("moving-interval domain needs at least one track");
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        const auto& tr = tracks[i];
        if (tr.starts.empty() || tr.starts.size() != tr.left.size() || tr.starts.size() != tr.right.size()) {
            problems.push_back("track " + std::to_string(i) + " has inconsistent piece lists");
            continue;
        }
        if (tr.starts.front() != 0.0) problems.push_back("track " + std::to_string(i) + " must start at t = 0");
        for (std::size_t j = 1; j < tr.starts.size(); ++j) {
            if (!(tr.starts[j] > tr.starts[j - 1]))
                problems.push_back("jump times of track " + std::to_string(i) + " must be strictly increasing");
            if (!(tr.starts[j] < horizon))
                problems.push_back("jump time " + std::to_string(tr.starts[j]) + " lies outside (0, T)");
        }
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
    TimeDomain d;
    d.kind_ = Kind::moving_intervals;
    d.dim_ = 1;
    d.horizon_ = horizon;
    d.tracks_ = std::move(tracks);
    return d;
}

TimeDomain TimeDomain::implicit(int dim, std::vector<double> starts, std::vector<Expr> phi, Box search,
                                double horizon) {
    std::vector<std::string> problems;
    if (dim != 1 && dim != 2) problems.push_back("implicit domain dim must be 1 or 2");
    if (!(horizon > 0.0)) problems.push_back("time horizon T must be positive");
    if (starts.empty() || starts.size() != phi.size()) problems.push_back("implicit domain has inconsistent pieces");
    else if (starts.front() != 0.0) problems.push_back("implicit domain must start at t = 0");
    for (std::size_t j = 1; j < starts.size(); ++j) {
        if (!(starts[j] > starts[j - 1])) problems.push_back("implicit jump times must be strictly increasing");
        if (!(starts[j] < horizon)) problems.push_back("implicit jump time lies outside (0, T)");
    }
    if (!(search.hi[0] > search.lo[0]) || (dim == 2 && !(search.hi[1] > search.lo[1])))
        problems.push_back("implicit domain search box is empty");
    if (!problems.empty()) throw ValidationError(std::move(problems));
    TimeDomain d;
    d.kind_ = Kind::implicit;
    d.dim_ = dim;
    d.horizon_ = horizon;
    d.starts_ = std::move(starts);
    d.phi_ = std::move(phi);
    d.search_ = search;
    return d;
}

std::vector<double> TimeDomain::jump_times() const {
    std::vector<double> out;
    if (kind_ == Kind::moving_intervals) {
        for (const auto& tr : tracks_)
            for (std::size_t j = 1; j < tr.starts.size(); ++j) out.push_back(tr.starts[j]);
    } else {
        for (std::size_t j = 1; j < starts_.size(); ++j) out.push_back(starts_[j]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    std::erase_if(out, [&](double t) { return !(t > 0.0 && t < horizon_); });
    return out;
}

bool TimeDomain::is_jump_time(double t) const {
    const auto j = jump_times();
    return std::binary_search(j.begin(), j.end(), t);
}

namespace {

std::size_t piece_index(const std::vector<double>& starts, double t, bool left_limit) {
    std::size_t idx = 0;
    for (std::size_t j = 1; j < starts.size(); ++j) {
        if (left_limit ? starts[j] < t : starts[j] <= t) idx = j;
    }
    return idx;
}

// Open sublevel intervals of f inside [lo, hi], located by sampling and bisection.
std::vector<Interval> sublevel_intervals(const std::function<double(double)>& f, double lo, double hi) {
    constexpr int kSamples = 4096;
    auto root = [&](double a, double b) {
        double fa = f(a);
        for (int it = 0; it < 200 && b - a > 0.0; ++it) {
            const double m = 0.5 * (a + b);
            if (m <= a || m >= b) break;
            const double fm = f(m);
            if ((fm < 0.0) == (fa < 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        // Boundary point of {f < 0}: the endpoint where f is not negative.
        return f(a) < 0.0 ? b : a;
    };
    std::vector<Interval> out;
    double prev_x = lo;
    bool prev_in = f(lo) < 0.0;
    double open_at = lo;
    for (int i = 1; i <= kSamples; ++i) {
        const double x = i == kSamples ? hi : lo + (hi - lo) * i / kSamples;
        const bool in = f(x) < 0.0;
        if (in != prev_in) {
            const double r = root(prev_x, x);
            if (in) {
                open_at = r;
            } else {
                out.push_back({open_at, r});
            }
        }
        prev_x = x;
        prev_in = in;
    }
    if (prev_in) out.push_back({open_at, hi});
    return out;
}

} // namespace

Region TimeDomain::evaluate(double t, bool left_limit) const {
    if (kind_ == Kind::moving_intervals) {
        std::vector<Interval> parts;
        Env env;
        env.t = t;
        for (const auto& tr : tracks_) {
            const std::size_t j = piece_index(tr.starts, t, left_limit);
            parts.push_back({tr.left[j].eval(env), tr.right[j].eval(env)});
        }
        return Region::from_intervals(std::move(parts));
    }
    const Expr& phi = phi_[piece_index(starts_, t, left_limit)];
    if (dim_ == 1) {
        auto f = [&](double x) {
            Env env;
            env.t = t;
            env.x = x;
            return phi.eval(env);
        };
        return Region::from_intervals(sublevel_intervals(f, search_.lo[0], search_.hi[0]));
    }
    return Region::from_level_set(
        [phi, t](const Point& p) {
            Env env;
            env.t = t;
            env.x = p[0];
            env.y = p[1];
            return phi.eval(env);
        },
        search_);
}

namespace {

void check_time(const TimeDomain& dom, double t) {
    if (!(t >= 0.0 && t <= dom.horizon())) {
        std::ostringstream os;
        os << "time " << t << " outside [0, " << dom.horizon() << "]";
        throw Error(ErrorKind::domain_range, os.str());
    }
}

} // namespace

Region section(const TimeDomain& dom, double t) {
    check_time(dom, t);
    return dom.evaluate(t, false);
}

std::pair<Region, Region> side_limits(const TimeDomain& dom, double t) {
    check_time(dom, t);
    Region plus = dom.evaluate(t, false);
    if (t == 0.0) return {plus, plus};
    return {dom.evaluate(t, true), std::move(plus)};
}

std::pair<Region, Region> classify_jump(const TimeDomain& dom, double t) {
    if (!dom.is_jump_time(t)) return {Region::empty(dom.dim()), Region::empty(dom.dim())};
    auto [minus, plus] = side_limits(dom, t);
    return {plus.minus(minus), minus.minus(plus)};
}

std::vector<std::string> TimeDomain::check(int samples) const {
    std::vector<std::string> problems;
    std::vector<double> times;
    for (int i = 0; i < samples; ++i) times.push_back(horizon_ * i / (samples - 1));
    const auto jumps = jump_times();
    try {
        const Region initial = evaluate(0.0, false);
        bool nonempty = !initial.is_empty();
        if (dim_ == 2) {
            nonempty = false;
            for (int i = 0; i <= 64 && !nonempty; ++i)
                for (int j = 0; j <= 64 && !nonempty; ++j)
                    nonempty = initial.contains({search_.lo[0] + (search_.hi[0] - search_.lo[0]) * i / 64.0,
                                                 search_.lo[1] + (search_.hi[1] - search_.lo[1]) * j / 64.0});
        }
        if (!nonempty) problems.push_back("initial section Omega(0+) is empty");
        if (kind_ != Kind::moving_intervals) return problems;
        for (double t : times) {
            Env env;
            env.t = t;
            std::vector<Interval> parts;
            for (std::size_t k = 0; k < tracks_.size(); ++k) {
                const auto& tr = tracks_[k];
                const std::size_t j = piece_index(tr.starts, t, false);
                const double l = tr.left[j].eval(env);
                const double r = tr.right[j].eval(env);
                if (!(l < r) && !std::binary_search(jumps.begin(), jumps.end(), t)) {
                    std::ostringstream os;
                    os << "track " << k << " has left >= right at t = " << t;
                    problems.push_back(os.str());
                    break;
                }
                parts.push_back({l, r});
            }
            std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
            for (std::size_t k = 1; k < parts.size(); ++k) {
                if (parts[k].lo < parts[k - 1].hi) {
                    std::ostringstream os;
                    os << "tracks overlap at t = " << t;
                    problems.push_back(os.str());
                    break;
                }
            }
        }
    } catch (const Error& e) {
        problems.push_back(std::string("domain evaluation failed: ") + e.what());
    }
    return problems;
}

// ---------------------------------------------------------------------------
// Rasterization

namespace {

void check_margin(const Region& region, const Grid& grid) {
    const Point lo = grid.origin;
    const Point hi = grid.upper();
    if (region.is_interval_set()) {
        for (const auto& iv : region.intervals()) {
            if (iv.lo < lo[0] + 2.0 * grid.spacing[0] || iv.hi > hi[0] - 2.0 * grid.spacing[0]) {
                std::ostringstream os;
                os << "section component (" << iv.lo << ", " << iv.hi << ") is closer than 2 cells to the grid box ["
                   << lo[0] << ", " << hi[0] << "]";
                throw Error(ErrorKind::domain_range, os.str());
            }
        }
        return;
    }
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        const auto c = grid.coords(n);
        bool near_edge = false;
        for (int a = 0; a < grid.dim; ++a) near_edge = near_edge || c[a] < 2 || c[a] > grid.counts[a] - 2;
        if (near_edge && region.contains(grid.position(n))) {
            const Point p = grid.position(n);
            std::ostringstream os;
            os << "section reaches within 2 cells of the grid box at (" << p[0] << ", " << p[1] << ")";
            throw Error(ErrorKind::domain_range, os.str());
        }
    }
}

// 4-connected components of the nodes selected by `in`.
std::vector<int> label_components(const Grid& grid, const std::vector<char>& in, int& count) {
    std::vector<int> label(grid.node_count(), -1);
    count = 0;
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < grid.node_count(); ++s) {
        if (!in[s] || label[s] >= 0) continue;
        label[s] = count;
        stack.push_back(s);
        while (!stack.empty()) {
            const std::size_t n = stack.back();
            stack.pop_back();
            for (int a = 0; a < grid.dim; ++a) {
                for (int dir : {-1, 1}) {
                    const auto m = grid.neighbor(n, a, dir);
                    if (m && in[*m] && label[*m] < 0) {
                        label[*m] = count;
                        stack.push_back(*m);
                    }
                }
            }
        }
        ++count;
    }
    return label;
}

} // namespace

DomainMask rasterize(const Region& region, const Grid& grid) {
    if (region.dim() != grid.dim) throw Error(ErrorKind::validation, "region and grid dimensions differ");
    DomainMask mask;
    mask.grid = grid;
    mask.state.assign(grid.node_count(), NodeState::outside);
    if (region.is_empty()) return mask;
    check_margin(region, grid);

    std::vector<char> inside(grid.node_count(), 0);
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        inside[n] = region.contains(grid.position(n)) ? 1 : 0;
        if (!inside[n]) continue;
        bool ok = true;
        for (int a = 0; a < grid.dim && ok; ++a) {
            for (int dir : {-1, 1}) {
                const auto m = grid.neighbor(n, a, dir);
                if (!m || !region.contains_closure(grid.position(*m))) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) mask.state[n] = NodeState::active;
    }

    if (region.is_interval_set()) {
        for (const auto& iv : region.intervals()) {
            bool any = false;
            for (std::size_t n = 0; n < grid.node_count() && !any; ++n) {
                const double x = grid.position(n)[0];
                any = mask.is_active(n) && iv.lo < x && x < iv.hi;
            }
            if (!any) {
                std::ostringstream os;
                os << "section component (" << iv.lo << ", " << iv.hi << ") has width " << iv.hi - iv.lo
                   << ", too thin for grid spacing " << grid.spacing[0] << " (need at least 2 cells)";
                throw Error(ErrorKind::degenerate_section, os.str());
            }
        }
    } else {
        int count = 0;
        const auto label = label_components(grid, inside, count);
        std::vector<char> has_active(static_cast<std::size_t>(count), 0);
        for (std::size_t n = 0; n < grid.node_count(); ++n)
            if (mask.is_active(n)) has_active[static_cast<std::size_t>(label[n])] = 1;
        for (int c = 0; c < count; ++c) {
            if (!has_active[static_cast<std::size_t>(c)]) {
                std::ostringstream os;
                os << "section component " << c << " has no interior node; features are thinner than 2 cells "
                   << "at spacing " << grid.spacing[0];
                throw Error(ErrorKind::degenerate_section, os.str());
            }
        }
    }

    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        if (!mask.is_active(n)) continue;
        mask.active.push_back(n);
        for (int a = 0; a < grid.dim; ++a) {
            for (int dir : {-1, 1}) {
                const auto m = grid.neighbor(n, a, dir);
                if (m && !mask.is_active(*m)) mask.state[*m] = NodeState::ghost;
            }
        }
    }
    for (std::size_t n = 0; n < grid.node_count(); ++n)
        if (mask.is_ghost(n)) mask.ghost.push_back(n);
    return mask;
}

SlicePlan build_slice_plan(const TimeDomain& dom, const Grid& grid, int n_slices) {
    if (n_slices < 1) throw Error(ErrorKind::validation, "n_slices must be at least 1");
    const double T = dom.horizon();
    std::vector<double> breaks{0.0};
    for (double j : dom.jump_times()) breaks.push_back(j);
    breaks.push_back(T);

    SlicePlan plan;
    plan.knots.push_back(0.0);
    for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
        const double a = breaks[s];
        const double b = breaks[s + 1];
        const int m = std::max(1, static_cast<int>(std::ceil(n_slices * (b - a) / T - 1e-9)));
        for (int j = 1; j < m; ++j) plan.knots.push_back(a + (b - a) * j / m);
        plan.knots.push_back(b);
    }
    for (std::size_t k = 0; k + 1 < plan.knots.size(); ++k) {
        plan.delta = std::max(plan.delta, plan.knots[k + 1] - plan.knots[k]);
        const double tk = plan.knots[k];
        Region region = section(dom, tk);
        try {
            plan.masks.push_back(rasterize(region, grid));
        } catch (const Error& e) {
            std::ostringstream os;
            os << e.what() << " (slice " << k << ", knot t = " << tk << ")";
            throw Error(e.kind(), os.str());
        }
        plan.regions.push_back(std::move(region));
    }
    return plan;
}

// ---------------------------------------------------------------------------
// Hausdorff distance

namespace {

// Uniform bucket grid over a point cloud for nearest-neighbour queries.
class CloudIndex {
public:
    CloudIndex(const PointCloud& cloud, double cell) : cloud_(cloud), dim_(cloud.dim), cell_(cell) {
        for (int d = 0; d < dim_; ++d) {
            lo_[d] = std::numeric_limits<double>::infinity();
            double hi = -lo_[d];
            for (std::size_t i = 0; i < cloud.size(); ++i) {
                lo_[d] = std::min(lo_[d], cloud.point(i)[d]);
                hi = std::max(hi, cloud.point(i)[d]);
            }
            n_[d] = static_cast<int>(std::floor((hi - lo_[d]) / cell_)) + 1;
        }
        std::size_t total = 1;
        for (int d = 0; d < dim_; ++d) total *= static_cast<std::size_t>(n_[d]);
        start_.assign(total + 1, 0);
        std::vector<std::size_t> cell_of(cloud.size());
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            cell_of[i] = flat(cell_coords(cloud.point(i)));
            ++start_[cell_of[i] + 1];
        }
        std::partial_sum(start_.begin(), start_.end(), start_.begin());
        order_.resize(cloud.size());
        std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
        for (std::size_t i = 0; i < cloud.size(); ++i) order_[fill[cell_of[i]]++] = i;
    }

    // Distance to the nearest point, or any value <= `good_enough` once one
    // that close is found.
    double nearest(std::span<const double> q, double good_enough) const {
        const auto c = cell_coords(q);
        double best2 = std::numeric_limits<double>::infinity();
        const double good2 = good_enough * good_enough;
        const int max_ring = *std::max_element(n_.begin(), n_.begin() + dim_) + 1;
        for (int ring = 0; ring <= max_ring; ++ring) {
            visit_shell(c, ring, [&](std::size_t cell) {
                for (std::size_t k = start_[cell]; k < start_[cell + 1]; ++k) {
                    const auto p = cloud_.point(order_[k]);
                    double d2 = 0.0;
                    for (int d = 0; d < dim_; ++d) d2 += (p[d] - q[d]) * (p[d] - q[d]);
                    best2 = std::min(best2, d2);
                }
            });
            if (best2 <= good2) break;
            const double reach = ring * cell_;
            if (best2 <= reach * reach) break;
        }
        return std::sqrt(best2);
    }

private:
    std::array<int, 3> cell_coords(std::span<const double> p) const {
        std::array<int, 3> c{0, 0, 0};
        for (int d = 0; d < dim_; ++d)
            c[d] = std::clamp(static_cast<int>(std::floor((p[d] - lo_[d]) / cell_)), 0, n_[d] - 1);
        return c;
    }

    std::size_t flat(const std::array<int, 3>& c) const {
        std::size_t idx = 0;
        for (int d = dim_ - 1; d >= 0; --d) idx = idx * static_cast<std::size_t>(n_[d]) + static_cast<std::size_t>(c[d]);
        return idx;
    }

    template <class F>
    void visit_shell(const std::array<int, 3>& c, int ring, F&& f) const {
        std::array<int, 3> o{-ring, -ring, -ring};
        for (int d = dim_; d < 3; ++d) o[d] = 0;
        for (;;) {
            int cheb = 0;
            bool in_range = true;
            std::array<int, 3> cc{0, 0, 0};
            for (int d = 0; d < dim_; ++d) {
                cheb = std::max(cheb, std::abs(o[d]));
                cc[d] = c[d] + o[d];
                in_range = in_range && cc[d] >= 0 && cc[d] < n_[d];
            }
            if (cheb == ring && in_range) f(flat(cc));
            int d = 0;
            while (d < dim_ && ++o[d] > ring) {
                o[d] = -ring;
                ++d;
            }
            if (d == dim_) break;
        }
    }

    const PointCloud& cloud_;
    int dim_;
    double cell_;
    std::array<double, 3> lo_{};
    std::array<int, 3> n_{1, 1, 1};
    std::vector<std::size_t> start_;
    std::vector<std::size_t> order_;
};

double directed(const PointCloud& a, const CloudIndex& b) {
    // Shuffled so the running maximum grows early and most queries stop at
    // the first close-enough neighbour.
    std::vector<std::size_t> order(a.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(0x5eed);
    std::shuffle(order.begin(), order.end(), rng);
    double worst = 0.0;
    for (std::size_t i : order) worst = std::max(worst, b.nearest(a.point(i), worst));
    return worst;
}

double suggested_cell(const PointCloud& a, const PointCloud& b) {
    double extent = 0.0;
    for (const PointCloud* c : {&a, &b}) {
        for (int d = 0; d < c->dim; ++d) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (std::size_t i = 0; i < c->size(); ++i) {
                lo = std::min(lo, c->point(i)[d]);
                hi = std::max(hi, c->point(i)[d]);
            }
            extent = std::max(extent, hi - lo);
        }
    }
    const double n = static_cast<double>(std::max(a.size(), b.size()));
    const double cell = extent / std::pow(n / 8.0, 1.0 / a.dim);
    return cell > 0.0 ? cell : 1.0;
}

} // namespace

double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
    if (a.size() == 0 || b.size() == 0) throw Error(ErrorKind::undefined_distance, "Hausdorff distance of an empty set");
    if (a.dim != b.dim) throw Error(ErrorKind::validation, "point clouds have different dimensions");
    const double cell = suggested_cell(a, b);
    const CloudIndex ia(a, cell);
    const CloudIndex ib(b, cell);
    return std::max(directed(a, ib), directed(b, ia));
}

double hausdorff_distance(const PointSampler& a, const PointSampler& b, double resolution) {
    if (!(resolution > 0.0)) throw Error(ErrorKind::validation, "sampling resolution must be positive");
    return hausdorff_distance(a(resolution), b(resolution));
}

namespace {

// Appends (t, x) samples of an interval set on the global lattice i*res plus
// the exact endpoints, or (t, x, y) lattice samples of a level set.
void append_section(PointCloud& cloud, double t, const Region& region, double res) {
    if (region.is_interval_set()) {
        for (const auto& iv : region.intervals()) {
            cloud.add({t, iv.lo});
            for (double i = std::floor(iv.lo / res) + 1; i * res < iv.hi; i += 1.0) cloud.add({t, i * res});
            cloud.add({t, iv.hi});
        }
        return;
    }
    if (region.is_empty()) return;
    const Box& bb = region.bounding_box();
    for (double i = std::ceil(bb.lo[0] / res); i * res <= bb.hi[0]; i += 1.0)
        for (double j = std::ceil(bb.lo[1] / res); j * res <= bb.hi[1]; j += 1.0)
            if (region.contains_closure({i * res, j * res})) cloud.add({t, i * res, j * res});
}

std::vector<double> time_samples(double a, double b, double res) {
    std::vector<double> out{a};
    for (double i = std::floor(a / res) + 1; i * res < b; i += 1.0) out.push_back(i * res);
    out.push_back(b);
    return out;
}

} // namespace

PointSampler section_sampler(Region region) {
    return [region = std::move(region)](double res) {
        PointCloud c;
        c.dim = region.dim() + 1;
        append_section(c, 0.0, region, res);
        return c;
    };
}

PointSampler space_time_sampler(const TimeDomain& dom) {
    return [dom](double res) {
        PointCloud c;
        c.dim = dom.dim() + 1;
        std::vector<double> times = time_samples(0.0, dom.horizon(), res);
        for (double j : dom.jump_times()) times.push_back(j);
        std::sort(times.begin(), times.end());
        times.erase(std::unique(times.begin(), times.end()), times.end());
        for (double t : times) {
            if (dom.is_jump_time(t)) {
                auto [minus, plus] = side_limits(dom, t);
                append_section(c, t, minus, res);
                append_section(c, t, plus, res);
            } else {
                append_section(c, t, section(dom, t), res);
            }
        }
        return c;
    };
}

PointSampler slab_sampler(const TimeDomain& dom, std::vector<double> knots) {
    return [dom, knots = std::move(knots)](double res) {
        PointCloud c;
        c.dim = dom.dim() + 1;
        for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
            const Region region = section(dom, knots[k]);
            for (double t : time_samples(knots[k], knots[k + 1], res)) append_section(c, t, region, res);
        }
        return c;
    };
}

double slab_hausdorff(const TimeDomain& dom, const SlicePlan& plan, double resolution) {
    return hausdorff_distance(space_time_sampler(dom), slab_sampler(dom, plan.knots), resolution);
}

double endpoint_lipschitz(const TimeDomain& dom, int samples) {
    if (dom.kind() != TimeDomain::Kind::moving_intervals) return 0.0;
    double L = 0.0;
    for (const auto& tr : dom.tracks()) {
        for (std::size_t j = 0; j < tr.starts.size(); ++j) {
            const double a = tr.starts[j];
            const double b = j + 1 < tr.starts.size() ? tr.starts[j + 1] : dom.horizon();
            const double step = (b - a) / (samples - 1);
            for (const Expr* e : {&tr.left[j], &tr.right[j]}) {
                double prev = 0.0;
                for (int i = 0; i < samples; ++i) {
                    Env env;
                    env.t = a + step * i;
                    const double v = e->eval(env);
                    if (i > 0) L = std::max(L, std::abs(v - prev) / step);
                    prev = v;
                }
            }
        }
    }
    return L;
}

} // namespace tslice
