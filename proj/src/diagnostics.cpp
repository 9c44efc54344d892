#include "tslice/diagnostics.hpp"

#include "tslice/discretization.hpp"
#include "tslice/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace tslice {

namespace {

double eval_at(const Expr& e, double t, const Point& x) {
    Env env;
    env.t = t;
    env.x = x[0];
    env.y = x[1];
    return e.eval(env);
}

void require_no_source(const Scenario& sc, const char* what) {
    if (!sc.source.is_zero())
        throw Error(ErrorKind::inapplicable_diagnostic, std::string(what) + " requires a zero source term");
}

// (time, stamp) pairs with one entry per distinct time; at a knot the stamp
// that starts the next slice wins, so holding the entry covers [t, next).
std::vector<std::pair<double, std::size_t>> hold_timeline(const SpaceTimeField& f) {
    std::vector<std::pair<double, std::size_t>> out;
    for (std::size_t i = 0; i < f.stamp_count(); ++i) {
        if (!out.empty() && out.back().first == f.times[i])
            out.back().second = i;
        else
            out.emplace_back(f.times[i], i);
    }
    return out;
}

std::size_t held_stamp(const std::vector<std::pair<double, std::size_t>>& line, double s) {
    auto it = std::upper_bound(line.begin(), line.end(), s,
                               [](double v, const std::pair<double, std::size_t>& e) { return v < e.first; });
    if (it == line.begin()) return line.front().second;
    return std::prev(it)->second;
}

} // namespace

EstimateReport EstimateReport::make(std::string name, double lhs, double rhs, double tolerance) {
    EstimateReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    r.tolerance = tolerance;
    r.pass = r.margin >= -tolerance;
    r.details["tolerance"] = tolerance;
    return r;
}

double data_bound(const Scenario& sc, const SpaceTimeField& field) {
    const Grid& g = sc.grid;
    double c = 0.0;
    const DomainMask& m0 = field.plan.masks.front();
    for (std::size_t n : m0.active) c = std::max(c, std::abs(eval_at(sc.u0, 0.0, g.position(n))));
    for (double t : field.times)
        for (std::size_t n = 0; n < g.node_count(); ++n) c = std::max(c, std::abs(sc.boundary.value(t, g.position(n))));
    return c;
}

EstimateReport max_principle_report(const SpaceTimeField& field, const Scenario& sc) {
    require_no_source(sc, "the maximum principle report");
    double lhs = 0.0;
    std::size_t worst_stamp = 0;
    for (std::size_t i = 0; i < field.stamp_count(); ++i) {
        for (std::size_t n : field.mask_at(i).active) {
            const double v = std::abs(field.frames[i][n]);
            if (!(v <= lhs)) {
                lhs = v;
                worst_stamp = i;
            }
        }
    }
    auto r = EstimateReport::make("max_principle", lhs, data_bound(sc, field), kIdentityTolerance);
    r.details["worst_time"] = field.times.empty() ? 0.0 : field.times[worst_stamp];
    r.details["stamps"] = field.stamp_count();
    return r;
}

EstimateReport energy_report(const SpaceTimeField& field, const Scenario& sc) {
    require_no_source(sc, "the energy report");
    if (!sc.flux.is_builtin())
        throw Error(ErrorKind::inapplicable_diagnostic, "the energy report needs a builtin flux with known constants");

    const Grid& g = sc.grid;
    const FluxModel& flux = sc.flux;
    const auto& k = flux.constants;
    const double p = flux.p;
    const double pc = flux.conjugate_exponent();
    const double alpha = k.coercivity_alpha;
    const double c = k.growth_c;
    // Young's inequality with c / (p' eps^p') = alpha / 2 leaves this factor on |grad psi|^p.
    const double K = (1.0 / p) * (1.0 + c * std::pow(2.0 * c / (alpha * pc), p / pc));
    const double lower = std::pow(k.lower_b, pc) / pc + k.lower_d;
    const double vol = g.cell_volume();
    const double c_bar = data_bound(sc, field);

    std::vector<Point> pos(g.node_count());
    for (std::size_t n = 0; n < pos.size(); ++n) pos[n] = g.position(n);
    auto psi_frame = [&](double t) {
        std::vector<double> v(g.node_count());
        for (std::size_t n = 0; n < v.size(); ++n) v[n] = sc.boundary.value(t, pos[n]);
        return v;
    };

    nlohmann::json slices = nlohmann::json::array();
    double worst = std::numeric_limits<double>::infinity();
    double worst_lhs = 0.0;
    double worst_rhs = 0.0;
    double sum_lhs = 0.0;
    double sum_rhs = 0.0;
    for (std::size_t s = 0; s < field.plan.slice_count(); ++s) {
        const DomainMask& mask = field.plan.masks[s];
        const FaceSet faces = FaceSet::build(mask);
        const auto [first, last] = field.slice_stamps(static_cast<int>(s));

        auto l2_gap = [&](std::size_t stamp, const std::vector<double>& psi) {
            double acc = 0.0;
            for (std::size_t n : mask.active) {
                const double w = field.frames[stamp][n] - psi[n];
                acc += w * w;
            }
            return 0.5 * vol * acc;
        };
        auto face_power = [&](std::span<const double> u) {
            double acc = 0.0;
            for (const Face& f : faces.faces) {
                const double d = (u[f.hi] - u[f.lo]) / g.spacing[static_cast<std::size_t>(f.axis)];
                acc += std::pow(std::abs(d), p);
            }
            return vol * acc;
        };

        std::vector<double> psi_prev = psi_frame(field.times[first]);
        const double start_gap = l2_gap(first, psi_prev);
        double gradient_term = 0.0;
        double psi_t_term = 0.0;
        double psi_grad_term = 0.0;
        double lower_term = 0.0;
        std::vector<double> psi_cur = psi_prev;
        for (std::size_t m = first + 1; m <= last; ++m) {
            const double tau = field.times[m] - field.times[m - 1];
            psi_cur = psi_frame(field.times[m]);
            gradient_term += tau * face_power(field.frames[m]);
            double dpsi = 0.0;
            for (std::size_t n : mask.active) dpsi += std::abs(psi_cur[n] - psi_prev[n]);
            psi_t_term += vol * dpsi;
            psi_grad_term += tau * face_power(psi_cur);
            lower_term += tau * vol * lower * static_cast<double>(faces.faces.size());
            psi_prev = psi_cur;
        }
        const double end_gap = l2_gap(last, psi_cur);
        const double lhs = end_gap + 0.5 * alpha * gradient_term;
        const double rhs = start_gap + 2.0 * c_bar * psi_t_term + K * psi_grad_term + lower_term;
        sum_lhs += lhs;
        sum_rhs += rhs;
        if (rhs - lhs < worst) {
            worst = rhs - lhs;
            worst_lhs = lhs;
            worst_rhs = rhs;
        }
        slices.push_back({{"slice", s},
                          {"lhs", lhs},
                          {"rhs", rhs},
                          {"margin", rhs - lhs},
                          {"gradient_term", gradient_term},
                          {"start_gap", start_gap},
                          {"end_gap", end_gap}});
    }
    auto r = EstimateReport::make("energy", worst_lhs, worst_rhs, kIdentityTolerance);
    r.details["slices"] = std::move(slices);
    r.details["global"] = {{"lhs", sum_lhs}, {"rhs", sum_rhs}, {"margin", sum_rhs - sum_lhs}};
    r.details["young_constant"] = K;
    r.details["data_bound"] = c_bar;
    return r;
}

std::vector<double> l1_distance_series(const SpaceTimeField& a, const SpaceTimeField& b) {
    if (a.stamp_count() != b.stamp_count() || a.times != b.times)
        throw Error(ErrorKind::validation, "L1 series needs fields on the same stamps");
    const double vol = a.plan.masks.front().grid.cell_volume();
    std::vector<double> out(a.stamp_count());
    for (std::size_t i = 0; i < a.stamp_count(); ++i) {
        double acc = 0.0;
        for (std::size_t n : a.mask_at(i).active) acc += std::abs(a.frames[i][n] - b.frames[i][n]);
        out[i] = vol * acc;
    }
    return out;
}

EstimateReport l1_contraction_report(const Scenario& sc, const Expr& u0_a, const Expr& u0_b) {
    require_no_source(sc, "the L1 contraction report");
    Scenario a = sc;
    Scenario b = sc;
    a.u0 = u0_a;
    b.u0 = u0_b;
    const SpaceTimeField fa = run_scheme(a).first;
    const SpaceTimeField fb = run_scheme(b).first;
    const std::vector<double> series = l1_distance_series(fa, fb);

    double max_increase = 0.0;
    for (std::size_t i = 1; i < series.size(); ++i) max_increase = std::max(max_increase, series[i] - series[i - 1]);
    auto r = EstimateReport::make("l1_contraction", series.back(), series.front(), kIdentityTolerance);
    r.details["times"] = fa.times;
    r.details["series"] = series;
    r.details["max_increase"] = max_increase;
    r.details["nonincreasing"] = max_increase <= kIdentityTolerance;
    return r;
}

double space_time_l1_distance(const SpaceTimeField& a, const SpaceTimeField& b) {
    const Grid& g = a.plan.masks.front().grid;
    if (!(g == b.plan.masks.front().grid)) throw Error(ErrorKind::validation, "fields live on different grids");
    const auto la = hold_timeline(a);
    const auto lb = hold_timeline(b);
    std::vector<double> breaks;
    for (auto& e : la) breaks.push_back(e.first);
    for (auto& e : lb) breaks.push_back(e.first);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    const double end = std::min(la.back().first, lb.back().first);

    double total = 0.0;
    for (std::size_t j = 0; j + 1 < breaks.size() && breaks[j + 1] <= end; ++j) {
        const auto& ua = a.extended_frames[held_stamp(la, breaks[j])];
        const auto& ub = b.extended_frames[held_stamp(lb, breaks[j])];
        double acc = 0.0;
        for (std::size_t n = 0; n < ua.size(); ++n) acc += std::abs(ua[n] - ub[n]);
        total += (breaks[j + 1] - breaks[j]) * g.cell_volume() * acc;
    }
    return total;
}

std::vector<double> RefinementStudy::distance_ratios() const {
    std::vector<double> out;
    for (std::size_t i = 1; i < distances.size(); ++i) out.push_back(distances[i] / distances[i - 1]);
    return out;
}

std::vector<double> RefinementStudy::hausdorff_ratios() const {
    std::vector<double> out;
    for (std::size_t i = 1; i < levels.size(); ++i) out.push_back(levels[i].slab_hausdorff / levels[i - 1].slab_hausdorff);
    return out;
}

RefinementStudy refinement_study(const Scenario& sc, int levels, double hausdorff_resolution) {
    if (levels < 2) throw Error(ErrorKind::validation, "refinement study needs at least 2 levels");
    RefinementStudy study;
    study.lipschitz = endpoint_lipschitz(sc.domain);
    std::vector<SpaceTimeField> fields;
    for (int i = 0; i < levels; ++i) {
        Scenario s = sc;
        s.n_slices = sc.n_slices << i;
        SpaceTimeField f = run_scheme(s).first;
        RefinementLevel lv;
        lv.n_slices = s.n_slices;
        lv.substeps = s.substeps;
        lv.delta = f.plan.delta;
        lv.tau = f.plan.delta / s.substeps;
        const double res = hausdorff_resolution > 0.0 ? hausdorff_resolution : f.plan.delta / 32.0;
        lv.slab_hausdorff = slab_hausdorff(s.domain, f.plan, res);
        study.levels.push_back(lv);
        if (!fields.empty()) study.distances.push_back(space_time_l1_distance(fields.back(), f));
        fields.push_back(std::move(f));
    }
    return study;
}

MmsErrors mms_errors(const SpaceTimeField& field, const Expr& exact) {
    MmsErrors e;
    const std::size_t last = field.stamp_count() - 1;
    const DomainMask& mask = field.mask_at(last);
    const Grid& g = mask.grid;
    e.final_time = field.times[last];
    e.active_nodes = mask.active.size();
    for (std::size_t n : mask.active) {
        const double d = std::abs(field.frames[last][n] - eval_at(exact, e.final_time, g.position(n)));
        e.linf = std::max(e.linf, d);
        e.l1 += g.cell_volume() * d;
    }
    return e;
}

MmsErrors mms_report(const Scenario& sc, const Expr& exact) { return mms_errors(run_scheme(sc).first, exact); }

double observed_order(double e_coarse, double e_fine, double factor) {
    return std::log(e_coarse / e_fine) / std::log(factor);
}

} // namespace tslice
