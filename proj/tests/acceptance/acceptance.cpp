// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Usage: tslice_acceptance [criterion numbers...]

#include "tslice/diagnostics.hpp"
#include "tslice/error.hpp"
#include "tslice/scenario_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace tslice;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarioDir = TSLICE_SCENARIO_DIR;
constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[violated: " << what << "] ";
        }
    }
};

Grid line_grid(double lo, double hi, double h) {
    Grid g;
    g.dim = 1;
    g.origin = {lo, 0.0};
    g.spacing = {h, 1.0};
    g.counts = {static_cast<int>(std::lround((hi - lo) / h)), 1};
    return g;
}

TimeDomain track(std::vector<double> starts, std::vector<const char*> left, std::vector<const char*> right, double T) {
    IntervalTrack tr;
    tr.starts = std::move(starts);
    for (std::size_t i = 0; i < left.size(); ++i) {
        tr.left.push_back(Expr::parse(left[i]));
        tr.right.push_back(Expr::parse(right[i]));
    }
    return TimeDomain::moving_intervals({tr}, T);
}

Scenario make(Grid g, TimeDomain dom, int slices, int substeps, FluxModel flux, const std::string& u0,
              const std::string& psi, const std::string& source = "0") {
    Scenario sc;
    sc.grid = g;
    sc.domain = std::move(dom);
    sc.n_slices = slices;
    sc.substeps = substeps;
    sc.flux = std::move(flux);
    sc.u0 = Expr::parse(u0);
    sc.boundary.psi = Expr::parse(psi);
    sc.source = Expr::parse(source);
    return sc;
}

double at(const Expr& e, double t, const Point& x) {
    Env env;
    env.t = t;
    env.x = x[0];
    env.y = x[1];
    return e.eval(env);
}

std::vector<fs::path> bundled() {
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(kScenarioDir))
        if (entry.path().extension() == ".scn") out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

Outcome max_principle() {
    Outcome o;
    struct Case {
        std::string name;
        Scenario sc;
    };
    std::vector<Case> cases;
    for (const char* f : {"heat_fixed.scn", "moving_heat.scn", "expand_jump_p3.scn", "contract_jump_p15.scn",
                          "zmod_moving.scn", "disk_2d_linear.scn"})
        cases.push_back({f, load_scenario(kScenarioDir / f)});
    const Grid g = line_grid(-0.25, 2.0, 1.0 / 64);
    cases.push_back({"moving p=1.5", make(g, track({0.0}, {"0.2*t"}, {"1 + t/2"}, 1.0), 8, 8,
                                          FluxModel::p_laplacian(1.5), "sin(2*pi*x)", "0.3*cos(3*t)")});
    cases.push_back({"contracting p=3", make(g, track({0.0, 0.5}, {"0", "0.4"}, {"1.6", "1.2 - 0.2*t"}, 1.0), 8, 8,
                                             FluxModel::p_laplacian(3.0), "1.5*cos(4*x)", "-0.8 + t")});
    cases.push_back({"expanding p=2", make(g, track({0.0, 0.4}, {"0.3", "0"}, {"1", "1.7"}, 1.0), 8, 8,
                                           FluxModel::p_laplacian(2.0), "-x", "0.9*sin(5*t)")});
    std::set<double> ps;
    for (const auto& c : cases) {
        const Scenario& sc = c.sc;
        ps.insert(sc.flux.p);
        const SpaceTimeField f = run_scheme(sc).first;
        // Data bound evaluated here directly from the expressions.
        double C = 0.0;
        for (std::size_t n : f.plan.masks[0].active) C = std::max(C, std::abs(at(sc.u0, 0.0, sc.grid.position(n))));
        for (double t : f.times)
            for (std::size_t n = 0; n < sc.grid.node_count(); ++n)
                C = std::max(C, std::abs(at(sc.boundary.psi, t, sc.grid.position(n))));
        double worst = 0.0;
        for (std::size_t i = 0; i < f.stamp_count(); ++i)
            for (std::size_t n : f.mask_at(i).active) worst = std::max(worst, std::abs(f.frames[i][n]));
        o.require(worst <= C + 1e-10, c.name);
        o.detail << c.name << ": " << worst << "<=" << C << "; ";
    }
    o.require(cases.size() >= 6, "at least 6 scenarios");
    for (double p : {1.5, 2.0, 3.0}) o.require(ps.contains(p), "p = " + std::to_string(p) + " covered");
    return o;
}

Outcome constant_preservation() {
    Outcome o;
    const Grid g = line_grid(-0.5, 3.0, 1.0 / 32);
    const TimeDomain dom =
        track({0.0, 0.3, 0.6}, {"0.1*t", "0.1*t", "0.4"}, {"1 + 0.5*t", "2 + 0.5*t", "1.3 - 0.2*t"}, 1.0);
    std::vector<FluxModel> fluxes{FluxModel::linear_diffusion(), FluxModel::p_laplacian(1.5), FluxModel::p_laplacian(2.0),
                                  FluxModel::p_laplacian(3.0),  FluxModel::p_laplacian(4.0), FluxModel::z_modulated(1.5),
                                  FluxModel::z_modulated(2.5)};
    for (double c : {0.7, -1.3}) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", c);
        for (const auto& flux : fluxes) {
            const SpaceTimeField f = run_scheme(make(g, dom, 6, 4, flux, buf, buf)).first;
            double dev = 0.0;
            for (std::size_t i = 0; i < f.stamp_count(); ++i)
                for (std::size_t n = 0; n < g.node_count(); ++n)
                    if (f.mask_at(i).in_mask(n)) dev = std::max(dev, std::abs(f.frames[i][n] - c));
            o.require(dev <= 1e-10, std::string(to_string(flux.kind)) + " p=" + std::to_string(flux.p));
            o.detail << to_string(flux.kind) << "(" << flux.p << ") c=" << c << " dev " << dev << "; ";
        }
    }
    return o;
}

double heat_error(double h, double tau) {
    const Grid g = line_grid(-4 * h, 1 + 4 * h, h);
    const int steps = static_cast<int>(std::lround(0.1 / tau));
    const Scenario sc = make(g, track({0.0}, {"0"}, {"1"}, 0.1), 1, steps, FluxModel::p_laplacian(2.0), "sin(pi*x)", "0");
    const SpaceTimeField f = run_scheme(sc).first;
    double err = 0.0;
    for (std::size_t n : f.mask_at(f.stamp_count() - 1).active) {
        const double x = g.position(n)[0];
        err = std::max(err, std::abs(f.frames.back()[n] - std::exp(-kPi * kPi * 0.1) * std::sin(kPi * x)));
    }
    return err;
}

Outcome heat_oracle() {
    Outcome o;
    const double e1 = heat_error(1.0 / 128, 1e-4);
    const double e2 = heat_error(1.0 / 256, 2.5e-5);
    o.require(e1 <= 5e-3, "error <= 5e-3");
    o.require(e1 / e2 >= 3.2, "reduction >= 3.2");
    o.detail << "err(h=1/128, tau=1e-4) " << e1 << "; err(h/2, tau/4) " << e2 << "; ratio " << e1 / e2;
    return o;
}

Outcome l1_contraction() {
    Outcome o;
    const Scenario sc = load_scenario(kScenarioDir / "moving_heat.scn");
    const EstimateReport r = l1_contraction_report(sc, sc.u0, Expr::parse("x*(1.2 - x) - 0.3"));
    const auto series = r.details["series"].get<std::vector<double>>();
    double max_inc = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < series.size(); ++i) max_inc = std::max(max_inc, series[i] - series[i - 1]);
    o.require(max_inc <= 1e-10, "series nonincreasing");
    o.require(series.back() <= series.front(), "final <= initial");
    o.detail << "initial " << series.front() << ", final " << series.back() << ", largest step increase " << max_inc
             << " over " << series.size() << " stamps";
    return o;
}

Outcome energy() {
    Outcome o;
    int checked = 0;
    for (const auto& path : bundled()) {
        const Scenario sc = load_scenario(path);
        if (!sc.flux.is_builtin()) continue;
        const EstimateReport r = energy_report(run_scheme(sc).first, sc);
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& s : r.details["slices"]) worst = std::min(worst, s["margin"].get<double>());
        o.require(r.pass && worst >= -r.tolerance, path.filename().string());
        o.detail << path.filename().string() << " " << worst << "; ";
        ++checked;
    }
    o.require(checked >= 6, "at least 6 bundled scenarios");
    return o;
}

Outcome hausdorff() {
    Outcome o;
    const TimeDomain cone = track({0.0}, {"0"}, {"1 + t"}, 1.0);
    const Grid g = line_grid(-0.5, 2.5, 1.0 / 64);
    const double L = endpoint_lipschitz(cone);
    std::vector<double> d;
    for (int n : {4, 8, 16}) {
        const SlicePlan plan = build_slice_plan(cone, g, n);
        const double dist = slab_hausdorff(cone, plan, 1.0 / 256);
        d.push_back(dist);
        o.require(dist <= (1 + L) * plan.delta, "bound at N=" + std::to_string(n));
        o.detail << "N=" << n << " d=" << dist << " (bound " << (1 + L) * plan.delta << "); ";
    }
    for (std::size_t i = 1; i < d.size(); ++i) {
        const double ratio = d[i] / d[i - 1];
        o.require(ratio >= 0.4 && ratio <= 0.6, "halving within 20%");
        o.detail << "ratio " << ratio << "; ";
    }
    return o;
}

Outcome cauchy() {
    Outcome o;
    const Scenario sc = load_scenario(kScenarioDir / "cone_heat.scn");
    const RefinementStudy s = refinement_study(sc, 4);
    for (double d : s.distances) o.require(d > 0.0, "distances positive");
    for (double r : s.distance_ratios()) o.require(r <= 0.7, "ratio <= 0.7");
    o.require(s.levels.size() >= 3, "at least 3 levels");
    o.detail << "distances";
    for (double d : s.distances) o.detail << " " << d;
    o.detail << "; ratios";
    for (double r : s.distance_ratios()) o.detail << " " << r;
    return o;
}

Outcome jump_traces() {
    Outcome o;
    const Grid g = line_grid(-0.5, 2.5, 1.0 / 64);
    const TimeDomain dom = track({0.0, 0.3, 0.6}, {"0", "0", "0.5"}, {"1", "1.8", "1.5"}, 1.0);
    const Scenario sc = make(g, dom, 10, 3, FluxModel::p_laplacian(3.0), "sin(pi*x)", "0.2 + 0.5*t*x");
    const SpaceTimeField f = run_scheme(sc).first;
    int expansion_nodes = 0;
    int contraction_nodes = 0;
    for (double tj : {0.3, 0.6}) {
        const auto k = static_cast<int>(std::find(f.plan.knots.begin(), f.plan.knots.end(), tj) - f.plan.knots.begin());
        o.require(k > 0 && k < static_cast<int>(f.plan.slice_count()), "jump is a knot");
        auto [minus, plus] = knot_traces(f, k);
        const auto [grown, shrunk] = classify_jump(dom, tj);
        const DomainMask& prev = f.plan.masks[static_cast<std::size_t>(k - 1)];
        const DomainMask& next = f.plan.masks[static_cast<std::size_t>(k)];
        for (std::size_t n : next.active) {
            const Point x = g.position(n);
            if (grown.contains(x) || !prev.is_active(n)) {
                o.require(plus[n] == at(sc.boundary.psi, tj, x), "psi on new region");
                ++expansion_nodes;
            } else {
                o.require(plus[n] == minus[n], "restriction of previous trace");
                if (!shrunk.is_empty()) ++contraction_nodes;
            }
        }
        for (std::size_t n = 0; n < g.node_count(); ++n)
            if (!next.in_mask(n)) o.require(std::isnan(plus[n]), "undefined off the new mask");
    }
    o.require(expansion_nodes > 0 && contraction_nodes > 0, "both jump kinds exercised");
    o.detail << expansion_nodes << " expansion nodes equal psi, " << contraction_nodes
             << " nodes restricted after contraction";
    return o;
}

Outcome structure() {
    Outcome o;
    SampleBox box;
    box.dim = 2;
    std::vector<std::pair<std::string, FluxModel>> fluxes;
    for (double p : {1.5, 2.0, 3.0, 4.0}) fluxes.emplace_back("p_laplacian " + std::to_string(p).substr(0, 3), FluxModel::p_laplacian(p));
    for (double p : {1.5, 2.0, 3.0}) fluxes.emplace_back("z_modulated " + std::to_string(p).substr(0, 3), FluxModel::z_modulated(p));
    for (const auto& [name, f] : fluxes) {
        const StructureReport r = check_structure(f, 10000, 2024, box);
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& c : r.conditions) worst = std::min(worst, c.worst_margin);
        o.require(r.pass(), name);
        o.detail << name << " " << worst << "; ";
    }
    StructuralConstants k;
    const FluxModel bad = FluxModel::custom(Expr::parse("-xi1"), Expr::parse("-xi2"), 2.0, k);
    const StructureReport r = check_structure(bad, 10000, 2024, box);
    o.require(!r.condition(2).pass && !r.condition(3).pass, "A = -xi fails L2 and L3");
    o.detail << "A=-xi: L2 " << r.condition(2).worst_margin << ", L3 " << r.condition(3).worst_margin;
    return o;
}

// Manufactured solutions; each source is u_t - u_xx worked out by hand.
double mms_error(const Grid& g, const TimeDomain& dom, int slices, int substeps, const char* exact, const char* source) {
    return mms_report(make(g, dom, slices, substeps, FluxModel::p_laplacian(2.0), exact, exact, source), Expr::parse(exact))
        .linf;
}

Outcome mms() {
    Outcome o;
    const TimeDomain moving = track({0.0}, {"0"}, {"1 + t/2"}, 0.5);
    auto grid_for = [](double h) { return line_grid(-4 * h, 1.5 + 4 * h, h); };

    // u = e^{-t} x (1 + t/2 - x): u_t - u_xx = e^{-t} (x^2 - x (1 + t/2) + x/2 + 2).
    // Quadratic in x, so the second difference is exact and only the time error remains.
    const char* uq = "exp(-t)*x*(1 + t/2 - x)";
    const char* fq = "exp(-t)*(x^2 - x*(1 + t/2) + x/2 + 2)";
    const double et1 = mms_error(grid_for(1.0 / 64), moving, 5, 80, uq, fq);
    const double et2 = mms_error(grid_for(1.0 / 64), moving, 5, 160, uq, fq);
    const double temporal = observed_order(et1, et2, 2.0);
    o.require(temporal >= 1.0, "moving temporal order >= 1");
    o.detail << "moving temporal " << temporal << " (" << et1 << " -> " << et2 << ")";

    // Same moving domain, u = e^{-t} sin(pi x / 2):
    // u_t - u_xx = (pi^2/4 - 1) e^{-t} sin(pi x / 2).
    const char* us = "exp(-t)*sin(pi*x/2)";
    const char* fs_ = "(pi^2/4 - 1)*exp(-t)*sin(pi*x/2)";
    const double es1 = mms_error(grid_for(1.0 / 16), moving, 5, 10000, us, fs_);
    const double es2 = mms_error(grid_for(1.0 / 32), moving, 5, 10000, us, fs_);
    const double spatial = observed_order(es1, es2, 2.0);
    o.require(spatial >= 1.0, "moving spatial order >= 1");
    o.detail << "; moving spatial " << spatial << " (" << es1 << " -> " << es2 << ")";

    // Fixed domain (0, 1), u = e^{-t} sin(pi x): u_t - u_xx = (pi^2 - 1) e^{-t} sin(pi x).
    const TimeDomain fixed = track({0.0}, {"0"}, {"1"}, 0.1);
    const char* uf = "exp(-t)*sin(pi*x)";
    const char* ff = "(pi^2 - 1)*exp(-t)*sin(pi*x)";
    const double ef1 = mms_error(line_grid(-0.25, 1.25, 1.0 / 16), fixed, 1, 20000, uf, ff);
    const double ef2 = mms_error(line_grid(-0.25, 1.25, 1.0 / 32), fixed, 1, 20000, uf, ff);
    const double fixed_spatial = observed_order(ef1, ef2, 2.0);
    o.require(fixed_spatial >= 1.9, "fixed spatial order >= 1.9");
    o.detail << "; fixed spatial " << fixed_spatial << " (" << ef1 << " -> " << ef2 << ")";
    return o;
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"maximum principle", max_principle},
        {"constant preservation", constant_preservation},
        {"analytic heat oracle", heat_oracle},
        {"discrete L1 contraction", l1_contraction},
        {"energy inequality", energy},
        {"slab Hausdorff convergence", hausdorff},
        {"L1(Q_T) Cauchy refinement", cauchy},
        {"jump trace conditions", jump_traces},
        {"structure checks", structure},
        {"manufactured-solution orders", mms},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.contains(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        bool pass = false;
        std::string detail;
        try {
            Outcome o = criteria[i].second();
            pass = o.pass;
            detail = o.detail.str();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %2d %s (%.1fs): %s\n", pass ? "PASS" : "FAIL", id, criteria[i].first, secs, detail.c_str());
        std::fflush(stdout);
        failures += pass ? 0 : 1;
    }
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
