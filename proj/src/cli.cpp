#include "tslice/cli.hpp"

#include "tslice/diagnostics.hpp"
#include "tslice/error.hpp"
#include "tslice/scenario_io.hpp"

#include <CLI11.hpp>

#include <fstream>

namespace tslice {

namespace {

namespace fs = std::filesystem;

void write_json(const fs::path& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

fs::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create output directory '" + dir + "': " + ec.message());
    return dir;
}

} // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Time-sliced solver for nonlinear parabolic problems on moving domains", "tslice"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir;
    std::string frames_mode;
    auto* run = app.add_subcommand("run", "solve a scenario and write frames plus summary.json");
    run->add_option("scenario", scenario_path, "scenario file")->required();
    run->add_option("--out", out_dir, "output directory (overrides [output] dir)");
    run->add_option("--frames", frames_mode, "all | knots")->check(CLI::IsMember({"all", "knots"}));

    int levels = 3;
    double resolution = 0.0;
    auto* refine = app.add_subcommand("refine", "refinement study: slab Hausdorff and L1(Q_T) Cauchy distances");
    refine->add_option("scenario", scenario_path, "scenario file")->required();
    refine->add_option("--levels", levels, "number of levels (>= 2)")->check(CLI::Range(2, 12));
    refine->add_option("--resolution", resolution, "Hausdorff sample spacing (default delta/32)");

    int samples = 10000;
    std::uint64_t seed = 1;
    auto* check = app.add_subcommand("check-flux", "sample the structure conditions of the scenario flux");
    check->add_option("scenario", scenario_path, "scenario file")->required();
    check->add_option("--samples", samples, "sample count")->check(CLI::PositiveNumber);
    check->add_option("--seed", seed, "random seed");

    auto* geometry = app.add_subcommand("geometry", "write the slice-plan preview and slab Hausdorff distance");
    geometry->add_option("scenario", scenario_path, "scenario file")->required();
    geometry->add_option("--out", out_dir, "output directory (overrides [output] dir)");
    geometry->add_option("--resolution", resolution, "Hausdorff sample spacing (default delta/32)");

    std::string u0b;
    auto* verify = app.add_subcommand("verify", "maximum principle, energy and (with --u0b) L1 contraction reports");
    verify->add_option("scenario", scenario_path, "scenario file")->required();
    verify->add_option("--u0b", u0b, "second initial datum for the L1 contraction report");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_input_error;
    }

    try {
        Scenario sc = load_scenario(scenario_path);
        if (*run) {
            if (!frames_mode.empty()) sc.output.frames = frames_mode == "all" ? FrameMode::all : FrameMode::knots;
            const fs::path dir = out_dir.empty() ? fs::path(sc.output.dir) : fs::path(out_dir);
            auto [field, report] = run_scheme(sc);
            const auto files = write_frames(field, sc, dir, sc.output.frames);
            nlohmann::json summary = to_json(report);
            summary["scenario_hash"] = scenario_hash(sc);
            summary["frames_written"] = files.size() - 1;
            write_json(dir / "summary.json", summary);
            out << "solved " << field.plan.slice_count() << " slices, " << field.stamp_count() << " stamps; wrote "
                << files.size() - 1 << " frames to " << dir.string() << '\n';
            return exit_ok;
        }
        if (*refine) {
            const RefinementStudy study = refinement_study(sc, levels, resolution);
            out << to_json(study).dump(2) << '\n';
            return exit_ok;
        }
        if (*check) {
            SampleBox box;
            box.dim = sc.grid.dim;
            box.t = {0.0, sc.horizon()};
            box.x = {sc.grid.origin[0], sc.grid.upper()[0]};
            const StructureReport rep = check_structure(sc.flux, samples, seed, box);
            out << to_json(rep).dump(2) << '\n';
            return rep.pass() ? exit_ok : exit_failed_report;
        }
        if (*geometry) {
            const SlicePlan plan = build_slice_plan(sc.domain, sc.grid, sc.n_slices);
            const double res = resolution > 0.0 ? resolution : plan.delta / 32.0;
            nlohmann::json j = plan_preview(plan);
            j["slab_hausdorff"] = slab_hausdorff(sc.domain, plan, res);
            j["hausdorff_resolution"] = res;
            j["lipschitz"] = endpoint_lipschitz(sc.domain);
            const fs::path dir = prepare_dir(out_dir.empty() ? sc.output.dir : out_dir);
            write_json(dir / "geometry.json", j);
            out << "slab Hausdorff distance " << j["slab_hausdorff"].get<double>() << " at delta " << plan.delta
                << "; wrote " << (dir / "geometry.json").string() << '\n';
            return exit_ok;
        }
        // verify
        std::optional<Expr> second;
        if (!u0b.empty()) {
            try {
                second = Expr::parse(u0b);
            } catch (const Error& e) {
                throw ValidationError({std::string("--u0b: ") + e.what()});
            }
        }
        const SpaceTimeField field = run_scheme(sc).first;
        std::vector<EstimateReport> reports;
        reports.push_back(max_principle_report(field, sc));
        reports.push_back(energy_report(field, sc));
        if (second) reports.push_back(l1_contraction_report(sc, sc.u0, *second));
        nlohmann::json j = nlohmann::json::array();
        bool all = true;
        for (const auto& r : reports) {
            nlohmann::json rj = to_json(r);
            rj.erase("details");
            j.push_back(rj);
            all = all && r.pass;
            err << r.name << ": " << (r.pass ? "pass" : "FAIL") << " (margin " << r.margin << ")\n";
        }
        out << j.dump(2) << '\n';
        return all ? exit_ok : exit_failed_report;
    } catch (const SolverStallError& e) {
        err << "solver stall: " << e.what() << '\n';
        return exit_solver_stall;
    } catch (const ValidationError& e) {
        err << "invalid input:\n";
        for (const auto& p : e.problems()) err << "  " << p << '\n';
        return exit_input_error;
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_input_error;
    }
}

} // namespace tslice
