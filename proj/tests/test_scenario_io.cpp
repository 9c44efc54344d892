#include "support.hpp"

#include "tslice/error.hpp"
#include "tslice/scenario_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tslice;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"SCN(# minimal scenario
[grid]
dim = 1
xmin = -0.5
xmax = 1.5
h = 0.0625

[time]
T = 0.5
slices = 2
substeps = 3

[domain]
type = moving_intervals
left = "0"
right = "1"

[flux]
type = p_laplacian
p = 3

[data]
u0 = "sin(pi*x)"
psi = "0"
)SCN";

std::vector<std::string> problems_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ValidationError& e) {
        return e.problems();
    }
    return {};
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
    const auto at = s.find(from);
    if (at != std::string::npos) s.replace(at, from.size(), to);
    return s;
}

fs::path temp_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("tslice_io_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST(ScenarioFile, MinimalWithDefaults) {
    const Scenario sc = parse_scenario(kMinimal);
    EXPECT_EQ(sc.grid.dim, 1);
    EXPECT_EQ(sc.grid.counts[0], 32);
    EXPECT_EQ(sc.horizon(), 0.5);
    EXPECT_EQ(sc.n_slices, 2);
    EXPECT_EQ(sc.substeps, 3);
    EXPECT_EQ(sc.flux.kind, FluxKind::p_laplacian);
    EXPECT_EQ(sc.flux.p, 3.0);
    EXPECT_EQ(sc.flux.eps_reg, kDefaultEpsReg);
    EXPECT_TRUE(sc.source.is_zero());
    EXPECT_EQ(sc.solver.newton_tol, 1e-10);
    EXPECT_EQ(sc.solver.max_newton, 50);
    EXPECT_EQ(sc.solver.max_picard, 200);
    EXPECT_EQ(sc.output.frames, FrameMode::knots);
}

TEST(ScenarioFile, PBelowOneRejected) {
    const auto problems = problems_of(replace(kMinimal, "p = 3", "p = 0.5"));
    ASSERT_FALSE(problems.empty());
    bool found = false;
    for (const auto& p : problems) found = found || p.find("p must exceed 1") != std::string::npos;
    EXPECT_TRUE(found);
}

TEST(ScenarioFile, UnknownKeyCitesSectionAndLine) {
    const auto problems = problems_of(replace(kMinimal, "p = 3", "p = 3\nviscosity = 2"));
    ASSERT_EQ(problems.size(), 1u);
    EXPECT_NE(problems[0].find("viscosity"), std::string::npos);
    EXPECT_NE(problems[0].find("[flux]"), std::string::npos);
    EXPECT_NE(problems[0].find("line 21"), std::string::npos) << problems[0];
}

TEST(ScenarioFile, UnknownSectionRejected) {
    const auto problems = problems_of(std::string(kMinimal) + "\n[extras]\nfoo = 1\n");
    ASSERT_FALSE(problems.empty());
    EXPECT_NE(problems[0].find("[extras]"), std::string::npos);
}

TEST(ScenarioFile, AllProblemsReportedAtOnce) {
    std::string text = replace(kMinimal, "p = 3", "p = 0.5");
    text = replace(text, "slices = 2", "slices = two");
    text = replace(text, "u0 = \"sin(pi*x)\"", "u0 = \"sin(pi*\"");
    text = replace(text, "psi = \"0\"", "psi = \"z\"");
    const auto problems = problems_of(text);
    EXPECT_GE(problems.size(), 3u);
}

TEST(ScenarioFile, MissingRequiredKeyAndSection) {
    const auto problems = problems_of(replace(kMinimal, "h = 0.0625\n", ""));
    ASSERT_FALSE(problems.empty());
    EXPECT_NE(problems[0].find("'h'"), std::string::npos);
    const auto p2 = problems_of(replace(kMinimal, "[data]\nu0 = \"sin(pi*x)\"\npsi = \"0\"\n", ""));
    ASSERT_FALSE(p2.empty());
}

TEST(ScenarioFile, ExpressionErrorsCarryPosition) {
    const auto problems = problems_of(replace(kMinimal, "u0 = \"sin(pi*x)\"", "u0 = \"sin(pi*x\""));
    ASSERT_EQ(problems.size(), 1u);
    EXPECT_NE(problems[0].find("line 23"), std::string::npos) << problems[0];
    EXPECT_NE(problems[0].find("column"), std::string::npos);
}

TEST(ScenarioFile, GridMarginViolation) {
    const auto problems = problems_of(replace(kMinimal, "xmax = 1.5", "xmax = 1.0625"));
    ASSERT_FALSE(problems.empty());
    EXPECT_NE(problems[0].find("grid"), std::string::npos);
}

TEST(ScenarioFile, JumpsAndImplicitDomains) {
    const Scenario a = parse_scenario(replace(kMinimal, "right = \"1\"", "right = \"1\"\njumps = \"0.25: 0, min(1.2, 1 + t)\""));
    EXPECT_EQ(a.domain.jump_times(), std::vector<double>{0.25});
    EXPECT_EQ(a.domain.tracks()[0].right[1].to_string(), Expr::parse("min(1.2, 1 + t)").to_string());

    std::string imp = replace(kMinimal, "type = moving_intervals\nleft = \"0\"\nright = \"1\"",
                              "type = implicit\nphi = \"abs(x - 0.5) - 0.5\"\njumps = \"0.3: abs(x - 0.5) - 0.4\"");
    const Scenario b = parse_scenario(imp);
    EXPECT_EQ(b.domain.kind(), TimeDomain::Kind::implicit);
    EXPECT_EQ(b.domain.jump_times(), std::vector<double>{0.3});
}

TEST(ScenarioFile, CustomFlux) {
    std::string text = replace(kMinimal, "type = p_laplacian\np = 3",
                               "type = custom\np = 2\na1 = \"(1 + 0.5*sin(z))*xi1\"\nc = 1.5\nalpha = 0.5\nC_z = 0.5");
    const Scenario sc = parse_scenario(text);
    EXPECT_EQ(sc.flux.kind, FluxKind::custom);
    EXPECT_EQ(sc.flux.constants.growth_c, 1.5);
    EXPECT_EQ(sc.flux.constants.lower_b, 0.0);
    EXPECT_TRUE(sc.flux.a2.is_zero());
    EXPECT_FALSE(problems_of(replace(text, "c = 1.5\n", "")).empty());
    EXPECT_FALSE(problems_of(replace(kMinimal, "p = 3", "p = 3\nalpha = 2")).empty());
}

TEST(ScenarioFile, RoundTrip) {
    std::vector<std::string> texts{
        kMinimal,
        replace(kMinimal, "right = \"1\"", "right = \"1 + t/3\"\njumps = \"0.1: 0.05, 1.1; 0.3: 0.2*t, 0.9\""),
        replace(replace(kMinimal, "type = p_laplacian\np = 3", "type = custom\np = 2.5\na1 = \"abs(xi1)^0.5*xi1\"\nc = 1\nalpha = 1\nomega = \"0.1*r\""),
                "psi = \"0\"", "psi = \"0.1*t\"\nsource = \"x*exp(-t)\""),
    };
    for (const auto& text : texts) {
        const Scenario a = parse_scenario(text);
        const std::string printed = print_scenario(a);
        const Scenario b = parse_scenario(printed);
        EXPECT_EQ(print_scenario(b), printed);
        EXPECT_TRUE(a.u0 == b.u0);
        EXPECT_TRUE(a.boundary.psi == b.boundary.psi);
        EXPECT_TRUE(a.source == b.source);
        EXPECT_EQ(a.grid, b.grid);
        EXPECT_EQ(a.flux.p, b.flux.p);
        EXPECT_EQ(a.flux.eps_reg, b.flux.eps_reg);
        EXPECT_EQ(scenario_hash(a), scenario_hash(b));
    }
}

TEST(ScenarioFile, MissingFileIsIoError) {
    try {
        load_scenario("/nonexistent/file.scn");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::io);
    }
}

TEST(Frames, KnotsModeConstantScenario) {
    const Scenario sc = parse_scenario(replace(replace(kMinimal, "u0 = \"sin(pi*x)\"", "u0 = \"3\""), "psi = \"0\"", "psi = \"3\""));
    const SpaceTimeField f = run_scheme(sc).first;
    const fs::path dir = temp_dir("knots");
    const auto files = write_frames(f, sc, dir, FrameMode::knots);
    ASSERT_EQ(files.size(), static_cast<std::size_t>(sc.n_slices) + 2);  // N + 1 frames and the manifest
    for (std::size_t i = 0; i + 1 < files.size(); ++i) {
        const FrameFile ff = read_frame(files[i]);
        for (std::size_t n = 0; n < ff.u.size(); ++n) {
            if (ff.flag[n] >= 0)
                EXPECT_EQ(ff.u[n], 3.0);
            else
                EXPECT_TRUE(std::isnan(ff.u[n]));
            EXPECT_EQ(ff.u_ext[n], 3.0);
        }
    }
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    EXPECT_EQ(manifest["frames"].size(), 3u);
    EXPECT_EQ(manifest["scenario_hash"].get<std::string>(), scenario_hash(sc));
    EXPECT_EQ(manifest["knots"].size(), 3u);
}

TEST(Frames, FlagsMatchMaskAndValuesRoundTrip) {
    const Scenario sc = parse_scenario(replace(kMinimal, "right = \"1\"", "right = \"1 + t/2\""));
    const SpaceTimeField f = run_scheme(sc).first;
    const fs::path dir = temp_dir("all");
    const auto files = write_frames(f, sc, dir, FrameMode::all);
    ASSERT_EQ(files.size(), f.stamp_count() + 1);
    for (std::size_t i = 0; i < f.stamp_count(); ++i) {
        const FrameFile ff = read_frame(files[i]);
        const DomainMask& m = f.mask_at(i);
        ASSERT_EQ(ff.u.size(), m.grid.node_count());
        for (std::size_t n = 0; n < ff.u.size(); ++n) {
            EXPECT_EQ(ff.flag[n], static_cast<int>(m.state[n]));
            EXPECT_EQ(ff.t[n], f.times[i]);
            EXPECT_EQ(ff.x[n][0], m.grid.position(n)[0]);
            if (m.in_mask(n)) EXPECT_EQ(ff.u[n], f.frames[i][n]);
            EXPECT_EQ(ff.u_ext[n], f.extended_frames[i][n]);
        }
    }
}

TEST(Frames, ByteIdenticalReruns) {
    const Scenario sc = parse_scenario(kMinimal);
    const fs::path a = temp_dir("rerun_a");
    const fs::path b = temp_dir("rerun_b");
    const auto fa = write_frames(run_scheme(sc).first, sc, a, FrameMode::all);
    const auto fb = write_frames(run_scheme(sc).first, sc, b, FrameMode::all);
    ASSERT_EQ(fa.size(), fb.size());
    for (std::size_t i = 0; i < fa.size(); ++i) EXPECT_EQ(slurp(fa[i]), slurp(fb[i])) << fa[i];
}

TEST(Frames, TwoDimensionalColumns) {
    const char* text = R"SCN([grid]
dim = 2
xmin = -1
xmax = 1
ymin = -1
ymax = 1
h = 0.125
[time]
T = 0.1
slices = 1
substeps = 2
[domain]
type = implicit
phi = "x^2 + y^2 - 0.5"
[flux]
type = linear_diffusion
[data]
u0 = "1"
psi = "x"
)SCN";
    const Scenario sc = parse_scenario(text);
    const SpaceTimeField f = run_scheme(sc).first;
    const fs::path dir = temp_dir("twod");
    const auto files = write_frames(f, sc, dir, FrameMode::knots);
    const FrameFile ff = read_frame(files[0]);
    EXPECT_EQ(ff.dim, 2);
    EXPECT_EQ(ff.x.size(), 17u * 17u);
    EXPECT_EQ(ff.x[17][1], -0.875);
}

TEST(Reports, JsonShapes) {
    const auto r = EstimateReport::make("x", 1.0, 2.0, 1e-10);
    const auto j = to_json(r);
    EXPECT_EQ(j["margin"].get<double>(), 1.0);
    EXPECT_TRUE(j["pass"].get<bool>());
    const auto s = to_json(check_structure(FluxModel::linear_diffusion(), 10, 1));
    EXPECT_EQ(s["conditions"].size(), 5u);
}
