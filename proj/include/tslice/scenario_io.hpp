#pragma once

#include "tslice/diagnostics.hpp"
#include "tslice/stitcher.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tslice {

/// Parses scenario text. Every problem (syntax, unknown section or key,
/// missing key, bad expression, violated invariant) is collected and thrown
/// as one ValidationError.
Scenario parse_scenario(std::string_view text);
/// Throws Error(io) if the file cannot be read.
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical text form; parse_scenario(print_scenario(s)) reproduces s with
/// equal expression trees and bit-equal numbers.
std::string print_scenario(const Scenario& sc);

/// 64-bit FNV-1a of the canonical text, as 16 hex digits.
std::string scenario_hash(const Scenario& sc);

/// Stamps written by mode: every stamp, or the first stamp of each slice
/// plus the final one (N + 1 frames).
std::vector<std::size_t> selected_stamps(const SpaceTimeField& field, FrameMode mode);

/// frame_NNNNN.txt per selected stamp plus manifest.json. Rows follow node
/// order with columns t x [y] u flag u_ext (flag 1 active, 0 ghost, -1
/// outside), 17 significant digits, "nan" off the mask.
std::vector<std::filesystem::path> write_frames(const SpaceTimeField& field, const Scenario& sc,
                                                const std::filesystem::path& dir, FrameMode mode);

struct FrameFile {
    int dim = 1;
    std::vector<double> t;
    std::vector<Point> x;
    std::vector<double> u;
    std::vector<int> flag;
    std::vector<double> u_ext;
};

FrameFile read_frame(const std::filesystem::path& path);

nlohmann::json to_json(const EstimateReport& r);
nlohmann::json to_json(const RunReport& r);
nlohmann::json to_json(const StructureReport& r);
nlohmann::json to_json(const RefinementStudy& s);
nlohmann::json to_json(const MmsErrors& e);
/// Knots, per-slice mask sizes and 1D interval lists.
nlohmann::json plan_preview(const SlicePlan& plan);

} // namespace tslice
