#include "tslice/error.hpp"

namespace tslice {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::domain_range: return "domain-range";
    case ErrorKind::degenerate_section: return "degenerate-section";
    case ErrorKind::undefined_distance: return "undefined-distance";
    case ErrorKind::numeric_input: return "numeric-input";
    case ErrorKind::numeric_evaluation: return "numeric-evaluation";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::solver_stall: return "solver-stall";
    case ErrorKind::inapplicable_diagnostic: return "inapplicable-diagnostic";
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::io: return "io";
    case ErrorKind::index_range: return "index-range";
    }
    return "unknown";
}

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
    std::string out = std::to_string(problems.size()) + " validation problem(s):";
    for (const auto& p : problems) {
        out += "\n  - ";
        out += p;
    }
    return out;
}

std::string stall_message(const std::string& msg, int substep, int slice) {
    std::string out = msg;
    if (slice >= 0) out += " (slice " + std::to_string(slice) + ")";
    if (substep >= 0) out += " (substep " + std::to_string(substep) + ")";
    return out;
}

} // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : Error(ErrorKind::validation, join_problems(problems)), problems_(std::move(problems)) {}

SolverStallError::SolverStallError(const std::string& msg, std::vector<double> history, int substep, int slice)
    : Error(ErrorKind::solver_stall, stall_message(msg, substep, slice)), base_(msg), history_(std::move(history)),
      substep_(substep), slice_(slice) {}

SolverStallError SolverStallError::with_substep(int substep) const {
    return SolverStallError(base_, history_, substep, slice_);
}

SolverStallError SolverStallError::with_slice(int slice) const {
    return SolverStallError(base_, history_, substep_, slice);
}

} // namespace tslice
