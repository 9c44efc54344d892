#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tslice {

enum class ErrorKind {
    domain_range,
    degenerate_section,
    undefined_distance,
    numeric_input,
    numeric_evaluation,
    singularity,
    solver_stall,
    inapplicable_diagnostic,
    parse,
    validation,
    io,
    index_range,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Syntax error or unknown identifier; line/column are 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column)
        : Error(ErrorKind::parse, msg + " at line " + std::to_string(line) + ", column " +
                                      std::to_string(column)),
          line_(line), column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

// Consolidated list of every problem found while validating an input.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

class SolverStallError : public Error {
public:
    SolverStallError(const std::string& msg, std::vector<double> history, int substep = -1, int slice = -1);
    const std::vector<double>& residual_history() const noexcept { return history_; }
    int substep() const noexcept { return substep_; }
    int slice() const noexcept { return slice_; }

    SolverStallError with_substep(int substep) const;
    SolverStallError with_slice(int slice) const;

private:
    std::string base_;
    std::vector<double> history_;
    int substep_;
    int slice_;
};

} // namespace tslice
