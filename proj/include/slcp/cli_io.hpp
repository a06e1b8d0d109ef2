#pragma once

#include "slcp/harness.hpp"
#include "slcp/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace slcp::io {

// Versioned problem description as loaded from disk. `delta` and `aParam`
// may be "auto": delta resolves to min(0.1, margin/2) where margin is the
// distance of min h to the phase floor; aParam resolves to 2.0.
struct ProblemSpec {
    std::string version;
    int n = 2;
    Grid2D grid;
    std::optional<double> delta;   // empty = auto
    std::optional<double> aParam;  // empty = auto
    std::optional<double> manufacturedC;
    std::optional<GridField> hTable;
    enum class PhiSource { manufactured, constant, table } phiSource = PhiSource::manufactured;
    double phiConstant = 0.0;
    std::optional<GridField> phiTable;
    enum class SubsolSource { none, manufactured, table } subsolSource = SubsolSource::none;
    std::optional<GridField> subsolTable;
    solver::SolverConfig config;
    std::uint64_t seed = 0;
};

ProblemSpec parse_problem(const std::string& path);
ProblemSpec parse_problem_text(const std::string& text);
std::string write_problem_text(const ProblemSpec& spec);

// Materialized problem plus the manufactured oracle when one was requested.
struct LoadedProblem {
    solver::Problem problem;
    std::optional<GridField> uStar;
    double resolvedDelta = 0.0;
    double resolvedA = 0.0;
};

LoadedProblem build_problem(const ProblemSpec& spec);

// Comma-separated node dump: x,y,u,ux,uy,kappa1,kappa2,F,residual per
// interior node (row-major), 17 significant digits, LF line endings.
void export_fields(const GridField& u, const solver::Problem& problem, const std::string& path);
std::string export_fields_text(const GridField& u, const solver::Problem& problem);

std::string report_to_text(const solver::SolveReport& report);
std::string suite_report_to_text(const harness::SuiteReport& report);

// CLI entry point. Subcommands: solve, verify-cone, calibrate-A,
// check-linearization, convergence-study, compare-principle.
// Exit codes: 0 pass, 1 assertion failure, 2 input error.
int run_cli(int argc, const char* const* argv);

} // namespace slcp::io
