#pragma once

#include "slcp/cone.hpp"
#include "slcp/solver.hpp"

#include <cstdint>
#include <vector>

namespace slcp::harness {

// Radial manufactured problem: uStar = c (x^2 + y^2) / 2 with the right-hand
// side computed from the radial closed forms
//   kappa_rad = u_rr / (1 + u_r^2)^{3/2},  kappa_tan = u_r / (r sqrt(1 + u_r^2))
// (limit c at r = 0), an independent route from the curvature-matrix
// pipeline used by the solver.
struct ManufacturedProblem {
    GridField uStar;
    GridField hField;
    GridField phi;       // boundary trace of uStar
    double deltaUsed = 0.0;
};

ManufacturedProblem manufactured_radial(const Grid2D& grid, double c);

// Package a manufactured problem for the solver. delta <= 0 requests the
// default rule min(0.1, deltaUsed/2).
solver::Problem to_problem(const ManufacturedProblem& mp, double delta, double aParam,
                           bool attachSubsolution);

// 5-point discrete Laplace solve with Dirichlet data taken from the boundary
// ring of phi. Checks the discrete maximum principle on the way out.
GridField harmonic_extension(const GridField& phi);

struct ConvergenceStudy {
    std::vector<int> sizes;
    std::vector<double> errors;   // max node error vs uStar
    std::vector<double> orders;   // log2(e_k / e_{k+1})
    std::vector<solver::MonitorRecord> finalMonitors;
};

// Solve the radial family on each grid size and report observed errors and
// inter-grid orders.
ConvergenceStudy convergence_study(double c, const std::vector<int>& sizes,
                                   const solver::SolverConfig& config, double aParam);

// Mass verification of the cone structure: property checks over admissible
// samples, convexity probes over pairs, concavity calibration, and the
// empirical extremes of the weight quantities.
struct SuiteCase {
    int n = 0;
    double delta = 0.0;
    std::size_t samples = 0;
    std::size_t propertyViolations = 0;
    double worstViolation = 0.0;
    std::size_t convexityViolations = 0;
    double worstConvexityMargin = 0.0; // most negative blend margin observed
    cone::CalibrationResult calibration;
    cone::ConeProbes probes;
};

struct SuiteReport {
    std::vector<SuiteCase> cases;
    bool allPassed = false;
};

SuiteReport cone_suites(int n, const std::vector<double>& deltas,
                        std::size_t samplesPerCase, std::uint64_t seed);

} // namespace slcp::harness
