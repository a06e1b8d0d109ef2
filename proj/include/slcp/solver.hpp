#pragma once

#include "slcp/geometry.hpp"
#include "slcp/grid.hpp"
#include "slcp/linearize.hpp"

#include <optional>
#include <string>
#include <vector>

namespace slcp::solver {

struct SolverConfig {
    double tolResidual = 1e-9;   // max-norm residual target
    int maxNewton = 50;          // per-stage iteration cap
    double armijoFactor = 0.5;   // backtracking shrink
    double armijoSlope = 1e-4;   // sufficient-decrease slope
    double minStep = 1e-6;       // smallest admissible step fraction
    double tInitialIncrement = 0.25;
    double tShrinkFactor = 0.5;
    double tMinIncrement = 1e-3;
    double safeguardMargin = 1e-8; // minimum allowed phase margin at any node

    void validate() const;
};

struct Problem {
    Grid2D grid;
    OperatorParams params;              // n = 2 for grid solves
    GridField hField;                   // right-hand side phase values
    GridField phi;                      // Dirichlet data (boundary ring of this field)
    std::optional<GridField> subsolution;

    void validate() const;
};

struct MonitorRecord {
    double supGrad = 0.0;        // sup |Du| over interior (euclidean)
    double supHess = 0.0;        // sup max-abs entry of D^2 u
    double minPhaseMargin = 0.0; // min over nodes of F(kappa) - sigma
    double minSumG = 0.0;        // min over nodes of sum_i g_i
    double subsolGap = 0.0;      // min subsolution gap (NaN when no subsolution)
    double residualInf = 0.0;    // max-norm residual
};

struct StepReport {
    double alpha = 0.0;
    double residualBefore = 0.0;
    double residualAfter = 0.0;
    int backtracks = 0;
};

struct StageRecord {
    double t = 0.0;              // stage parameter (homotopy t, or embedding s)
    int iterations = 0;
    double finalResidual = 0.0;
    std::vector<MonitorRecord> history;
};

struct SolveReport {
    std::vector<StageRecord> embedding; // initialization continuation at t = 0
    std::vector<StageRecord> perT;      // homotopy stages, strictly increasing t
    bool accepted = false;
    std::string failureReason;
    std::string backend;
};

// Operator residual G(kappa(A(D^2u, t Du))) - psi at interior nodes, zero on
// the boundary ring. Throws InadmissibleIterate when any node's phase margin
// falls below config.safeguardMargin.
GridField residual_field(const GridField& u, const Problem& problem, double t,
                         double safeguardMargin);

// One damped Newton step at fixed t. Assembles the linearized system
//   sum_ij GTilde_ij d_ij(du) + t sum_i GTilde_i d_i(du) = -residual
// over interior nodes with du = 0 on the boundary, then backtracks until the
// iterate is admissible and the max-norm residual satisfies the Armijo
// decrease test.
std::pair<GridField, StepReport> newton_step(const GridField& u, const Problem& problem,
                                             double t, const SolverConfig& config);

// Newton iteration at fixed t until residual <= tolResidual or maxNewton.
struct FixedTResult {
    GridField u;
    int iterations = 0;
    double finalResidual = 0.0;
    std::vector<MonitorRecord> history;
};
FixedTResult solve_fixed_t(const GridField& u0, const Problem& problem, double t,
                           const SolverConfig& config);

// Full pipeline: build an exactly-satisfied quadratic seed problem, continue
// (h, phi) from the seed to the target at t = 0, then march the gradient
// homotopy t: 0 -> 1 with adaptive increments and warm starts.
std::pair<GridField, SolveReport> continuity_solve(const Problem& problem,
                                                   const SolverConfig& config);

// Monitor sweep at parameter t (no safeguard applied; callers flag margins).
MonitorRecord monitors(const GridField& u, const Problem& problem, double t);

} // namespace slcp::solver
