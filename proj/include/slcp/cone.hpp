#pragma once

#include "slcp/geometry.hpp"
#include "slcp/rng.hpp"

#include <cstdint>
#include <vector>

namespace slcp::cone {

// Structural facts that hold for any kappa_1 >= ... >= kappa_n with
// phase_F(kappa) >= (n-2)*pi/2 + delta:
//   (a) kappa_{n-1} > 0 and |kappa_n| <= kappa_{n-1}
//   (b) sum_i kappa_i >= 0
//   (c) kappa_n >= -1/tan(delta)
//   (d) if kappa_n < 0 then sum_i 1/kappa_i <= -tan(delta)
// plus membership in the cone itself. `margin` is phase_F - sigma.
struct ConeReport {
    bool admissible = false;
    double margin = 0.0;
    bool positiveHead = false;     // (a)
    bool nonnegativeTrace = false; // (b)
    bool minEigenBound = false;    // (c)
    bool reciprocalBound = false;  // (d)
    bool inCone = false;           // membership probe
    double worstViolation = 0.0;
};

ConeReport check_properties(const VecN& kappa, int n, double delta);

// Rejection sampler over the admissible cone. Component magnitudes are
// log-uniform over [1e-3, 1e3]; the smallest component's sign is flipped with
// probability 1/2; proposals outside the cone are rejected. Output vectors
// are sorted descending. Deterministic for a fixed seed.
std::vector<VecN> sample_admissible(int n, double delta, std::size_t count, std::uint64_t seed);

// Evaluate G on a symmetric matrix through its eigenvalues.
double G_of_matrix(const SymMatrix& m, const OperatorParams& params);

// Central second difference of G at diag(kappa) along the symmetric
// direction M with step eps = 1e-4:
//   [G(A+eps M) - 2 G(A) + G(A-eps M)] / eps^2.
// Concavity of G predicts a value <= ~0. Throws LeftCone when either
// perturbed matrix exits the cone.
double hessian_G_sampled(const VecN& kappa, const OperatorParams& params, const SymMatrix& direction);

struct CalibrationResult {
    double aParam = 0.0;
    std::size_t samplesTested = 0;
    double maxHessEigenvalue = 0.0; // largest second-difference quotient at aParam
};

// Log-bisection over A in [1, 1e4] for the smallest tested A at which all
// sampled second-difference quotients stay below 1e-8 (sampleCount admissible
// points x 10 unit symmetric directions each). Deterministic per seed.
CalibrationResult calibrate_A(int n, double delta, std::size_t sampleCount, std::uint64_t seed);

// Empirical extremes of the structure quantities over a sample:
//   curvedWeightMin  = min over sample of sum_i kappa_i g_i
//   weightRatioMax   = max of |kappa|^2 sum_i g_i / sum_i g_i kappa_i^2
//   minLastWeight    = min of g_n = A e^{-A F} / (1 + kappa_n^2)
struct ConeProbes {
    double curvedWeightMin = 0.0;
    double weightRatioMax = 0.0;
    double minLastWeight = 0.0;
    std::size_t samples = 0;
};

ConeProbes probe_extremes(int n, double delta, double aParam, std::size_t count, std::uint64_t seed);

// Random symmetric matrix with unit max-abs entry (test direction).
SymMatrix random_unit_direction(int n, Rng& rng);

} // namespace slcp::cone
