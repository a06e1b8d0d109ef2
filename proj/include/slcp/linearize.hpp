#pragma once

#include "slcp/geometry.hpp"
#include "slcp/rng.hpp"

#include <cstdint>

namespace slcp::lin {

// First-order linearization of the transformed operator at one point:
//   gUpper       G^{ij} = dG/da_ij (spectral derivative, original frame)
//   gTildeSecond coefficients of second-derivative perturbations,
//                (1/w) b^{ik} G^{kl} b^{lj}
//   gTildeFirst  coefficients of gradient perturbations,
//                -(u_i/w^2) sum_j g_j kappa_j - (2/w) b^{ik} G^{kl} a_{lm} u_m
//   gDiag        g_i = A e^{-A F} / (1 + kappa_i^2), descending-kappa order
struct LinearizedPoint {
    int n = 0;
    SymMatrix gUpper;
    SymMatrix gTildeSecond;
    VecN gTildeFirst{};
    VecN gDiag{};
    double sumG = 0.0;       // sum_i g_i
    double sumGKappa = 0.0;  // sum_i g_i kappa_i
};

// Spectral first derivative of G at the point's curvature matrix:
// G^{ij} = sum_k g_k q_k^i q_k^j. Requires the point to sit strictly inside
// the admissible cone (margin >= 1e-10).
SymMatrix dG_dA(const PointGeometry& geom, const OperatorParams& params);

// Full linearized coefficient bundle at an admissible point.
LinearizedPoint linearized_coeffs(const PointGeometry& geom, const OperatorParams& params);

// Worst relative error of the analytic directional derivative against
// central differences (step 1e-5) over `trials` random unit perturbations of
// (hess, grad). The error is measured against the scale of the full
// derivative so that near-orthogonal directions do not blow up the metric.
double fd_validate(const PointGeometry& geom, const OperatorParams& params,
                   int trials, std::uint64_t seed);

// Diagnostic quantity sum_ij GTilde_ij(geomU) * (sub.hess_ij - u.hess_ij);
// reported as a monitor stream, never asserted positive.
double subsolution_gap(const PointGeometry& geomU, const PointGeometry& geomSub,
                       const OperatorParams& params);

// Rotation built from random Givens factors (deterministic per rng state).
SymMatrix rotate(const SymMatrix& m, const std::array<std::array<double, 4>, 4>& q);
std::array<std::array<double, 4>, 4> random_rotation(int n, Rng& rng);

// Random admissible point with curvature magnitudes capped at maxKappa and
// |grad| components in [-2, 2]; the Hessian is reconstructed from the
// curvature matrix so the point's kappa equals the sampled vector.
PointGeometry random_admissible_point(const OperatorParams& params, double maxKappa, Rng& rng);

} // namespace slcp::lin
