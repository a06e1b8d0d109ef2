#pragma once

#include "slcp/smalldense.hpp"

#include <array>

namespace slcp {

using VecN = std::array<double, 4>;

// Operator configuration: dimension, phase margin delta, the implied
// admissibility threshold sigma = (n-2)*pi/2 + delta, and the concavity
// exponent A of the transformed operator -exp(-A * sum_i arctan kappa_i).
struct OperatorParams {
    int n = 2;
    double delta = 0.1;
    double sigma = 0.0;
    double aParam = 2.0;

    static OperatorParams make(int n, double delta, double aParam);
};

// Everything the pointwise operator needs at one point of the graph of u:
// gradient, Hessian, w = sqrt(1+|Du|^2), the square root b^ij of the inverse
// metric, the symmetric curvature matrix a_ij, and its eigenvalues kappa
// (sorted descending).
struct PointGeometry {
    int n = 0;
    VecN grad{};
    SymMatrix hess;
    double w = 1.0;
    SymMatrix b_upper;
    SymMatrix amat;
    VecN kappa{};
};

// Build the full per-point bundle from (Du, D^2u). The curvature matrix is
// assembled by the closed-form expansion
//   a_ij = (1/w) { u_ij - u_i u_l u_jl / (w(1+w)) - u_j u_l u_il / (w(1+w))
//                  + u_i u_j u_k u_l u_kl / (w^2 (1+w)^2) }
// and kappa by Jacobi diagonalization of a_ij.
PointGeometry assemble_point(const VecN& grad, const SymMatrix& hess);

// b^ij = delta_ij - u_i u_j / (w(1+w)), the positive square root of the
// inverse metric g^ij = delta_ij - u_i u_j / w^2.
SymMatrix b_upper_matrix(int n, const VecN& grad, double w);

// Inverse of b^ij: b_ij = delta_ij + u_i u_j / (1+w).
SymMatrix b_lower_matrix(int n, const VecN& grad, double w);

// Reconstruct the Hessian from a curvature matrix: u_ij = w b_ik a_kl b_lj.
// Test-side inverse of assemble_point.
SymMatrix hessian_from_curvature(const VecN& grad, const SymMatrix& amat);

// Phase of a curvature vector: sum_i arctan kappa_i, in (-n*pi/2, n*pi/2).
double phase_F(const VecN& kappa, int n);

// Transformed operator value G = -exp(-A * phase_F(kappa)); strictly
// increasing in every kappa_i.
double concave_G(const VecN& kappa, const OperatorParams& params);

// Right-hand side transform psi = -exp(-A h). Validates h against the
// admissible range [(n-2)pi/2 + delta, n*pi/2).
double psi_of_h(double h, const OperatorParams& params);

} // namespace slcp
