#pragma once

// Test-only oracles, kept independent of the library's computation paths.

#include "slcp/geometry.hpp"
#include "slcp/grid.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracles {

// Closed-form eigenvalues of a symmetric 2x2 (descending).
inline std::array<double, 2> eig2_closed(double a11, double a12, double a22) {
    const double mean = 0.5 * (a11 + a22);
    const double rad = std::sqrt(0.25 * (a11 - a22) * (a11 - a22) + a12 * a12);
    return {mean + rad, mean - rad};
}

// Real eigenvalues of a general (possibly nonsymmetric) 2x2 matrix via the
// characteristic quadratic.
inline std::array<double, 2> eig2_general(const std::array<std::array<double, 2>, 2>& m) {
    const double tr = m[0][0] + m[1][1];
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const double disc = tr * tr / 4.0 - det;
    if (disc < -1e-12) throw std::runtime_error("complex eigenvalues");
    const double r = std::sqrt(std::max(0.0, disc));
    return {tr / 2.0 + r, tr / 2.0 - r};
}

// Real eigenvalues of a 3x3 matrix with real spectrum via the trigonometric
// solution of the characteristic cubic (descending).
inline std::array<double, 3> eig3_general(const std::array<std::array<double, 3>, 3>& m) {
    const double tr = m[0][0] + m[1][1] + m[2][2];
    double m2 = 0.0; // sum of principal 2x2 minors
    m2 += m[1][1] * m[2][2] - m[1][2] * m[2][1];
    m2 += m[0][0] * m[2][2] - m[0][2] * m[2][0];
    m2 += m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                     - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                     + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    // x^3 - tr x^2 + m2 x - det = 0; shift x = y + tr/3
    const double p = m2 - tr * tr / 3.0;
    const double q = -2.0 * tr * tr * tr / 27.0 + tr * m2 / 3.0 - det;
    std::array<double, 3> out;
    if (p >= -1e-30) {
        // triple/near-triple root
        out = {tr / 3.0, tr / 3.0, tr / 3.0};
        return out;
    }
    const double amp = 2.0 * std::sqrt(-p / 3.0);
    double cosarg = 3.0 * q / (p * amp);
    cosarg = std::max(-1.0, std::min(1.0, cosarg));
    const double theta = std::acos(cosarg) / 3.0;
    for (int k = 0; k < 3; ++k)
        out[static_cast<std::size_t>(k)] = tr / 3.0 + amp * std::cos(theta - 2.0 * 3.14159265358979323846 * k / 3.0);
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

// Eigenvalues of the nonsymmetric product [h_ik g^kj] built directly from
// (grad, hess): h_ij = u_ij / w, g^ij = delta_ij - u_i u_j / w^2.
inline std::vector<double> curvatures_nonsymmetric(int n, const slcp::VecN& grad,
                                                   const slcp::SymMatrix& hess) {
    double g2 = 0.0;
    for (int i = 0; i < n; ++i) g2 += grad[static_cast<std::size_t>(i)] * grad[static_cast<std::size_t>(i)];
    const double w2 = 1.0 + g2;
    const double w = std::sqrt(w2);
    double h[3][3] = {}, gup[3][3] = {}, prod[3][3] = {};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            h[i][j] = hess(i, j) / w;
            gup[i][j] = (i == j ? 1.0 : 0.0) - grad[static_cast<std::size_t>(i)] * grad[static_cast<std::size_t>(j)] / w2;
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) prod[i][j] += h[i][k] * gup[k][j];

    std::vector<double> out;
    if (n == 1) {
        out = {prod[0][0]};
    } else if (n == 2) {
        const auto e = eig2_general({{{prod[0][0], prod[0][1]}, {prod[1][0], prod[1][1]}}});
        out = {e[0], e[1]};
    } else if (n == 3) {
        const auto e = eig3_general({{{prod[0][0], prod[0][1], prod[0][2]},
                                      {prod[1][0], prod[1][1], prod[1][2]},
                                      {prod[2][0], prod[2][1], prod[2][2]}}});
        out = {e[0], e[1], e[2]};
    } else {
        throw std::runtime_error("unsupported n");
    }
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

// Independently coded operator value for the gradient-free problem: phase of
// the discrete Hessian eigenvalues straight from the stencils, closed-form
// 2x2 eigenvalues, then -exp(-A F). Shares no code with the solver path.
inline double hessian_phase_value(const slcp::GridField& u, int i, int j, double aParam) {
    const slcp::Grid2D& g = u.grid();
    const double uxx = (u(i + 1, j) - 2.0 * u(i, j) + u(i - 1, j)) / (g.hx * g.hx);
    const double uyy = (u(i, j + 1) - 2.0 * u(i, j) + u(i, j - 1)) / (g.hy * g.hy);
    const double uxy = (u(i + 1, j + 1) - u(i + 1, j - 1) - u(i - 1, j + 1) + u(i - 1, j - 1)) / (4.0 * g.hx * g.hy);
    const auto lam = eig2_closed(uxx, uxy, uyy);
    const double F = std::atan(lam[0]) + std::atan(lam[1]);
    return -std::exp(-aParam * F);
}

} // namespace oracles
