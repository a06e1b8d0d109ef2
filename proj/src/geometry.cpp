#include "slcp/geometry.hpp"
#include "slcp/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace slcp {

OperatorParams OperatorParams::make(int n, double delta, double aParam) {
    if (n < 1 || n > 4) throw Error("OperatorParams: n must be in [1,4]");
    if (!(delta > 0.0 && delta < std::numbers::pi / 2))
        throw Error("OperatorParams: delta must lie in (0, pi/2)");
    if (!(aParam > 0.0)) throw Error("OperatorParams: aParam must be positive");
    OperatorParams p;
    p.n = n;
    p.delta = delta;
    p.sigma = (n - 2) * std::numbers::pi / 2 + delta;
    p.aParam = aParam;
    return p;
}

SymMatrix b_upper_matrix(int n, const VecN& grad, double w) {
    SymMatrix b(n);
    const double denom = w * (1.0 + w);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double uij = grad[static_cast<std::size_t>(i)] * grad[static_cast<std::size_t>(j)];
            b.set(i, j, (i == j ? 1.0 : 0.0) - uij / denom);
        }
    return b;
}

SymMatrix b_lower_matrix(int n, const VecN& grad, double w) {
    SymMatrix b(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double uij = grad[static_cast<std::size_t>(i)] * grad[static_cast<std::size_t>(j)];
            b.set(i, j, (i == j ? 1.0 : 0.0) + uij / (1.0 + w));
        }
    return b;
}

PointGeometry assemble_point(const VecN& grad, const SymMatrix& hess) {
    const int n = hess.dim();
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(grad[static_cast<std::size_t>(i)])) throw NonFinite("assemble_point gradient");
    if (!hess.finite()) throw NonFinite("assemble_point hessian");

    PointGeometry g;
    g.n = n;
    g.grad = grad;
    g.hess = hess;

    double g2 = 0.0;
    for (int i = 0; i < n; ++i) g2 += grad[static_cast<std::size_t>(i)] * grad[static_cast<std::size_t>(i)];
    g.w = std::sqrt(1.0 + g2);
    g.b_upper = b_upper_matrix(n, grad, g.w);

    // Hp_i = u_l u_il, pHp = u_k u_l u_kl
    VecN Hp{};
    double pHp = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += hess(i, l) * grad[static_cast<std::size_t>(l)];
        Hp[static_cast<std::size_t>(i)] = s;
        pHp += grad[static_cast<std::size_t>(i)] * s;
    }

    const double w = g.w;
    const double c1 = w * (1.0 + w);
    const double c2 = c1 * c1;
    SymMatrix a(n);
    for (int i = 0; i < n; ++i) {
        const double ui = grad[static_cast<std::size_t>(i)];
        for (int j = i; j < n; ++j) {
            const double uj = grad[static_cast<std::size_t>(j)];
            const double v = hess(i, j)
                           - ui * Hp[static_cast<std::size_t>(j)] / c1
                           - uj * Hp[static_cast<std::size_t>(i)] / c1
                           + ui * uj * pHp / c2;
            a.set(i, j, v / w);
        }
    }
    g.amat = a;

    const EigenPair ep = sym_eigen(a);
    g.kappa = ep.values;
    return g;
}

SymMatrix hessian_from_curvature(const VecN& grad, const SymMatrix& amat) {
    const int n = amat.dim();
    double g2 = 0.0;
    for (int i = 0; i < n; ++i) g2 += grad[static_cast<std::size_t>(i)] * grad[static_cast<std::size_t>(i)];
    const double w = std::sqrt(1.0 + g2);
    const SymMatrix bl = b_lower_matrix(n, grad, w);
    SymMatrix h(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) s += bl(i, k) * amat(k, l) * bl(l, j);
            h.set(i, j, w * s);
        }
    return h;
}

double phase_F(const VecN& kappa, int n) {
    double f = 0.0;
    for (int i = 0; i < n; ++i) f += std::atan(kappa[static_cast<std::size_t>(i)]);
    return f;
}

double concave_G(const VecN& kappa, const OperatorParams& params) {
    return -std::exp(-params.aParam * phase_F(kappa, params.n));
}

double psi_of_h(double h, const OperatorParams& params) {
    const double lo = (params.n - 2) * std::numbers::pi / 2 + params.delta;
    const double hi = params.n * std::numbers::pi / 2;
    if (!std::isfinite(h) || h < lo || h >= hi)
        throw PhaseOutOfRange("h = " + std::to_string(h) + " outside [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + ")");
    return -std::exp(-params.aParam * h);
}

} // namespace slcp
