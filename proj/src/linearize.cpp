#include "slcp/linearize.hpp"
#include "slcp/cone.hpp"
#include "slcp/errors.hpp"

#include <cmath>

namespace slcp::lin {

SymMatrix dG_dA(const PointGeometry& geom, const OperatorParams& params) {
    const int n = geom.n;
    const double margin = phase_F(geom.kappa, n) - params.sigma;
    if (margin < 1e-10) throw ConeBoundary("dG_dA margin " + std::to_string(margin));

    const EigenPair ep = sym_eigen(geom.amat);
    const double F = phase_F(ep.values, n);
    const double e = params.aParam * std::exp(-params.aParam * F);

    SymMatrix g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                const double kk = ep.values[static_cast<std::size_t>(k)];
                const double gk = e / (1.0 + kk * kk);
                s += gk * ep.vectors[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] *
                          ep.vectors[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            }
            g.set(i, j, s);
        }
    return g;
}

LinearizedPoint linearized_coeffs(const PointGeometry& geom, const OperatorParams& params) {
    const int n = geom.n;
    LinearizedPoint lp;
    lp.n = n;
    lp.gUpper = dG_dA(geom, params);

    const double F = phase_F(geom.kappa, n);
    const double e = params.aParam * std::exp(-params.aParam * F);
    for (int i = 0; i < n; ++i) {
        const double ki = geom.kappa[static_cast<std::size_t>(i)];
        const double gi = e / (1.0 + ki * ki);
        lp.gDiag[static_cast<std::size_t>(i)] = gi;
        lp.sumG += gi;
        lp.sumGKappa += gi * ki;
    }

    const SymMatrix& b = geom.b_upper;
    const double w = geom.w;

    SymMatrix gt2(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) s += b(i, k) * lp.gUpper(k, l) * b(l, j);
            gt2.set(i, j, s / w);
        }
    lp.gTildeSecond = gt2;

    // (G a p)_k then b^{ik} (G a p)_k
    VecN ap{}, gap{};
    for (int l = 0; l < n; ++l) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += geom.amat(l, m) * geom.grad[static_cast<std::size_t>(m)];
        ap[static_cast<std::size_t>(l)] = s;
    }
    for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += lp.gUpper(k, l) * ap[static_cast<std::size_t>(l)];
        gap[static_cast<std::size_t>(k)] = s;
    }
    for (int i = 0; i < n; ++i) {
        double bgap = 0.0;
        for (int k = 0; k < n; ++k) bgap += b(i, k) * gap[static_cast<std::size_t>(k)];
        lp.gTildeFirst[static_cast<std::size_t>(i)] =
            -geom.grad[static_cast<std::size_t>(i)] / (w * w) * lp.sumGKappa - (2.0 / w) * bgap;
    }
    return lp;
}

namespace {

double operator_value(const VecN& grad, const SymMatrix& hess, const OperatorParams& params) {
    const PointGeometry g = assemble_point(grad, hess);
    return concave_G(g.kappa, params);
}

} // namespace

double fd_validate(const PointGeometry& geom, const OperatorParams& params,
                   int trials, std::uint64_t seed) {
    const int n = geom.n;
    const LinearizedPoint lp = linearized_coeffs(geom, params);
    const double eps = 1e-5;
    Rng rng(seed);

    // scale of the full derivative, used as the error denominator floor
    double dnorm = 0.0;
    for (int i = 0; i < n; ++i) {
        dnorm += lp.gTildeFirst[static_cast<std::size_t>(i)] * lp.gTildeFirst[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) dnorm += lp.gTildeSecond(i, j) * lp.gTildeSecond(i, j);
    }
    dnorm = std::sqrt(dnorm);

    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        SymMatrix M = cone::random_unit_direction(n, rng);
        VecN v{};
        double vmax = 0.0;
        for (int i = 0; i < n; ++i) {
            v[static_cast<std::size_t>(i)] = rng.uniform(-1.0, 1.0);
            vmax = std::max(vmax, std::fabs(v[static_cast<std::size_t>(i)]));
        }
        if (vmax > 0) for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] /= vmax;

        double analytic = 0.0;
        for (int i = 0; i < n; ++i) {
            analytic += lp.gTildeFirst[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j) analytic += lp.gTildeSecond(i, j) * M(i, j);
        }

        SymMatrix hu = geom.hess, hd = geom.hess;
        VecN gu = geom.grad, gd = geom.grad;
        for (int i = 0; i < n; ++i) {
            gu[static_cast<std::size_t>(i)] += eps * v[static_cast<std::size_t>(i)];
            gd[static_cast<std::size_t>(i)] -= eps * v[static_cast<std::size_t>(i)];
            for (int j = i; j < n; ++j) {
                hu.add(i, j, eps * M(i, j));
                hd.add(i, j, -eps * M(i, j));
            }
        }
        const double fd = (operator_value(gu, hu, params) - operator_value(gd, hd, params)) / (2.0 * eps);
        const double denom = std::max({std::fabs(analytic), std::fabs(fd), dnorm, 1e-300});
        worst = std::max(worst, std::fabs(analytic - fd) / denom);
    }
    return worst;
}

double subsolution_gap(const PointGeometry& geomU, const PointGeometry& geomSub,
                       const OperatorParams& params) {
    const int n = geomU.n;
    const LinearizedPoint lp = linearized_coeffs(geomU, params);
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            s += lp.gTildeSecond(i, j) * (geomSub.hess(i, j) - geomU.hess(i, j));
    return s;
}

std::array<std::array<double, 4>, 4> random_rotation(int n, Rng& rng) {
    std::array<std::array<double, 4>, 4> q{};
    for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double th = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
            const double c = std::cos(th), s = std::sin(th);
            for (int r = 0; r < n; ++r) {
                const double qi = q[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)];
                const double qj = q[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
                q[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] = c * qi - s * qj;
                q[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] = s * qi + c * qj;
            }
        }
    return q;
}

SymMatrix rotate(const SymMatrix& m, const std::array<std::array<double, 4>, 4>& q) {
    const int n = m.dim();
    SymMatrix out(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    s += q[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * m(k, l) *
                         q[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
            out.set(i, j, s);
        }
    return out;
}

PointGeometry random_admissible_point(const OperatorParams& params, double maxKappa, Rng& rng) {
    const int n = params.n;
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const auto sample = cone::sample_admissible(n, params.delta, 1, rng.next_u64());
        const VecN& kappa = sample[0];
        double kmax = 0.0;
        for (int i = 0; i < n; ++i) kmax = std::max(kmax, std::fabs(kappa[static_cast<std::size_t>(i)]));
        if (kmax > maxKappa) continue;

        std::array<double, 4> d{};
        for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = kappa[static_cast<std::size_t>(i)];
        const SymMatrix amat = rotate(SymMatrix::diag(n, d), random_rotation(n, rng));
        VecN grad{};
        for (int i = 0; i < n; ++i) grad[static_cast<std::size_t>(i)] = rng.uniform(-2.0, 2.0);
        return assemble_point(grad, hessian_from_curvature(grad, amat));
    }
    throw SamplerStalled("random_admissible_point: cap too tight");
}

} // namespace slcp::lin
