#include "slcp/harness.hpp"
#include "slcp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace slcp::harness {

ManufacturedProblem manufactured_radial(const Grid2D& grid, double c) {
    if (!(c > 0)) throw Error("manufactured_radial: c must be positive");
    if (grid.xmin != -1.0 || grid.xmax != 1.0 || grid.ymin != -1.0 || grid.ymax != 1.0)
        throw Error("manufactured_radial: the radial family is defined on [-1,1]^2");
    ManufacturedProblem mp;
    mp.uStar = GridField(grid);
    mp.hField = GridField(grid);
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.ny; ++j) {
            const double x = grid.x(i), y = grid.y(j);
            const double r2 = x * x + y * y;
            mp.uStar.at(i, j) = 0.5 * c * r2;
            const double w2 = 1.0 + c * c * r2;
            const double krad = c / (w2 * std::sqrt(w2));
            const double ktan = c / std::sqrt(w2); // u_r/(r w) = c/w, limit c at r = 0
            mp.hField.at(i, j) = std::atan(krad) + std::atan(ktan);
        }
    }
    mp.phi = mp.uStar;
    double hmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) hmin = std::min(hmin, mp.hField(i, j));
    mp.deltaUsed = hmin; // (n-2)*pi/2 = 0 for n = 2
    if (mp.deltaUsed <= 0.05)
        throw MarginTooSmall("manufactured margin " + std::to_string(mp.deltaUsed));
    return mp;
}

solver::Problem to_problem(const ManufacturedProblem& mp, double delta, double aParam,
                           bool attachSubsolution) {
    const double d = delta > 0 ? delta : std::min(0.1, 0.5 * mp.deltaUsed);
    solver::Problem p;
    p.grid = mp.uStar.grid();
    p.params = OperatorParams::make(2, d, aParam);
    p.hField = mp.hField;
    p.phi = mp.phi;
    if (attachSubsolution) p.subsolution = mp.uStar;
    return p;
}

GridField harmonic_extension(const GridField& phi) {
    const Grid2D& g = phi.grid();
    const int nxi = g.nx - 2, nyi = g.ny - 2;
    SparseSystem sys(nxi * nyi);
    auto idx = [&](int i, int j) { return (i - 1) * nyi + (j - 1); };
    const double cx = 1.0 / (g.hx * g.hx), cy = 1.0 / (g.hy * g.hy);
    for (int i = 1; i <= nxi; ++i) {
        for (int j = 1; j <= nyi; ++j) {
            const int row = idx(i, j);
            sys.add(row, row, -2.0 * (cx + cy));
            double rhs = 0.0;
            auto nb = [&](int ii, int jj, double w) {
                if (g.interior(ii, jj)) sys.add(row, idx(ii, jj), w);
                else rhs -= w * phi(ii, jj);
            };
            nb(i - 1, j, cx); nb(i + 1, j, cx);
            nb(i, j - 1, cy); nb(i, j + 1, cy);
            sys.set_rhs(row, rhs);
        }
    }
    const std::vector<double> sol = sparse_solve(sys);

    GridField out = phi;
    double bmin = std::numeric_limits<double>::infinity(), bmax = -bmin;
    for (int i = 0; i < g.nx; ++i) {
        bmin = std::min({bmin, phi(i, 0), phi(i, g.ny - 1)});
        bmax = std::max({bmax, phi(i, 0), phi(i, g.ny - 1)});
    }
    for (int j = 0; j < g.ny; ++j) {
        bmin = std::min({bmin, phi(0, j), phi(g.nx - 1, j)});
        bmax = std::max({bmax, phi(0, j), phi(g.nx - 1, j)});
    }
    std::size_t m = 0;
    for (int i = 1; i <= nxi; ++i)
        for (int j = 1; j <= nyi; ++j, ++m) {
            out.at(i, j) = sol[m];
            const double tol = 1e-10 * (1.0 + std::max(std::fabs(bmin), std::fabs(bmax)));
            if (sol[m] < bmin - tol || sol[m] > bmax + tol)
                throw Error("harmonic extension violates the discrete maximum principle");
        }
    return out;
}

ConvergenceStudy convergence_study(double c, const std::vector<int>& sizes,
                                   const solver::SolverConfig& config, double aParam) {
    if (sizes.size() < 3) throw Error("convergence_study: need at least 3 grid sizes");
    for (std::size_t k = 1; k < sizes.size(); ++k)
        if (sizes[k] <= sizes[k - 1]) throw Error("convergence_study: sizes must increase");

    ConvergenceStudy out;
    out.sizes = sizes;
    for (int n : sizes) {
        const Grid2D grid = Grid2D::unit_box(n);
        const ManufacturedProblem mp = manufactured_radial(grid, c);
        const solver::Problem p = to_problem(mp, 0.0, aParam, true);
        auto [u, report] = solver::continuity_solve(p, config);
        double err = 0.0;
        for (int i = 0; i < grid.nx; ++i)
            for (int j = 0; j < grid.ny; ++j)
                err = std::max(err, std::fabs(u(i, j) - mp.uStar(i, j)));
        out.errors.push_back(err);
        out.finalMonitors.push_back(solver::monitors(u, p, 1.0));
    }
    for (std::size_t k = 0; k + 1 < out.errors.size(); ++k)
        out.orders.push_back(std::log2(out.errors[k] / out.errors[k + 1]));
    return out;
}

SuiteReport cone_suites(int n, const std::vector<double>& deltas,
                        std::size_t samplesPerCase, std::uint64_t seed) {
    if (samplesPerCase < 1000) throw Error("cone_suites: need at least 1e3 samples per case");
    SuiteReport rep;
    rep.allPassed = true;
    std::uint64_t caseSeed = seed;
    for (double delta : deltas) {
        SuiteCase sc;
        sc.n = n;
        sc.delta = delta;
        const auto sample = cone::sample_admissible(n, delta, samplesPerCase, caseSeed);
        sc.samples = sample.size();
        for (const VecN& k : sample) {
            const cone::ConeReport cr = cone::check_properties(k, n, delta);
            if (!(cr.positiveHead && cr.nonnegativeTrace && cr.minEigenBound && cr.reciprocalBound))
                ++sc.propertyViolations;
            sc.worstViolation = std::max(sc.worstViolation, cr.worstViolation);
        }

        // convexity probe over pairs: blends of admissible points stay admissible
        Rng rng(Rng(caseSeed).fork(7).next_u64());
        const double sigma = (n - 2) * std::numbers::pi / 2 + delta;
        const std::size_t pairProbes = std::min<std::size_t>(10000, sample.size() / 2);
        sc.worstConvexityMargin = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < pairProbes; ++p) {
            const VecN& a = sample[static_cast<std::size_t>(rng.uniform(0.0, 1.0) * sample.size())];
            const VecN& b = sample[static_cast<std::size_t>(rng.uniform(0.0, 1.0) * sample.size())];
            for (double tblend : {0.25, 0.5, 0.75}) {
                VecN mix{};
                for (int i = 0; i < n; ++i)
                    mix[static_cast<std::size_t>(i)] = tblend * a[static_cast<std::size_t>(i)] +
                                                       (1.0 - tblend) * b[static_cast<std::size_t>(i)];
                std::sort(mix.begin(), mix.begin() + n, std::greater<double>());
                const double margin = phase_F(mix, n) - sigma;
                sc.worstConvexityMargin = std::min(sc.worstConvexityMargin, margin);
                if (margin < -1e-12) ++sc.convexityViolations;
            }
        }

        const std::size_t calCount = std::min<std::size_t>(1000, samplesPerCase);
        sc.calibration = cone::calibrate_A(n, delta, calCount, caseSeed + 1);
        sc.probes = cone::probe_extremes(n, delta, sc.calibration.aParam,
                                         std::min<std::size_t>(samplesPerCase, 20000), caseSeed + 2);

        if (sc.propertyViolations || sc.convexityViolations ||
            !(sc.probes.minLastWeight > 0.0) || !std::isfinite(sc.probes.curvedWeightMin) ||
            !std::isfinite(sc.probes.weightRatioMax))
            rep.allPassed = false;
        rep.cases.push_back(sc);
        caseSeed += 1000;
    }
    return rep;
}

} // namespace slcp::harness
