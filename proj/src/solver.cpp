#include "slcp/solver.hpp"
#include "slcp/errors.hpp"
#include "slcp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace slcp::solver {

void SolverConfig::validate() const {
    if (!(tolResidual > 0 && maxNewton > 0 && minStep > 0 && safeguardMargin > 0))
        throw Error("SolverConfig: tolerances must be positive");
    if (!(armijoFactor > 0 && armijoFactor < 1))
        throw Error("SolverConfig: armijoFactor must lie in (0,1)");
    if (!(armijoSlope > 0 && tInitialIncrement > 0 && tMinIncrement > 0))
        throw Error("SolverConfig: schedule parameters must be positive");
    if (!(tShrinkFactor > 0 && tShrinkFactor < 1))
        throw Error("SolverConfig: tShrinkFactor must lie in (0,1)");
}

void Problem::validate() const {
    if (params.n != 2) throw ValidationError("grid solver supports n = 2");
    if (!hField.finite() || !phi.finite()) throw ValidationError("problem fields must be finite");
    const double lo = params.sigma;
    const double hi = params.n * std::numbers::pi / 2;
    const Grid2D& g = grid;
    for (int i = 1; i <= g.nx - 2; ++i)
        for (int j = 1; j <= g.ny - 2; ++j) {
            const double h = hField(i, j);
            if (h < lo || h >= hi)
                throw ValidationError("h out of admissible range at node (" + std::to_string(i) +
                                      "," + std::to_string(j) + "): " + std::to_string(h));
        }
    if (subsolution && !subsolution->finite())
        throw ValidationError("subsolution field must be finite");
}

namespace {

// Scratch arrays for one pointwise sweep over interior nodes (SoA layout for
// the batch kernel).
struct Sweep {
    std::vector<double> gx, gy, hxx, hyy, hxy, k1, k2, F, G;
    void resize(std::size_t m) {
        gx.resize(m); gy.resize(m); hxx.resize(m); hyy.resize(m); hxy.resize(m);
        k1.resize(m); k2.resize(m); F.resize(m); G.resize(m);
    }
};

void gather_stencils(const GridField& u, Sweep& s) {
    const Grid2D& g = u.grid();
    const double ihx2 = 1.0 / (2.0 * g.hx), ihy2 = 1.0 / (2.0 * g.hy);
    const double ihxx = 1.0 / (g.hx * g.hx), ihyy = 1.0 / (g.hy * g.hy);
    const double ihxy = 1.0 / (4.0 * g.hx * g.hy);
    s.resize(static_cast<std::size_t>(g.interior_count()));
    std::size_t k = 0;
    for (int i = 1; i <= g.nx - 2; ++i) {
        for (int j = 1; j <= g.ny - 2; ++j, ++k) {
            s.gx[k] = (u(i + 1, j) - u(i - 1, j)) * ihx2;
            s.gy[k] = (u(i, j + 1) - u(i, j - 1)) * ihy2;
            s.hxx[k] = (u(i + 1, j) - 2.0 * u(i, j) + u(i - 1, j)) * ihxx;
            s.hyy[k] = (u(i, j + 1) - 2.0 * u(i, j) + u(i, j - 1)) * ihyy;
            s.hxy[k] = (u(i + 1, j + 1) - u(i + 1, j - 1) - u(i - 1, j + 1) + u(i - 1, j - 1)) * ihxy;
        }
    }
}

void run_phase_sweep(const GridField& u, double t, const OperatorParams& params, Sweep& s) {
    gather_stencils(u, s);
    kernels::phase_sweep(s.gx.data(), s.gy.data(), s.hxx.data(), s.hyy.data(), s.hxy.data(),
                         s.gx.size(), t, params.aParam, s.k1.data(), s.k2.data(), s.F.data(), s.G.data());
}

double min_margin(const Sweep& s, double sigma) {
    double m = std::numeric_limits<double>::infinity();
    for (double f : s.F) m = std::min(m, f - sigma);
    return m;
}

double residual_inf(const Sweep& s, const Problem& p) {
    const Grid2D& g = p.grid;
    double r = 0.0;
    std::size_t k = 0;
    for (int i = 1; i <= g.nx - 2; ++i)
        for (int j = 1; j <= g.ny - 2; ++j, ++k) {
            const double psi = -std::exp(-p.params.aParam * p.hField(i, j));
            r = std::max(r, std::fabs(s.G[k] - psi));
        }
    return r;
}

} // namespace

GridField residual_field(const GridField& u, const Problem& problem, double t,
                         double safeguardMargin) {
    const Grid2D& g = problem.grid;
    Sweep s;
    run_phase_sweep(u, t, problem.params, s);

    const double margin = min_margin(s, problem.params.sigma);
    if (margin < safeguardMargin) {
        std::ostringstream os;
        os << "margin " << margin << " below safeguard " << safeguardMargin << "; nodes:";
        int listed = 0;
        std::size_t k = 0;
        for (int i = 1; i <= g.nx - 2 && listed < 5; ++i)
            for (int j = 1; j <= g.ny - 2 && listed < 5; ++j, ++k)
                if (s.F[k] - problem.params.sigma < safeguardMargin) {
                    os << " (" << i << "," << j << ")";
                    ++listed;
                }
        throw InadmissibleIterate(os.str());
    }

    GridField r(g, 0.0);
    std::size_t k = 0;
    for (int i = 1; i <= g.nx - 2; ++i)
        for (int j = 1; j <= g.ny - 2; ++j, ++k) {
            const double psi = -std::exp(-problem.params.aParam * problem.hField(i, j));
            r.at(i, j) = s.G[k] - psi;
        }
    return r;
}

MonitorRecord monitors(const GridField& u, const Problem& problem, double t) {
    const Grid2D& g = problem.grid;
    MonitorRecord rec;
    rec.minPhaseMargin = std::numeric_limits<double>::infinity();
    rec.minSumG = std::numeric_limits<double>::infinity();
    rec.subsolGap = std::numeric_limits<double>::quiet_NaN();
    double subsolMin = std::numeric_limits<double>::infinity();

    Sweep s;
    run_phase_sweep(u, t, problem.params, s);
    rec.residualInf = residual_inf(s, problem);
    rec.minPhaseMargin = min_margin(s, problem.params.sigma);

    std::size_t k = 0;
    for (int i = 1; i <= g.nx - 2; ++i)
        for (int j = 1; j <= g.ny - 2; ++j, ++k) {
            rec.supGrad = std::max(rec.supGrad, std::sqrt(s.gx[k] * s.gx[k] + s.gy[k] * s.gy[k]));
            rec.supHess = std::max({rec.supHess, std::fabs(s.hxx[k]), std::fabs(s.hyy[k]), std::fabs(s.hxy[k])});
            // sum_i g_i from the sweep's kappa values
            const double e = problem.params.aParam * std::exp(-problem.params.aParam * s.F[k]);
            const double sumg = e / (1.0 + s.k1[k] * s.k1[k]) + e / (1.0 + s.k2[k] * s.k2[k]);
            rec.minSumG = std::min(rec.minSumG, sumg);

            if (problem.subsolution) {
                VecN grad{s.gx[k] * t, s.gy[k] * t, 0.0, 0.0};
                SymMatrix hess(2);
                hess.set(0, 0, s.hxx[k]); hess.set(1, 1, s.hyy[k]); hess.set(0, 1, s.hxy[k]);
                const PointGeometry geomU = assemble_point(grad, hess);
                const auto gsub = fd_gradient(*problem.subsolution, i, j);
                VecN sgrad{gsub[0] * t, gsub[1] * t, 0.0, 0.0};
                const PointGeometry geomS = assemble_point(sgrad, fd_hessian(*problem.subsolution, i, j));
                subsolMin = std::min(subsolMin, lin::subsolution_gap(geomU, geomS, problem.params));
            }
        }
    if (problem.subsolution) rec.subsolGap = subsolMin;
    return rec;
}

std::pair<GridField, StepReport> newton_step(const GridField& u, const Problem& problem,
                                             double t, const SolverConfig& config) {
    const Grid2D& g = problem.grid;
    const int nxi = g.nx - 2, nyi = g.ny - 2;
    const int N = nxi * nyi;

    Sweep s;
    run_phase_sweep(u, t, problem.params, s);
    const double margin0 = min_margin(s, problem.params.sigma);
    if (margin0 < config.safeguardMargin)
        throw InadmissibleIterate("newton_step called on inadmissible iterate");
    const double r0 = residual_inf(s, problem);

    SparseSystem sys(N);
    auto idx = [&](int i, int j) { return (i - 1) * nyi + (j - 1); };
    std::size_t k = 0;
    for (int i = 1; i <= nxi; ++i) {
        for (int j = 1; j <= nyi; ++j, ++k) {
            VecN grad{s.gx[k] * t, s.gy[k] * t, 0.0, 0.0};
            SymMatrix hess(2);
            hess.set(0, 0, s.hxx[k]); hess.set(1, 1, s.hyy[k]); hess.set(0, 1, s.hxy[k]);
            const PointGeometry geom = assemble_point(grad, hess);
            const lin::LinearizedPoint lp = lin::linearized_coeffs(geom, problem.params);

            const double cxx = lp.gTildeSecond(0, 0) / (g.hx * g.hx);
            const double cyy = lp.gTildeSecond(1, 1) / (g.hy * g.hy);
            const double cxy = lp.gTildeSecond(0, 1) / (2.0 * g.hx * g.hy);
            const double cx = t * lp.gTildeFirst[0] / (2.0 * g.hx);
            const double cy = t * lp.gTildeFirst[1] / (2.0 * g.hy);

            const int row = idx(i, j);
            auto add = [&](int ii, int jj, double v) {
                if (ii >= 1 && ii <= nxi && jj >= 1 && jj <= nyi) sys.add(row, idx(ii, jj), v);
            };
            add(i, j, -2.0 * (cxx + cyy));
            add(i - 1, j, cxx - cx);
            add(i + 1, j, cxx + cx);
            add(i, j - 1, cyy - cy);
            add(i, j + 1, cyy + cy);
            add(i + 1, j + 1, cxy);
            add(i - 1, j - 1, cxy);
            add(i + 1, j - 1, -cxy);
            add(i - 1, j + 1, -cxy);

            const double psi = -std::exp(-problem.params.aParam * problem.hField(i, j));
            sys.set_rhs(row, -(s.G[k] - psi));
        }
    }

    const std::vector<double> du = sparse_solve(sys);

    GridField trial(g);
    StepReport rep;
    rep.residualBefore = r0;
    double alpha = 1.0;
    Sweep strial;
    while (alpha >= config.minStep) {
        trial = u;
        std::size_t m = 0;
        for (int i = 1; i <= nxi; ++i)
            for (int j = 1; j <= nyi; ++j, ++m)
                trial.at(i, j) += alpha * du[m];
        run_phase_sweep(trial, t, problem.params, strial);
        if (min_margin(strial, problem.params.sigma) >= config.safeguardMargin) {
            const double rt = residual_inf(strial, problem);
            if (rt <= (1.0 - config.armijoSlope * alpha) * r0) {
                rep.alpha = alpha;
                rep.residualAfter = rt;
                return {trial, rep};
            }
        }
        alpha *= config.armijoFactor;
        ++rep.backtracks;
    }
    throw LineSearchFailed("no admissible decrease above minStep at t = " + std::to_string(t));
}

FixedTResult solve_fixed_t(const GridField& u0, const Problem& problem, double t,
                           const SolverConfig& config) {
    FixedTResult res;
    res.u = u0;

    // precondition: iterate admissible (throws InadmissibleIterate otherwise)
    GridField r = residual_field(res.u, problem, t, config.safeguardMargin);
    double rn = r.max_abs();
    for (int it = 0; it < config.maxNewton; ++it) {
        if (rn <= config.tolResidual) {
            res.iterations = it;
            res.finalResidual = rn;
            return res;
        }
        auto [unew, step] = newton_step(res.u, problem, t, config);
        res.u = unew;
        rn = step.residualAfter;
        MonitorRecord rec = monitors(res.u, problem, t);
        res.history.push_back(rec);
    }
    if (rn <= config.tolResidual) {
        res.iterations = config.maxNewton;
        res.finalResidual = rn;
        return res;
    }
    throw NotConverged("residual " + std::to_string(rn) + " after " +
                       std::to_string(config.maxNewton) + " iterations at t = " + std::to_string(t));
}

namespace {

// Exactly-satisfied seed: quadratic bowl centered on the box with curvature
// matched to the mid-range of h. Central stencils reproduce its gradient and
// Hessian exactly, so the seed problem's residual is at rounding level.
struct Seed {
    GridField u;
    double c0 = 0.0; // constant phase of the seed
};

Seed build_seed(const Problem& problem) {
    const Grid2D& g = problem.grid;
    double hmin = std::numeric_limits<double>::infinity(), hmax = -hmin;
    for (int i = 1; i <= g.nx - 2; ++i)
        for (int j = 1; j <= g.ny - 2; ++j) {
            hmin = std::min(hmin, problem.hField(i, j));
            hmax = std::max(hmax, problem.hField(i, j));
        }
    const double hmid = 0.5 * (hmin + hmax);
    const double gamma = std::tan(hmid / problem.params.n);
    const double cx = 0.5 * (g.xmin + g.xmax), cy = 0.5 * (g.ymin + g.ymax);
    Seed seed;
    seed.u = GridField(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const double dx = g.x(i) - cx, dy = g.y(j) - cy;
            seed.u.at(i, j) = 0.5 * gamma * (dx * dx + dy * dy);
        }
    seed.c0 = problem.params.n * std::atan(gamma);
    return seed;
}

StageRecord make_record(double t, const FixedTResult& r) {
    StageRecord rec;
    rec.t = t;
    rec.iterations = r.iterations;
    rec.finalResidual = r.finalResidual;
    rec.history = r.history;
    return rec;
}

} // namespace

std::pair<GridField, SolveReport> continuity_solve(const Problem& problem,
                                                   const SolverConfig& config) {
    config.validate();
    problem.validate();
    const Grid2D& g = problem.grid;

    SolveReport report;
    report.backend = kernels::backend_name();

    // Stage A: continue (h, phi) from the seed problem to the target at t = 0.
    const Seed seed = build_seed(problem);
    GridField u = seed.u;
    Problem stage = problem;

    auto blend_stage = [&](double sparam) {
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j)
                stage.hField.at(i, j) = (1.0 - sparam) * seed.c0 + sparam * problem.hField(i, j);
        GridField bc(g);
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j)
                bc.at(i, j) = (1.0 - sparam) * seed.u(i, j) + sparam * problem.phi(i, j);
        stage.phi = bc;
    };

    double sparam = 0.0;
    double ds = config.tInitialIncrement;
    while (sparam < 1.0) {
        const double snext = std::min(sparam + ds, 1.0);
        blend_stage(snext);
        GridField warm = apply_dirichlet(u, stage.phi);
        try {
            FixedTResult r = solve_fixed_t(warm, stage, 0.0, config);
            u = r.u;
            report.embedding.push_back(make_record(snext, r));
            sparam = snext;
        } catch (const Error&) {
            ds *= config.tShrinkFactor;
            if (ds < config.tMinIncrement) {
                report.accepted = false;
                report.failureReason = "initial continuation stalled at s = " + std::to_string(sparam);
                throw HomotopyStalled(report.failureReason);
            }
        }
    }

    // Stage B: gradient homotopy t: 0 -> 1 (coefficients at (D^2u, t Du)).
    stage = problem;
    {
        // the embedding endpoint solves the target problem at t = 0
        FixedTResult r0 = solve_fixed_t(u, stage, 0.0, config);
        u = r0.u;
        report.perT.push_back(make_record(0.0, r0));
    }
    double t = 0.0;
    double dt = config.tInitialIncrement;
    while (t < 1.0) {
        const double tnext = std::min(t + dt, 1.0);
        try {
            FixedTResult r = solve_fixed_t(u, stage, tnext, config);
            u = r.u;
            report.perT.push_back(make_record(tnext, r));
            t = tnext;
        } catch (const Error&) {
            dt *= config.tShrinkFactor;
            if (dt < config.tMinIncrement) {
                report.accepted = false;
                report.failureReason = "homotopy stalled at t = " + std::to_string(t);
                throw HomotopyStalled(report.failureReason);
            }
        }
    }

    report.accepted = true;
    return {u, report};
}

} // namespace slcp::solver
