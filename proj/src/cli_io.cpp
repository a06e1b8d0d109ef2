#include "slcp/cli_io.hpp"
#include "slcp/errors.hpp"
#include "slcp/kernels.hpp"
#include "slcp/linearize.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

namespace slcp::io {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "slcp-problem/1";

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

GridField parse_table(const json& j, const Grid2D& grid, const std::string& what) {
    if (!j.contains("shape") || !j.contains("values"))
        throw ValidationError(what + ": table needs shape and values");
    const auto shape = j.at("shape");
    if (!shape.is_array() || shape.size() != 2)
        throw ValidationError(what + ": shape must be [nx, ny]");
    const int nx = shape.at(0).get<int>();
    const int ny = shape.at(1).get<int>();
    if (nx != grid.nx || ny != grid.ny)
        throw ValidationError(what + ": table shape (" + std::to_string(nx) + "," + std::to_string(ny) +
                              ") does not match grid (" + std::to_string(grid.nx) + "," + std::to_string(grid.ny) + ")");
    const auto& vals = j.at("values");
    if (!vals.is_array() || vals.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny))
        throw ValidationError(what + ": values length must be nx*ny");
    GridField f(grid);
    std::size_t k = 0;
    for (int i = 0; i < nx; ++i)
        for (int j2 = 0; j2 < ny; ++j2, ++k) {
            const double v = vals.at(k).get<double>();
            if (!std::isfinite(v)) throw ValidationError(what + ": non-finite value at index " + std::to_string(k));
            f.at(i, j2) = v;
        }
    return f;
}

json table_to_json(const GridField& f) {
    const Grid2D& g = f.grid();
    json t;
    t["shape"] = {g.nx, g.ny};
    t["values"] = f.raw();
    return t;
}

} // namespace

ProblemSpec parse_problem_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(e.what());
    }

    ProblemSpec spec;
    try {
        if (!j.contains("version")) throw ValidationError("missing version tag");
        spec.version = j.at("version").get<std::string>();
        if (spec.version != kVersion)
            throw ValidationError("unrecognized version '" + spec.version + "' (expected " + kVersion + ")");

        spec.n = j.value("n", 2);
        if (spec.n != 2) throw ValidationError("n: grid solves support n = 2");

        const auto& d = j.at("domain");
        spec.grid = Grid2D::make(d.at("xmin").get<double>(), d.at("xmax").get<double>(),
                                 d.at("ymin").get<double>(), d.at("ymax").get<double>(),
                                 d.at("nx").get<int>(), d.at("ny").get<int>());

        if (j.contains("delta") && !j.at("delta").is_string()) {
            const double dv = j.at("delta").get<double>();
            if (!(dv > 0.0 && dv < std::numbers::pi / 2))
                throw ValidationError("delta must lie in (0, pi/2), got " + std::to_string(dv));
            spec.delta = dv;
        }
        if (j.contains("aParam") && !j.at("aParam").is_string()) {
            const double av = j.at("aParam").get<double>();
            if (!(av > 0.0)) throw ValidationError("aParam must be positive");
            spec.aParam = av;
        }

        const auto& h = j.at("h");
        if (h.contains("manufactured_c")) {
            const double c = h.at("manufactured_c").get<double>();
            if (!(c > 0.0)) throw ValidationError("h.manufactured_c must be positive");
            spec.manufacturedC = c;
        } else if (h.contains("table")) {
            spec.hTable = parse_table(h.at("table"), spec.grid, "h");
        } else {
            throw ValidationError("h: need manufactured_c or table");
        }

        if (j.contains("phi")) {
            const auto& p = j.at("phi");
            if (p.contains("manufactured_trace")) {
                spec.phiSource = ProblemSpec::PhiSource::manufactured;
            } else if (p.contains("constant")) {
                spec.phiSource = ProblemSpec::PhiSource::constant;
                spec.phiConstant = p.at("constant").get<double>();
            } else if (p.contains("table")) {
                spec.phiSource = ProblemSpec::PhiSource::table;
                spec.phiTable = parse_table(p.at("table"), spec.grid, "phi");
            } else {
                throw ValidationError("phi: need manufactured_trace, constant or table");
            }
        }
        if (spec.phiSource == ProblemSpec::PhiSource::manufactured && !spec.manufacturedC)
            throw ValidationError("phi.manufactured_trace requires h.manufactured_c");

        if (j.contains("subsolution")) {
            const auto& s = j.at("subsolution");
            if (s.contains("manufactured")) {
                if (!spec.manufacturedC) throw ValidationError("subsolution.manufactured requires h.manufactured_c");
                spec.subsolSource = ProblemSpec::SubsolSource::manufactured;
            } else if (s.contains("table")) {
                spec.subsolSource = ProblemSpec::SubsolSource::table;
                spec.subsolTable = parse_table(s.at("table"), spec.grid, "subsolution");
            } else {
                throw ValidationError("subsolution: need manufactured or table");
            }
        }

        if (j.contains("solver")) {
            const auto& s = j.at("solver");
            spec.config.tolResidual = s.value("tolResidual", spec.config.tolResidual);
            spec.config.maxNewton = s.value("maxNewton", spec.config.maxNewton);
            spec.config.armijoFactor = s.value("armijoFactor", spec.config.armijoFactor);
            spec.config.armijoSlope = s.value("armijoSlope", spec.config.armijoSlope);
            spec.config.minStep = s.value("minStep", spec.config.minStep);
            spec.config.tInitialIncrement = s.value("tInitialIncrement", spec.config.tInitialIncrement);
            spec.config.tShrinkFactor = s.value("tShrinkFactor", spec.config.tShrinkFactor);
            spec.config.tMinIncrement = s.value("tMinIncrement", spec.config.tMinIncrement);
            spec.config.safeguardMargin = s.value("safeguardMargin", spec.config.safeguardMargin);
            spec.config.validate();
        }
        spec.seed = j.value("seed", 0ull);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw ValidationError(e.what());
    }
    return spec;
}

ProblemSpec parse_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem_text(ss.str());
}

std::string write_problem_text(const ProblemSpec& spec) {
    json j;
    j["version"] = kVersion;
    j["n"] = spec.n;
    j["domain"] = {{"xmin", spec.grid.xmin}, {"xmax", spec.grid.xmax},
                   {"ymin", spec.grid.ymin}, {"ymax", spec.grid.ymax},
                   {"nx", spec.grid.nx}, {"ny", spec.grid.ny}};
    if (spec.delta) j["delta"] = *spec.delta; else j["delta"] = "auto";
    if (spec.aParam) j["aParam"] = *spec.aParam; else j["aParam"] = "auto";
    if (spec.manufacturedC) j["h"] = {{"manufactured_c", *spec.manufacturedC}};
    else j["h"] = {{"table", table_to_json(*spec.hTable)}};
    switch (spec.phiSource) {
    case ProblemSpec::PhiSource::manufactured: j["phi"] = {{"manufactured_trace", true}}; break;
    case ProblemSpec::PhiSource::constant: j["phi"] = {{"constant", spec.phiConstant}}; break;
    case ProblemSpec::PhiSource::table: j["phi"] = {{"table", table_to_json(*spec.phiTable)}}; break;
    }
    if (spec.subsolSource == ProblemSpec::SubsolSource::manufactured) j["subsolution"] = {{"manufactured", true}};
    else if (spec.subsolSource == ProblemSpec::SubsolSource::table) j["subsolution"] = {{"table", table_to_json(*spec.subsolTable)}};
    j["solver"] = {{"tolResidual", spec.config.tolResidual}, {"maxNewton", spec.config.maxNewton},
                   {"armijoFactor", spec.config.armijoFactor}, {"armijoSlope", spec.config.armijoSlope},
                   {"minStep", spec.config.minStep}, {"tInitialIncrement", spec.config.tInitialIncrement},
                   {"tShrinkFactor", spec.config.tShrinkFactor}, {"tMinIncrement", spec.config.tMinIncrement},
                   {"safeguardMargin", spec.config.safeguardMargin}};
    j["seed"] = spec.seed;
    return j.dump(2) + "\n";
}

LoadedProblem build_problem(const ProblemSpec& spec) {
    LoadedProblem lp;
    lp.problem.grid = spec.grid;

    double marginFloor = 0.0;
    if (spec.manufacturedC) {
        const harness::ManufacturedProblem mp = harness::manufactured_radial(spec.grid, *spec.manufacturedC);
        lp.problem.hField = mp.hField;
        lp.uStar = mp.uStar;
        marginFloor = mp.deltaUsed;
        if (spec.phiSource == ProblemSpec::PhiSource::manufactured) lp.problem.phi = mp.phi;
    } else {
        lp.problem.hField = *spec.hTable;
        double hmin = std::numeric_limits<double>::infinity();
        for (int i = 1; i <= spec.grid.nx - 2; ++i)
            for (int j = 1; j <= spec.grid.ny - 2; ++j) hmin = std::min(hmin, lp.problem.hField(i, j));
        marginFloor = hmin - (spec.n - 2) * std::numbers::pi / 2;
    }

    if (spec.phiSource == ProblemSpec::PhiSource::constant) {
        GridField f(spec.grid, spec.phiConstant);
        lp.problem.phi = f;
    } else if (spec.phiSource == ProblemSpec::PhiSource::table) {
        lp.problem.phi = *spec.phiTable;
    }

    if (spec.subsolSource == ProblemSpec::SubsolSource::manufactured) lp.problem.subsolution = lp.uStar;
    else if (spec.subsolSource == ProblemSpec::SubsolSource::table) lp.problem.subsolution = spec.subsolTable;

    lp.resolvedDelta = spec.delta ? *spec.delta : std::min(0.1, 0.5 * marginFloor);
    if (!(lp.resolvedDelta > 0))
        throw ValidationError("h values leave no room for a positive delta");
    lp.resolvedA = spec.aParam ? *spec.aParam : 2.0;
    lp.problem.params = OperatorParams::make(2, lp.resolvedDelta, lp.resolvedA);
    lp.problem.validate();
    return lp;
}

std::string export_fields_text(const GridField& u, const solver::Problem& problem) {
    const Grid2D& g = problem.grid;
    std::string out = "x,y,u,ux,uy,kappa1,kappa2,F,residual\n";
    const GridField r = solver::residual_field(u, problem, 1.0, -1e30);
    for (int i = 1; i <= g.nx - 2; ++i) {
        for (int j = 1; j <= g.ny - 2; ++j) {
            const auto grad = fd_gradient(u, i, j);
            const SymMatrix hess = fd_hessian(u, i, j);
            const PointGeometry geom = assemble_point(VecN{grad[0], grad[1], 0.0, 0.0}, hess);
            out += fmt17(g.x(i)); out += ',';
            out += fmt17(g.y(j)); out += ',';
            out += fmt17(u(i, j)); out += ',';
            out += fmt17(grad[0]); out += ',';
            out += fmt17(grad[1]); out += ',';
            out += fmt17(geom.kappa[0]); out += ',';
            out += fmt17(geom.kappa[1]); out += ',';
            out += fmt17(phase_F(geom.kappa, 2)); out += ',';
            out += fmt17(r(i, j)); out += '\n';
        }
    }
    return out;
}

void export_fields(const GridField& u, const solver::Problem& problem, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << export_fields_text(u, problem);
    if (!out) throw IoError("write failed: " + path);
}

namespace {

json monitor_to_json(const solver::MonitorRecord& m) {
    json j;
    j["supGrad"] = m.supGrad;
    j["supHess"] = m.supHess;
    j["minPhaseMargin"] = m.minPhaseMargin;
    j["minSumG"] = m.minSumG;
    if (std::isfinite(m.subsolGap)) j["subsolGap"] = m.subsolGap;
    j["residualInf"] = m.residualInf;
    return j;
}

json stage_to_json(const solver::StageRecord& s) {
    json j;
    j["t"] = s.t;
    j["iterations"] = s.iterations;
    j["finalResidual"] = s.finalResidual;
    json hist = json::array();
    for (const auto& m : s.history) hist.push_back(monitor_to_json(m));
    j["history"] = hist;
    return j;
}

} // namespace

std::string report_to_text(const solver::SolveReport& report) {
    json j;
    j["accepted"] = report.accepted;
    if (!report.failureReason.empty()) j["failureReason"] = report.failureReason;
    j["backend"] = report.backend;
    json emb = json::array();
    for (const auto& s : report.embedding) emb.push_back(stage_to_json(s));
    j["embedding"] = emb;
    json per = json::array();
    for (const auto& s : report.perT) per.push_back(stage_to_json(s));
    j["perT"] = per;
    return j.dump(2) + "\n";
}

std::string suite_report_to_text(const harness::SuiteReport& report) {
    json j;
    j["allPassed"] = report.allPassed;
    json cases = json::array();
    for (const auto& c : report.cases) {
        json cj;
        cj["n"] = c.n;
        cj["delta"] = c.delta;
        cj["samples"] = c.samples;
        cj["propertyViolations"] = c.propertyViolations;
        cj["worstViolation"] = c.worstViolation;
        cj["convexityViolations"] = c.convexityViolations;
        cj["worstConvexityMargin"] = c.worstConvexityMargin;
        cj["calibratedA"] = c.calibration.aParam;
        cj["maxHessQuotient"] = c.calibration.maxHessEigenvalue;
        cj["curvedWeightMin"] = c.probes.curvedWeightMin;
        cj["weightRatioMax"] = c.probes.weightRatioMax;
        cj["minLastWeight"] = c.probes.minLastWeight;
        cases.push_back(cj);
    }
    j["cases"] = cases;
    return j.dump(2) + "\n";
}

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

int cmd_solve(const std::string& problemPath, const std::string& outPath,
              const std::string& reportPath, double tolOverride) {
    ProblemSpec spec = parse_problem(problemPath);
    if (tolOverride > 0) spec.config.tolResidual = tolOverride;
    LoadedProblem lp = build_problem(spec);
    auto [u, report] = solver::continuity_solve(lp.problem, spec.config);
    if (!outPath.empty()) export_fields(u, lp.problem, outPath);
    if (!reportPath.empty()) write_text(reportPath, report_to_text(report));
    const solver::MonitorRecord m = solver::monitors(u, lp.problem, 1.0);
    std::cout << "solve: accepted=" << (report.accepted ? "yes" : "no")
              << " stages=" << report.perT.size()
              << " residualInf=" << fmt17(m.residualInf)
              << " minPhaseMargin=" << fmt17(m.minPhaseMargin)
              << " supGrad=" << fmt17(m.supGrad)
              << " supHess=" << fmt17(m.supHess)
              << " backend=" << report.backend << "\n";
    if (lp.uStar) {
        double err = 0.0;
        for (int i = 0; i < lp.problem.grid.nx; ++i)
            for (int j = 0; j < lp.problem.grid.ny; ++j)
                err = std::max(err, std::fabs(u(i, j) - (*lp.uStar)(i, j)));
        std::cout << "solve: manufactured max error=" << fmt17(err) << "\n";
    }
    return report.accepted ? 0 : 1;
}

int cmd_verify_cone(int n, double delta, std::size_t samples, std::uint64_t seed,
                    const std::string& outPath) {
    harness::SuiteReport rep = harness::cone_suites(n, {delta}, samples, seed);
    const std::string text = suite_report_to_text(rep);
    if (!outPath.empty()) write_text(outPath, text);
    std::cout << text;
    return rep.allPassed ? 0 : 1;
}

int cmd_calibrate(int n, double delta, std::size_t samples, std::uint64_t seed,
                  const std::string& outPath) {
    const cone::CalibrationResult r = cone::calibrate_A(n, delta, samples, seed);
    json j;
    j["aParam"] = r.aParam;
    j["samplesTested"] = r.samplesTested;
    j["maxHessQuotient"] = r.maxHessEigenvalue;
    const std::string text = j.dump(2) + "\n";
    if (!outPath.empty()) write_text(outPath, text);
    std::cout << text;
    return 0;
}

int cmd_check_linearization(int n, double delta, std::size_t samples, std::uint64_t seed,
                            double tol) {
    const OperatorParams params = OperatorParams::make(n, delta, 2.0);
    Rng rng(seed);
    double worst = 0.0, worstTrace = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const PointGeometry geom = lin::random_admissible_point(params, 50.0, rng);
        worst = std::max(worst, lin::fd_validate(geom, params, 20, rng.next_u64()));
        const lin::LinearizedPoint lpt = lin::linearized_coeffs(geom, params);
        double lhs = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) lhs += lpt.gTildeSecond(i, j) * geom.hess(i, j);
        worstTrace = std::max(worstTrace, std::fabs(lhs - lpt.sumGKappa));
    }
    std::cout << "check-linearization: worstRelError=" << fmt17(worst)
              << " worstTraceIdentity=" << fmt17(worstTrace) << "\n";
    return (worst <= tol && worstTrace <= 1e-10) ? 0 : 1;
}

int cmd_convergence(const std::string& gridsCsv, double tolOverride, const std::string& outPath) {
    std::vector<int> sizes;
    std::stringstream ss(gridsCsv);
    std::string tok;
    while (std::getline(ss, tok, ',')) sizes.push_back(std::stoi(tok));
    solver::SolverConfig config;
    if (tolOverride > 0) config.tolResidual = tolOverride;
    const harness::ConvergenceStudy study = harness::convergence_study(1.0, sizes, config, 2.0);
    json j;
    j["sizes"] = study.sizes;
    j["errors"] = study.errors;
    j["orders"] = study.orders;
    const std::string text = j.dump(2) + "\n";
    if (!outPath.empty()) write_text(outPath, text);
    std::cout << text;
    return 0;
}

int cmd_compare_principle(const std::string& problemPath, double tolScale) {
    ProblemSpec spec = parse_problem(problemPath);
    LoadedProblem lp = build_problem(spec);
    auto [u, report] = solver::continuity_solve(lp.problem, spec.config);
    (void)report;
    const GridField ubar = harness::harmonic_extension(lp.problem.phi);
    const Grid2D& g = lp.problem.grid;
    const double h = std::max(g.hx, g.hy);
    const double eps = tolScale * h * h * u.max_abs();
    double worstUpper = -std::numeric_limits<double>::infinity();
    double worstLower = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= g.nx - 2; ++i)
        for (int j = 1; j <= g.ny - 2; ++j) {
            worstUpper = std::max(worstUpper, u(i, j) - ubar(i, j) - eps);
            if (lp.problem.subsolution)
                worstLower = std::max(worstLower, (*lp.problem.subsolution)(i, j) - u(i, j) - eps);
        }
    const bool okUpper = worstUpper <= 0.0;
    const bool okLower = !lp.problem.subsolution || worstLower <= 0.0;
    std::cout << "compare-principle: upper=" << (okUpper ? "pass" : "fail")
              << " lower=" << (lp.problem.subsolution ? (okLower ? "pass" : "fail") : "n/a")
              << " worstUpperExcess=" << fmt17(worstUpper)
              << " worstLowerExcess=" << fmt17(worstLower) << "\n";
    return (okUpper && okLower) ? 0 : 1;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Dirichlet solver and verification harness for the special Lagrangian curvature potential equation"};
    app.require_subcommand(1);

    std::string problemPath, outPath, reportPath, gridsCsv = "17,33,65";
    double delta = 0.1, tol = -1.0;
    int n = 2;
    std::size_t samples = 1000;
    std::uint64_t seed = 7;

    auto* solve = app.add_subcommand("solve", "solve a problem file and export fields");
    solve->add_option("problem", problemPath, "problem file")->required();
    solve->add_option("--out", outPath, "field export path");
    solve->add_option("--report", reportPath, "solve report path");
    solve->add_option("--tol", tol, "residual tolerance override");

    auto* cone_ = app.add_subcommand("verify-cone", "mass-verify admissible cone structure");
    cone_->add_option("--n", n, "dimension (2 or 3)");
    cone_->add_option("--delta", delta, "phase margin");
    cone_->add_option("--samples", samples, "sample count");
    cone_->add_option("--seed", seed, "rng seed");
    cone_->add_option("--out", outPath, "report path");

    auto* cal = app.add_subcommand("calibrate-A", "calibrate the concavity exponent");
    cal->add_option("--n", n, "dimension (2 or 3)");
    cal->add_option("--delta", delta, "phase margin");
    cal->add_option("--samples", samples, "sample count");
    cal->add_option("--seed", seed, "rng seed");
    cal->add_option("--out", outPath, "report path");

    auto* chk = app.add_subcommand("check-linearization", "validate analytic derivatives against differences");
    chk->add_option("--n", n, "dimension (2 or 3)");
    chk->add_option("--delta", delta, "phase margin");
    chk->add_option("--samples", samples, "point count");
    chk->add_option("--seed", seed, "rng seed");
    chk->add_option("--tol", tol, "relative error bound (default 1e-5)");

    auto* conv = app.add_subcommand("convergence-study", "manufactured-solution study over grid sizes");
    conv->add_option("--grids", gridsCsv, "comma-separated node counts");
    conv->add_option("--tol", tol, "residual tolerance override");
    conv->add_option("--out", outPath, "table path");

    auto* cmp = app.add_subcommand("compare-principle", "order check against the harmonic extension");
    cmp->add_option("problem", problemPath, "problem file")->required();
    cmp->add_option("--tol", tol, "sandwich scale (default 10)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) return cmd_solve(problemPath, outPath, reportPath, tol);
        if (cone_->parsed()) return cmd_verify_cone(n, delta, samples, seed, outPath);
        if (cal->parsed()) return cmd_calibrate(n, delta, samples, seed, outPath);
        if (chk->parsed()) return cmd_check_linearization(n, delta, samples, seed, tol > 0 ? tol : 1e-5);
        if (conv->parsed()) return cmd_convergence(gridsCsv, tol, outPath);
        if (cmp->parsed()) return cmd_compare_principle(problemPath, tol > 0 ? tol : 10.0);
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace slcp::io
