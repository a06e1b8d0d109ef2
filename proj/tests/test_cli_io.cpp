#include "slcp/cli_io.hpp"
#include "slcp/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace slcp;

namespace {

std::string minimal_spec(const std::string& deltaJson = "\"auto\"") {
    return std::string(R"({
      "version": "slcp-problem/1",
      "n": 2,
      "domain": {"xmin": -1, "xmax": 1, "ymin": -1, "ymax": 1, "nx": 17, "ny": 17},
      "delta": )") + deltaJson + R"(,
      "aParam": "auto",
      "h": {"manufactured_c": 1.0},
      "phi": {"manufactured_trace": true},
      "seed": 7
    })";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("parse the minimal manufactured spec") {
    const io::ProblemSpec spec = io::parse_problem_text(minimal_spec());
    CHECK(spec.n == 2);
    CHECK(spec.grid.nx == 17);
    CHECK(!spec.delta.has_value());
    CHECK(spec.manufacturedC.has_value());
    const io::LoadedProblem lp = io::build_problem(spec);
    CHECK(lp.resolvedDelta == doctest::Approx(0.1));
    CHECK(lp.resolvedA == 2.0);
    CHECK(lp.uStar.has_value());
}

TEST_CASE("golden problem file in the repo parses") {
    const io::ProblemSpec spec = io::parse_problem(std::string(SLCP_SOURCE_DIR) + "/problems/manufactured_c1_33.json");
    CHECK(spec.grid.nx == 33);
    const io::LoadedProblem lp = io::build_problem(spec);
    CHECK(lp.problem.subsolution.has_value());
}

TEST_CASE("negative delta is rejected with a range diagnostic") {
    try {
        io::parse_problem_text(minimal_spec("-0.1"));
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("(0, pi/2)") != std::string::npos);
    }
}

TEST_CASE("h table above the phase ceiling is rejected") {
    std::string tableVals;
    for (int k = 0; k < 25; ++k) tableVals += (k ? "," : "") + std::string("3.2");
    const std::string text = R"({
      "version": "slcp-problem/1",
      "n": 2,
      "domain": {"xmin": -1, "xmax": 1, "ymin": -1, "ymax": 1, "nx": 5, "ny": 5},
      "delta": 0.1,
      "h": {"table": {"shape": [5, 5], "values": [)" + tableVals + R"(]}},
      "phi": {"constant": 0.0}
    })";
    const io::ProblemSpec spec = io::parse_problem_text(text);
    CHECK_THROWS_AS(io::build_problem(spec), ValidationError); // 3.2 >= pi
}

TEST_CASE("malformed json raises ParseError") {
    CHECK_THROWS_AS(io::parse_problem_text("{ not json"), ParseError);
}

TEST_CASE("unknown version is rejected") {
    std::string text = minimal_spec();
    const auto pos = text.find("slcp-problem/1");
    text.replace(pos, 14, "slcp-problem/9");
    CHECK_THROWS_AS(io::parse_problem_text(text), ValidationError);
}

TEST_CASE("wrong table shape is rejected with location info") {
    const std::string text = R"({
      "version": "slcp-problem/1",
      "n": 2,
      "domain": {"xmin": -1, "xmax": 1, "ymin": -1, "ymax": 1, "nx": 5, "ny": 5},
      "delta": 0.1,
      "h": {"table": {"shape": [4, 5], "values": [1,1,1,1,1]}},
      "phi": {"constant": 0.0}
    })";
    try {
        io::parse_problem_text(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("h") != std::string::npos);
        CHECK(std::string(e.what()).find("shape") != std::string::npos);
    }
}

TEST_CASE("problem roundtrip through write and parse") {
    const io::ProblemSpec spec = io::parse_problem_text(minimal_spec("0.2"));
    const std::string text = io::write_problem_text(spec);
    const io::ProblemSpec back = io::parse_problem_text(text);
    CHECK(back.n == spec.n);
    CHECK(back.grid.nx == spec.grid.nx);
    CHECK(back.grid.xmin == spec.grid.xmin);
    CHECK(*back.delta == *spec.delta);
    CHECK(*back.manufacturedC == *spec.manufacturedC);
    CHECK(back.seed == spec.seed);
    CHECK(io::write_problem_text(back) == text);
}

TEST_CASE("field export: layout, determinism, reload fidelity") {
    const io::ProblemSpec spec = io::parse_problem_text(minimal_spec());
    const io::LoadedProblem lp = io::build_problem(spec);
    auto [u, report] = solver::continuity_solve(lp.problem, spec.config);
    const std::string a = io::export_fields_text(u, lp.problem);
    const std::string b = io::export_fields_text(u, lp.problem);
    CHECK(a == b);

    std::stringstream ss(a);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "x,y,u,ux,uy,kappa1,kappa2,F,residual");
    int rows = 0;
    std::string line;
    int checkedKappa = 0;
    while (std::getline(ss, line)) {
        ++rows;
        // parse u (3rd), kappa1 (6th), kappa2 (7th) columns
        std::stringstream ls(line);
        std::string tok;
        std::vector<std::string> cols;
        while (std::getline(ls, tok, ',')) cols.push_back(tok);
        REQUIRE(cols.size() == 9);
        const double k1 = std::strtod(cols[5].c_str(), nullptr);
        const double k2 = std::strtod(cols[6].c_str(), nullptr);
        CHECK(k1 >= k2);
        ++checkedKappa;
    }
    CHECK(rows == 15 * 15);
    CHECK(checkedKappa == rows);

    // reload u column and compare bitwise against the field
    std::stringstream ss2(a);
    std::getline(ss2, header);
    int i = 1, j = 1;
    while (std::getline(ss2, line)) {
        std::stringstream ls(line);
        std::string tok;
        std::vector<std::string> cols;
        while (std::getline(ls, tok, ',')) cols.push_back(tok);
        const double uv = std::strtod(cols[2].c_str(), nullptr);
        CHECK(uv == u(i, j));
        if (++j > 15) { j = 1; ++i; }
    }
}

TEST_CASE("cli: solve golden file end to end") {
    const std::string problem = std::string(SLCP_SOURCE_DIR) + "/problems/manufactured_c1_33.json";
    const std::string out = "cli_fields_test.csv";
    const char* argv[] = {"slcp", "solve", problem.c_str(), "--out", out.c_str()};
    CHECK(io::run_cli(5, argv) == 0);
    const std::string text = read_file(out);
    CHECK(text.rfind("x,y,u,", 0) == 0);
    std::remove(out.c_str());
}

TEST_CASE("cli: exports are byte-identical across reruns") {
    const std::string problem = std::string(SLCP_SOURCE_DIR) + "/problems/manufactured_c1_33.json";
    const char* argv1[] = {"slcp", "solve", problem.c_str(), "--out", "cli_det_a.csv", "--report", "cli_det_a.json"};
    const char* argv2[] = {"slcp", "solve", problem.c_str(), "--out", "cli_det_b.csv", "--report", "cli_det_b.json"};
    REQUIRE(io::run_cli(7, argv1) == 0);
    REQUIRE(io::run_cli(7, argv2) == 0);
    CHECK(read_file("cli_det_a.csv") == read_file("cli_det_b.csv"));
    CHECK(read_file("cli_det_a.json") == read_file("cli_det_b.json"));
    for (const char* f : {"cli_det_a.csv", "cli_det_b.csv", "cli_det_a.json", "cli_det_b.json"})
        std::remove(f);
}

TEST_CASE("cli: invalid problem exits 2") {
    const std::string bad = "cli_bad_problem.json";
    {
        std::ofstream out(bad);
        out << minimal_spec("-0.5");
    }
    const char* argv[] = {"slcp", "solve", bad.c_str()};
    CHECK(io::run_cli(3, argv) == 2);
    std::remove(bad.c_str());
}

TEST_CASE("cli: verify-cone small run exits 0") {
    const char* argv[] = {"slcp", "verify-cone", "--n", "2", "--delta", "0.1",
                          "--samples", "2000", "--seed", "7"};
    CHECK(io::run_cli(10, argv) == 0);
}

TEST_CASE("cli: help exits 0, missing subcommand exits 2") {
    const char* help[] = {"slcp", "--help"};
    CHECK(io::run_cli(2, help) == 0);
    const char* none[] = {"slcp"};
    CHECK(io::run_cli(1, none) == 2);
}

TEST_CASE("cli: table-format golden file solves") {
    const std::string problem = std::string(SLCP_SOURCE_DIR) + "/problems/radial_table_17.json";
    const char* argv[] = {"slcp", "solve", problem.c_str()};
    CHECK(io::run_cli(3, argv) == 0);
}

TEST_CASE("cli: compare-principle on the golden problem") {
    const std::string problem = std::string(SLCP_SOURCE_DIR) + "/problems/manufactured_c1_33.json";
    const char* argv[] = {"slcp", "compare-principle", problem.c_str()};
    CHECK(io::run_cli(3, argv) == 0);
}

TEST_CASE("cli: calibrate-A and check-linearization smoke runs") {
    const char* cal[] = {"slcp", "calibrate-A", "--n", "2", "--delta", "0.1",
                         "--samples", "1000", "--seed", "3"};
    CHECK(io::run_cli(10, cal) == 0);
    const char* chk[] = {"slcp", "check-linearization", "--n", "2", "--delta", "0.1",
                         "--samples", "30", "--seed", "3"};
    CHECK(io::run_cli(10, chk) == 0);
}

TEST_CASE("cli: convergence-study smoke run") {
    const char* argv[] = {"slcp", "convergence-study", "--grids", "9,17,33"};
    CHECK(io::run_cli(4, argv) == 0);
}

namespace {

std::string quadratic_trace_table(int n) {
    std::string pvals;
    const double hx = 2.0 / (n - 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = -1.0 + i * hx, y = -1.0 + j * hx;
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", 0.5 * (x * x + y * y));
            pvals += (pvals.empty() ? "" : ",") + std::string(buf);
        }
    return pvals;
}

} // namespace

TEST_CASE("table-sourced problem solves through the full pipeline") {
    // radial right-hand side supplied as a node table; the bowl is the
    // exact discrete solution of the target problem
    const int n = 17;
    std::string hvals;
    const double hx = 2.0 / (n - 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = -1.0 + i * hx, y = -1.0 + j * hx;
            const double w2 = 1.0 + x * x + y * y;
            const double f = std::atan(1.0 / (w2 * std::sqrt(w2))) + std::atan(1.0 / std::sqrt(w2));
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", f);
            hvals += (hvals.empty() ? "" : ",") + std::string(buf);
        }
    const std::string text = R"({
      "version": "slcp-problem/1",
      "n": 2,
      "domain": {"xmin": -1, "xmax": 1, "ymin": -1, "ymax": 1, "nx": 17, "ny": 17},
      "delta": 0.2,
      "aParam": 2.0,
      "h": {"table": {"shape": [17, 17], "values": [)" + hvals + R"(]}},
      "phi": {"table": {"shape": [17, 17], "values": [)" + quadratic_trace_table(n) + R"(]}}
    })";
    const io::ProblemSpec spec = io::parse_problem_text(text);
    const io::LoadedProblem lp = io::build_problem(spec);
    CHECK(!lp.uStar.has_value()); // table mode carries no oracle
    auto [u, report] = solver::continuity_solve(lp.problem, spec.config);
    CHECK(report.accepted);
    const Grid2D& g = lp.problem.grid;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const double x = g.x(i), y = g.y(j);
            CHECK(std::fabs(u(i, j) - 0.5 * (x * x + y * y)) <= 1e-10);
        }
}

TEST_CASE("constant-phase table problem is solved by the bowl at t = 0") {
    // With the gradient slot off, the bowl has eigenvalues (1,1) and phase
    // pi/2 at every node; it solves the t = 0 problem exactly (at t = 1 the
    // curvature phase of the bowl drops below pi/2 away from the origin).
    const int n = 17;
    std::string hvals;
    for (int k = 0; k < n * n; ++k) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", std::numbers::pi / 2);
        hvals += (hvals.empty() ? "" : ",") + std::string(buf);
    }
    const std::string text = R"({
      "version": "slcp-problem/1",
      "n": 2,
      "domain": {"xmin": -1, "xmax": 1, "ymin": -1, "ymax": 1, "nx": 17, "ny": 17},
      "delta": 0.2,
      "aParam": 2.0,
      "h": {"table": {"shape": [17, 17], "values": [)" + hvals + R"(]}},
      "phi": {"table": {"shape": [17, 17], "values": [)" + quadratic_trace_table(n) + R"(]}}
    })";
    const io::ProblemSpec spec = io::parse_problem_text(text);
    const io::LoadedProblem lp = io::build_problem(spec);
    const Grid2D& g = lp.problem.grid;
    GridField u0(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const double x = g.x(i), y = g.y(j);
            u0.at(i, j) = 0.5 * (x * x + y * y);
        }
    // perturb the interior; fixed-t newton must come back to the bowl
    GridField start = u0;
    for (int i = 1; i <= g.nx - 2; ++i)
        for (int j = 1; j <= g.ny - 2; ++j)
            start.at(i, j) += 0.01 * std::sin(2.0 * g.x(i)) * std::sin(2.0 * g.y(j));
    const auto res = solver::solve_fixed_t(start, lp.problem, 0.0, spec.config);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            CHECK(std::fabs(res.u(i, j) - u0(i, j)) <= 1e-8);
}
