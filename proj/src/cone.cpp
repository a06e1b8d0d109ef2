#include "slcp/cone.hpp"
#include "slcp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace slcp::cone {

namespace {

constexpr double kPropTol = 1e-12;
constexpr double kQuotientTol = 1e-8;
constexpr double kFdStep = 1e-4;

} // namespace

ConeReport check_properties(const VecN& kappa, int n, double delta) {
    if (!(delta > 0.0 && delta < std::numbers::pi / 2))
        throw Error("check_properties: delta must lie in (0, pi/2)");
    for (int i = 0; i + 1 < n; ++i)
        if (kappa[static_cast<std::size_t>(i)] < kappa[static_cast<std::size_t>(i + 1)])
            throw NotSorted("kappa");

    ConeReport rep;
    const double sigma = (n - 2) * std::numbers::pi / 2 + delta;
    rep.margin = phase_F(kappa, n) - sigma;
    rep.admissible = rep.margin >= 0.0;
    rep.inCone = rep.admissible;

    const double kn = kappa[static_cast<std::size_t>(n - 1)];
    double worst = 0.0;

    if (n >= 2) {
        const double knm1 = kappa[static_cast<std::size_t>(n - 2)];
        const double vHead = std::max(-knm1, std::fabs(kn) - knm1);
        rep.positiveHead = vHead <= kPropTol;
        worst = std::max(worst, vHead);
    } else {
        rep.positiveHead = true;
    }

    double trace = 0.0;
    for (int i = 0; i < n; ++i) trace += kappa[static_cast<std::size_t>(i)];
    const double vTrace = -trace;
    rep.nonnegativeTrace = vTrace <= kPropTol;
    worst = std::max(worst, vTrace);

    const double vMin = (-1.0 / std::tan(delta)) - kn;
    rep.minEigenBound = vMin <= kPropTol;
    worst = std::max(worst, vMin);

    if (kn < 0.0) {
        double recip = 0.0;
        for (int i = 0; i < n; ++i) recip += 1.0 / kappa[static_cast<std::size_t>(i)];
        const double vRecip = recip + std::tan(delta);
        rep.reciprocalBound = vRecip <= kPropTol;
        worst = std::max(worst, std::max(0.0, vRecip));
    } else {
        rep.reciprocalBound = true;
    }

    rep.worstViolation = std::max(0.0, worst);
    return rep;
}

std::vector<VecN> sample_admissible(int n, double delta, std::size_t count, std::uint64_t seed) {
    if (count < 1) throw Error("sample_admissible: count must be >= 1");
    const double sigma = (n - 2) * std::numbers::pi / 2 + delta;
    Rng rng(seed);
    std::vector<VecN> out;
    out.reserve(count);
    std::size_t proposals = 0;
    while (out.size() < count) {
        ++proposals;
        if (proposals >= 1000000 && static_cast<double>(out.size()) < 1e-4 * static_cast<double>(proposals))
            throw SamplerStalled("acceptance rate below 1e-4 after 1e6 proposals");
        VecN k{};
        for (int i = 0; i < n; ++i)
            k[static_cast<std::size_t>(i)] = std::pow(10.0, rng.uniform(-3.0, 3.0));
        std::sort(k.begin(), k.begin() + n, std::greater<double>());
        if (rng.coin()) k[static_cast<std::size_t>(n - 1)] = -k[static_cast<std::size_t>(n - 1)];
        if (phase_F(k, n) >= sigma) out.push_back(k);
    }
    return out;
}

double G_of_matrix(const SymMatrix& m, const OperatorParams& params) {
    const EigenPair ep = sym_eigen(m);
    return concave_G(ep.values, params);
}

double hessian_G_sampled(const VecN& kappa, const OperatorParams& params, const SymMatrix& direction) {
    const int n = params.n;
    const double margin0 = phase_F(kappa, n) - params.sigma;
    if (margin0 <= 1e-6) throw ConeBoundary("hessian_G_sampled needs margin > 1e-6");

    std::array<double, 4> d{};
    for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = kappa[static_cast<std::size_t>(i)];
    const SymMatrix base = SymMatrix::diag(n, d);

    SymMatrix up = base, dn = base;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            up.add(i, j, kFdStep * direction(i, j));
            dn.add(i, j, -kFdStep * direction(i, j));
        }

    const EigenPair eu = sym_eigen(up);
    const EigenPair ed = sym_eigen(dn);
    if (phase_F(eu.values, n) < params.sigma || phase_F(ed.values, n) < params.sigma)
        throw LeftCone("direction step exits the admissible cone");

    const double gu = concave_G(eu.values, params);
    const double gd = concave_G(ed.values, params);
    const double g0 = concave_G(kappa, params);
    return (gu - 2.0 * g0 + gd) / (kFdStep * kFdStep);
}

SymMatrix random_unit_direction(int n, Rng& rng) {
    SymMatrix m(n);
    double amax = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = rng.uniform(-1.0, 1.0);
            m.set(i, j, v);
            amax = std::max(amax, std::fabs(v));
        }
    if (amax == 0.0) { m.set(0, 0, 1.0); amax = 1.0; }
    m *= 1.0 / amax;
    return m;
}

namespace {

struct CalibrationSample {
    std::vector<VecN> points;
    std::vector<SymMatrix> directions; // 10 per point
};

CalibrationSample build_sample(int n, double delta, std::size_t count, std::uint64_t seed) {
    CalibrationSample s;
    // points with a healthy margin so the eps-ball stays inside the cone
    const double sigma = (n - 2) * std::numbers::pi / 2 + delta;
    Rng rng(Rng(seed).fork(101).next_u64());
    const auto raw = sample_admissible(n, delta, count * 4 + 64, seed);
    for (const VecN& k : raw) {
        if (s.points.size() >= count) break;
        if (phase_F(k, n) - sigma > 2e-3) s.points.push_back(k);
    }
    if (s.points.size() < count)
        throw SamplerStalled("not enough interior points for calibration");
    s.directions.reserve(10 * s.points.size());
    for (std::size_t p = 0; p < s.points.size(); ++p)
        for (int d = 0; d < 10; ++d) s.directions.push_back(random_unit_direction(n, rng));
    return s;
}

double worst_quotient(const CalibrationSample& s, const OperatorParams& params) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < s.points.size(); ++p) {
        for (int d = 0; d < 10; ++d) {
            const SymMatrix& dir = s.directions[p * 10 + static_cast<std::size_t>(d)];
            try {
                worst = std::max(worst, hessian_G_sampled(s.points[p], params, dir));
            } catch (const LeftCone&) {
                // skip directions that step outside; margin filter makes this rare
            }
        }
    }
    return worst;
}

} // namespace

CalibrationResult calibrate_A(int n, double delta, std::size_t sampleCount, std::uint64_t seed) {
    if (sampleCount < 1000) throw Error("calibrate_A: need at least 1e3 sample points");
    const CalibrationSample s = build_sample(n, delta, sampleCount, seed);
    auto concave_at = [&](double A) {
        return worst_quotient(s, OperatorParams::make(n, delta, A)) <= kQuotientTol;
    };

    double lo = 1.0, hi = 1e4;
    double chosen;
    if (concave_at(lo)) {
        chosen = lo;
    } else if (!concave_at(hi)) {
        throw CalibrationFailed("no concave A found up to 1e4");
    } else {
        while (hi / lo > 1.1) {
            const double mid = std::sqrt(lo * hi);
            if (concave_at(mid)) hi = mid; else lo = mid;
        }
        chosen = hi;
    }

    CalibrationResult r;
    r.aParam = chosen;
    r.samplesTested = s.points.size();
    r.maxHessEigenvalue = worst_quotient(s, OperatorParams::make(n, delta, chosen));
    return r;
}

ConeProbes probe_extremes(int n, double delta, double aParam, std::size_t count, std::uint64_t seed) {
    OperatorParams::make(n, delta, aParam); // validates the parameter combination
    const auto sample = sample_admissible(n, delta, count, seed);
    ConeProbes probes;
    probes.samples = sample.size();
    probes.curvedWeightMin = std::numeric_limits<double>::infinity();
    probes.weightRatioMax = -std::numeric_limits<double>::infinity();
    probes.minLastWeight = std::numeric_limits<double>::infinity();
    for (const VecN& k : sample) {
        const double F = phase_F(k, n);
        const double e = aParam * std::exp(-aParam * F);
        double sumg = 0.0, sumgk = 0.0, sumgk2 = 0.0, norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double ki = k[static_cast<std::size_t>(i)];
            const double gi = e / (1.0 + ki * ki);
            sumg += gi;
            sumgk += gi * ki;
            sumgk2 += gi * ki * ki;
            norm2 += ki * ki;
        }
        probes.curvedWeightMin = std::min(probes.curvedWeightMin, sumgk);
        if (sumgk2 > 0.0)
            probes.weightRatioMax = std::max(probes.weightRatioMax, norm2 * sumg / sumgk2);
        probes.minLastWeight = std::min(probes.minLastWeight, e / (1.0 + k[static_cast<std::size_t>(n - 1)] * k[static_cast<std::size_t>(n - 1)]));
    }
    return probes;
}

} // namespace slcp::cone
