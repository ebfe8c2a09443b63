// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <regex>
#include <sstream>
#include <string>

#include "pstab/experiments.hpp"
#include "pstab/svg.hpp"
#include "pstab/verify.hpp"

using namespace pstab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double seconds(const std::function<void()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const PlanarPair& tauPair() {
    static const PlanarPair p = buildTauPair(solveTau());
    return p;
}

const LiftedFamily& tauLift() {
    static const LiftedFamily f = buildLift(tauPair(), std::sqrt(2.0));
    return f;
}

SmallMatrix random2(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    return SmallMatrix{{u(rng), u(rng)}, {u(rng), u(rng)}};
}

Outcome tauReproduction() {
    double tau = 0.0;
    const double t = seconds([&] { tau = solveTau(); });
    const std::string rounded = fmt("%.7g", tau);
    const double residual = std::abs(tauEquationResidual(tau));
    return {rounded == "0.1299992" && residual <= 1e-13 && t < 0.1,
            fmt("tau=%.17g rounded=%s residual=%.2e time=%.2es", tau, rounded.c_str(), residual, t)};
}

Outcome explicitMatrices() {
    const double t = *tauPair().tau, r2 = std::sqrt(2.0), rt = std::sqrt(t), r2t = std::sqrt(2 * t);
    const SmallMatrix a0{{-1, rt * (t - 1) / r2}, {(1 - t) / r2t, -t}};
    const SmallMatrix a1{{-t, (t - 1) / r2t}, {rt * (1 - t) / r2, -1}};
    const double p = rt * (t - 1), q = rt * (t - 1) / r2, a = (1 - t) / rt, b = (1 - t) / r2t;
    const double c = (t - 1) / r2t, d = rt * (1 - t) / r2, e = (t - 1) / rt, f = rt * (1 - t);
    const SmallMatrix shown[4] = {
        {{-1 - r2, p, q, 0}, {a, -1 - t * r2, 0, q}, {b, 0, -t - r2, p}, {0, b, a, -t - t * r2}},
        {{-t - r2, p, c, 0}, {a, -t - t * r2, 0, c}, {d, 0, -1 - r2, p}, {0, d, a, -1 - t * r2}},
        {{-1 - t * r2, e, q, 0}, {f, -1 - r2, 0, q}, {b, 0, -t - t * r2, e}, {0, b, f, -t - r2}},
        {{-t - t * r2, e, c, 0}, {f, -t - r2, 0, c}, {d, 0, -1 - t * r2, e}, {0, d, f, -1 - r2}},
    };
    double worst = std::max(maxAbsDiff(tauPair().a0, a0), maxAbsDiff(tauPair().a1, a1));
    for (int k = 0; k < 4; ++k) worst = std::max(worst, maxAbsDiff(tauLift().b[k], shown[k]));
    return {worst <= 1e-12, fmt("max entry deviation=%.2e over A0, A1, B0..B3", worst)};
}

Outcome affineIdentity() {
    const auto& b = tauLift().b;
    const double n = frobeniusNorm(b[0] + b[3] - b[1] - b[2]);
    return {n <= 1e-14, fmt("||B0+B3-B1-B2||_F=%.2e", n)};
}

Outcome kroneckerAlgebra() {
    std::mt19937_64 rng(2024);
    const SmallMatrix id = SmallMatrix::identity(2);
    std::uniform_real_distribution<double> u(-1, 1);
    double mixed = 0, split = 0, normRel = 0, vecRel = 0;
    const int n = 500;
    for (int k = 0; k < n; ++k) {
        const SmallMatrix a = random2(rng), b = random2(rng), c = random2(rng), d = random2(rng);
        mixed = std::max(mixed, frobeniusNorm(kron(a, b) * kron(c, d) - kron(a * c, b * d)));
        split = std::max(split, frobeniusNorm(expm(kron(a, id) + kron(id, b)) - kron(expm(a), expm(b))));
        const double prod = operatorNorm(a) * operatorNorm(b);
        normRel = std::max(normRel, std::abs(operatorNorm(kron(a, b)) - prod) / prod);
        const Vector x = {u(rng), u(rng)}, y = {u(rng), u(rng)};
        const double vp = norm2(x) * norm2(y);
        vecRel = std::max(vecRel, std::abs(norm2(kron(x, y)) - vp) / vp);
    }
    return {mixed <= 1e-12 && split <= 1e-9 && normRel <= 1e-10 && vecRel <= 1e-10,
            fmt("%d cases: mixed=%.2e split=%.2e norm=%.2e vec=%.2e", n, mixed, split, normRel, vecRel)};
}

Outcome hurwitzHullCriterion() {
    const HurwitzReport h = hurwitzHull(tauPair());
    const HullScanReport s = liftHullScan(tauLift(), 10000, 1);
    return {h.hurwitz && h.worstRealPart < 0 && s.maxRealPart < 0,
            fmt("2D maxTrace=%.6f minDet=%.6f worstRe=%.6f; 4D %zu samples maxRe=%.6f", h.maxTrace, h.minDet,
                h.worstRealPart, s.samples, s.maxRealPart)};
}

Outcome lyapunovCertificate() {
    const double tau = *tauPair().tau;
    const LyapunovCertificate c(tau);
    const CertificateReport r = gradientConditionCheck(c, tauPair(), 10000, 1);
    const Vector e1 = {1, 0};
    const double branch = std::max(std::abs(c.branchValue(LyapunovBranch::sameSign, e1) - tau),
                                   std::abs(c.branchValue(LyapunovBranch::oppositeSign, e1) - tau));
    double rise = 0.0;
    const SwitchedFamily fam = tauPair().family();
    for (std::uint64_t i = 0; i < 100; ++i) {
        auto rng = itemRng(31, i);
        const SwitchingLaw law = randomPeriodicLaw(2, rng);
        const double th = std::uniform_real_distribution<double>(0, 6.283185307179586)(rng);
        const Trajectory traj = propagate(fam, law, Vector{std::cos(th), std::sin(th)}, 20.0, 0.01);
        for (std::size_t k = 1; k < traj.samples.size(); ++k) {
            const double prev = c.value(traj.samples[k - 1].x);
            rise = std::max(rise, (c.value(traj.samples[k].x) - prev) / prev);
        }
    }
    const double glue = std::max(r.maxGlueValueGap, r.maxGlueGradientGap);
    return {r.passed && glue <= 1e-8 && rise <= 1e-8 && branch <= 1e-12,
            fmt("10^4 samples violations=%zu neutral=%.2e strict=%.2e glue=%.2e rise=%.2e branch=%.2e",
                r.violationCount, r.maxNeutral, r.maxStrict, glue, rise, branch)};
}

Outcome worstCaseOrbit() {
    const WorstCaseResult wc = tauPairOrbit(tauPair(), 0.0);
    const double bangs = std::abs(wc.law.t0Bang - wc.law.t1Bang);
    const double rho = monodromy(tauPair().family(), wc.law.basePeriodicLaw()).spectrum.spectralRadius;
    const double lambda = growthRate(tauPair()).lambda;
    return {wc.closureGap <= 1e-6 && bangs <= 1e-9 && std::abs(rho - 1) <= 1e-6 && std::abs(lambda) <= 1e-6,
            fmt("closure=%.2e |T0-T1|=%.2e T=%.12f rho=%.12f lambda=%.2e", wc.closureGap, bangs, wc.law.period, rho,
                lambda)};
}

Outcome conditionSimplePair() {
    const PlanarPair p = buildSimplePair();
    const ConditionReport r = checkCondition(p, 1001, {0.01, 10.0, 64});
    const ConditionReport fine = checkCondition(p, 2001, {0.01, 10.0, 96});
    const double unit = std::sqrt(spectrum(expm(p.a0) * expm(p.a1)).spectralRadius);
    const double drift = std::abs(fine.rhs - r.rhs);
    return {std::abs(r.lhs - 1) <= 1e-9 && r.rhs >= unit && unit > 1 && drift <= 1e-9 && r.lhs < r.rhs,
            fmt("lhs=%.15f rhs=%.15f at t0=%.9f t1=%.9f rho(e^A0 e^A1)^(1/2)=%.15f drift=%.2e", r.lhs, r.rhs,
                r.rhsT0, r.rhsT1, unit, drift)};
}

Outcome periodicDecay() {
    SweepReport r;
    const double t = seconds([&] { r = periodicDecaySweep(tauLift(), 1000, 1); });
    double ratio = 0.0;
    for (const SweepItem& it : r.items) ratio = std::max(ratio, it.decayRatio);
    return {r.passed() && t < 60.0,
            fmt("decays=%zu/%zu consistent=%zu maxRho=%.9f maxRatio=%.3f time=%.2fs", r.decays, r.count, r.consistent,
                r.maxRho, ratio, t)};
}

Outcome counterexample() {
    const WorstCaseResult wc = tauPairOrbit(tauPair(), 0.0);
    const Vector w = phaseZeroStart(tauPair(), wc);
    const double T = wc.law.period;
    const CounterexampleReport r = counterexampleRun(tauLift(), wc.law.t0Bang, T, w, 200 * T, T / 64);
    const double floor = r.orbit.minNorm * r.orbit.minNorm;
    const double bound = 4 * r.orbit.boundC * r.orbit.boundC * r.y0Norm;
    return {r.infNorm > 0 && r.infNorm >= floor - 1e-6 && r.supNorm <= bound && r.tensorMismatch <= 1e-8,
            fmt("inf=%.9f (>= %.9f) sup=%.9f (<= 4C^2=%.6f, C=%.6f) mismatch=%.2e segments=%zu", r.infNorm, floor,
                r.supNorm, bound, r.orbit.boundC, r.tensorMismatch, r.segments)};
}

Outcome dichotomy() {
    const WorstCaseResult wc = tauPairOrbit(tauPair(), 0.0);
    WorstCaseLaw shifted = wc.law;
    shifted.phase = 0.37 * shifted.period;
    const SwitchingLaw law = shifted.periodicLaw();
    const MonodromyReport m = monodromy(tauPair().family(), law);
    auto segs = law.segments();
    segs.front().duration *= 1.01;
    const MonodromyReport pert = monodromy(tauPair().family(), SwitchingLaw(segs, true));
    return {m.classification == Classification::periodicOrbit && pert.classification == Classification::decays,
            fmt("shifted u0: %s rho=%.12f; one bang +1%%: %s rho=%.9f", toString(m.classification),
                m.spectrum.spectralRadius, toString(pert.classification), pert.spectrum.spectralRadius)};
}

Outcome figure1() {
    const WorstCaseResult wc = tauPairOrbit(tauPair(), 0.0);
    const WorstCaseResult dense = tauPairOrbit(tauPair(), 2 * wc.law.period / 2048);
    const std::string svg = figure1Svg(tauPair(), dense);

    const std::string key = "<polyline id=\"orbit\" points=\"";
    const auto at = svg.find(key);
    if (at == std::string::npos) return {false, "no orbit polyline"};
    const auto begin = at + key.size();
    std::istringstream body(svg.substr(begin, svg.find('"', begin) - begin));
    std::vector<std::pair<double, double>> pts;
    for (std::string tok; body >> tok;) {
        const auto comma = tok.find(',');
        pts.emplace_back(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
    }
    double diameter = 0.0;
    for (const auto& a : pts)
        for (const auto& b : pts) diameter = std::max(diameter, std::hypot(a.first - b.first, a.second - b.second));
    const double gap = std::hypot(pts.front().first - pts.back().first, pts.front().second - pts.back().second);

    double offAxis = 0.0;
    std::size_t markers = 0;
    const std::regex marker("<circle class=\"switch\" cx=\"([^\"]+)\" cy=\"([^\"]+)\"");
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), marker); it != std::sregex_iterator(); ++it) {
        const double x = std::stod((*it)[1].str()), y = std::stod((*it)[2].str());
        offAxis = std::max(offAxis, std::min(std::abs(x), std::abs(y)));
        ++markers;
    }
    return {!pts.empty() && gap <= 1e-3 * diameter && markers > 0 && offAxis <= 1e-9 * diameter,
            fmt("%zu points gap/diameter=%.2e markers=%zu max off-axis=%.2e", pts.size(), gap / diameter, markers,
                offAxis)};
}

}  // namespace

int main() {
    const std::pair<const char*, Outcome (*)()> criteria[] = {
        {"tau reproduction", tauReproduction},
        {"explicit matrices", explicitMatrices},
        {"affine identity", affineIdentity},
        {"Kronecker algebra properties", kroneckerAlgebra},
        {"Hurwitz hull", hurwitzHullCriterion},
        {"Lyapunov certificate", lyapunovCertificate},
        {"worst-case orbit", worstCaseOrbit},
        {"growth-rate condition on the simple pair", conditionSimplePair},
        {"periodic decay sweep", periodicDecay},
        {"quasi-periodic counterexample", counterexample},
        {"dichotomy", dichotomy},
        {"figure reproduction", figure1},
    };
    int failures = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d/%d criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}
