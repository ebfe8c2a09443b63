#include "pstab/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>

#include "pstab/experiments.hpp"

namespace pstab {

namespace {

constexpr const char* kReferenceTau = "0.1299992";

// Tolerance keys as they appear in config files and --tol-* flags.
std::map<std::string, double Tolerances::*> toleranceFields() {
    return {
        {"tau_residual", &Tolerances::tauResidual},
        {"affine", &Tolerances::affine},
        {"neutral", &Tolerances::neutral},
        {"strict", &Tolerances::strict},
        {"glue", &Tolerances::glue},
        {"branch", &Tolerances::branch},
        {"monotone", &Tolerances::monotone},
        {"closure", &Tolerances::closure},
        {"bang_equal", &Tolerances::bangEqual},
        {"unit_rho", &Tolerances::unitRho},
        {"growth", &Tolerances::growth},
        {"condition_lhs", &Tolerances::conditionLhs},
        {"condition_stability", &Tolerances::conditionStability},
        {"factorization", &Tolerances::factorization},
        {"inf_slack", &Tolerances::infSlack},
        {"bang_match", &Tolerances::bangMatch},
        {"perturbation", &Tolerances::perturbation},
    };
}

std::map<std::string, std::size_t RunConfig::*> countFields() {
    return {
        {"certificate_samples", &RunConfig::certificateSamples},
        {"trajectory_count", &RunConfig::trajectoryCount},
        {"hull_samples", &RunConfig::hullSamples},
        {"hurwitz_grid", &RunConfig::hurwitzGrid},
        {"gamma_grid", &RunConfig::gammaGrid},
        {"time_grid", &RunConfig::timeGrid},
        {"sweep_count", &RunConfig::sweepCount},
        {"samples_per_period", &RunConfig::samplesPerPeriod},
    };
}

double asNumber(const Json& j, const std::string& key) {
    if (!j.is_number()) throw Error(ErrorKind::input, "config key '" + key + "' must be a number");
    return j.get<double>();
}

std::string asString(const Json& j, const std::string& key) {
    if (!j.is_string()) throw Error(ErrorKind::input, "config key '" + key + "' must be a string");
    return j.get<std::string>();
}

std::size_t asCount(const Json& j, const std::string& key) {
    if (!j.is_number_unsigned()) throw Error(ErrorKind::input, "config key '" + key + "' must be a non-negative integer");
    return j.get<std::size_t>();
}

Check makeCheck(std::string name, bool passed, Json values) { return {std::move(name), passed, std::move(values)}; }

// ---- targets ---------------------------------------------------------------

void tauChecks(const RunConfig& c, std::vector<Check>& out) {
    const double tau = solveTau();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.7g", tau);
    out.push_back(makeCheck("tau-digits", std::string(buf) == kReferenceTau,
                            {{"tau", tau}, {"rounded", buf}, {"reference", kReferenceTau}}));
    const double residual = std::abs(tauEquationResidual(tau));
    out.push_back(makeCheck("tau-residual", residual <= c.tol.tauResidual,
                            {{"residual", residual}, {"tolerance", c.tol.tauResidual}}));
    if (c.pairPath) {
        const PlanarPair p = configuredPair(c);
        const PlanarPair fresh = buildTauPair(tau);
        const double gap = std::max(maxAbsDiff(p.a0, fresh.a0), maxAbsDiff(p.a1, fresh.a1));
        const bool sameTau = p.tau && *p.tau == tau;
        out.push_back(makeCheck("pair-file-matches", sameTau && gap == 0.0, {{"max_entry_gap", gap}, {"same_tau", sameTau}}));
    }
}

void liftChecks(const RunConfig& c, std::vector<Check>& out) {
    const PlanarPair p = configuredPair(c);
    const LiftedFamily f = configuredLift(c);
    const double affine = frobeniusNorm(f.b[0] + f.b[3] - f.b[1] - f.b[2]);
    out.push_back(makeCheck("affine-identity", affine <= c.tol.affine, {{"norm", affine}, {"tolerance", c.tol.affine}}));
    const bool indep = independenceCheck(f);
    out.push_back(makeCheck("lift-independence", indep, {{"independent", indep}}));
    const bool span = linearlyIndependentWithIdentity(p);
    out.push_back(makeCheck("pair-independent-of-identity", span, {{"independent", span}}));
    const double corner = f.b[0](0, 0);
    const double expected = (1.0 + f.alpha) * p.a0(0, 0);
    out.push_back(makeCheck("lift-corner-entry", std::abs(corner - expected) <= 1e-12,
                            {{"b0_00", corner}, {"expected", expected}}));
}

void hurwitzChecks(const RunConfig& c, std::vector<Check>& out) {
    const PlanarPair p = configuredPair(c);
    const HurwitzReport h = hurwitzHull(p, c.hurwitzGrid);
    out.push_back(makeCheck("pair-hull-hurwitz", h.hurwitz && h.gridHurwitz && h.worstRealPart < 0.0,
                            {{"max_trace", h.maxTrace},
                             {"min_det", h.minDet},
                             {"worst_real_part", h.worstRealPart},
                             {"worst_gamma", h.worstGamma}}));
    const HullScanReport scan = liftHullScan(configuredLift(c), c.hullSamples, c.seed);
    out.push_back(makeCheck("lift-hull-hurwitz", scan.maxRealPart < 0.0,
                            {{"samples", scan.samples}, {"max_real_part", scan.maxRealPart}, {"worst_weights", scan.worstWeights}}));
}

void certificateChecks(const RunConfig& c, std::vector<Check>& out) {
    const PlanarPair p = configuredPair(c);
    if (!p.tau) throw Error(ErrorKind::input, "the certificate needs a pair with tau");
    const LyapunovCertificate cert(*p.tau);
    const CertificateReport r = gradientConditionCheck(cert, p, c.certificateSamples, c.seed);
    Json worst = Json::array();
    for (const auto& v : r.violations) {
        worst.push_back({{"sample", v.sample}, {"x", v.x}, {"condition", v.condition}, {"value", v.value}});
    }
    out.push_back(makeCheck("gradient-signs",
                            r.violationCount == 0 && r.maxNeutral <= c.tol.neutral && r.maxStrict < -c.tol.strict,
                            {{"samples", r.samples},
                             {"max_neutral", r.maxNeutral},
                             {"max_strict", r.maxStrict},
                             {"violations", r.violationCount},
                             {"worst", worst}}));
    out.push_back(makeCheck("c1-gluing", r.maxGlueValueGap <= c.tol.glue && r.maxGlueGradientGap <= c.tol.glue,
                            {{"value_gap", r.maxGlueValueGap}, {"gradient_gap", r.maxGlueGradientGap}, {"tolerance", c.tol.glue}}));

    const Vector e1 = {1.0, 0.0};
    const double same = cert.branchValue(LyapunovBranch::sameSign, e1);
    const double opp = cert.branchValue(LyapunovBranch::oppositeSign, e1);
    const double gap = std::max(std::abs(same - *p.tau), std::abs(opp - *p.tau));
    out.push_back(makeCheck("branch-values-at-e1", gap <= c.tol.branch,
                            {{"same_sign", same}, {"opposite_sign", opp}, {"tau", *p.tau}}));

    // f along random hull-valued laws, checked at every sample.
    const SwitchedFamily fam = p.family();
    std::vector<double> worstRise(c.trajectoryCount, 0.0);
    forEachIndex(c.trajectoryCount, Exec::parallel, [&](std::size_t i) {
        auto rng = itemRng(c.seed ^ 0xF00DULL, i);
        const SwitchingLaw law = randomPeriodicLaw(2, rng);
        const double theta = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
        const Vector x0 = {std::cos(theta), std::sin(theta)};
        const Trajectory traj = propagate(fam, law, x0, 20.0, 0.01);
        double prev = cert.value(traj.samples.front().x);
        for (std::size_t k = 1; k < traj.samples.size(); ++k) {
            const double v = cert.value(traj.samples[k].x);
            if (prev > 0.0) worstRise[i] = std::max(worstRise[i], (v - prev) / prev);
            prev = v;
        }
    });
    double rise = 0.0;
    for (double r2 : worstRise) rise = std::max(rise, r2);
    out.push_back(makeCheck("f-non-increasing", rise <= c.tol.monotone,
                            {{"trajectories", c.trajectoryCount}, {"max_relative_rise", rise}, {"tolerance", c.tol.monotone}}));
}

void orbitChecks(const RunConfig& c, std::vector<Check>& out) {
    const PlanarPair p = configuredPair(c);
    const WorstCaseResult wc = tauPairOrbit(p, 0.0);
    out.push_back(makeCheck("orbit-closure", wc.closureGap <= c.tol.closure,
                            {{"closure_gap", wc.closureGap}, {"half_period_gap", wc.halfPeriodGap}}));
    const double bangGap = std::abs(wc.law.t0Bang - wc.law.t1Bang);
    out.push_back(makeCheck("equal-bang-intervals", bangGap <= c.tol.bangEqual,
                            {{"t0", wc.law.t0Bang}, {"t1", wc.law.t1Bang}, {"period", wc.law.period}}));
    const MonodromyReport mono = monodromy(p.family(), wc.law.basePeriodicLaw());
    const double rho = mono.spectrum.spectralRadius;
    out.push_back(makeCheck("unit-monodromy", std::abs(rho - 1.0) <= c.tol.unitRho,
                            {{"rho", rho}, {"det", mono.detR}, {"jacobi_det", mono.jacobiDet},
                             {"classification", toString(mono.classification)}}));
    const GrowthRateReport g = growthRate(p);
    out.push_back(makeCheck("zero-growth-rate", std::abs(g.lambda) <= c.tol.growth, {{"lambda", g.lambda}}));
}

void dichotomyChecks(const RunConfig& c, std::vector<Check>& out) {
    const PlanarPair p = configuredPair(c);
    const SwitchedFamily fam = p.family();
    const WorstCaseResult wc = tauPairOrbit(p, 0.0);

    // u0 started mid-bang is a cyclic shift of u0.
    WorstCaseLaw shifted = wc.law;
    shifted.phase = 0.37 * wc.law.period;
    const SwitchingLaw law = shifted.periodicLaw();
    const MonodromyReport mono = monodromy(fam, law);

    auto sortedRuns = [](const SwitchingLaw& l) {
        auto runs = bangIntervals(l);
        std::sort(runs.begin(), runs.end());
        return runs;
    };
    const auto runs = sortedRuns(law);
    const auto ref = sortedRuns(wc.law.basePeriodicLaw());
    bool match = runs.size() == ref.size();
    for (std::size_t i = 0; match && i < runs.size(); ++i) {
        match = std::abs(runs[i].first - ref[i].first) <= c.tol.bangMatch && runs[i].second == ref[i].second;
    }
    out.push_back(makeCheck("shifted-u0-periodic",
                            mono.classification == Classification::periodicOrbit && match,
                            {{"rho", mono.spectrum.spectralRadius},
                             {"classification", toString(mono.classification)},
                             {"bang_intervals_match", match}}));

    auto segs = law.segments();
    segs.front().duration *= 1.0 + c.tol.perturbation;
    const MonodromyReport perturbed = monodromy(fam, SwitchingLaw(segs, true));
    out.push_back(makeCheck("perturbed-u0-decays", perturbed.classification == Classification::decays,
                            {{"rho", perturbed.spectrum.spectralRadius},
                             {"relative_change", c.tol.perturbation},
                             {"classification", toString(perturbed.classification)}}));
}

void conditionChecks(const RunConfig& c, std::vector<Check>& out) {
    const PlanarPair p = buildSimplePair();
    const ConditionReport r = checkCondition(p, c.gammaGrid, {0.01, 10.0, c.timeGrid});
    const ConditionReport fine = checkCondition(p, 2 * c.gammaGrid - 1, {0.01, 10.0, c.timeGrid + c.timeGrid / 2});
    const double simple = std::sqrt(spectrum(expm(p.a0) * expm(p.a1)).spectralRadius);
    out.push_back(makeCheck("condition-lhs-unit", std::abs(r.lhs - 1.0) <= c.tol.conditionLhs,
                            {{"lhs", r.lhs}, {"gamma", r.lhsGamma}}));
    out.push_back(makeCheck("condition-rhs-bound", r.rhs >= simple && simple > 1.0,
                            {{"rhs", r.rhs}, {"rhs_grid", r.rhsGrid}, {"t0", r.rhsT0}, {"t1", r.rhsT1}, {"unit_times_rate", simple}}));
    const double drift = std::abs(fine.rhs - r.rhs);
    out.push_back(makeCheck("condition-rhs-stable", drift <= c.tol.conditionStability,
                            {{"rhs", r.rhs}, {"rhs_refined_grid", fine.rhs}, {"drift", drift}}));
    out.push_back(makeCheck("condition-strict", r.holds(), {{"lhs", r.lhs}, {"rhs", r.rhs}}));
}

void sweepChecks(const RunConfig& c, std::vector<Check>& out) {
    const SweepReport r = periodicDecaySweep(configuredLift(c), c.sweepCount, c.seed);
    Json offending = Json::array();
    for (const auto& [index, law] : r.offending) offending.push_back({{"index", index}, {"law", toJson(law)}});
    double worstRatio = 0.0;
    for (const SweepItem& it : r.items) worstRatio = std::max(worstRatio, it.decayRatio);
    out.push_back(makeCheck("periodic-laws-decay", r.decays == r.count,
                            {{"count", r.count}, {"decays", r.decays}, {"max_rho", r.maxRho},
                             {"worst_index", r.worstIndex}, {"offending", offending}}));
    out.push_back(makeCheck("decay-matches-rho", r.consistent == r.count,
                            {{"consistent", r.consistent}, {"max_decay_ratio", worstRatio}, {"periods", kSweepPeriods}}));
}

void counterexampleChecks(const RunConfig& c, std::vector<Check>& out) {
    const LiftedFamily f = configuredLift(c);
    const WorstCaseResult wc = tauPairOrbit(f.source, 0.0);
    const Vector w = phaseZeroStart(f.source, wc);
    const double T = wc.law.period;
    const double horizon = c.horizonPeriods * T;
    CounterexampleReport r;
    try {
        r = counterexampleRun(f, wc.law.t0Bang, T, w, horizon, T / static_cast<double>(c.samplesPerPeriod));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::factorization) throw;
        out.push_back(makeCheck("tensor-factorization", false, {{"error", e.what()}}));
        return;
    }
    const double floor = r.orbit.minNorm * r.orbit.minNorm - c.tol.infSlack;
    out.push_back(makeCheck("no-accumulation-at-origin", r.infNorm > 0.0 && r.infNorm >= floor,
                            {{"inf_norm", r.infNorm}, {"orbit_min_norm_squared", r.orbit.minNorm * r.orbit.minNorm},
                             {"horizon", r.horizon}, {"segments", r.segments}, {"min_event_gap", r.minEventGap}}));
    const double bound = 4.0 * r.orbit.boundC * r.orbit.boundC * r.y0Norm;
    out.push_back(makeCheck("uniform-bound", r.supNorm <= bound,
                            {{"sup_norm", r.supNorm}, {"bound", bound}, {"C", r.orbit.boundC}}));
    out.push_back(makeCheck("tensor-factorization", r.tensorMismatch <= c.tol.factorization,
                            {{"mismatch", r.tensorMismatch}, {"tolerance", c.tol.factorization}}));
}

using TargetFn = void (*)(const RunConfig&, std::vector<Check>&);

const std::vector<std::pair<std::string, TargetFn>>& targetTable() {
    static const std::vector<std::pair<std::string, TargetFn>> table = {
        {"tau", tauChecks},
        {"lift", liftChecks},
        {"hurwitz", hurwitzChecks},
        {"certificate", certificateChecks},
        {"orbit", orbitChecks},
        {"dichotomy", dichotomyChecks},
        {"condition", conditionChecks},
        {"periodic-sweep", sweepChecks},
        {"counterexample", counterexampleChecks},
    };
    return table;
}

}  // namespace

RunConfig configFromJson(const Json& j) {
    if (!j.is_object()) throw Error(ErrorKind::input, "config must be a JSON object");
    RunConfig c;
    const auto counts = countFields();
    const auto tols = toleranceFields();
    for (const auto& [key, value] : j.items()) {
        if (key == "command") {
            c.command = asString(value, key);
        } else if (key == "pair") {
            c.pairPath = asString(value, key);
        } else if (key == "lift") {
            c.liftPath = asString(value, key);
        } else if (key == "out") {
            c.out = asString(value, key);
        } else if (key == "seed") {
            if (!value.is_number_unsigned()) throw Error(ErrorKind::input, "config key 'seed' must be a non-negative integer");
            c.seed = value.get<std::uint64_t>();
        } else if (key == "alpha") {
            c.alpha = asNumber(value, key);
        } else if (key == "horizon_periods") {
            c.horizonPeriods = asNumber(value, key);
        } else if (counts.count(key)) {
            c.*counts.at(key) = asCount(value, key);
        } else if (key == "tolerances") {
            if (!value.is_object()) throw Error(ErrorKind::input, "config key 'tolerances' must be an object");
            for (const auto& [tk, tv] : value.items()) {
                const auto it = tols.find(tk);
                if (it == tols.end()) throw Error(ErrorKind::input, "unknown tolerance '" + tk + "'");
                c.tol.*(it->second) = asNumber(tv, tk);
            }
        } else {
            throw Error(ErrorKind::input, "unknown config key '" + key + "'");
        }
    }
    validate(c);
    return c;
}

void validate(const RunConfig& c) {
    for (const auto& [key, field] : toleranceFields()) {
        const double v = c.tol.*field;
        if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::input, "tolerance '" + key + "' must be > 0");
    }
    for (const auto& [key, field] : countFields()) {
        if (c.*field < 1) throw Error(ErrorKind::input, "'" + key + "' must be at least 1");
    }
    if (c.hurwitzGrid < 2 || c.gammaGrid < 2 || c.timeGrid < 2) throw Error(ErrorKind::input, "grids need at least 2 points");
    if (!(c.alpha > 0.0) || !std::isfinite(c.alpha)) throw Error(ErrorKind::input, "alpha must be > 0");
    if (!(c.horizonPeriods > 0.0) || !std::isfinite(c.horizonPeriods)) throw Error(ErrorKind::input, "horizon must be > 0");
}

Json toJson(const RunConfig& c) {
    Json j = {{"command", c.command}, {"seed", c.seed}, {"alpha", c.alpha}, {"horizon_periods", c.horizonPeriods}};
    if (c.pairPath) j["pair"] = *c.pairPath;
    if (c.liftPath) j["lift"] = *c.liftPath;
    if (c.out) j["out"] = *c.out;
    for (const auto& [key, field] : countFields()) j[key] = c.*field;
    Json t = Json::object();
    for (const auto& [key, field] : toleranceFields()) t[key] = c.tol.*field;
    j["tolerances"] = t;
    return j;
}

std::vector<std::string> toleranceKeys() {
    std::vector<std::string> keys;
    for (const auto& [key, field] : toleranceFields()) keys.push_back(key);
    return keys;
}

void setTolerance(Tolerances& t, const std::string& key, double value) {
    const auto fields = toleranceFields();
    const auto it = fields.find(key);
    if (it == fields.end()) throw Error(ErrorKind::input, "unknown tolerance '" + key + "'");
    t.*(it->second) = value;
}

bool VerifyReport::passed() const {
    for (const Check& ch : checks) {
        if (!ch.passed) return false;
    }
    return !checks.empty();
}

std::vector<std::string> VerifyReport::failing() const {
    std::vector<std::string> names;
    for (const Check& ch : checks) {
        if (!ch.passed) names.push_back(ch.name);
    }
    return names;
}

Json VerifyReport::toJson(const RunConfig& c) const {
    Json list = Json::array();
    for (const Check& ch : checks) list.push_back({{"name", ch.name}, {"passed", ch.passed}, {"values", ch.values}});
    Json provenance = {
        {"tau", "root in (0, 1) of tau = exp(pi (tau + 1) / (2 (tau - 1))), Boost TOMS 748 bracketing"},
        {"tau_reference", kReferenceTau},
        {"alpha", "sqrt(2) unless configured"},
        {"simple_pair", "A0 = [[0, 1], [-2, 0]], A1 = [[0, 2], [-1, 0]]"},
        {"random_laws",
         "segments uniform in 1..12, durations log-uniform in [0.05, 5], weights a uniform vertex with "
         "probability 1/2 else uniform on the simplex; law i seeded from SplitMix64(seed, i)"},
        {"counterexample_sampling", "horizon in law periods, samples_per_period per period"},
        {"decay_margin", kDecayMargin},
        {"unit_band", kUnitBand},
    };
    // The output path is not part of the result, so it stays out of the report.
    Json config = pstab::toJson(c);
    config.erase("out");
    return {{"target", target}, {"passed", passed()},      {"failing", failing()},
            {"checks", list},   {"config", config}, {"provenance", provenance}};
}

const std::vector<std::string>& verifyTargets() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [name, fn] : targetTable()) n.push_back(name);
        n.push_back("all");
        return n;
    }();
    return names;
}

VerifyReport runVerify(const std::string& target, const RunConfig& c) {
    validate(c);
    VerifyReport rep{target, {}};
    bool known = false;
    for (const auto& [name, fn] : targetTable()) {
        if (target == "all" || target == name) {
            fn(c, rep.checks);
            known = true;
        }
    }
    if (!known) throw Error(ErrorKind::input, "unknown verify target '" + target + "'");
    return rep;
}

PlanarPair configuredPair(const RunConfig& c) {
    if (c.pairPath) return planarPairFromJson(readJsonFile(*c.pairPath));
    if (c.liftPath) return liftedFamilyFromJson(readJsonFile(*c.liftPath)).source;
    return buildTauPair(solveTau());
}

LiftedFamily configuredLift(const RunConfig& c) {
    if (c.liftPath) return liftedFamilyFromJson(readJsonFile(*c.liftPath));
    return buildLift(configuredPair(c), c.alpha);
}

WorstCaseResult tauPairOrbit(const PlanarPair& p, double sampleStep) {
    const GrowthRateReport g = growthRate(p);
    const Vector w = {1.0, 0.0};
    return worstCaseLawAndPeriod(p, w, g.polarity.value_or(Polarity::sameSignA0), sampleStep);
}

Vector phaseZeroStart(const PlanarPair& p, const WorstCaseResult& wc) {
    const Vector& w = wc.orbit.samples.front().x;
    const double s = std::fmod(wc.law.period - wc.law.phase, wc.law.period);
    if (s == 0.0) return w;
    return stateAt(p.family(), wc.law.periodicLaw(), w, s);
}

}  // namespace pstab
