// pstab: build the switched systems, run verification targets, plot, simulate.
//
// Exit codes: 0 all checks pass, 1 a property check failed, 2 usage or I/O error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "pstab/experiments.hpp"
#include "pstab/json_io.hpp"
#include "pstab/svg.hpp"
#include "pstab/verify.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

void emit(const std::optional<std::string>& out, const std::string& text) {
    if (out) {
        pstab::writeTextFile(*out, text);
    } else {
        std::cout << text;
    }
}

pstab::Vector parseVector(const std::string& s) {
    pstab::Vector v;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw pstab::Error(pstab::ErrorKind::input, "bad vector component '" + item + "'");
        }
    }
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Switched linear systems: periodic stability versus arbitrary switching"};
    app.require_subcommand(1);

    // Shared run settings; flags override --config which overrides defaults.
    std::optional<std::string> configPath, out, pairPath, liftPath;
    std::optional<std::uint64_t> seed;
    std::optional<double> horizon, alphaOpt;
    std::optional<std::size_t> grid, timeGrid, count, samples;
    std::map<std::string, std::optional<double>> tolFlags;

    auto addRunFlags = [&](CLI::App* sub) {
        sub->add_option("--config", configPath, "RunConfig JSON");
        sub->add_option("--seed", seed, "Random seed");
        sub->add_option("--pair", pairPath, "PlanarPair JSON to use instead of building one");
        sub->add_option("--lift", liftPath, "LiftedFamily JSON to use instead of building one");
        sub->add_option("--alpha", alphaOpt, "Lift time scale (default sqrt(2))");
    };

    // build
    std::string buildKind;
    std::optional<double> buildTau;
    auto* build = app.add_subcommand("build", "Write a PlanarPair or LiftedFamily as JSON");
    build->add_option("kind", buildKind, "tau-pair | simple-pair | lift")
        ->required()
        ->check(CLI::IsMember({"tau-pair", "simple-pair", "lift"}));
    build->add_option("--tau", buildTau, "Use this tau instead of solving for it");
    build->add_option("--alpha", alphaOpt, "Lift time scale (default sqrt(2))");
    build->add_option("--out", out, "Output path (stdout if omitted)");

    // verify
    std::string target;
    auto* verify = app.add_subcommand("verify", "Run verification targets and write a JSON report");
    verify->add_option("target", target, "Verification target")->required()->check(CLI::IsMember(pstab::verifyTargets()));
    addRunFlags(verify);
    verify->add_option("--out", out, "Report path (stdout if omitted)");
    verify->add_option("--horizon", horizon, "Counterexample horizon in law periods");
    verify->add_option("--grid", grid, "Gamma grid size for the hull condition");
    verify->add_option("--time-grid", timeGrid, "Log-spaced points per time axis for the condition");
    verify->add_option("--count", count, "Number of random periodic laws in the sweep");
    verify->add_option("--samples", samples, "Random unit vectors for the certificate");
    for (const std::string& key : pstab::toleranceKeys()) {
        std::string flag = "--tol-" + key;
        for (char& ch : flag) {
            if (ch == '_') ch = '-';
        }
        verify->add_option(flag, tolFlags[key], "Tolerance '" + key + "'");
    }

    // plot
    std::string plotWhat;
    auto* plot = app.add_subcommand("plot", "Write an SVG figure");
    plot->add_option("what", plotWhat, "figure1 | norm-history")
        ->required()
        ->check(CLI::IsMember({"figure1", "norm-history"}));
    addRunFlags(plot);
    plot->add_option("--out", out, "SVG path (stdout if omitted)");
    plot->add_option("--horizon", horizon, "norm-history horizon in law periods");

    // simulate
    std::string lawPath, familyPath, x0Text;
    double simHorizon = 0.0, step = 0.0;
    auto* simulate = app.add_subcommand("simulate", "Propagate a law and write the trajectory as CSV");
    simulate->add_option("--law", lawPath, "Law JSON")->required();
    simulate->add_option("--family", familyPath, "PlanarPair or LiftedFamily JSON")->required();
    simulate->add_option("--x0", x0Text, "Initial state, comma separated (default e1)");
    simulate->add_option("--horizon", simHorizon, "Time horizon")->required();
    simulate->add_option("--step", step, "Sample step (0: segment boundaries only)");
    simulate->add_option("--out", out, "CSV path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        pstab::RunConfig cfg;
        if (configPath) cfg = pstab::configFromJson(pstab::readJsonFile(*configPath));
        if (seed) cfg.seed = *seed;
        if (pairPath) cfg.pairPath = pairPath;
        if (liftPath) cfg.liftPath = liftPath;
        if (alphaOpt) cfg.alpha = *alphaOpt;
        if (horizon) cfg.horizonPeriods = *horizon;
        if (grid) cfg.gammaGrid = *grid;
        if (timeGrid) cfg.timeGrid = *timeGrid;
        if (count) cfg.sweepCount = *count;
        if (samples) cfg.certificateSamples = *samples;
        for (const auto& [key, value] : tolFlags) {
            if (value) pstab::setTolerance(cfg.tol, key, *value);
        }
        if (out) cfg.out = out;
        pstab::validate(cfg);

        if (*build) {
            cfg.command = "build";
            const double tau = buildTau.value_or(pstab::solveTau());
            pstab::Json j;
            if (buildKind == "tau-pair") {
                j = pstab::toJson(pstab::buildTauPair(tau));
            } else if (buildKind == "simple-pair") {
                j = pstab::toJson(pstab::buildSimplePair());
            } else {
                j = pstab::toJson(pstab::buildLift(pstab::buildTauPair(tau), cfg.alpha));
            }
            emit(out, pstab::dumpJson(j));
            return kExitPass;
        }

        if (*verify) {
            const pstab::VerifyReport rep = pstab::runVerify(target, cfg);
            emit(out, pstab::dumpJson(rep.toJson(cfg)));
            for (const pstab::Check& ch : rep.checks) {
                std::cerr << (ch.passed ? "PASS " : "FAIL ") << ch.name << "\n";
            }
            if (!rep.passed()) {
                std::cerr << "failing:";
                for (const auto& name : rep.failing()) std::cerr << ' ' << name;
                std::cerr << "\n";
                return kExitViolation;
            }
            return kExitPass;
        }

        if (*plot) {
            const pstab::PlanarPair p = pstab::configuredPair(cfg);
            if (plotWhat == "figure1") {
                const pstab::WorstCaseResult wc = pstab::tauPairOrbit(p, 0.0);
                const pstab::WorstCaseResult dense = pstab::tauPairOrbit(p, 2.0 * wc.law.period / 2048.0);
                emit(out, pstab::figure1Svg(p, dense));
                return dense.closed ? kExitPass : kExitViolation;
            }
            const pstab::LiftedFamily f = pstab::configuredLift(cfg);
            const pstab::WorstCaseResult wc = pstab::tauPairOrbit(f.source, 0.0);
            const pstab::Vector w = pstab::phaseZeroStart(f.source, wc);
            const double T = wc.law.period;
            const pstab::CounterexampleReport r = pstab::counterexampleRun(
                f, wc.law.t0Bang, T, w, cfg.horizonPeriods * T, T / static_cast<double>(cfg.samplesPerPeriod));
            emit(out, pstab::normHistorySvg(r.normHistory, r.infNorm, r.supNorm));
            return r.infNorm > 0.0 ? kExitPass : kExitViolation;
        }

        if (*simulate) {
            const pstab::SwitchedFamily fam = pstab::familyFromJson(pstab::readJsonFile(familyPath));
            const pstab::SwitchingLaw law = pstab::lawFromJson(pstab::readJsonFile(lawPath));
            pstab::Vector x0(fam.dim(), 0.0);
            x0[0] = 1.0;
            if (!x0Text.empty()) x0 = parseVector(x0Text);
            if (x0.size() != fam.dim()) throw pstab::Error(pstab::ErrorKind::input, "x0 dimension does not match the family");
            if (law.vertexCount() != fam.size()) {
                throw pstab::Error(pstab::ErrorKind::input, "law weights do not match the family size");
            }
            emit(out, pstab::trajectoryCsv(pstab::propagate(fam, law, x0, simHorizon, step)));
            return kExitPass;
        }
    } catch (const pstab::Error& e) {
        std::cerr << "pstab: " << e.what() << "\n";
        switch (e.kind()) {
            case pstab::ErrorKind::io:
            case pstab::ErrorKind::input:
            case pstab::ErrorKind::size:
            case pstab::ErrorKind::shape:
                return kExitUsage;
            default:
                return kExitViolation;
        }
    } catch (const std::exception& e) {
        std::cerr << "pstab: " << e.what() << "\n";
        return kExitViolation;
    }
    return kExitUsage;
}
