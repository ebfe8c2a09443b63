#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pstab/json_io.hpp"
#include "pstab/lift.hpp"
#include "pstab/planar.hpp"

namespace pstab {

/// Pass thresholds applied by the verification targets.
struct Tolerances {
    double tauResidual = 1e-13;
    double affine = 1e-14;        // ||B0 + B3 - B1 - B2||_F
    double neutral = kNeutralTol;
    double strict = kStrictTol;
    double glue = kGlueTol;
    double branch = 1e-12;        // both branch formulas at (1, 0) against tau
    double monotone = 1e-8;       // per-step relative increase of f
    double closure = kClosureTol;
    double bangEqual = 1e-9;
    double unitRho = kUnitBand;
    double growth = 1e-6;
    double conditionLhs = 1e-9;
    double conditionStability = 1e-9;
    double factorization = 1e-8;
    double infSlack = 1e-6;
    double bangMatch = 1e-6;
    double perturbation = 0.01;   // relative change of one bang duration
};

/// Settings of a verification run; every field has a default.
struct RunConfig {
    std::string command = "verify";
    /// PlanarPair / LiftedFamily JSON to verify instead of freshly built ones.
    std::optional<std::string> pairPath;
    std::optional<std::string> liftPath;
    std::optional<std::string> out;
    std::uint64_t seed = 1;
    double alpha = 1.4142135623730951;
    std::size_t certificateSamples = 10000;
    std::size_t trajectoryCount = 100;
    std::size_t hullSamples = 10000;
    std::size_t hurwitzGrid = 1001;
    std::size_t gammaGrid = 1001;
    std::size_t timeGrid = 64;
    std::size_t sweepCount = 1000;
    /// Counterexample horizon in law periods, sampled `samplesPerPeriod` times per period.
    double horizonPeriods = 200.0;
    std::size_t samplesPerPeriod = 64;
    Tolerances tol;
};

/// Rejects unknown keys (ErrorKind::input) and non-positive tolerances.
RunConfig configFromJson(const Json& j);
Json toJson(const RunConfig& c);
/// Throws ErrorKind::input unless every tolerance and count is positive.
void validate(const RunConfig& c);

/// Tolerance keys in config files ("closure", "bang_equal", ...).
std::vector<std::string> toleranceKeys();
/// Throws ErrorKind::input for an unknown key.
void setTolerance(Tolerances& t, const std::string& key, double value);

struct Check {
    std::string name;
    bool passed = false;
    /// Measured values and thresholds.
    Json values;
};

struct VerifyReport {
    std::string target;
    std::vector<Check> checks;

    bool passed() const;
    std::vector<std::string> failing() const;
    /// Deterministic for a fixed config: no timings, keys sorted.
    Json toJson(const RunConfig& c) const;
};

/// Targets: tau, lift, hurwitz, certificate, orbit, dichotomy, condition,
/// periodic-sweep, counterexample, all. Unknown targets throw ErrorKind::input.
VerifyReport runVerify(const std::string& target, const RunConfig& c);
const std::vector<std::string>& verifyTargets();

/// The pair and lift a run operates on: from the configured files, else built.
PlanarPair configuredPair(const RunConfig& c);
LiftedFamily configuredLift(const RunConfig& c);

/// Worst-case orbit of the tau pair from (1, 0) under the growth-maximising polarity.
WorstCaseResult tauPairOrbit(const PlanarPair& p, double sampleStep);

/// Start on the orbit of `wc` at phase 0 of u0.
Vector phaseZeroStart(const PlanarPair& p, const WorstCaseResult& wc);

}  // namespace pstab
