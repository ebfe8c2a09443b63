#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "pstab/exec.hpp"
#include "pstab/lift.hpp"
#include "pstab/planar.hpp"
#include "pstab/simcore.hpp"

namespace pstab {

/// Four-vertex law driven by u0(t) and u0(alpha t): vertex index u0(t) + 2 u0(alpha t).
/// Event times are both switching grids merged, deduplicated within 1e-12 and cut at the horizon.
SwitchingLaw quasiPeriodicLaw(double t0Bang, double period, double alpha, double horizon);

inline constexpr double kEventDedupTol = 1e-12;

/// Shortest segment of a law (nearest-event statistic for merged grids).
double minSegmentDuration(const SwitchingLaw& law);

/// Extent of the planar periodic orbit from w, refined between samples.
struct OrbitExtent {
    double minNorm = 0.0;
    double maxNorm = 0.0;
    /// max / min; bounds ||x(t)|| / ||x(0)|| for every hull-valued law.
    double boundC = 0.0;
};

OrbitExtent orbitExtent(const PlanarPair& p, const WorstCaseLaw& law, std::span<const double> w,
                        std::size_t samplesPerPeriod = 4096);

struct CounterexampleReport {
    double infNorm = 0.0;
    double supNorm = 0.0;
    double horizon = 0.0;
    double y0Norm = 0.0;
    /// max over samples of ||y(t) - x(t) (x) x(alpha t)||.
    double tensorMismatch = 0.0;
    double minEventGap = 0.0;
    std::size_t segments = 0;
    OrbitExtent orbit;
    /// (t, ||y(t)||) per sample.
    std::vector<std::pair<double, double>> normHistory;
};

inline constexpr double kFactorizationTol = 1e-5;

/// Propagates the lift under the quasi-periodic law from y(0) = w (x) w and compares
/// with the two planar factors run independently (the second on the clock alpha t).
/// w must sit at phase 0 of u0. Throws ErrorKind::factorization if the mismatch exceeds 1e-5.
CounterexampleReport counterexampleRun(const LiftedFamily& lifted, double t0Bang, double period,
                                       std::span<const double> w, double horizon, double sampleStep);

/// Splits a hull-valued four-vertex law into the factor laws (v0, v1) via hullDecompose.
std::pair<SwitchingLaw, SwitchingLaw> factorLaws(const LiftedFamily& lifted, const SwitchingLaw& law);

/// max over segment boundaries and samples of ||y(t) - x0(t) (x) x1(t)|| where x1 runs
/// alpha-scaled generators; y(0) = w0 (x) w1.
double tensorFactorizationGap(const LiftedFamily& lifted, const SwitchingLaw& law, std::span<const double> w0,
                              std::span<const double> w1, double horizon, double sampleStep);

struct RandomLawOptions {
    std::size_t minSegments = 1;
    std::size_t maxSegments = 12;
    double minDuration = 0.05;
    double maxDuration = 5.0;
    /// Probability that a segment selects a single vertex rather than random convex weights.
    double vertexProbability = 0.5;
};

/// Random periodic law: segment count uniform, durations log-uniform, weights either a
/// uniformly chosen vertex or a uniform point of the simplex.
SwitchingLaw randomPeriodicLaw(std::size_t vertexCount, std::mt19937_64& rng, const RandomLawOptions& opt = {});

struct SweepItem {
    std::size_t index = 0;
    double rho = 0.0;
    Classification classification = Classification::inconclusive;
    /// max_n ||x(n p)|| / (rho^n ||x(0)|| cond) over n <= 50; <= 2 is consistent.
    double decayRatio = 0.0;
    double eigenCondition = 0.0;
    bool consistent = false;
};

struct SweepReport {
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::size_t decays = 0;
    std::size_t consistent = 0;
    double maxRho = 0.0;
    std::size_t worstIndex = 0;
    std::vector<SweepItem> items;
    /// Laws whose monodromy radius reached 1 - 1e-9.
    std::vector<std::pair<std::size_t, SwitchingLaw>> offending;
    bool passed() const { return decays == count && consistent == count; }
};

inline constexpr int kSweepPeriods = 50;

/// Monodromy of `count` random periodic laws on the lift; law i uses the generator
/// seeded from (seed, i), so results do not depend on scheduling.
SweepReport periodicDecaySweep(const LiftedFamily& lifted, std::size_t count, std::uint64_t seed,
                               Exec exec = Exec::parallel, const RandomLawOptions& opt = {});

/// Law i of periodicDecaySweep(..., seed).
SwitchingLaw sweepLaw(std::size_t vertexCount, std::uint64_t seed, std::size_t index,
                      const RandomLawOptions& opt = {});

/// Bang intervals of a periodic two-vertex law: runs of equal weights merged
/// cyclically, as (duration, u) pairs.
std::vector<std::pair<double, double>> bangIntervals(const SwitchingLaw& law);

}  // namespace pstab
