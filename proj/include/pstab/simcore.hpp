#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pstab/smallmat.hpp"

namespace pstab {

/// Ordered generator matrices; a switching law picks convex weights over them.
struct SwitchedFamily {
    std::vector<SmallMatrix> vertices;

    std::size_t dim() const { return vertices.front().rows(); }
    std::size_t size() const { return vertices.size(); }
    /// Sum of weights[i] * vertices[i].
    SmallMatrix combine(std::span<const double> weights) const;
};

/// Throws ErrorKind::input if the family is empty or its vertices differ in shape.
void validate(const SwitchedFamily& family);

struct Segment {
    double duration = 0.0;
    Vector weights;
};

/// Piecewise-constant law: a finite list of segments, optionally repeated.
class SwitchingLaw {
public:
    /// Throws ErrorKind::input on empty lists, non-positive durations, negative
    /// weights, weights not summing to 1 (1e-12), or inconsistent weight lengths.
    SwitchingLaw(std::vector<Segment> segments, bool periodic);

    /// Two-vertex law from (duration, u) pairs: weights are (1 - u, u).
    static SwitchingLaw fromBang(std::span<const std::pair<double, double>> durationAndU, bool periodic);
    /// One segment selecting `vertex` out of `vertexCount`.
    static SwitchingLaw constant(std::size_t vertex, std::size_t vertexCount, double duration, bool periodic);

    const std::vector<Segment>& segments() const noexcept { return segments_; }
    bool periodic() const noexcept { return periodic_; }
    std::size_t vertexCount() const noexcept { return segments_.front().weights.size(); }
    /// Sum of the segment durations (the period when periodic).
    double totalDuration() const noexcept { return total_; }

private:
    std::vector<Segment> segments_;
    bool periodic_;
    double total_;
};

struct Sample {
    double t = 0.0;
    Vector x;
};

/// States on the sample grid plus every segment boundary.
struct Trajectory {
    std::vector<Sample> samples;
    /// Boundary times of the traversed segments, starting at 0.
    std::vector<double> segmentStarts;
    /// exp(duration * M) for each traversed segment (partial for the last one).
    std::vector<SmallMatrix> segmentPropagators;

    const Vector& finalState() const { return samples.back().x; }
};

/// Exact propagation: each segment advances by expm(duration * M). Samples are
/// placed at multiples of `sampleStep` (none if sampleStep <= 0) and at every
/// segment boundary. Periodic laws are unrolled; finite laws must cover the horizon.
Trajectory propagate(const SwitchedFamily& family, const SwitchingLaw& law, std::span<const double> x0,
                     double horizon, double sampleStep);

/// State at time t without recording samples.
Vector stateAt(const SwitchedFamily& family, const SwitchingLaw& law, std::span<const double> x0, double t);

/// Propagator over [0, t].
SmallMatrix propagator(const SwitchedFamily& family, const SwitchingLaw& law, double t);

/// exp( integral_0^t sum_i w_i(s) trace(vertex_i) ds ), segment-exact.
double jacobiDeterminant(const SwitchedFamily& family, const SwitchingLaw& law, double t);

enum class Classification { decays, periodicOrbit, inconclusive };
const char* toString(Classification c) noexcept;

inline constexpr double kDecayMargin = 1e-9;
inline constexpr double kUnitBand = 1e-6;

struct MonodromyReport {
    SmallMatrix r;
    Spectrum spectrum;
    double detR = 0.0;
    double jacobiDet = 0.0;
    /// ||R^50||; separates slow decay from a genuine unit multiplier.
    double normAfter50 = 0.0;
    Classification classification = Classification::inconclusive;
};

/// R over one period. decays iff rho < 1 - 1e-9; periodicOrbit iff |rho - 1| <= 1e-6
/// and R^2 has an eigenvalue within 1e-6 of 1; inconclusive otherwise.
MonodromyReport monodromy(const SwitchedFamily& family, const SwitchingLaw& law);

}  // namespace pstab
