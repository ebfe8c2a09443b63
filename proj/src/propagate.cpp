#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "pstab/simcore.hpp"

namespace pstab {

namespace {

void checkCompatible(const SwitchedFamily& family, const SwitchingLaw& law) {
    validate(family);
    if (law.vertexCount() != family.size()) {
        throw Error(ErrorKind::input, "law weights do not match the family size");
    }
}

struct SegmentCache {
    const SwitchedFamily& family;
    const SwitchingLaw& law;
    std::vector<std::optional<SmallMatrix>> generator;
    std::vector<std::optional<SmallMatrix>> full;

    SegmentCache(const SwitchedFamily& f, const SwitchingLaw& l)
        : family(f), law(l), generator(l.segments().size()), full(l.segments().size()) {}

    const SmallMatrix& m(std::size_t j) {
        if (!generator[j]) generator[j] = family.combine(law.segments()[j].weights);
        return *generator[j];
    }
    const SmallMatrix& propagator(std::size_t j) {
        if (!full[j]) full[j] = expm(law.segments()[j].duration * m(j));
        return *full[j];
    }
};

// Walks the (unrolled) law over [0, horizon]. For each traversed piece the
// callback receives (segment index, start, end, isFullSegment).
void walkSegments(const SwitchingLaw& law, double horizon,
                  const std::function<void(std::size_t, double, double, bool)>& visit) {
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw Error(ErrorKind::input, "horizon must be finite and >= 0");
    const auto& segs = law.segments();
    const double total = law.totalDuration();
    const double tol = 1e-12 * std::max(1.0, horizon);
    if (!law.periodic() && horizon > total + tol) {
        throw Error(ErrorKind::input, "horizon exceeds the duration of a finite switching law");
    }
    std::vector<double> prefix(segs.size() + 1, 0.0);
    for (std::size_t j = 0; j < segs.size(); ++j) prefix[j + 1] = prefix[j] + segs[j].duration;

    for (std::size_t cycle = 0;; ++cycle) {
        const double base = static_cast<double>(cycle) * total;
        for (std::size_t j = 0; j < segs.size(); ++j) {
            const double start = base + prefix[j];
            if (start >= horizon - tol) return;
            double end = base + prefix[j + 1];
            bool full = true;
            if (end > horizon + tol) {
                end = horizon;
                full = false;
            } else if (end >= horizon - tol) {
                end = horizon;
            }
            visit(j, start, end, full);
        }
        if (!law.periodic()) return;
    }
}

}  // namespace

Trajectory propagate(const SwitchedFamily& family, const SwitchingLaw& law, std::span<const double> x0,
                     double horizon, double sampleStep) {
    checkCompatible(family, law);
    if (x0.size() != family.dim()) throw Error(ErrorKind::input, "initial state dimension mismatch");
    if (!(horizon > 0.0)) throw Error(ErrorKind::input, "horizon must be positive");

    SegmentCache cache(family, law);
    Trajectory traj;
    traj.samples.push_back({0.0, Vector(x0.begin(), x0.end())});
    Vector x(x0.begin(), x0.end());
    const double gap = 1e-12 * std::max(1.0, horizon);

    walkSegments(law, horizon, [&](std::size_t j, double start, double end, bool full) {
        const SmallMatrix& m = cache.m(j);
        if (sampleStep > 0.0) {
            auto k = static_cast<long long>(std::floor(start / sampleStep)) + 1;
            for (double g = static_cast<double>(k) * sampleStep; g < end - gap;
                 g = static_cast<double>(++k) * sampleStep) {
                if (g <= start + gap) continue;
                traj.samples.push_back({g, expm((g - start) * m) * x});
            }
        }
        SmallMatrix p = full ? cache.propagator(j) : expm((end - start) * m);
        x = p * x;
        traj.segmentStarts.push_back(start);
        traj.segmentPropagators.push_back(std::move(p));
        traj.samples.push_back({end, x});
    });
    return traj;
}

SmallMatrix propagator(const SwitchedFamily& family, const SwitchingLaw& law, double t) {
    checkCompatible(family, law);
    SegmentCache cache(family, law);
    SmallMatrix r = SmallMatrix::identity(family.dim());
    walkSegments(law, t, [&](std::size_t j, double start, double end, bool full) {
        r = (full ? cache.propagator(j) : expm((end - start) * cache.m(j))) * r;
    });
    return r;
}

Vector stateAt(const SwitchedFamily& family, const SwitchingLaw& law, std::span<const double> x0, double t) {
    if (x0.size() != family.dim()) throw Error(ErrorKind::input, "initial state dimension mismatch");
    return propagator(family, law, t) * x0;
}

double jacobiDeterminant(const SwitchedFamily& family, const SwitchingLaw& law, double t) {
    checkCompatible(family, law);
    std::vector<double> traces;
    traces.reserve(family.size());
    for (const SmallMatrix& v : family.vertices) traces.push_back(v.trace());
    double integral = 0.0;
    walkSegments(law, t, [&](std::size_t j, double start, double end, bool) {
        const auto& w = law.segments()[j].weights;
        double tr = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) tr += w[i] * traces[i];
        integral += (end - start) * tr;
    });
    return std::exp(integral);
}

MonodromyReport monodromy(const SwitchedFamily& family, const SwitchingLaw& law) {
    if (!law.periodic()) throw Error(ErrorKind::input, "monodromy needs a periodic law");
    MonodromyReport rep;
    rep.r = propagator(family, law, law.totalDuration());
    rep.spectrum = spectrum(rep.r);
    rep.detR = determinant(rep.r);
    rep.jacobiDet = jacobiDeterminant(family, law, law.totalDuration());
    rep.normAfter50 = operatorNorm(power(rep.r, 50));

    const double rho = rep.spectrum.spectralRadius;
    if (rho < 1.0 - kDecayMargin) {
        rep.classification = Classification::decays;
    } else if (std::abs(rho - 1.0) <= kUnitBand) {
        const Spectrum sq = spectrum(rep.r * rep.r);
        const bool unit = std::any_of(sq.eigenvalues.begin(), sq.eigenvalues.end(),
                                      [](const Complex& z) { return std::abs(z - 1.0) <= kUnitBand; });
        rep.classification = unit ? Classification::periodicOrbit : Classification::inconclusive;
    } else {
        rep.classification = Classification::inconclusive;
    }
    return rep;
}

}  // namespace pstab
