#include "pstab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <boost/math/tools/minima.hpp>

namespace pstab {

namespace {

double bangValue(double t, double t0Bang, double period) {
    double r = std::fmod(t, period);
    if (r < 0.0) r += period;
    return r < t0Bang ? 0.0 : 1.0;
}

// Evaluates the solution of a periodic law at non-decreasing query times by
// walking whole segments forward; each segment propagator is computed once.
class ForwardFlow {
public:
    ForwardFlow(SwitchedFamily family, SwitchingLaw law, std::span<const double> x0)
        : family_(std::move(family)), law_(std::move(law)), x_(x0.begin(), x0.end()),
          full_(law_.segments().size()), gen_(law_.segments().size()) {}

    Vector at(double t) {
        if (t < segStart_) throw Error(ErrorKind::internal, "ForwardFlow queried backwards");
        const auto& segs = law_.segments();
        for (;;) {
            const double segEnd = cycleBase_ + prefixEnd(seg_);
            if (t < segEnd) break;
            x_ = fullPropagator(seg_) * x_;
            segStart_ = segEnd;
            if (++seg_ == segs.size()) {
                seg_ = 0;
                ++cycles_;
                cycleBase_ = static_cast<double>(cycles_) * law_.totalDuration();
                segStart_ = cycleBase_;
            }
        }
        const double offset = t - segStart_;
        if (offset == 0.0) return x_;
        return expm(offset * generator(seg_)) * x_;
    }

private:
    double prefixEnd(std::size_t j) {
        if (prefix_.empty()) {
            prefix_.resize(law_.segments().size());
            double s = 0.0;
            for (std::size_t k = 0; k < prefix_.size(); ++k) prefix_[k] = (s += law_.segments()[k].duration);
        }
        return prefix_[j];
    }
    const SmallMatrix& generator(std::size_t j) {
        if (!gen_[j]) gen_[j] = family_.combine(law_.segments()[j].weights);
        return *gen_[j];
    }
    const SmallMatrix& fullPropagator(std::size_t j) {
        if (!full_[j]) full_[j] = expm(law_.segments()[j].duration * generator(j));
        return *full_[j];
    }

    SwitchedFamily family_;
    SwitchingLaw law_;
    Vector x_;
    std::vector<std::optional<SmallMatrix>> full_;
    std::vector<std::optional<SmallMatrix>> gen_;
    std::vector<double> prefix_;
    std::size_t seg_ = 0;
    std::size_t cycles_ = 0;
    double cycleBase_ = 0.0;
    double segStart_ = 0.0;
};

}  // namespace

SwitchingLaw quasiPeriodicLaw(double t0Bang, double period, double alpha, double horizon) {
    if (!(t0Bang > 0.0 && t0Bang < period)) throw Error(ErrorKind::input, "need 0 < T0 < T");
    if (!(alpha > 0.0) || !(horizon > 0.0)) throw Error(ErrorKind::input, "alpha and horizon must be positive");

    std::vector<double> events = {0.0, horizon};
    for (double scale : {1.0, 1.0 / alpha}) {
        // Switches of u0(t / scale) happen at scale * (k T) and scale * (k T + T0).
        for (std::size_t k = 0;; ++k) {
            const double base = static_cast<double>(k) * period;
            const double a = scale * base;
            const double b = scale * (base + t0Bang);
            if (a >= horizon) break;
            events.push_back(a);
            if (b < horizon) events.push_back(b);
        }
    }
    std::sort(events.begin(), events.end());
    std::vector<double> merged;
    for (double t : events) {
        if (merged.empty() || t - merged.back() > kEventDedupTol) merged.push_back(t);
    }
    if (horizon - merged.back() <= kEventDedupTol && merged.size() > 1) merged.back() = horizon;

    std::vector<Segment> segs;
    segs.reserve(merged.size());
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        const double mid = 0.5 * (merged[i] + merged[i + 1]);
        const auto first = static_cast<std::size_t>(bangValue(mid, t0Bang, period));
        const auto second = static_cast<std::size_t>(bangValue(alpha * mid, t0Bang, period));
        Vector w(4, 0.0);
        w[first + 2 * second] = 1.0;
        segs.push_back({merged[i + 1] - merged[i], std::move(w)});
    }
    return SwitchingLaw(std::move(segs), false);
}

double minSegmentDuration(const SwitchingLaw& law) {
    double m = std::numeric_limits<double>::infinity();
    for (const Segment& s : law.segments()) m = std::min(m, s.duration);
    return m;
}

OrbitExtent orbitExtent(const PlanarPair& p, const WorstCaseLaw& law, std::span<const double> w,
                        std::size_t samplesPerPeriod) {
    const SwitchedFamily fam = p.family();
    const SwitchingLaw periodic = law.periodicLaw();
    const double statePeriod = 2.0 * law.period;
    const Trajectory traj = propagate(fam, periodic, w, statePeriod, statePeriod / static_cast<double>(samplesPerPeriod));

    std::size_t iMin = 0, iMax = 0;
    std::vector<double> norms;
    norms.reserve(traj.samples.size());
    for (const Sample& s : traj.samples) norms.push_back(norm2(s.x));
    for (std::size_t i = 0; i < norms.size(); ++i) {
        if (norms[i] < norms[iMin]) iMin = i;
        if (norms[i] > norms[iMax]) iMax = i;
    }
    auto refine = [&](std::size_t i, double sign) {
        const double lo = traj.samples[i > 0 ? i - 1 : 0].t;
        const double hi = traj.samples[std::min(i + 1, norms.size() - 1)].t;
        const auto [t, v] = boost::math::tools::brent_find_minima(
            [&](double s) { return sign * norm2(stateAt(fam, periodic, w, s)); }, lo, hi, 50);
        (void)t;
        return sign * v;
    };
    OrbitExtent e;
    e.minNorm = std::min(norms[iMin], refine(iMin, 1.0));
    e.maxNorm = std::max(norms[iMax], refine(iMax, -1.0));
    e.boundC = e.maxNorm / e.minNorm;
    return e;
}

CounterexampleReport counterexampleRun(const LiftedFamily& lifted, double t0Bang, double period,
                                       std::span<const double> w, double horizon, double sampleStep) {
    if (w.size() != 2 || norm2(w) == 0.0) throw Error(ErrorKind::input, "w must be a nonzero 2-vector");
    CounterexampleReport rep;
    rep.horizon = horizon;

    const SwitchingLaw law = quasiPeriodicLaw(t0Bang, period, lifted.alpha, horizon);
    rep.segments = law.segments().size();
    rep.minEventGap = minSegmentDuration(law);

    const Vector y0 = kron(w, w);
    rep.y0Norm = norm2(y0);
    const Trajectory traj = propagate(lifted.family(), law, y0, horizon, sampleStep);

    WorstCaseLaw base;
    base.t0Bang = t0Bang;
    base.t1Bang = period - t0Bang;
    base.period = period;
    const SwitchedFamily planar = lifted.source.family();
    ForwardFlow first(planar, base.basePeriodicLaw(), w);
    ForwardFlow second(planar, base.basePeriodicLaw(), w);

    rep.infNorm = std::numeric_limits<double>::infinity();
    rep.normHistory.reserve(traj.samples.size());
    for (const Sample& s : traj.samples) {
        const double n = norm2(s.x);
        rep.infNorm = std::min(rep.infNorm, n);
        rep.supNorm = std::max(rep.supNorm, n);
        rep.normHistory.emplace_back(s.t, n);
        const Vector factor = kron(first.at(s.t), second.at(lifted.alpha * s.t));
        rep.tensorMismatch = std::max(rep.tensorMismatch, norm2(axpy(-1.0, factor, s.x)));
    }
    rep.orbit = orbitExtent(lifted.source, base, w);
    if (rep.tensorMismatch > kFactorizationTol) {
        throw Error(ErrorKind::factorization, "lifted trajectory does not factor as x(t) (x) x(alpha t)");
    }
    return rep;
}

std::pair<SwitchingLaw, SwitchingLaw> factorLaws(const LiftedFamily& lifted, const SwitchingLaw& law) {
    const SwitchedFamily fam = lifted.family();
    std::vector<Segment> s0, s1;
    for (const Segment& seg : law.segments()) {
        const HullCoordinates h = hullDecompose(lifted, fam.combine(seg.weights));
        const double v0 = std::clamp(h.v0, 0.0, 1.0);
        const double v1 = std::clamp(h.v1, 0.0, 1.0);
        s0.push_back({seg.duration, {1.0 - v0, v0}});
        s1.push_back({seg.duration, {1.0 - v1, v1}});
    }
    return {SwitchingLaw(std::move(s0), law.periodic()), SwitchingLaw(std::move(s1), law.periodic())};
}

double tensorFactorizationGap(const LiftedFamily& lifted, const SwitchingLaw& law, std::span<const double> w0,
                              std::span<const double> w1, double horizon, double sampleStep) {
    const auto [law0, law1] = factorLaws(lifted, law);
    const SwitchedFamily first = lifted.source.family();
    const SwitchedFamily second{{lifted.alpha * lifted.source.a0, lifted.alpha * lifted.source.a1}};
    const Trajectory y = propagate(lifted.family(), law, kron(w0, w1), horizon, sampleStep);
    const Trajectory x0 = propagate(first, law0, w0, horizon, sampleStep);
    const Trajectory x1 = propagate(second, law1, w1, horizon, sampleStep);
    if (y.samples.size() != x0.samples.size() || y.samples.size() != x1.samples.size()) {
        throw Error(ErrorKind::internal, "factor trajectories sampled differently");
    }
    double gap = 0.0;
    for (std::size_t i = 0; i < y.samples.size(); ++i) {
        const Vector prod = kron(x0.samples[i].x, x1.samples[i].x);
        gap = std::max(gap, norm2(axpy(-1.0, prod, y.samples[i].x)));
    }
    return gap;
}

SwitchingLaw randomPeriodicLaw(std::size_t vertexCount, std::mt19937_64& rng, const RandomLawOptions& opt) {
    std::uniform_int_distribution<std::size_t> count(opt.minSegments, opt.maxSegments);
    std::uniform_real_distribution<double> logDuration(std::log(opt.minDuration), std::log(opt.maxDuration));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> vertex(0, vertexCount - 1);
    const std::size_t n = count(rng);
    std::vector<Segment> segs;
    segs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::exp(logDuration(rng));
        Vector w(vertexCount, 0.0);
        if (unit(rng) < opt.vertexProbability) {
            w[vertex(rng)] = 1.0;
        } else {
            w = randomSimplexPoint(vertexCount, rng);
        }
        segs.push_back({d, std::move(w)});
    }
    return SwitchingLaw(std::move(segs), true);
}

SwitchingLaw sweepLaw(std::size_t vertexCount, std::uint64_t seed, std::size_t index, const RandomLawOptions& opt) {
    auto rng = itemRng(seed, index);
    return randomPeriodicLaw(vertexCount, rng, opt);
}

SweepReport periodicDecaySweep(const LiftedFamily& lifted, std::size_t count, std::uint64_t seed, Exec exec,
                               const RandomLawOptions& opt) {
    if (count < 1) throw Error(ErrorKind::input, "sweep count must be at least 1");
    const SwitchedFamily fam = lifted.family();
    SweepReport rep;
    rep.count = count;
    rep.seed = seed;
    rep.items.resize(count);

    forEachIndex(count, exec, [&](std::size_t i) {
        const SwitchingLaw law = sweepLaw(fam.size(), seed, i, opt);
        const MonodromyReport mono = monodromy(fam, law);
        SweepItem& item = rep.items[i];
        item.index = i;
        item.rho = mono.spectrum.spectralRadius;
        item.classification = mono.classification;
        item.eigenCondition = eigenvectorCondition(mono.r, mono.spectrum);

        auto rng = itemRng(seed ^ 0x5A17ULL, i);
        std::normal_distribution<double> gauss;
        Vector x0(fam.dim());
        for (double& v : x0) v = gauss(rng);
        const double x0Norm = norm2(x0);

        // Period boundaries are every segments().size() boundary samples.
        const Trajectory traj = propagate(fam, law, x0, kSweepPeriods * law.totalDuration(), 0.0);
        const std::size_t stride = law.segments().size();
        const double logRho = std::log(item.rho);
        const double logBase = std::log(x0Norm) + std::log(item.eigenCondition);
        double worst = -std::numeric_limits<double>::infinity();
        for (int n = 1; n <= kSweepPeriods; ++n) {
            const double xn = norm2(traj.samples.at(static_cast<std::size_t>(n) * stride).x);
            if (xn == 0.0 || n * logRho < -575.0) break;  // underflow: nothing left to compare
            worst = std::max(worst, std::log(xn) - n * logRho - logBase);
        }
        item.decayRatio = std::exp(worst);
        item.consistent = std::isinf(item.eigenCondition) || item.decayRatio <= 2.0;
    });

    for (const SweepItem& item : rep.items) {
        if (item.classification == Classification::decays) ++rep.decays;
        if (item.consistent) ++rep.consistent;
        if (item.rho > rep.maxRho) {
            rep.maxRho = item.rho;
            rep.worstIndex = item.index;
        }
        if (item.rho >= 1.0 - kDecayMargin) {
            rep.offending.emplace_back(item.index, sweepLaw(fam.size(), seed, item.index, opt));
        }
    }
    return rep;
}

std::vector<std::pair<double, double>> bangIntervals(const SwitchingLaw& law) {
    if (law.vertexCount() != 2) throw Error(ErrorKind::input, "bang intervals need a two-vertex law");
    std::vector<std::pair<double, double>> runs;
    for (const Segment& s : law.segments()) {
        const double u = s.weights[1];
        if (!runs.empty() && std::abs(runs.back().second - u) <= 1e-12) {
            runs.back().first += s.duration;
        } else {
            runs.emplace_back(s.duration, u);
        }
    }
    if (law.periodic() && runs.size() > 1 && std::abs(runs.front().second - runs.back().second) <= 1e-12) {
        runs.front().first += runs.back().first;
        runs.pop_back();
    }
    return runs;
}

}  // namespace pstab
