#include "pstab/planar.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

namespace pstab {

namespace {

constexpr double kPi = std::numbers::pi;

double product(std::span<const double> x) { return x[0] * x[1]; }

void requirePlanar(std::span<const double> x) {
    if (x.size() != 2) throw Error(ErrorKind::input, "expected a 2-vector");
}

}  // namespace

double tauEquationResidual(double tau) {
    return tau - std::exp(kPi * (tau + 1.0) / (2.0 * (tau - 1.0)));
}

double solveTau() {
    const double lo = 1e-6;
    const double hi = 1.0 - 1e-6;
    if (!(tauEquationResidual(lo) * tauEquationResidual(hi) < 0.0)) {
        throw Error(ErrorKind::internal, "tau equation does not change sign on its bracket");
    }
    boost::uintmax_t maxIter = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        tauEquationResidual, lo, hi, boost::math::tools::eps_tolerance<double>(), maxIter);
    return std::abs(tauEquationResidual(a)) <= std::abs(tauEquationResidual(b)) ? a : b;
}

PlanarPair buildTauPair(double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorKind::input, "tau must lie in (0, 1)");
    const double st = std::sqrt(tau);
    const double s2 = std::sqrt(2.0);
    const double s2t = std::sqrt(2.0 * tau);
    PlanarPair p{
        SmallMatrix{{-1.0, st * (tau - 1.0) / s2}, {(1.0 - tau) / s2t, -tau}},
        SmallMatrix{{-tau, (tau - 1.0) / s2t}, {st * (1.0 - tau) / s2, -1.0}},
        tau,
    };
    return p;
}

PlanarPair buildSimplePair() {
    return {SmallMatrix{{0.0, 1.0}, {-2.0, 0.0}}, SmallMatrix{{0.0, 2.0}, {-1.0, 0.0}}, std::nullopt};
}

bool linearlyIndependentWithIdentity(const PlanarPair& p) {
    SmallMatrix stack(3, 4);
    const SmallMatrix id = SmallMatrix::identity(2);
    const SmallMatrix* rows[3] = {&id, &p.a0, &p.a1};
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t k = 0; k < 4; ++k) stack(r, k) = rows[r]->data()[k];
    const auto sv = singularValues(stack);
    return sv.back() > 1e-10 * sv.front();
}

// ---- Hurwitz hull -----------------------------------------------------------

HurwitzReport hurwitzHull(const PlanarPair& p, std::size_t gridSize) {
    if (gridSize < 2) throw Error(ErrorKind::input, "gridSize must be at least 2");
    HurwitzReport rep;

    // trace is affine in gamma; det(A0 + gamma D) = det A0 + gamma c1 + gamma^2 det D.
    const SmallMatrix d = p.a1 - p.a0;
    const double det0 = determinant(p.a0);
    const double detD = determinant(d);
    const double c1 = p.a0(0, 0) * d(1, 1) + p.a0(1, 1) * d(0, 0) - p.a0(0, 1) * d(1, 0) - p.a0(1, 0) * d(0, 1);
    auto detAt = [&](double g) { return det0 + g * c1 + g * g * detD; };
    rep.maxTrace = std::max(p.a0.trace(), p.a1.trace());
    rep.minDet = std::min(detAt(0.0), detAt(1.0));
    if (detD > 0.0) {
        const double g = -c1 / (2.0 * detD);
        if (g > 0.0 && g < 1.0) rep.minDet = std::min(rep.minDet, detAt(g));
    }
    rep.hurwitz = rep.maxTrace < 0.0 && rep.minDet > 0.0;

    std::vector<double> abscissa(gridSize);
    for (std::size_t i = 0; i < gridSize; ++i) {
        abscissa[i] = spectralAbscissa(p.hull(static_cast<double>(i) / static_cast<double>(gridSize - 1)));
    }
    const auto best = static_cast<std::size_t>(std::max_element(abscissa.begin(), abscissa.end()) - abscissa.begin());
    rep.gridHurwitz = abscissa[best] < 0.0;
    rep.worstRealPart = abscissa[best];
    rep.worstGamma = static_cast<double>(best) / static_cast<double>(gridSize - 1);

    const double h = 1.0 / static_cast<double>(gridSize - 1);
    const double lo = std::max(0.0, rep.worstGamma - h);
    const double hi = std::min(1.0, rep.worstGamma + h);
    const auto [g, negA] = boost::math::tools::brent_find_minima(
        [&](double gamma) { return -spectralAbscissa(p.hull(gamma)); }, lo, hi, 50);
    if (-negA > rep.worstRealPart) {
        rep.worstRealPart = -negA;
        rep.worstGamma = g;
    }
    return rep;
}

// ---- Lyapunov certificate ---------------------------------------------------

LyapunovCertificate::LyapunovCertificate(double tau) : tau_(tau), s_(std::sqrt(2.0 * tau)) {
    if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorKind::input, "tau must lie in (0, 1)");
}

double LyapunovCertificate::branchValue(LyapunovBranch b, std::span<const double> x) const {
    requirePlanar(x);
    const double x1 = x[0];
    const double x2 = x[1];
    if (x1 == 0.0 && x2 == 0.0) return 0.0;
    if (b == LyapunovBranch::sameSign) {
        const double q = x1 * x1 + s_ * x1 * x2 + tau_ * x2 * x2;
        const double k = 2.0 * (tau_ + 1.0) / (tau_ - 1.0);
        return q * std::exp(k * std::atan(x1 / (x1 + s_ * x2)));
    }
    const double q = tau_ * x1 * x1 - s_ * x1 * x2 + x2 * x2;
    const double k = 2.0 * (1.0 + tau_) / (1.0 - tau_);
    return q * std::exp(k * std::atan(x2 / (s_ * x1 - x2)));
}

std::array<double, 2> LyapunovCertificate::branchGradient(LyapunovBranch b, std::span<const double> x) const {
    requirePlanar(x);
    const double x1 = x[0];
    const double x2 = x[1];
    if (x1 == 0.0 && x2 == 0.0) return {0.0, 0.0};
    double q, k, num, den;
    std::array<double, 2> dq, dtheta;
    if (b == LyapunovBranch::sameSign) {
        q = x1 * x1 + s_ * x1 * x2 + tau_ * x2 * x2;
        k = 2.0 * (tau_ + 1.0) / (tau_ - 1.0);
        num = x1;
        den = x1 + s_ * x2;
        dq = {2.0 * x1 + s_ * x2, s_ * x1 + 2.0 * tau_ * x2};
        const double r2 = num * num + den * den;
        dtheta = {s_ * x2 / r2, -s_ * x1 / r2};
    } else {
        q = tau_ * x1 * x1 - s_ * x1 * x2 + x2 * x2;
        k = 2.0 * (1.0 + tau_) / (1.0 - tau_);
        num = x2;
        den = s_ * x1 - x2;
        dq = {2.0 * tau_ * x1 - s_ * x2, -s_ * x1 + 2.0 * x2};
        const double r2 = num * num + den * den;
        dtheta = {-s_ * x2 / r2, s_ * x1 / r2};
    }
    const double e = std::exp(k * std::atan(num / den));
    return {e * (dq[0] + k * q * dtheta[0]), e * (dq[1] + k * q * dtheta[1])};
}

double LyapunovCertificate::value(std::span<const double> x) const {
    requirePlanar(x);
    return branchValue(product(x) >= 0.0 ? LyapunovBranch::sameSign : LyapunovBranch::oppositeSign, x);
}

std::array<double, 2> LyapunovCertificate::gradient(std::span<const double> x) const {
    requirePlanar(x);
    return branchGradient(product(x) >= 0.0 ? LyapunovBranch::sameSign : LyapunovBranch::oppositeSign, x);
}

namespace {

struct SampleOutcome {
    double neutral = 0.0;  // |grad f . A x| where it must vanish
    double strict = -std::numeric_limits<double>::infinity();
    std::vector<CertificateViolation> violations;
};

}  // namespace

CertificateReport gradientConditionCheck(const LyapunovCertificate& c, const PlanarPair& p, std::size_t samples,
                                         std::uint64_t seed, Exec exec) {
    std::vector<SampleOutcome> out(samples);
    forEachIndex(samples, exec, [&](std::size_t i) {
        auto rng = itemRng(seed, i);
        const double theta = std::uniform_real_distribution<double>(0.0, 2.0 * kPi)(rng);
        const Vector x = {std::cos(theta), std::sin(theta)};
        const auto g = c.gradient(x);
        const Vector a0x = p.a0 * x;
        const Vector a1x = p.a1 * x;
        const double d0 = g[0] * a0x[0] + g[1] * a0x[1];
        const double d1 = g[0] * a1x[0] + g[1] * a1x[1];
        const double prod = product(x);
        SampleOutcome& o = out[i];
        auto neutral = [&](double d, const char* name) {
            o.neutral = std::max(o.neutral, std::abs(d));
            if (std::abs(d) > kNeutralTol) o.violations.push_back({i, {x[0], x[1]}, name, d});
        };
        auto strict = [&](double d, const char* name) {
            o.strict = std::max(o.strict, d);
            if (!(d < -kStrictTol)) o.violations.push_back({i, {x[0], x[1]}, name, d});
        };
        if (prod >= 0.0) neutral(d0, "gradf.A0x = 0 on x1x2 >= 0");
        if (prod < 0.0) strict(d0, "gradf.A0x < 0 on x1x2 < 0");
        if (prod <= 0.0) neutral(d1, "gradf.A1x = 0 on x1x2 <= 0");
        if (prod > 0.0) strict(d1, "gradf.A1x < 0 on x1x2 > 0");
    });

    CertificateReport rep;
    rep.samples = samples;
    rep.maxStrict = -std::numeric_limits<double>::infinity();
    for (const SampleOutcome& o : out) {
        rep.maxNeutral = std::max(rep.maxNeutral, o.neutral);
        rep.maxStrict = std::max(rep.maxStrict, o.strict);
        rep.violationCount += o.violations.size();
        for (const auto& v : o.violations) {
            if (rep.violations.size() < 16) rep.violations.push_back(v);
        }
    }

    // C1 gluing: both branch formulas at axis points, plus two-sided limits.
    const std::array<std::array<double, 2>, 4> axes = {{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
    for (const auto& e : axes) {
        for (double r : {0.25, 1.0, 3.0}) {
            const Vector x = {r * e[0], r * e[1]};
            const double va = c.branchValue(LyapunovBranch::sameSign, x);
            const double vb = c.branchValue(LyapunovBranch::oppositeSign, x);
            const auto ga = c.branchGradient(LyapunovBranch::sameSign, x);
            const auto gb = c.branchGradient(LyapunovBranch::oppositeSign, x);
            rep.maxGlueValueGap = std::max(rep.maxGlueValueGap, std::abs(va - vb));
            rep.maxGlueGradientGap = std::max(rep.maxGlueGradientGap, std::hypot(ga[0] - gb[0], ga[1] - gb[1]));

            const double eps = 1e-12 * r;
            const Vector n = {-e[1], e[0]};
            const Vector plus = {x[0] + eps * n[0], x[1] + eps * n[1]};
            const Vector minus = {x[0] - eps * n[0], x[1] - eps * n[1]};
            const auto gp = c.gradient(plus);
            const auto gm = c.gradient(minus);
            rep.maxGlueValueGap = std::max(rep.maxGlueValueGap, std::abs(c.value(plus) - c.value(minus)));
            rep.maxGlueGradientGap = std::max(rep.maxGlueGradientGap, std::hypot(gp[0] - gm[0], gp[1] - gm[1]));
        }
    }
    if (rep.maxGlueValueGap > kGlueTol || rep.maxGlueGradientGap > kGlueTol) {
        ++rep.violationCount;
        rep.violations.push_back({samples, {0, 0}, "C1 gluing across axes",
                                  std::max(rep.maxGlueValueGap, rep.maxGlueGradientGap)});
    }
    rep.passed = rep.violationCount == 0;
    return rep;
}

// ---- worst-case law ---------------------------------------------------------

double WorstCaseLaw::u0(double t) const {
    double r = std::fmod(t, period);
    if (r < 0.0) r += period;
    return r < t0Bang ? 0.0 : 1.0;
}

SwitchingLaw WorstCaseLaw::basePeriodicLaw() const {
    const std::pair<double, double> segs[] = {{t0Bang, 0.0}, {t1Bang, 1.0}};
    return SwitchingLaw::fromBang(segs, true);
}

SwitchingLaw WorstCaseLaw::periodicLaw() const {
    // u0(t + phase) over one period, starting mid-bang at `phase`.
    const double tiny = 1e-14 * period;
    std::vector<std::pair<double, double>> segs;
    if (phase < t0Bang) {
        if (t0Bang - phase > tiny) segs.push_back({t0Bang - phase, 0.0});
        segs.push_back({t1Bang, 1.0});
        if (phase > tiny) segs.push_back({phase, 0.0});
    } else {
        if (period - phase > tiny) segs.push_back({period - phase, 1.0});
        segs.push_back({t0Bang, 0.0});
        if (phase - t0Bang > tiny) segs.push_back({phase - t0Bang, 1.0});
    }
    return SwitchingLaw::fromBang(segs, true);
}

namespace {

struct Rule {
    const PlanarPair& p;
    Polarity polarity;

    // sign: +1 while x1 x2 > 0, -1 while x1 x2 < 0.
    bool usesA1(int sign) const { return (sign > 0) == (polarity == Polarity::sameSignA1); }
    const SmallMatrix& matrix(int sign) const { return usesA1(sign) ? p.a1 : p.a0; }
};

double rateOfProduct(const SmallMatrix& m, std::span<const double> x) {
    const Vector v = m * x;
    return v[0] * x[1] + x[0] * v[1];
}

// First time the flow exp(t m) x leaves the open quadrant of sign `sign`,
// located by scanning then bisecting the exact flow. Returns the end of the
// final bracket, which already lies in the next quadrant.
double nextCrossing(const SmallMatrix& m, std::span<const double> x, int sign, double maxTime) {
    auto signedProduct = [&](double t) { return sign * product(expm(t * m) * x); };
    const double h = std::min(0.05, 0.1 / std::max(operatorNorm(m), 1e-12));
    double lo = 0.0;
    double hi = h;
    while (signedProduct(hi) >= 0.0) {
        lo = hi;
        hi += h;
        if (hi > maxTime) throw Error(ErrorKind::nonRotation, "no axis crossing within the search horizon");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (signedProduct(mid) >= 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

}  // namespace

WorstCaseResult worstCaseLawAndPeriod(const PlanarPair& p, std::span<const double> w, Polarity polarity,
                                      double sampleStep, double maxSegmentTime) {
    requirePlanar(w);
    const double wNorm = norm2(w);
    if (wNorm == 0.0) throw Error(ErrorKind::input, "start vector must be nonzero");
    const Rule rule{p, polarity};

    int sign = 0;
    const bool onAxis = product(w) == 0.0;
    if (!onAxis) {
        sign = product(w) > 0.0 ? 1 : -1;
    } else {
        // Degenerate start: take the quadrant that the flow enters.
        const double dSame = rateOfProduct(rule.matrix(1), w);
        const double dOpp = rateOfProduct(rule.matrix(-1), w);
        if (dSame > 0.0 && dOpp >= 0.0) {
            sign = 1;
        } else if (dSame <= 0.0 && dOpp < 0.0) {
            sign = -1;
        } else {
            throw Error(ErrorKind::nonRotation, "flows disagree on the quadrant entered from the axis");
        }
    }

    WorstCaseResult res;
    std::vector<std::pair<double, int>> pieces;  // (duration, sign)
    Vector x(w.begin(), w.end());
    double t = 0.0;
    for (int k = 0; k < 5; ++k) {
        const SmallMatrix& m = rule.matrix(sign);
        const double dt = nextCrossing(m, x, sign, maxSegmentTime);
        x = expm(dt * m) * x;
        t += dt;
        pieces.emplace_back(dt, sign);
        res.switchTimes.push_back(t);
        res.switchPoints.push_back(x);
        sign = -sign;
    }

    // pieces[0] is partial unless the start was on an axis.
    const std::size_t firstFull = onAxis ? 0 : 1;
    double uZero = 0.0, uOne = 0.0;
    for (std::size_t i = firstFull; i < pieces.size(); ++i) {
        double& slot = rule.usesA1(pieces[i].second) ? uOne : uZero;
        if (slot == 0.0) slot = pieces[i].first;
    }
    WorstCaseLaw& law = res.law;
    law.t0Bang = uZero;
    law.t1Bang = uOne;
    law.period = uZero + uOne;
    law.polarity = polarity;
    const bool firstIsOne = rule.usesA1(pieces[0].second);
    if (onAxis) {
        law.phase = firstIsOne ? law.t0Bang : 0.0;
    } else {
        const double r = pieces[0].first;
        law.phase = firstIsOne ? law.period - r : law.t0Bang - r;
        if (law.phase < 0.0) law.phase += law.period;
        if (law.phase >= law.period) law.phase -= law.period;
    }

    const SwitchedFamily fam = p.family();
    const SwitchingLaw periodic = law.periodicLaw();
    res.orbit = propagate(fam, periodic, w, 2.0 * law.period, sampleStep);
    const Vector& end = res.orbit.finalState();
    res.closureGap = norm2(axpy(-1.0, w, end)) / wNorm;
    const Vector half = stateAt(fam, periodic, w, law.period);
    res.halfPeriodGap = norm2(axpy(1.0, w, half)) / wNorm;
    res.closed = res.closureGap <= kClosureTol;
    return res;
}

GrowthRateReport growthRate(const PlanarPair& p) {
    GrowthRateReport rep;
    const SmallMatrix comm = p.a0 * p.a1 - p.a1 * p.a0;
    if (frobeniusNorm(comm) <= 1e-12 * std::max(1.0, frobeniusNorm(p.a0) * frobeniusNorm(p.a1))) {
        rep.lambda = std::max(spectralAbscissa(p.a0), spectralAbscissa(p.a1));
        return rep;
    }
    const Vector start = {1.0, 0.0};
    bool found = false;
    std::optional<Error> lastError;
    for (Polarity pol : {Polarity::sameSignA0, Polarity::sameSignA1}) {
        try {
            const WorstCaseResult wc = worstCaseLawAndPeriod(p, start, pol);
            const MonodromyReport mono = monodromy(p.family(), wc.law.periodicLaw());
            const double rate = std::log(mono.spectrum.spectralRadius) / wc.law.period;
            if (!found || rate > rep.lambda) {
                rep.lambda = rate;
                rep.polarity = pol;
                rep.period = wc.law.period;
                rep.rho = mono.spectrum.spectralRadius;
                found = true;
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::nonRotation) throw;
            lastError = e;
        }
    }
    if (!found) throw *lastError;
    return rep;
}

// ---- growth-rate separation condition ---------------------------------------

double bangBangRate(const PlanarPair& p, double t0, double t1) {
    const SmallMatrix m = expm(t0 * p.a0) * expm(t1 * p.a1);
    return std::pow(spectrum(m).spectralRadius, 1.0 / (t0 + t1));
}

namespace {

// Nelder-Mead maximisation of f over R^2.
std::array<double, 2> maximise2d(const std::function<double(double, double)>& f, std::array<double, 2> start,
                                 double step) {
    using Pt = std::array<double, 2>;
    std::array<Pt, 3> s = {start, Pt{start[0] + step, start[1]}, Pt{start[0], start[1] + step}};
    std::array<double, 3> v{};
    for (int i = 0; i < 3; ++i) v[i] = -f(s[i][0], s[i][1]);
    for (int it = 0; it < 2000; ++it) {
        std::array<int, 3> idx = {0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
        const int best = idx[0], mid = idx[1], worst = idx[2];
        const double size = std::max(std::hypot(s[mid][0] - s[best][0], s[mid][1] - s[best][1]),
                                     std::hypot(s[worst][0] - s[best][0], s[worst][1] - s[best][1]));
        if (size < 1e-12) break;
        const Pt c = {(s[best][0] + s[mid][0]) / 2, (s[best][1] + s[mid][1]) / 2};
        auto along = [&](double k) { return Pt{c[0] + k * (s[worst][0] - c[0]), c[1] + k * (s[worst][1] - c[1])}; };
        const Pt r = along(-1.0);
        const double vr = -f(r[0], r[1]);
        if (vr < v[best]) {
            const Pt e = along(-2.0);
            const double ve = -f(e[0], e[1]);
            if (ve < vr) {
                s[worst] = e;
                v[worst] = ve;
            } else {
                s[worst] = r;
                v[worst] = vr;
            }
        } else if (vr < v[mid]) {
            s[worst] = r;
            v[worst] = vr;
        } else {
            const Pt k = along(vr < v[worst] ? -0.5 : 0.5);
            const double vk = -f(k[0], k[1]);
            if (vk < std::min(vr, v[worst])) {
                s[worst] = k;
                v[worst] = vk;
            } else {
                for (int i : {mid, worst}) {
                    s[i] = {(s[i][0] + s[best][0]) / 2, (s[i][1] + s[best][1]) / 2};
                    v[i] = -f(s[i][0], s[i][1]);
                }
            }
        }
    }
    const auto bestIt = std::min_element(v.begin(), v.end());
    return s[static_cast<std::size_t>(bestIt - v.begin())];
}

}  // namespace

ConditionReport checkCondition(const PlanarPair& p, std::size_t gammaGrid, TimeGrid tGrid, Exec exec) {
    if (gammaGrid < 2 || tGrid.count < 1) throw Error(ErrorKind::input, "condition grids must be nonempty");
    if (!(tGrid.tMin > 0.0 && tGrid.tMax >= tGrid.tMin)) throw Error(ErrorKind::input, "time range must be positive");
    ConditionReport rep;
    rep.gammaGrid = gammaGrid;
    rep.tGrid = tGrid;

    auto lhsAt = [&](double g) { return spectrum(expm(p.hull(g))).spectralRadius; };
    std::vector<double> lhs(gammaGrid);
    forEachIndex(gammaGrid, exec, [&](std::size_t i) {
        lhs[i] = lhsAt(static_cast<double>(i) / static_cast<double>(gammaGrid - 1));
    });
    const auto bl = static_cast<std::size_t>(std::max_element(lhs.begin(), lhs.end()) - lhs.begin());
    rep.lhs = lhs[bl];
    rep.lhsGamma = static_cast<double>(bl) / static_cast<double>(gammaGrid - 1);
    {
        const double h = 1.0 / static_cast<double>(gammaGrid - 1);
        const auto [g, neg] = boost::math::tools::brent_find_minima([&](double x) { return -lhsAt(x); },
                                                                    std::max(0.0, rep.lhsGamma - h),
                                                                    std::min(1.0, rep.lhsGamma + h), 50);
        if (-neg > rep.lhs) {
            rep.lhs = -neg;
            rep.lhsGamma = g;
        }
    }

    const std::size_t n = tGrid.count;
    auto tAt = [&](std::size_t i) {
        if (n == 1) return tGrid.tMin;
        return tGrid.tMin * std::pow(tGrid.tMax / tGrid.tMin, static_cast<double>(i) / static_cast<double>(n - 1));
    };
    std::vector<double> rhs(n * n);
    forEachIndex(n * n, exec, [&](std::size_t k) { rhs[k] = bangBangRate(p, tAt(k / n), tAt(k % n)); });
    const auto br = static_cast<std::size_t>(std::max_element(rhs.begin(), rhs.end()) - rhs.begin());
    rep.rhsGrid = rhs[br];
    rep.rhs = rhs[br];
    rep.rhsT0 = tAt(br / n);
    rep.rhsT1 = tAt(br % n);

    const double lo = std::log(1e-4), hi = std::log(1e3);
    auto logRate = [&](double a, double b) {
        if (a < lo || a > hi || b < lo || b > hi) return -std::numeric_limits<double>::infinity();
        return std::log(bangBangRate(p, std::exp(a), std::exp(b)));
    };
    const double step = n > 1 ? std::log(tGrid.tMax / tGrid.tMin) / static_cast<double>(n - 1) : 0.1;
    const auto opt = maximise2d(logRate, {std::log(rep.rhsT0), std::log(rep.rhsT1)}, std::max(step, 1e-3));
    const double refined = bangBangRate(p, std::exp(opt[0]), std::exp(opt[1]));
    if (refined > rep.rhs) {
        rep.rhs = refined;
        rep.rhsT0 = std::exp(opt[0]);
        rep.rhsT1 = std::exp(opt[1]);
    }
    return rep;
}

}  // namespace pstab
