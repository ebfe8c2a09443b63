#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pstab/lift.hpp"

using namespace pstab;

namespace {

constexpr double kTau = 0.12999924990802147;

const LiftedFamily& tauLift() {
    static const LiftedFamily f = buildLift(buildTauPair(solveTau()), std::sqrt(2.0));
    return f;
}

// The four displayed generators, transcribed entry by entry with alpha = sqrt(2).
std::vector<SmallMatrix> displayedLift() {
    const double t = kTau, r2 = std::sqrt(2.0), rt = std::sqrt(t), r2t = std::sqrt(2 * t);
    const double p = rt * (t - 1);        // sqrt(t)(t-1)
    const double q = rt * (t - 1) / r2;   // sqrt(t)(t-1)/sqrt2
    const double a = (1 - t) / rt;        // (1-t)/sqrt(t)
    const double b = (1 - t) / r2t;       // (1-t)/sqrt(2t)
    const double c = (t - 1) / r2t;       // (t-1)/sqrt(2t)
    const double d = rt * (1 - t) / r2;   // sqrt(t)(1-t)/sqrt2
    const double e = (t - 1) / rt;        // (t-1)/sqrt(t)
    const double f = rt * (1 - t);        // sqrt(t)(1-t)
    return {
        SmallMatrix{{-1 - r2, p, q, 0}, {a, -1 - t * r2, 0, q}, {b, 0, -t - r2, p}, {0, b, a, -t - t * r2}},
        SmallMatrix{{-t - r2, p, c, 0}, {a, -t - t * r2, 0, c}, {d, 0, -1 - r2, p}, {0, d, a, -1 - t * r2}},
        SmallMatrix{{-1 - t * r2, e, q, 0}, {f, -1 - r2, 0, q}, {b, 0, -t - t * r2, e}, {0, b, f, -t - r2}},
        SmallMatrix{{-t - t * r2, e, c, 0}, {f, -t - r2, 0, c}, {d, 0, -1 - t * r2, e}, {0, d, f, -1 - r2}},
    };
}

}  // namespace

TEST(Lift, ReproducesDisplayedMatrices) {
    const auto shown = displayedLift();
    for (std::size_t k = 0; k < 4; ++k) EXPECT_LE(maxAbsDiff(tauLift().b[k], shown[k]), 1e-12) << "B" << k;
    EXPECT_NEAR(tauLift().b[0](0, 0), -1 - std::sqrt(2.0), 1e-15);
}

TEST(Lift, AffineIdentity) {
    const auto& b = tauLift().b;
    EXPECT_LE(frobeniusNorm(b[0] + b[3] - b[1] - b[2]), 1e-14);
}

TEST(Lift, SpectraAreKroneckerSums) {
    const PlanarPair& p = tauLift().source;
    const double alpha = tauLift().alpha;
    const SmallMatrix* gens[2] = {&p.a0, &p.a1};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            std::vector<Complex> sums;
            for (Complex l : spectrum(*gens[i]).eigenvalues)
                for (Complex m : spectrum(*gens[j]).eigenvalues) sums.push_back(l + alpha * m);
            EXPECT_LE(multisetDistance(spectrum(tauLift().b[i + 2 * j]).eigenvalues, sums), 1e-8);
        }
    }
}

TEST(Lift, RejectsNonPositiveAlpha) {
    const PlanarPair p = buildTauPair(kTau);
    EXPECT_THROW((void)buildLift(p, 0.0), Error);
    EXPECT_THROW((void)buildLift(p, -1.0), Error);
    EXPECT_THROW((void)buildLift(p, std::nan("")), Error);
}

TEST(Lift, DifferencesIndependent) {
    EXPECT_TRUE(independenceCheck(tauLift()));
    LiftedFamily degenerate = tauLift();
    degenerate.b[2] = degenerate.b[0] + 2.0 * (degenerate.b[1] - degenerate.b[0]);
    EXPECT_FALSE(independenceCheck(degenerate));
}

TEST(HullDecompose, RecoversCoordinatesOfRandomWeights) {
    const SwitchedFamily fam = tauLift().family();
    std::mt19937_64 rng(21);
    for (int k = 0; k < 500; ++k) {
        const Vector beta = randomSimplexPoint(4, rng);
        const HullCoordinates h = hullDecompose(tauLift(), fam.combine(beta));
        const HullCoordinates oracle = hullCoordinatesFromWeights(beta);
        EXPECT_NEAR(h.v0, oracle.v0, 1e-10);
        EXPECT_NEAR(h.v1, oracle.v1, 1e-10);
        EXPECT_LE(h.residual, 1e-12);
    }
}

TEST(HullDecompose, VerticesMapToCorners) {
    const double corners[4][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    for (std::size_t k = 0; k < 4; ++k) {
        const HullCoordinates h = hullDecompose(tauLift(), tauLift().b[k]);
        EXPECT_NEAR(h.v0, corners[k][0], 1e-12);
        EXPECT_NEAR(h.v1, corners[k][1], 1e-12);
    }
}

TEST(HullDecompose, OutsideAffineSpan) {
    try {
        (void)hullDecompose(tauLift(), tauLift().b[0] + 1e-3 * SmallMatrix::identity(4));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::notInAffineSpan);
    }
}

TEST(HullDecompose, OutsideHull) {
    const auto& b = tauLift().b;
    try {
        (void)hullDecompose(tauLift(), b[0] + 1.5 * (b[1] - b[0]));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::notInHull);
    }
}

TEST(HullScan, AllHurwitz) {
    const HullScanReport r = liftHullScan(tauLift(), 2000, 5);
    EXPECT_EQ(r.samples, 2004u);
    EXPECT_LT(r.maxRealPart, 0.0);
    EXPECT_EQ(r.worstWeights.size(), 4u);
}

TEST(RandomSimplexPoint, OnSimplex) {
    std::mt19937_64 rng(22);
    for (int k = 0; k < 1000; ++k) {
        const Vector w = randomSimplexPoint(4, rng);
        double s = 0.0;
        for (double x : w) {
            EXPECT_GE(x, 0.0);
            s += x;
        }
        EXPECT_NEAR(s, 1.0, 1e-15);
    }
}
