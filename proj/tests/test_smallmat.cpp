#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "pstab/smallmat.hpp"

using namespace pstab;

namespace {

SmallMatrix randomMatrix(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    SmallMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = u(rng);
    return m;
}

Eigen::MatrixXd toEigen(const SmallMatrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

double maxDiff(const SmallMatrix& a, const Eigen::MatrixXd& b) { return (toEigen(a) - b).cwiseAbs().maxCoeff(); }

constexpr int kPropertyCases = 500;

}  // namespace

TEST(SmallMatrix, RejectsBadShapesAndEntries) {
    EXPECT_THROW(SmallMatrix(2, 2, {1.0, 2.0, 3.0}), Error);
    EXPECT_THROW(SmallMatrix(1, 1, {std::nan("")}), Error);
    EXPECT_THROW(SmallMatrix(17, 1), Error);
    EXPECT_THROW(SmallMatrix(0, 3), Error);
    try {
        (void)(SmallMatrix(2, 3) * SmallMatrix(2, 3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::shape);
    }
}

TEST(Kron, IdentityAndBlockLayout) {
    EXPECT_EQ(kron(SmallMatrix::identity(2), SmallMatrix::identity(2)), SmallMatrix::identity(4));
    const SmallMatrix a{{0, 1}, {-2, 0}};
    const SmallMatrix expected{{0, 0, 1, 0}, {0, 0, 0, 1}, {-2, 0, 0, 0}, {0, -2, 0, 0}};
    EXPECT_EQ(kron(a, SmallMatrix::identity(2)), expected);
    const Vector e0 = {1, 0}, e1 = {0, 1};
    EXPECT_EQ(kron(e0, e1), (Vector{0, 1, 0, 0}));
}

TEST(Kron, SizeOverflowIsSizeError) {
    try {
        (void)kron(SmallMatrix::identity(4), SmallMatrix::identity(5));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::size);
    }
    EXPECT_NO_THROW((void)kron(SmallMatrix::identity(4), SmallMatrix::identity(4)));
}

TEST(Kron, MixedProductRule) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < kPropertyCases; ++k) {
        const SmallMatrix a = randomMatrix(2, rng), b = randomMatrix(2, rng);
        const SmallMatrix c = randomMatrix(2, rng), d = randomMatrix(2, rng);
        EXPECT_LE(frobeniusNorm(kron(a, b) * kron(c, d) - kron(a * c, b * d)), 1e-12);
    }
}

TEST(Kron, ExponentialSplitting) {
    std::mt19937_64 rng(12);
    const SmallMatrix id = SmallMatrix::identity(2);
    for (int k = 0; k < kPropertyCases; ++k) {
        const SmallMatrix a = randomMatrix(2, rng), b = randomMatrix(2, rng);
        EXPECT_LE(frobeniusNorm(expm(kron(a, id) + kron(id, b)) - kron(expm(a), expm(b))), 1e-9);
    }
}

TEST(Kron, Bilinearity) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < kPropertyCases; ++k) {
        const SmallMatrix a = randomMatrix(2, rng), a2 = randomMatrix(2, rng), b = randomMatrix(2, rng);
        const double s = u(rng);
        EXPECT_LE(maxAbsDiff(kron(a + s * a2, b), kron(a, b) + s * kron(a2, b)), 1e-14);
        EXPECT_LE(maxAbsDiff(kron(b, a + s * a2), kron(b, a) + s * kron(b, a2)), 1e-14);
    }
}

TEST(Kron, NormMultiplicativity) {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < kPropertyCases; ++k) {
        const SmallMatrix a = randomMatrix(2, rng), b = randomMatrix(2, rng);
        const double lhs = operatorNorm(kron(a, b));
        const double rhs = operatorNorm(a) * operatorNorm(b);
        EXPECT_LE(std::abs(lhs - rhs), 1e-10 * rhs);
        // Oracle: Eigen's SVD of the assembled 4x4 product.
        const double oracle = Eigen::JacobiSVD<Eigen::MatrixXd>(toEigen(kron(a, b))).singularValues()(0);
        EXPECT_LE(std::abs(lhs - oracle), 1e-10 * oracle);

        const Vector x = {u(rng), u(rng)}, y = {u(rng), u(rng)};
        const double nv = norm2(kron(x, y));
        EXPECT_LE(std::abs(nv - norm2(x) * norm2(y)), 1e-10 * nv);
    }
}

TEST(Kron, KroneckerSumSpectrum) {
    std::mt19937_64 rng(15);
    const SmallMatrix id = SmallMatrix::identity(2);
    const double alpha = std::sqrt(2.0);
    for (int k = 0; k < 200; ++k) {
        const SmallMatrix c = randomMatrix(2, rng), d = randomMatrix(2, rng);
        const Spectrum sc = spectrum(c), sd = spectrum(d);
        std::vector<Complex> sums;
        for (Complex l : sc.eigenvalues)
            for (Complex m : sd.eigenvalues) sums.push_back(l + alpha * m);
        const Spectrum s = spectrum(kron(c, id) + alpha * kron(id, d));
        EXPECT_LE(multisetDistance(s.eigenvalues, sums), 1e-8);
    }
}

TEST(Expm, ClosedForms) {
    EXPECT_LE(maxAbsDiff(expm(SmallMatrix(2, 2)), SmallMatrix::identity(2)), 0.0);
    const Vector diag = {0.7, -3.2};
    const SmallMatrix e = expm(SmallMatrix::diagonal(diag));
    EXPECT_NEAR(e(0, 0), std::exp(0.7), 1e-15 * std::exp(0.7));
    EXPECT_NEAR(e(1, 1), std::exp(-3.2), 1e-15);
    EXPECT_EQ(e(0, 1), 0.0);
    for (double theta : {0.1, 1.0, 3.0, 20.0}) {
        const SmallMatrix r = expm(SmallMatrix{{0, theta}, {-theta, 0}});
        EXPECT_NEAR(r(0, 0), std::cos(theta), 1e-12);
        EXPECT_NEAR(r(0, 1), std::sin(theta), 1e-12);
        EXPECT_NEAR(r(1, 0), -std::sin(theta), 1e-12);
    }
    EXPECT_THROW((void)expm(SmallMatrix(2, 3)), Error);
}

TEST(Expm, MatchesEigenOracle) {
    std::mt19937_64 rng(16);
    for (std::size_t n : {2u, 3u, 4u, 7u, 16u}) {
        for (double scale : {0.01, 1.0, 5.0}) {
            for (int k = 0; k < 10; ++k) {
                // Scaled so the norm stays within the documented accuracy range.
                const SmallMatrix a = randomMatrix(n, rng, scale);
                const Eigen::MatrixXd oracle = toEigen(a).exp();
                const double rel = maxDiff(expm(a), oracle) / oracle.cwiseAbs().maxCoeff();
                EXPECT_LE(rel, 1e-12) << "n=" << n << " scale=" << scale;
            }
        }
    }
}

TEST(Expm, LargeNormStaysAccurate) {
    // Normal matrix with ||a|| = 50: exp is known in closed form.
    const SmallMatrix a{{-10, 49}, {-49, -10}};
    const SmallMatrix e = expm(a);
    const double s = std::exp(-10.0);
    EXPECT_NEAR(e(0, 0), s * std::cos(49.0), 1e-12 * s);
    EXPECT_NEAR(e(0, 1), s * std::sin(49.0), 1e-12 * s);
}

TEST(Spectrum, SmallClosedForms) {
    const Spectrum i2 = spectrum(SmallMatrix::identity(2));
    EXPECT_EQ(i2.eigenvalues.size(), 2u);
    EXPECT_DOUBLE_EQ(i2.spectralRadius, 1.0);
    const Spectrum d = spectrum(SmallMatrix{{2, 0}, {0, -3}});
    EXPECT_DOUBLE_EQ(d.spectralRadius, 3.0);
    const std::vector<Complex> expect = {2.0, -3.0};
    EXPECT_LE(multisetDistance(d.eigenvalues, expect), 1e-15);
    for (double g = 0.0; g <= 1.0; g += 0.125) {
        const Spectrum s = spectrum(SmallMatrix{{0, 1 + g}, {-2 + g, 0}});
        const double w = std::sqrt((1 + g) * (2 - g));
        const std::vector<Complex> oracle = {Complex(0, w), Complex(0, -w)};
        EXPECT_LE(multisetDistance(s.eigenvalues, oracle), 1e-14);
    }
    EXPECT_THROW((void)spectrum(SmallMatrix(2, 3)), Error);
}

TEST(Spectrum, ResidualAndConjugatePairs) {
    std::mt19937_64 rng(17);
    for (std::size_t n : {3u, 4u, 5u, 8u, 16u}) {
        for (int k = 0; k < 20; ++k) {
            const SmallMatrix a = randomMatrix(n, rng);
            const Spectrum s = spectrum(a);
            ASSERT_EQ(s.eigenvalues.size(), n);
            const auto vecs = eigenvectors(a, s);
            const double anorm = operatorNorm(a);
            double rho = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                rho = std::max(rho, std::abs(s.eigenvalues[i]));
                double res = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    Complex acc = 0.0;
                    for (std::size_t c = 0; c < n; ++c) acc += a(r, c) * vecs[i][c];
                    res += std::norm(acc - s.eigenvalues[i] * vecs[i][r]);
                }
                EXPECT_LE(std::sqrt(res), 1e-10 * anorm);
            }
            EXPECT_DOUBLE_EQ(s.spectralRadius, rho);
            std::vector<Complex> conj;
            for (Complex l : s.eigenvalues) conj.push_back(std::conj(l));
            EXPECT_LE(multisetDistance(s.eigenvalues, conj), 1e-10 * anorm);

            Eigen::EigenSolver<Eigen::MatrixXd> es(toEigen(a));
            std::vector<Complex> oracle(es.eigenvalues().data(), es.eigenvalues().data() + n);
            EXPECT_LE(multisetDistance(s.eigenvalues, oracle), 1e-9 * anorm);
        }
    }
}

TEST(Spectrum, MultisetDistanceSizesDiffer) {
    const std::vector<Complex> a = {1.0, 2.0}, b = {1.0};
    EXPECT_TRUE(std::isinf(multisetDistance(a, b)));
}

TEST(OperatorNorm, ClosedFormsAndOracle) {
    EXPECT_NEAR(operatorNorm(SmallMatrix::identity(4)), 1.0, 1e-15);
    EXPECT_NEAR(operatorNorm(SmallMatrix{{3, 0}, {0, -5}}), 5.0, 1e-15);
    std::mt19937_64 rng(18);
    for (std::size_t n : {2u, 5u, 16u}) {
        const SmallMatrix a = randomMatrix(n, rng);
        const auto sv = singularValues(a);
        const Eigen::VectorXd oracle = Eigen::JacobiSVD<Eigen::MatrixXd>(toEigen(a)).singularValues();
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(sv[i], oracle(static_cast<Eigen::Index>(i)), 1e-10 * oracle(0));
    }
}

TEST(SmallMatrix, SolveDeterminantPower) {
    std::mt19937_64 rng(19);
    const SmallMatrix a = randomMatrix(5, rng) + 5.0 * SmallMatrix::identity(5);
    const SmallMatrix b = randomMatrix(5, rng);
    EXPECT_LE(maxAbsDiff(a * solve(a, b), b), 1e-13);
    EXPECT_NEAR(determinant(a), toEigen(a).determinant(), 1e-10 * std::abs(toEigen(a).determinant()));
    EXPECT_LE(maxAbsDiff(power(a, 3), a * a * a), 1e-10 * frobeniusNorm(a * a * a));
    EXPECT_THROW((void)solve(SmallMatrix(2, 2), SmallMatrix::identity(2)), Error);
}

TEST(EigenvectorCondition, DiagonalAndDefective) {
    const SmallMatrix d{{2, 0}, {0, 0.5}};
    EXPECT_NEAR(eigenvectorCondition(d, spectrum(d)), 2.0, 1e-12);  // ||I||_F^2
    const SmallMatrix jordan{{1, 1}, {0, 1}};
    EXPECT_GT(eigenvectorCondition(jordan, spectrum(jordan)), 1e6);
}
