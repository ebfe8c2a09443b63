#include "pstab/lift.hpp"

#include <algorithm>
#include <cmath>

namespace pstab {

LiftedFamily buildLift(const PlanarPair& p, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error(ErrorKind::input, "alpha must be positive");
    const SmallMatrix id = SmallMatrix::identity(p.a0.rows());
    const SmallMatrix a0Left = kron(p.a0, id);
    const SmallMatrix a1Left = kron(p.a1, id);
    const SmallMatrix a0Right = alpha * kron(id, p.a0);
    const SmallMatrix a1Right = alpha * kron(id, p.a1);
    return {{a0Left + a0Right, a1Left + a0Right, a0Left + a1Right, a1Left + a1Right}, alpha, p};
}

HullCoordinates hullDecompose(const LiftedFamily& f, const SmallMatrix& b) {
    const SmallMatrix rhs = b - f.b[0];
    const SmallMatrix d1 = f.b[1] - f.b[0];
    const SmallMatrix d2 = f.b[2] - f.b[0];

    // Modified Gram-Schmidt on {d1, d2}: d1 = r11 q1, d2 = r12 q1 + r22 q2.
    const auto v1 = d1.data();
    const auto v2 = d2.data();
    const double r11 = norm2(v1);
    Vector q1(v1.begin(), v1.end());
    for (double& x : q1) x /= r11;
    const double r12 = dot(q1, v2);
    Vector q2 = axpy(-r12, q1, v2);
    const double r22 = norm2(q2);
    for (double& x : q2) x /= r22;
    if (!(r22 > 1e-14 * r11)) throw Error(ErrorKind::numerical, "lift difference matrices are dependent");

    const double c1 = dot(q1, rhs.data());
    const double c2 = dot(q2, rhs.data());
    HullCoordinates h;
    h.v1 = c2 / r22;
    h.v0 = (c1 - r12 * h.v1) / r11;
    h.residual = frobeniusNorm(rhs - h.v0 * d1 - h.v1 * d2);

    if (h.residual > kAffineSpanTol * std::max(1.0, frobeniusNorm(b))) {
        throw Error(ErrorKind::notInAffineSpan, "matrix is not in the affine span of the lift");
    }
    auto inRange = [](double v) { return v >= -kHullTol && v <= 1.0 + kHullTol; };
    if (!inRange(h.v0) || !inRange(h.v1)) {
        throw Error(ErrorKind::notInHull, "hull coordinates outside [0, 1]");
    }
    return h;
}

HullCoordinates hullCoordinatesFromWeights(std::span<const double> beta) {
    if (beta.size() != 4) throw Error(ErrorKind::input, "expected four hull weights");
    return {beta[1] + beta[3], beta[2] + beta[3], 0.0};
}

bool independenceCheck(const LiftedFamily& f) {
    const SmallMatrix d1 = f.b[1] - f.b[0];
    const SmallMatrix d2 = f.b[2] - f.b[0];
    const std::size_t n = d1.data().size();
    // Stored as n x 2 (tall) so the Jacobi SVD works on columns directly; the
    // singular values equal those of the 2 x n stack.
    if (n > SmallMatrix::kMaxDim) throw Error(ErrorKind::size, "lift too large for the independence test");
    SmallMatrix stack(n, 2);
    for (std::size_t k = 0; k < n; ++k) {
        stack(k, 0) = d1.data()[k];
        stack(k, 1) = d2.data()[k];
    }
    const auto sv = singularValues(stack);
    return sv.front() > 0.0 && sv.back() > 1e-10 * sv.front();
}

std::vector<double> randomSimplexPoint(std::size_t n, std::mt19937_64& rng) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> w(n);
    double s = 0.0;
    for (double& x : w) s += (x = e(rng));
    for (double& x : w) x /= s;
    // Fold the rounding error into the largest entry so the sum is 1 to the last bit.
    double total = 0.0;
    for (double x : w) total += x;
    *std::max_element(w.begin(), w.end()) += 1.0 - total;
    return w;
}

HullScanReport liftHullScan(const LiftedFamily& f, std::size_t samples, std::uint64_t seed, Exec exec) {
    const SwitchedFamily fam = f.family();
    const std::size_t total = samples + fam.size();
    std::vector<double> worst(total);
    std::vector<std::vector<double>> weights(total);
    forEachIndex(total, exec, [&](std::size_t i) {
        std::vector<double> w(fam.size(), 0.0);
        if (i < fam.size()) {
            w[i] = 1.0;
        } else {
            auto rng = itemRng(seed, i);
            w = randomSimplexPoint(fam.size(), rng);
        }
        worst[i] = spectralAbscissa(fam.combine(w));
        weights[i] = std::move(w);
    });
    const auto it = std::max_element(worst.begin(), worst.end());
    const auto idx = static_cast<std::size_t>(it - worst.begin());
    return {total, *it, weights[idx]};
}

}  // namespace pstab
