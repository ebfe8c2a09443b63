#pragma once

#include <cstdint>
#include <vector>

#include "pstab/exec.hpp"
#include "pstab/planar.hpp"
#include "pstab/simcore.hpp"

namespace pstab {

/// Four generators on R^d (x) R^d built from a planar pair and a time scale alpha:
///   B0 = A0 (x) I + alpha I (x) A0     B1 = A1 (x) I + alpha I (x) A0
///   B2 = A0 (x) I + alpha I (x) A1     B3 = A1 (x) I + alpha I (x) A1
/// so B0 + B3 = B1 + B2. A trajectory started at w0 (x) w1 stays a tensor product of
/// a factor trajectory and a second factor running on the clock alpha t.
struct LiftedFamily {
    std::vector<SmallMatrix> b;
    /// Intended to be irrational; stored as the nearest double.
    double alpha = 0.0;
    PlanarPair source;

    SwitchedFamily family() const { return {b}; }
};

/// Throws ErrorKind::input unless alpha > 0.
LiftedFamily buildLift(const PlanarPair& p, double alpha);

struct HullCoordinates {
    double v0 = 0.0;  // coefficient of B1 - B0
    double v1 = 0.0;  // coefficient of B2 - B0
    double residual = 0.0;
};

inline constexpr double kAffineSpanTol = 1e-10;
inline constexpr double kHullTol = 1e-9;

/// Least-squares coordinates of b - B0 on span{B1 - B0, B2 - B0}.
/// Throws notInAffineSpan if the reconstruction residual exceeds 1e-10 (relative to
/// max(1, ||b||_F)) and notInHull if a coordinate leaves [-1e-9, 1 + 1e-9].
HullCoordinates hullDecompose(const LiftedFamily& f, const SmallMatrix& b);

/// Coordinates for convex weights over B0..B3 without the residual test:
/// v0 = beta1 + beta3, v1 = beta2 + beta3.
HullCoordinates hullCoordinatesFromWeights(std::span<const double> beta);

/// True iff B1 - B0 and B2 - B0 are linearly independent
/// (smallest singular value of the stacked vectors > 1e-10 * largest).
bool independenceCheck(const LiftedFamily& f);

struct HullScanReport {
    std::size_t samples = 0;
    double maxRealPart = 0.0;
    std::vector<double> worstWeights;
};

/// Largest eigenvalue real part over `samples` random convex combinations of the
/// lift (uniform on the simplex) plus the four vertices.
HullScanReport liftHullScan(const LiftedFamily& f, std::size_t samples, std::uint64_t seed = 1,
                            Exec exec = Exec::parallel);

/// Uniform sample from the probability simplex of the given size.
std::vector<double> randomSimplexPoint(std::size_t n, std::mt19937_64& rng);

}  // namespace pstab
