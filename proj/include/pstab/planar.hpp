#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pstab/exec.hpp"
#include "pstab/simcore.hpp"
#include "pstab/smallmat.hpp"

namespace pstab {

/// A pair of 2x2 generators A0, A1; the relaxed system uses (1-u) A0 + u A1.
struct PlanarPair {
    SmallMatrix a0;
    SmallMatrix a1;
    /// Set for the rotation-symmetric family built by buildTauPair.
    std::optional<double> tau;

    SwitchedFamily family() const { return {{a0, a1}}; }
    SmallMatrix hull(double gamma) const { return (1.0 - gamma) * a0 + gamma * a1; }
};

/// g(tau) = tau - exp(pi (tau + 1) / (2 (tau - 1))).
double tauEquationResidual(double tau);

/// Unique root of g on (0, 1), bracketed on [1e-6, 1 - 1e-6].
double solveTau();

/// Throws ErrorKind::input unless 0 < tau < 1.
PlanarPair buildTauPair(double tau);
/// A0 = [[0, 1], [-2, 0]], A1 = [[0, 2], [-1, 0]].
PlanarPair buildSimplePair();

/// True iff I, A0, A1 are linearly independent (rank 3 of the vectorised stack).
bool linearlyIndependentWithIdentity(const PlanarPair& p);

struct HurwitzReport {
    /// Closed-form verdict: max trace over [0,1] < 0 and min det over [0,1] > 0.
    bool hurwitz = false;
    /// Same verdict from the sampled grid.
    bool gridHurwitz = false;
    double maxTrace = 0.0;
    double minDet = 0.0;
    /// max over gamma of the largest eigenvalue real part.
    double worstRealPart = 0.0;
    double worstGamma = 0.0;
};

/// gridSize >= 2. The worst real part is the grid maximum refined by Brent's method.
HurwitzReport hurwitzHull(const PlanarPair& p, std::size_t gridSize = 1001);

// ---- non-strict Lyapunov function ------------------------------------------

enum class LyapunovBranch {
    sameSign,      // x1 x2 >= 0
    oppositeSign,  // x1 x2 <= 0
};

/// Piecewise quadratic-times-angular-exponential function attached to the tau pair.
/// Positively homogeneous of degree 2, C1 across the axes.
class LyapunovCertificate {
public:
    explicit LyapunovCertificate(double tau);

    double tau() const noexcept { return tau_; }

    double value(std::span<const double> x) const;
    std::array<double, 2> gradient(std::span<const double> x) const;

    /// Branch formula evaluated without the sign test; each extends smoothly onto the axes.
    double branchValue(LyapunovBranch b, std::span<const double> x) const;
    std::array<double, 2> branchGradient(LyapunovBranch b, std::span<const double> x) const;

private:
    double tau_;
    double s_;  // sqrt(2 tau)
};

struct CertificateViolation {
    std::size_t sample = 0;
    std::array<double, 2> x{};
    std::string condition;
    double value = 0.0;
};

struct CertificateReport {
    std::size_t samples = 0;
    /// Largest |grad f . A x| over the half-planes where it must vanish.
    double maxNeutral = 0.0;
    /// Largest grad f . A x over the regions where it must be negative.
    double maxStrict = 0.0;
    /// Gluing gaps across the axes (values and gradients).
    double maxGlueValueGap = 0.0;
    double maxGlueGradientGap = 0.0;
    std::vector<CertificateViolation> violations;  // first few only
    std::size_t violationCount = 0;
    bool passed = false;
};

inline constexpr double kNeutralTol = 1e-9;
inline constexpr double kStrictTol = 1e-12;
inline constexpr double kGlueTol = 1e-8;

/// Checks the sign pattern of grad f . A_i x on `samples` random unit vectors
/// and C1 gluing of f across both axes.
CertificateReport gradientConditionCheck(const LyapunovCertificate& c, const PlanarPair& p, std::size_t samples,
                                         std::uint64_t seed = 1, Exec exec = Exec::parallel);

// ---- worst-case bang-bang law ----------------------------------------------

/// Which generator runs while the coordinates share a sign.
enum class Polarity { sameSignA0, sameSignA1 };

/// u0 = 0 on [0, T0), 1 on [T0, T), T-periodic; the law from a given start is u0(t + phase).
struct WorstCaseLaw {
    double t0Bang = 0.0;  // T0
    double t1Bang = 0.0;  // T1
    double period = 0.0;  // T = T0 + T1
    double phase = 0.0;   // in [0, T)
    Polarity polarity = Polarity::sameSignA0;

    double u0(double t) const;
    double valueAt(double t) const { return u0(t + phase); }
    /// One period of u0(. + phase) as a periodic two-vertex law.
    SwitchingLaw periodicLaw() const;
    /// The unshifted u0.
    SwitchingLaw basePeriodicLaw() const;
};

struct WorstCaseResult {
    WorstCaseLaw law;
    /// The state-period orbit (length 2T) from w under the law.
    Trajectory orbit;
    /// Detected axis crossings (times from 0 and states).
    std::vector<double> switchTimes;
    std::vector<Vector> switchPoints;
    /// ||x(2T) - w|| / ||w||.
    double closureGap = 0.0;
    /// ||x(T) + w|| / ||w||.
    double halfPeriodGap = 0.0;
    bool closed = false;
};

inline constexpr double kClosureTol = 1e-6;

/// Integrates the axis-switching rule from w, finds crossings by bisection on the
/// exact segment flow, and returns T0, T, the phase of w and the closed orbit.
/// Throws ErrorKind::nonRotation if no crossing occurs within `maxSegmentTime`.
WorstCaseResult worstCaseLawAndPeriod(const PlanarPair& p, std::span<const double> w,
                                      Polarity polarity = Polarity::sameSignA0, double sampleStep = 0.0,
                                      double maxSegmentTime = 1e3);

struct GrowthRateReport {
    double lambda = 0.0;
    /// Law period and monodromy radius of the maximising rule; unset for commuting pairs.
    std::optional<Polarity> polarity;
    double period = 0.0;
    double rho = 0.0;
};

/// log rho(R(T)) / T maximised over both axis-switching polarities. Commuting
/// pairs use the closed form max(abscissa(A0), abscissa(A1)).
GrowthRateReport growthRate(const PlanarPair& p);

// ---- growth-rate separation condition --------------------------------------

struct TimeGrid {
    double tMin = 0.01;
    double tMax = 10.0;
    std::size_t count = 64;  // log-spaced per axis
};

struct ConditionReport {
    double lhs = 0.0;  // max_gamma rho(exp(hull(gamma)))
    double lhsGamma = 0.0;
    double rhsGrid = 0.0;  // max over the (t0, t1) grid
    double rhs = 0.0;      // grid maximum refined by Nelder-Mead in log time
    double rhsT0 = 0.0;
    double rhsT1 = 0.0;
    std::size_t gammaGrid = 0;
    TimeGrid tGrid;
    bool holds() const { return lhs < rhs; }
};

/// rho(exp(t0 A0) exp(t1 A1))^(1 / (t0 + t1)).
double bangBangRate(const PlanarPair& p, double t0, double t1);

ConditionReport checkCondition(const PlanarPair& p, std::size_t gammaGrid = 1001, TimeGrid tGrid = {},
                               Exec exec = Exec::parallel);

}  // namespace pstab
