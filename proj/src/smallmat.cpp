#include "pstab/smallmat.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace pstab {

const char* toString(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::size: return "size";
        case ErrorKind::shape: return "shape";
        case ErrorKind::input: return "input";
        case ErrorKind::numerical: return "numerical";
        case ErrorKind::internal: return "internal";
        case ErrorKind::notInAffineSpan: return "not-in-affine-span";
        case ErrorKind::notInHull: return "not-in-hull";
        case ErrorKind::nonRotation: return "non-rotation";
        case ErrorKind::factorization: return "factorization";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

namespace {

void checkDims(std::size_t rows, std::size_t cols) {
    if (rows < 1 || cols < 1 || rows > SmallMatrix::kMaxDim || cols > SmallMatrix::kMaxDim) {
        throw Error(ErrorKind::size, "matrix dimensions " + std::to_string(rows) + "x" +
                                         std::to_string(cols) + " outside 1..16");
    }
}

void requireSquare(const SmallMatrix& a, const char* op) {
    if (!a.isSquare()) {
        throw Error(ErrorKind::shape, std::string(op) + " needs a square matrix, got " +
                                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
}

void requireSameShape(const SmallMatrix& a, const SmallMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorKind::shape, "operand shapes differ");
    }
}

}  // namespace

SmallMatrix::SmallMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    checkDims(rows, cols);
    data_.assign(rows * cols, 0.0);
}

SmallMatrix::SmallMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    checkDims(rows, cols);
    if (data_.size() != rows * cols) {
        throw Error(ErrorKind::input, "expected " + std::to_string(rows * cols) + " entries, got " +
                                          std::to_string(data_.size()));
    }
    for (double v : data_) {
        if (!std::isfinite(v)) throw Error(ErrorKind::input, "matrix entry is not finite");
    }
}

SmallMatrix::SmallMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    checkDims(rows_, cols_);
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) throw Error(ErrorKind::shape, "ragged matrix literal");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

SmallMatrix SmallMatrix::identity(std::size_t n) {
    SmallMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

SmallMatrix SmallMatrix::diagonal(std::span<const double> d) {
    SmallMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

SmallMatrix SmallMatrix::column(std::span<const double> v) {
    return SmallMatrix(v.size(), 1, Vector(v.begin(), v.end()));
}

SmallMatrix& SmallMatrix::operator+=(const SmallMatrix& other) {
    requireSameShape(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

SmallMatrix& SmallMatrix::operator-=(const SmallMatrix& other) {
    requireSameShape(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

SmallMatrix& SmallMatrix::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

SmallMatrix SmallMatrix::transpose() const {
    SmallMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

double SmallMatrix::trace() const {
    requireSquare(*this, "trace");
    double s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, i);
    return s;
}

SmallMatrix operator+(SmallMatrix a, const SmallMatrix& b) { return a += b; }
SmallMatrix operator-(SmallMatrix a, const SmallMatrix& b) { return a -= b; }
SmallMatrix operator*(SmallMatrix a, double s) { return a *= s; }
SmallMatrix operator*(double s, SmallMatrix a) { return a *= s; }

SmallMatrix operator*(const SmallMatrix& a, const SmallMatrix& b) {
    if (a.cols() != b.rows()) throw Error(ErrorKind::shape, "inner dimensions differ in product");
    SmallMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Vector operator*(const SmallMatrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw Error(ErrorKind::shape, "matrix-vector dimensions differ");
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

SmallMatrix kron(const SmallMatrix& a, const SmallMatrix& b) {
    const std::size_t rows = a.rows() * b.rows();
    const std::size_t cols = a.cols() * b.cols();
    if (rows > SmallMatrix::kMaxDim || cols > SmallMatrix::kMaxDim) {
        throw Error(ErrorKind::size, "Kronecker product would be " + std::to_string(rows) + "x" +
                                         std::to_string(cols));
    }
    SmallMatrix k(rows, cols);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q)
                    k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
    return k;
}

Vector kron(std::span<const double> a, std::span<const double> b) {
    Vector out;
    out.reserve(a.size() * b.size());
    for (double ai : a)
        for (double bj : b) out.push_back(ai * bj);
    return out;
}

// ---- LU ---------------------------------------------------------------------

namespace {

struct Lu {
    SmallMatrix lu;
    std::vector<std::size_t> perm;
    int sign = 1;
    bool singular = false;
};

Lu luDecompose(const SmallMatrix& a) {
    requireSquare(a, "LU");
    const std::size_t n = a.rows();
    Lu f{a, std::vector<std::size_t>(n), 1, false};
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
    SmallMatrix& m = f.lu;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
        if (m(piv, k) == 0.0) {
            f.singular = true;
            continue;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
            f.sign = -f.sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = m(i, k) / m(k, k);
            m(i, k) = l;
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
        }
    }
    return f;
}

}  // namespace

SmallMatrix solve(const SmallMatrix& a, const SmallMatrix& b) {
    if (a.rows() != b.rows()) throw Error(ErrorKind::shape, "solve: row counts differ");
    const Lu f = luDecompose(a);
    if (f.singular) throw Error(ErrorKind::numerical, "solve: singular matrix");
    const std::size_t n = a.rows();
    SmallMatrix x(n, b.cols());
    for (std::size_t c = 0; c < b.cols(); ++c) {
        Vector y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = b(f.perm[i], c);
            for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
            y[i] = s;
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = y[i];
            for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * x(j, c);
            x(i, c) = s / f.lu(i, i);
        }
    }
    return x;
}

double determinant(const SmallMatrix& a) {
    requireSquare(a, "determinant");
    if (a.rows() == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const Lu f = luDecompose(a);
    if (f.singular) return 0.0;
    double d = f.sign;
    for (std::size_t i = 0; i < a.rows(); ++i) d *= f.lu(i, i);
    return d;
}

SmallMatrix power(const SmallMatrix& a, unsigned n) {
    requireSquare(a, "power");
    SmallMatrix result = SmallMatrix::identity(a.rows());
    SmallMatrix base = a;
    while (n > 0) {
        if (n & 1U) result = result * base;
        n >>= 1U;
        if (n > 0) base = base * base;
    }
    return result;
}

// ---- norms ------------------------------------------------------------------

double frobeniusNorm(const SmallMatrix& a) {
    return norm2(a.data());
}

double norm1(const SmallMatrix& a) {
    double best = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < a.rows(); ++r) s += std::abs(a(r, c));
        best = std::max(best, s);
    }
    return best;
}

double maxAbsDiff(const SmallMatrix& a, const SmallMatrix& b) {
    requireSameShape(a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

std::vector<double> singularValues(const SmallMatrix& a) {
    // One-sided Jacobi on the tall orientation; columns converge to U * Sigma.
    SmallMatrix u = a.rows() >= a.cols() ? a : a.transpose();
    const std::size_t m = u.rows();
    const std::size_t n = u.cols();
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int sweep = 0; sweep < 100; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += u(i, p) * u(i, p);
                    beta += u(i, q) * u(i, q);
                    gamma += u(i, p) * u(i, q);
                }
                if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double up = u(i, p);
                    const double uq = u(i, q);
                    u(i, p) = c * up - s * uq;
                    u(i, q) = s * up + c * uq;
                }
            }
        }
        if (!rotated) break;
    }
    std::vector<double> sv(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += u(i, j) * u(i, j);
        sv[j] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

double operatorNorm(const SmallMatrix& a) {
    if (a.rows() == 1 || a.cols() == 1) return norm2(a.data());
    return singularValues(a).front();
}

double norm2(std::span<const double> v) {
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (double x : v) s += (x / scale) * (x / scale);
    return scale * std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error(ErrorKind::shape, "dot: lengths differ");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vector axpy(double alpha, std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorKind::shape, "axpy: lengths differ");
    Vector out(y.begin(), y.end());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] += alpha * x[i];
    return out;
}

// ---- expm -------------------------------------------------------------------

SmallMatrix expm(const SmallMatrix& a) {
    requireSquare(a, "expm");
    constexpr std::array<double, 14> b = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;

    const std::size_t n = a.rows();
    const double nrm = norm1(a);
    int squarings = 0;
    if (nrm > theta13) squarings = static_cast<int>(std::ceil(std::log2(nrm / theta13)));

    const SmallMatrix x = a * std::ldexp(1.0, -squarings);
    const SmallMatrix id = SmallMatrix::identity(n);
    const SmallMatrix x2 = x * x;
    const SmallMatrix x4 = x2 * x2;
    const SmallMatrix x6 = x4 * x2;

    const SmallMatrix uInner = x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 + b[5] * x4 +
                               b[3] * x2 + b[1] * id;
    const SmallMatrix u = x * uInner;
    const SmallMatrix v = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) + b[6] * x6 + b[4] * x4 +
                          b[2] * x2 + b[0] * id;

    SmallMatrix r = solve(v - u, v + u);
    for (int i = 0; i < squarings; ++i) r = r * r;
    for (double e : r.data()) {
        if (!std::isfinite(e)) throw Error(ErrorKind::numerical, "expm overflow");
    }
    return r;
}

// ---- spectra helpers ----------------------------------------------------------

double spectralAbscissa(const SmallMatrix& a) {
    const Spectrum s = spectrum(a);
    double best = -std::numeric_limits<double>::infinity();
    for (const Complex& z : s.eigenvalues) best = std::max(best, z.real());
    return best;
}

double multisetDistance(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::vector<bool> used(b.size(), false);
    double worst = 0.0;
    for (const Complex& z : a) {
        std::size_t best = b.size();
        double bestDist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(z - b[j]);
            if (d < bestDist) {
                bestDist = d;
                best = j;
            }
        }
        used[best] = true;
        worst = std::max(worst, bestDist);
    }
    return worst;
}

}  // namespace pstab
