// Dense nonsymmetric eigenvalues: Householder reduction to upper Hessenberg form
// followed by Francis double-shift QR with deflation.

#include <algorithm>
#include <cmath>
#include <limits>

#include "pstab/smallmat.hpp"

namespace pstab {

namespace {

using Dense = std::vector<std::vector<double>>;

Dense toDense(const SmallMatrix& a) {
    Dense d(a.rows(), std::vector<double>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) d[i][j] = a(i, j);
    return d;
}

void reduceToHessenberg(Dense& a) {
    const int n = static_cast<int>(a.size());
    std::vector<double> v(n);
    for (int k = 0; k + 2 < n; ++k) {
        double alpha = 0.0;
        for (int i = k + 1; i < n; ++i) alpha += a[i][k] * a[i][k];
        alpha = std::sqrt(alpha);
        if (alpha == 0.0) continue;
        if (a[k + 1][k] > 0) alpha = -alpha;
        double vnorm2 = 0.0;
        for (int i = 0; i < n; ++i) v[i] = 0.0;
        v[k + 1] = a[k + 1][k] - alpha;
        for (int i = k + 2; i < n; ++i) v[i] = a[i][k];
        for (int i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 == 0.0) continue;
        // A <- H A
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = k + 1; i < n; ++i) s += v[i] * a[i][j];
            s = 2.0 * s / vnorm2;
            for (int i = k + 1; i < n; ++i) a[i][j] -= s * v[i];
        }
        // A <- A H
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = k + 1; j < n; ++j) s += a[i][j] * v[j];
            s = 2.0 * s / vnorm2;
            for (int j = k + 1; j < n; ++j) a[i][j] -= s * v[j];
        }
        for (int i = k + 2; i < n; ++i) a[i][k] = 0.0;
    }
}

double signOf(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

std::vector<Complex> hessenbergQr(Dense& a) {
    const int n = static_cast<int>(a.size());
    std::vector<double> wr(n, 0.0), wi(n, 0.0);
    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a[i][j]);

    int nn = n - 1;
    double t = 0.0;
    int totalIts = 0;
    while (nn >= 0) {
        int its = 0;
        int l = 0;
        do {
            for (l = nn; l >= 1; --l) {
                double s = std::abs(a[l - 1][l - 1]) + std::abs(a[l][l]);
                if (s == 0.0) s = anorm;
                if (std::abs(a[l][l - 1]) + s == s) {
                    a[l][l - 1] = 0.0;
                    break;
                }
            }
            double x = a[nn][nn];
            if (l == nn) {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                --nn;
            } else {
                double y = a[nn - 1][nn - 1];
                double w = a[nn][nn - 1] * a[nn - 1][nn];
                if (l == nn - 1) {
                    const double p = 0.5 * (y - x);
                    const double q = p * p + w;
                    double z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + signOf(z, p);
                        wr[nn - 1] = wr[nn] = x + z;
                        if (z != 0.0) wr[nn] = x - w / z;
                        wi[nn - 1] = wi[nn] = 0.0;
                    } else {
                        wr[nn - 1] = wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn -= 2;
                } else {
                    if (++totalIts > kEigenIterationCap) {
                        throw Error(ErrorKind::numerical, "QR iteration did not converge");
                    }
                    if (its == 10 || its == 20) {
                        t += x;
                        for (int i = 0; i <= nn; ++i) a[i][i] -= x;
                        const double s = std::abs(a[nn][nn - 1]) + std::abs(a[nn - 1][nn - 2]);
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    ++its;
                    int m = nn - 2;
                    double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
                    for (; m >= l; --m) {
                        z = a[m][m];
                        r = x - z;
                        double s = y - z;
                        p = (r * s - w) / a[m + 1][m] + a[m][m + 1];
                        q = a[m + 1][m + 1] - z - r - s;
                        r = a[m + 2][m + 1];
                        s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        const double u = std::abs(a[m][m - 1]) * (std::abs(q) + std::abs(r));
                        const double v =
                            std::abs(p) * (std::abs(a[m - 1][m - 1]) + std::abs(z) + std::abs(a[m + 1][m + 1]));
                        if (u + v == v) break;
                    }
                    for (int i = m + 2; i <= nn; ++i) {
                        a[i][i - 2] = 0.0;
                        if (i != m + 2) a[i][i - 3] = 0.0;
                    }
                    for (int k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = a[k][k - 1];
                            q = a[k + 1][k - 1];
                            r = 0.0;
                            if (k != nn - 1) r = a[k + 2][k - 1];
                            x = std::abs(p) + std::abs(q) + std::abs(r);
                            if (x != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        const double s = signOf(std::sqrt(p * p + q * q + r * r), p);
                        if (s == 0.0) continue;
                        if (k == m) {
                            if (l != m) a[k][k - 1] = -a[k][k - 1];
                        } else {
                            a[k][k - 1] = -s * x;
                        }
                        p += s;
                        x = p / s;
                        y = q / s;
                        z = r / s;
                        q /= p;
                        r /= p;
                        for (int j = k; j <= nn; ++j) {
                            p = a[k][j] + q * a[k + 1][j];
                            if (k != nn - 1) {
                                p += r * a[k + 2][j];
                                a[k + 2][j] -= p * z;
                            }
                            a[k + 1][j] -= p * y;
                            a[k][j] -= p * x;
                        }
                        const int mmin = nn < k + 3 ? nn : k + 3;
                        for (int i = l; i <= mmin; ++i) {
                            p = x * a[i][k] + y * a[i][k + 1];
                            if (k != nn - 1) {
                                p += z * a[i][k + 2];
                                a[i][k + 2] -= p * r;
                            }
                            a[i][k + 1] -= p * q;
                            a[i][k] -= p;
                        }
                    }
                }
            }
        } while (nn >= 0 && l < nn - 1);
    }
    std::vector<Complex> out(n);
    for (int i = 0; i < n; ++i) out[i] = {wr[i], wi[i]};
    return out;
}

std::vector<Complex> eigenvalues2x2(const SmallMatrix& a) {
    const double half = 0.5 * (a(0, 0) + a(1, 1));
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const double d = 0.5 * (a(0, 0) - a(1, 1));
    const double disc = d * d + a(0, 1) * a(1, 0);
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        const double big = half + signOf(root, half);
        const double small = big != 0.0 ? det / big : half - root;
        return {Complex(big, 0.0), Complex(small, 0.0)};
    }
    const double im = std::sqrt(-disc);
    return {Complex(half, im), Complex(half, -im)};
}

// Complex LU solve with tiny-pivot replacement, used only for inverse iteration.
std::vector<Complex> shiftedSolve(const SmallMatrix& a, Complex shift, std::vector<Complex> rhs, double floor) {
    const std::size_t n = a.rows();
    std::vector<std::vector<Complex>> m(n, std::vector<Complex>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = a(i, j) - (i == j ? shift : Complex{});
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m[i][k]) > std::abs(m[piv][k])) piv = i;
        std::swap(m[k], m[piv]);
        std::swap(rhs[k], rhs[piv]);
        if (std::abs(m[k][k]) < floor) m[k][k] = floor;
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex l = m[i][k] / m[k][k];
            for (std::size_t j = k; j < n; ++j) m[i][j] -= l * m[k][j];
            rhs[i] -= l * rhs[k];
        }
    }
    std::vector<Complex> x(n);
    for (std::size_t i = n; i-- > 0;) {
        Complex s = rhs[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= m[i][j] * x[j];
        x[i] = s / m[i][i];
    }
    return x;
}

double complexNorm(const std::vector<Complex>& v) {
    double s = 0.0;
    for (const Complex& z : v) s += std::norm(z);
    return std::sqrt(s);
}

}  // namespace

Spectrum spectrum(const SmallMatrix& a) {
    if (!a.isSquare()) throw Error(ErrorKind::shape, "spectrum needs a square matrix");
    Spectrum s;
    if (a.rows() == 1) {
        s.eigenvalues = {Complex(a(0, 0), 0.0)};
    } else if (a.rows() == 2) {
        s.eigenvalues = eigenvalues2x2(a);
    } else {
        Dense d = toDense(a);
        reduceToHessenberg(d);
        s.eigenvalues = hessenbergQr(d);
    }
    for (const Complex& z : s.eigenvalues) s.spectralRadius = std::max(s.spectralRadius, std::abs(z));
    return s;
}

std::vector<std::vector<Complex>> eigenvectors(const SmallMatrix& a, const Spectrum& spec) {
    if (!a.isSquare()) throw Error(ErrorKind::shape, "eigenvectors need a square matrix");
    const std::size_t n = a.rows();
    const double scale = std::max(frobeniusNorm(a), 1e-300);
    const double eps = std::numeric_limits<double>::epsilon();
    std::vector<std::vector<Complex>> out;
    out.reserve(spec.eigenvalues.size());
    for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) {
        const Complex lambda = spec.eigenvalues[k];
        const Complex shift = lambda + Complex(8.0 * eps * scale, 0.0);
        std::vector<Complex> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = Complex(1.0 + 0.37 * static_cast<double>((i + k) % n), 0.1 * i);
        for (int it = 0; it < 3; ++it) {
            v = shiftedSolve(a, shift, v, eps * scale);
            const double nv = complexNorm(v);
            for (Complex& z : v) z /= nv;
        }
        out.push_back(std::move(v));
    }
    return out;
}

double eigenvectorCondition(const SmallMatrix& a, const Spectrum& spec) {
    const auto vecs = eigenvectors(a, spec);
    const std::size_t n = vecs.size();
    // V has the eigenvectors as columns; invert by Gauss-Jordan.
    std::vector<std::vector<Complex>> v(n, std::vector<Complex>(2 * n));
    double vnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            v[i][j] = vecs[j][i];
            vnorm += std::norm(v[i][j]);
        }
        v[i][n + i] = 1.0;
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(v[i][k]) > std::abs(v[piv][k])) piv = i;
        if (std::abs(v[piv][k]) < 1e-14) return std::numeric_limits<double>::infinity();
        std::swap(v[k], v[piv]);
        const Complex p = v[k][k];
        for (auto& z : v[k]) z /= p;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const Complex l = v[i][k];
            for (std::size_t j = 0; j < 2 * n; ++j) v[i][j] -= l * v[k][j];
        }
    }
    double inorm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = n; j < 2 * n; ++j) inorm += std::norm(v[i][j]);
    return std::sqrt(vnorm) * std::sqrt(inorm);
}

}  // namespace pstab
