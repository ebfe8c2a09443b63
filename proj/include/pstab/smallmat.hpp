#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "pstab/error.hpp"

namespace pstab {

using Vector = std::vector<double>;
using Complex = std::complex<double>;

/// Dense real matrix with 1..16 rows and columns, stored row-major.
///
/// Value type: copies are deep and instances are never shared mutably, so
/// any number of threads may read the same matrix.
class SmallMatrix {
public:
    static constexpr std::size_t kMaxDim = 16;

    /// 1x1 zero matrix.
    SmallMatrix() : SmallMatrix(1, 1) {}
    SmallMatrix(std::size_t rows, std::size_t cols);
    /// Throws ErrorKind::input when the data length or any entry is invalid.
    SmallMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    SmallMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static SmallMatrix identity(std::size_t n);
    static SmallMatrix diagonal(std::span<const double> d);
    static SmallMatrix column(std::span<const double> v);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool isSquare() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> data() const noexcept { return data_; }

    SmallMatrix& operator+=(const SmallMatrix& other);
    SmallMatrix& operator-=(const SmallMatrix& other);
    SmallMatrix& operator*=(double s);

    SmallMatrix transpose() const;
    double trace() const;

    friend bool operator==(const SmallMatrix&, const SmallMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

SmallMatrix operator+(SmallMatrix a, const SmallMatrix& b);
SmallMatrix operator-(SmallMatrix a, const SmallMatrix& b);
SmallMatrix operator*(SmallMatrix a, double s);
SmallMatrix operator*(double s, SmallMatrix a);
SmallMatrix operator*(const SmallMatrix& a, const SmallMatrix& b);
Vector operator*(const SmallMatrix& a, std::span<const double> x);

/// Block matrix [a_ij * b]. Throws ErrorKind::size past kMaxDim.
SmallMatrix kron(const SmallMatrix& a, const SmallMatrix& b);
/// Tensor product of column vectors; length is a.size() * b.size().
Vector kron(std::span<const double> a, std::span<const double> b);

/// Scaling and squaring around a degree-13 Pade approximant.
SmallMatrix expm(const SmallMatrix& a);

/// Solves a * x = b by LU with partial pivoting. Throws numerical on singular a.
SmallMatrix solve(const SmallMatrix& a, const SmallMatrix& b);
double determinant(const SmallMatrix& a);
SmallMatrix power(const SmallMatrix& a, unsigned n);

double frobeniusNorm(const SmallMatrix& a);
double norm1(const SmallMatrix& a);
double maxAbsDiff(const SmallMatrix& a, const SmallMatrix& b);

/// Singular values in descending order (one-sided Jacobi).
std::vector<double> singularValues(const SmallMatrix& a);
/// Largest singular value.
double operatorNorm(const SmallMatrix& a);

double norm2(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
Vector axpy(double alpha, std::span<const double> x, std::span<const double> y);

struct Spectrum {
    std::vector<Complex> eigenvalues;
    double spectralRadius = 0.0;
};

/// Eigenvalues with multiplicity. Closed form for 2x2, Hessenberg + shifted QR
/// otherwise. Throws ErrorKind::numerical if QR exceeds kEigenIterationCap.
Spectrum spectrum(const SmallMatrix& a);
inline constexpr int kEigenIterationCap = 10000;

/// Largest real part over the eigenvalues.
double spectralAbscissa(const SmallMatrix& a);

/// Unit eigenvector for each eigenvalue in `spec`, by complex inverse iteration.
std::vector<std::vector<Complex>> eigenvectors(const SmallMatrix& a, const Spectrum& spec);

/// ||V||_F * ||V^-1||_F for the eigenvector matrix V; +inf when V is singular.
double eigenvectorCondition(const SmallMatrix& a, const Spectrum& spec);

/// Greedy nearest-neighbour matching of two eigenvalue multisets.
/// Returns the largest matched distance, +inf if the sizes differ.
double multisetDistance(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace pstab
