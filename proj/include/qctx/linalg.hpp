#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qctx/tolerance.hpp"

namespace qctx {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

// Largest admitted operator dimension (composite spaces included).
inline constexpr std::size_t kMaxDimension = 4096;

/// Dense square complex matrix, row-major. Entries are always finite.
///
/// Composite spaces follow the system-left, meter-right convention: for
/// H (dim d_H) tensored with K (dim d_K) the composite index is i_H * d_K + i_K.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix zero(std::size_t dim) { return ComplexMatrix(dim); }
    static ComplexMatrix diagonal(std::span<const double> values);
    static ComplexMatrix outer(std::span<const Complex> ket, std::span<const Complex> bra);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return entries_.size(); }

    Complex operator()(std::size_t row, std::size_t col) const noexcept {
        return entries_[row * dim_ + col];
    }
    Complex& operator()(std::size_t row, std::size_t col) noexcept {
        return entries_[row * dim_ + col];
    }

    std::span<const Complex> data() const noexcept { return entries_; }
    std::span<Complex> data() noexcept { return entries_; }

    Complex trace() const noexcept;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scale) noexcept;

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

private:
    std::size_t dim_ = 0;
    std::vector<Complex> entries_;
};

struct Eigensystem {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // column k belongs to eigenvalues[k]

    ComplexVector eigenvector(std::size_t k) const;
};

// Throws NonFiniteError naming the first bad entry.
void ensure_finite(const ComplexMatrix& a);
void ensure_finite(std::span<const Complex> v);
// Throws CapacityError when dim exceeds kMaxDimension.
void ensure_capacity(std::size_t dim);

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexVector matvec(const ComplexMatrix& a, std::span<const Complex> v);

// Kronecker product; left factor is the system, right factor the meter.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
// Traces out the right (meter) factor.
ComplexMatrix partial_trace_right(const ComplexMatrix& m, std::size_t dim_left, std::size_t dim_right);
// Traces out the left (system) factor.
ComplexMatrix partial_trace_left(const ComplexMatrix& m, std::size_t dim_left, std::size_t dim_right);

double frobenius_norm(const ComplexMatrix& a) noexcept;
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);
double vector_norm(std::span<const Complex> v) noexcept;

// ||a - a^dagger||_F and ||a a^dagger - I||_F.
double hermiticity_residual(const ComplexMatrix& a) noexcept;
double unitarity_residual(const ComplexMatrix& a);

// Scale used for relative tolerances: max(1, ||a||_F).
double tolerance_scale(const ComplexMatrix& a) noexcept;

// Throws HermiticityError / UnitarityError when the residual exceeds
// tol * tolerance_scale(a).
void require_hermitian(const ComplexMatrix& a, double tol = default_tolerance());
void require_unitary(const ComplexMatrix& a, double tol = default_tolerance());

// Real eigenvalues in ascending order with orthonormal eigenvectors.
// Degenerate eigenvalues are reported individually, never merged.
Eigensystem hermitian_eigensystem(const ComplexMatrix& a, double tol = default_tolerance());

// exp(-i t h) for Hermitian h, via the spectral decomposition.
ComplexMatrix expm_skew(const ComplexMatrix& h, double t, double tol = default_tolerance());
// Same, from a precomputed eigensystem; lets many times share one solve.
ComplexMatrix spectral_exponential(const Eigensystem& es, double t);

// Reassembles sum_k f(lambda_k) |v_k><v_k| for real f values.
ComplexMatrix spectral_sum(const Eigensystem& es, std::span<const double> values);

}  // namespace qctx
