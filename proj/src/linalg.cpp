#include "qctx/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "qctx/errors.hpp"
#include "qctx/kernels.hpp"

namespace qctx {

namespace {

using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.dim() != b.dim()) {
        std::ostringstream os;
        os << op << ": dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
        throw DimensionError(os.str());
    }
}

}  // namespace

void ensure_capacity(std::size_t dim) {
    if (dim > kMaxDimension) {
        throw CapacityError("dimension " + std::to_string(dim) + " exceeds the supported maximum of " +
                            std::to_string(kMaxDimension));
    }
}

void ensure_finite(std::span<const Complex> v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) {
            throw NonFiniteError("non-finite entry at index " + std::to_string(i));
        }
    }
}

void ensure_finite(const ComplexMatrix& a) {
    const auto d = a.data();
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (!std::isfinite(d[i].real()) || !std::isfinite(d[i].imag())) {
            throw NonFiniteError("non-finite entry at (" + std::to_string(i / a.dim()) + ", " +
                                 std::to_string(i % a.dim()) + ")");
        }
    }
}

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim) {
    ensure_capacity(dim);
    entries_.assign(dim * dim, Complex{});
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
    ensure_capacity(dim);
    if (entries_.size() != dim * dim) {
        throw DimensionError("expected " + std::to_string(dim * dim) + " entries for dim " +
                             std::to_string(dim) + ", got " + std::to_string(entries_.size()));
    }
    ensure_finite(*this);
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
    ensure_capacity(dim_);
    entries_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
        if (row.size() != dim_) throw DimensionError("matrix rows must all have length " + std::to_string(dim_));
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
    ensure_finite(*this);
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    ensure_finite(m);
    return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> ket, std::span<const Complex> bra) {
    if (ket.size() != bra.size()) throw DimensionError("outer: vector lengths differ");
    ComplexMatrix m(ket.size());
    for (std::size_t i = 0; i < ket.size(); ++i)
        for (std::size_t j = 0; j < bra.size(); ++j) m(i, j) = ket[i] * std::conj(bra[j]);
    return m;
}

Complex ComplexMatrix::trace() const noexcept {
    Complex t{};
    for (std::size_t i = 0; i < dim_; ++i) t += entries_[i * dim_ + i];
    return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    require_same_dim(*this, other, "add");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    require_same_dim(*this, other, "subtract");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) noexcept {
    for (auto& e : entries_) e *= scale;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

ComplexVector Eigensystem::eigenvector(std::size_t k) const {
    ComplexVector v(eigenvectors.dim());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = eigenvectors(i, k);
    return v;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "matmul");
    ComplexMatrix out(a.dim());
    kernels::omp::matmul(a.data(), b.data(), out.data(), a.dim());
    return out;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) out(j, i) = std::conj(a(i, j));
    return out;
}

ComplexVector matvec(const ComplexMatrix& a, std::span<const Complex> v) {
    if (v.size() != a.dim()) {
        throw DimensionError("matvec: matrix dim " + std::to_string(a.dim()) + " vs vector length " +
                             std::to_string(v.size()));
    }
    ComplexVector out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        Complex acc{};
        for (std::size_t j = 0; j < a.dim(); ++j) acc += a(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t n = a.dim() * b.dim();
    ensure_capacity(n);
    ComplexMatrix out(n);
    kernels::omp::tensor(a.data(), a.dim(), b.data(), b.dim(), out.data());
    return out;
}

ComplexMatrix partial_trace_right(const ComplexMatrix& m, std::size_t dim_left, std::size_t dim_right) {
    if (dim_left == 0 || dim_right == 0 || m.dim() != dim_left * dim_right) {
        throw DimensionError("partial_trace_right: dim " + std::to_string(m.dim()) + " is not " +
                             std::to_string(dim_left) + " x " + std::to_string(dim_right));
    }
    ComplexMatrix out(dim_left);
    kernels::omp::partial_trace_right(m.data(), dim_left, dim_right, out.data());
    return out;
}

ComplexMatrix partial_trace_left(const ComplexMatrix& m, std::size_t dim_left, std::size_t dim_right) {
    if (dim_left == 0 || dim_right == 0 || m.dim() != dim_left * dim_right) {
        throw DimensionError("partial_trace_left: dim " + std::to_string(m.dim()) + " is not " +
                             std::to_string(dim_left) + " x " + std::to_string(dim_right));
    }
    ComplexMatrix out(dim_right);
    kernels::omp::partial_trace_left(m.data(), dim_left, dim_right, out.data());
    return out;
}

double frobenius_norm(const ComplexMatrix& a) noexcept {
    double acc = 0.0;
    for (const auto& e : a.data()) acc += std::norm(e);
    return std::sqrt(acc);
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "frobenius_distance");
    double acc = 0.0;
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) acc += std::norm(da[i] - db[i]);
    return std::sqrt(acc);
}

double vector_norm(std::span<const Complex> v) noexcept {
    double acc = 0.0;
    for (const auto& e : v) acc += std::norm(e);
    return std::sqrt(acc);
}

double hermiticity_residual(const ComplexMatrix& a) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) acc += std::norm(a(i, j) - std::conj(a(j, i)));
    return std::sqrt(acc);
}

double unitarity_residual(const ComplexMatrix& a) {
    return frobenius_distance(matmul(a, adjoint(a)), ComplexMatrix::identity(a.dim()));
}

double tolerance_scale(const ComplexMatrix& a) noexcept { return std::max(1.0, frobenius_norm(a)); }

void require_hermitian(const ComplexMatrix& a, double tol) {
    const double r = hermiticity_residual(a);
    if (r > tol * tolerance_scale(a)) {
        std::ostringstream os;
        os << "matrix is not Hermitian: ||A - A^dagger||_F = " << r;
        throw HermiticityError(os.str(), r);
    }
}

void require_unitary(const ComplexMatrix& a, double tol) {
    const double r = unitarity_residual(a);
    if (r > tol * tolerance_scale(a)) {
        std::ostringstream os;
        os << "matrix is not unitary: ||U U^dagger - I||_F = " << r;
        throw UnitarityError(os.str(), r);
    }
}

Eigensystem hermitian_eigensystem(const ComplexMatrix& a, double tol) {
    require_hermitian(a, tol);
    const std::size_t n = a.dim();
    Eigensystem es;
    if (n == 0) return es;

    // Symmetrize so the solver sees an exactly Hermitian operand.
    Eigen::Map<const RowMajorMatrix> raw(a.data().data(), static_cast<Eigen::Index>(n),
                                         static_cast<Eigen::Index>(n));
    const RowMajorMatrix herm = 0.5 * (raw + raw.adjoint());
    Eigen::SelfAdjointEigenSolver<RowMajorMatrix> solver(herm, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw InvariantViolation("eigensolver failed to converge", 0.0);

    es.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    es.eigenvectors = ComplexMatrix(n);
    const auto& v = solver.eigenvectors();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            es.eigenvectors(i, k) = v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
    return es;
}

ComplexMatrix spectral_exponential(const Eigensystem& es, double t) {
    const std::size_t n = es.eigenvectors.dim();
    std::vector<Complex> phases(n);
    for (std::size_t k = 0; k < n; ++k) phases[k] = std::polar(1.0, -t * es.eigenvalues[k]);

    // V diag(phases) V^dagger
    ComplexMatrix scaled = es.eigenvectors;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) scaled(i, k) *= phases[k];
    return matmul(scaled, adjoint(es.eigenvectors));
}

ComplexMatrix expm_skew(const ComplexMatrix& h, double t, double tol) {
    if (!std::isfinite(t)) throw NonFiniteError("expm_skew: time must be finite");
    return spectral_exponential(hermitian_eigensystem(h, tol), t);
}

ComplexMatrix spectral_sum(const Eigensystem& es, std::span<const double> values) {
    const std::size_t n = es.eigenvectors.dim();
    if (values.size() != n) throw DimensionError("spectral_sum: one value per eigenvector required");
    ComplexMatrix scaled = es.eigenvectors;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) scaled(i, k) *= values[k];
    return matmul(scaled, adjoint(es.eigenvectors));
}

}  // namespace qctx
