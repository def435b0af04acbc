#include "qctx/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qctx/errors.hpp"

namespace qctx {

namespace {

constexpr double kBornFormTolerance = 1e-10;

void require_matching(std::size_t a, std::size_t b, const char* op) {
    if (a != b) {
        std::ostringstream os;
        os << op << ": observable dim " << a << " vs state dim " << b;
        throw DimensionError(os.str());
    }
}

bool same_outcome(double x, double value, double cluster_tol) {
    const double slack = std::max(cluster_tol, 1e-9 * std::max(1.0, std::abs(value)));
    return std::abs(x - value) <= slack;
}

}  // namespace

DensityOperator DensityOperator::from_matrix(ComplexMatrix m, double tol) {
    ensure_finite(m);
    require_hermitian(m, tol);
    const Complex tr = m.trace();
    const double trace_err = std::abs(tr - 1.0);
    if (trace_err > tol) {
        std::ostringstream os;
        os << "density operator must have unit trace, got " << tr.real() << (tr.imag() >= 0 ? "+" : "")
           << tr.imag() << "i";
        throw NormalizationError(os.str(), trace_err);
    }
    const auto es = hermitian_eigensystem(m, tol);
    const double smallest = es.eigenvalues.empty() ? 0.0 : es.eigenvalues.front();
    if (smallest < -tol) {
        std::ostringstream os;
        os << "density operator is not positive semidefinite: smallest eigenvalue " << smallest;
        throw PositivityError(os.str(), -smallest);
    }
    return DensityOperator(std::move(m));
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
    if (dim == 0) throw DimensionError("maximally_mixed: dimension must be positive");
    return DensityOperator(ComplexMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim)));
}

double DensityOperator::purity() const { return trace_of_product(mat_, mat_).real(); }

ComplexVector normalized(std::span<const Complex> amplitudes) {
    ensure_finite(amplitudes);
    const double norm = vector_norm(amplitudes);
    if (amplitudes.empty() || norm == 0.0) throw DegenerateInputError("state vector must be nonzero");
    ComplexVector out(amplitudes.begin(), amplitudes.end());
    for (auto& a : out) a /= norm;
    return out;
}

DensityOperator pure_state(std::span<const Complex> amplitudes) {
    const auto psi = normalized(amplitudes);
    ensure_capacity(psi.size());
    return DensityOperator::from_matrix(ComplexMatrix::outer(psi, psi));
}

Observable make_observable(const ComplexMatrix& mat, double cluster_tol, double tol) {
    ensure_finite(mat);
    const auto es = hermitian_eigensystem(mat, tol);
    const std::size_t n = mat.dim();

    Observable obs;
    obs.mat_ = mat;
    obs.cluster_tol_ = cluster_tol;

    std::size_t start = 0;
    while (start < n) {
        // Single-linkage: extend while consecutive gaps stay within cluster_tol.
        std::size_t end = start + 1;
        while (end < n && es.eigenvalues[end] - es.eigenvalues[end - 1] <= cluster_tol) ++end;

        double mean = 0.0;
        ComplexMatrix proj(n);
        for (std::size_t k = start; k < end; ++k) {
            mean += es.eigenvalues[k];
            for (std::size_t i = 0; i < n; ++i) {
                const Complex vi = es.eigenvectors(i, k);
                for (std::size_t j = 0; j < n; ++j) proj(i, j) += vi * std::conj(es.eigenvectors(j, k));
            }
        }
        mean /= static_cast<double>(end - start);
        obs.spectrum_.push_back({mean, std::move(proj), end - start});
        start = end;
    }
    return obs;
}

std::optional<std::size_t> Observable::find_outcome(double x) const noexcept {
    std::optional<std::size_t> best;
    double best_gap = 0.0;
    for (std::size_t k = 0; k < spectrum_.size(); ++k) {
        const double gap = std::abs(x - spectrum_[k].value);
        if (same_outcome(x, spectrum_[k].value, cluster_tol_) && (!best || gap < best_gap)) {
            best = k;
            best_gap = gap;
        }
    }
    return best;
}

std::size_t Observable::outcome_index(double x) const {
    if (auto k = find_outcome(x)) return *k;
    std::ostringstream os;
    os.precision(12);
    os << "value " << x << " is not an outcome of the observable";
    throw OutcomeError(os.str());
}

double Observable::spectral_residual() const {
    const std::size_t n = dim();
    double worst = 0.0;
    ComplexMatrix total(n);
    ComplexMatrix rebuilt(n);
    for (std::size_t j = 0; j < spectrum_.size(); ++j) {
        const auto& ej = spectrum_[j].projection;
        total += ej;
        rebuilt += ej * Complex(spectrum_[j].value);
        worst = std::max(worst, hermiticity_residual(ej));
        worst = std::max(worst, frobenius_distance(matmul(ej, ej), ej));
        for (std::size_t k = j + 1; k < spectrum_.size(); ++k)
            worst = std::max(worst, frobenius_norm(matmul(ej, spectrum_[k].projection)));
    }
    worst = std::max(worst, frobenius_distance(total, ComplexMatrix::identity(n)));
    worst = std::max(worst, frobenius_distance(rebuilt, mat_));
    return worst;
}

double OutcomeDistribution::total() const noexcept {
    double s = 0.0;
    for (const auto& e : entries) s += e.probability;
    return s;
}

double OutcomeDistribution::probability_of(double x) const {
    for (const auto& e : entries)
        if (same_outcome(x, e.value, 0.0)) return e.probability;
    std::ostringstream os;
    os.precision(12);
    os << "no outcome " << x << " in distribution";
    throw OutcomeError(os.str());
}

double clamp_probability(double p) noexcept { return std::clamp(p, 0.0, 1.0); }

std::string outcome_key(std::size_t index, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%zu:%.12g", index, value);
    return buf;
}

Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionError("trace_of_product: dimension mismatch");
    const std::size_t n = a.dim();
    Complex acc{};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) acc += a(i, k) * b(k, i);
    return acc;
}

OutcomeDistribution born_distribution(const Observable& a, const DensityOperator& rho) {
    require_matching(a.dim(), rho.dim(), "born_distribution");
    OutcomeDistribution dist;
    for (const auto& comp : a.spectrum()) {
        const double p = trace_of_product(comp.projection, rho.matrix()).real();
        const double sandwiched =
            trace_of_product(matmul(comp.projection, rho.matrix()), comp.projection).real();
        dist.consistency_residual = std::max(dist.consistency_residual, std::abs(p - sandwiched));
        dist.entries.push_back({comp.value, p});
    }
    if (dist.consistency_residual > kBornFormTolerance) {
        throw InvariantViolation("Born rule forms Tr[E rho] and Tr[E rho E] disagree", dist.consistency_residual);
    }
    return dist;
}

double expectation(const Observable& a, const DensityOperator& rho) {
    require_matching(a.dim(), rho.dim(), "expectation");
    const Complex v = trace_of_product(a.matrix(), rho.matrix());
    const double tol = default_tolerance() * tolerance_scale(a.matrix());
    if (std::abs(v.imag()) > tol) {
        throw InvariantViolation("expectation value has a non-negligible imaginary part", std::abs(v.imag()));
    }
    return v.real();
}

double variance(const Observable& a, const DensityOperator& rho) {
    const double mean = expectation(a, rho);
    ComplexMatrix centered = a.matrix();
    for (std::size_t i = 0; i < centered.dim(); ++i) centered(i, i) -= mean;
    const double v = trace_of_product(matmul(centered, centered), rho.matrix()).real();
    const double tol = default_tolerance() * tolerance_scale(a.matrix());
    if (v < -tol) throw InvariantViolation("negative variance", -v);
    return std::max(v, 0.0);
}

}  // namespace qctx
