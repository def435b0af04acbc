#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qctx/linalg.hpp"

namespace qctx {

inline constexpr double kDefaultClusterTolerance = 1e-8;

/// Quantum state: Hermitian, positive semidefinite, unit trace.
class DensityOperator {
public:
    // Validates all three invariants against tol (relative to ||m||_F for
    // Hermiticity, absolute for trace and smallest eigenvalue).
    static DensityOperator from_matrix(ComplexMatrix m, double tol = default_tolerance());
    static DensityOperator maximally_mixed(std::size_t dim);

    const ComplexMatrix& matrix() const noexcept { return mat_; }
    std::size_t dim() const noexcept { return mat_.dim(); }
    double purity() const;

private:
    explicit DensityOperator(ComplexMatrix m) : mat_(std::move(m)) {}
    ComplexMatrix mat_;
};

// Normalizes and returns |psi><psi|. Zero vector -> DegenerateInputError.
DensityOperator pure_state(std::span<const Complex> amplitudes);
ComplexVector normalized(std::span<const Complex> amplitudes);

struct SpectralComponent {
    double value;              // eigenvalue x_k
    ComplexMatrix projection;  // E(x_k)
    std::size_t multiplicity;
};

/// Hermitian operator together with its spectral resolution A = sum_k x_k E(x_k),
/// outcomes sorted ascending and degenerate eigenvalues merged.
class Observable {
public:
    const ComplexMatrix& matrix() const noexcept { return mat_; }
    std::size_t dim() const noexcept { return mat_.dim(); }
    std::span<const SpectralComponent> spectrum() const noexcept { return spectrum_; }
    std::size_t outcome_count() const noexcept { return spectrum_.size(); }
    double cluster_tolerance() const noexcept { return cluster_tol_; }

    // Index of the outcome matching x within the clustering tolerance (or
    // 1e-9 relative, whichever is looser); nullopt if none.
    std::optional<std::size_t> find_outcome(double x) const noexcept;
    // Same, but throws OutcomeError.
    std::size_t outcome_index(double x) const;

    // Largest violation of idempotency, orthogonality, completeness and
    // reconstruction, in Frobenius norm.
    double spectral_residual() const;

private:
    friend Observable make_observable(const ComplexMatrix& mat, double cluster_tol, double tol);
    ComplexMatrix mat_;
    std::vector<SpectralComponent> spectrum_;
    double cluster_tol_ = kDefaultClusterTolerance;
};

Observable make_observable(const ComplexMatrix& mat, double cluster_tol = kDefaultClusterTolerance,
                           double tol = default_tolerance());

struct Outcome {
    double value;
    double probability;  // raw, unclamped
};

struct OutcomeDistribution {
    std::vector<Outcome> entries;
    // Per-computation consistency residual (meaning depends on the producer;
    // for the Born rule it is max |Tr[E rho] - Tr[E rho E]|).
    double consistency_residual = 0.0;

    double total() const noexcept;
    // Probability of the outcome at x (1e-9 relative match); OutcomeError if absent.
    double probability_of(double x) const;
};

// Clamps to [0, 1]; used only when emitting.
double clamp_probability(double p) noexcept;

// Stable report key: "<index>:<value at 12 significant digits>".
std::string outcome_key(std::size_t index, double value);

OutcomeDistribution born_distribution(const Observable& a, const DensityOperator& rho);
double expectation(const Observable& a, const DensityOperator& rho);
double variance(const Observable& a, const DensityOperator& rho);

// Re Tr[a b] without forming the product.
Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qctx
