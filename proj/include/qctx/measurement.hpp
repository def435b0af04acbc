#pragma once

#include <cstddef>
#include <vector>

#include "qctx/linalg.hpp"
#include "qctx/quantum.hpp"

namespace qctx {

// Conditioning on an outcome below this probability is refused.
inline constexpr double kNullEventProbability = 1e-12;
// Kraus operators keep Choi eigenvalues above this.
inline constexpr double kKrausCutoff = 1e-10;

/// Indirect measurement model: apparatus space K (dim_meter), apparatus state
/// sigma, interaction unitary U on H (x) K, and pointer observable M.
///
/// Outcome x of the pointer is read off the evolved joint state
/// U (rho (x) sigma) U^dagger; the system it is applied to must have
/// dimension u.dim() / dim_meter.
class MeasuringProcess {
public:
    MeasuringProcess(DensityOperator sigma, ComplexMatrix u, Observable meter, double tol = default_tolerance());

    std::size_t dim_meter() const noexcept { return sigma_.dim(); }
    std::size_t dim_system() const noexcept { return u_.dim() / sigma_.dim(); }
    const DensityOperator& sigma() const noexcept { return sigma_; }
    const ComplexMatrix& unitary() const noexcept { return u_; }
    const Observable& meter() const noexcept { return meter_; }

    // U (rho (x) sigma) U^dagger
    ComplexMatrix joint_state(const DensityOperator& rho) const;
    // I (x) E^M(x_k) for the k-th pointer outcome.
    ComplexMatrix lifted_projection(std::size_t k) const;

private:
    DensityOperator sigma_;
    ComplexMatrix u_;
    Observable meter_;
};

// p(x) = Tr[(I (x) E^M(x)) U (rho (x) sigma) U^dagger]; one entry per pointer outcome.
// consistency_residual holds |sum p - 1|.
OutcomeDistribution outcome_probabilities(const MeasuringProcess& mp, const DensityOperator& rho);

// I_x(rho) = Tr_K[(I (x) E^M(x)) U (rho (x) sigma) U^dagger], unnormalized.
ComplexMatrix apply_instrument(const MeasuringProcess& mp, const DensityOperator& rho, double outcome);
ComplexMatrix apply_instrument_at(const MeasuringProcess& mp, const DensityOperator& rho, std::size_t k);

// Same map on an arbitrary (unnormalized, PSD) system operator. The Choi
// extraction feeds it the PSD basis states.
ComplexMatrix apply_instrument_to(const MeasuringProcess& mp, const ComplexMatrix& x, std::size_t k);

// I_x(rho) / Tr[I_x(rho)]; ZeroProbabilityError when p(x) <= kNullEventProbability.
DensityOperator selective_post_state(const MeasuringProcess& mp, const DensityOperator& rho, double outcome);

// sum_x I_x(rho)
DensityOperator nonselective_post_state(const MeasuringProcess& mp, const DensityOperator& rho);

// Canonical dilation of a projective measurement of a: K = C^m,
// sigma = |0><0|, U = sum_k E(x_k) (x) S^k with S the cyclic shift,
// M = sum_k x_k |k><k|. Outcome k is the k-th ascending eigenvalue of a.
MeasuringProcess build_von_neumann_model(const Observable& a);

// Cyclic shift |j> -> |j + k mod m>.
ComplexMatrix cyclic_shift(std::size_t m, std::size_t k);

/// One branch x -> I_x of a quantum instrument, stored as its Choi matrix
/// C = sum_ij |i><j| (x) I_x(|i><j|) (input factor left, output right).
struct InstrumentBranch {
    double outcome;
    ComplexMatrix choi;
    double choi_min_eigenvalue;

    std::size_t dim_system() const noexcept;
    ComplexMatrix apply(const ComplexMatrix& rho) const;
    // Rank-truncated Kraus decomposition: eigenvectors of C with eigenvalue > kKrausCutoff.
    std::vector<ComplexMatrix> kraus() const;
};

struct Instrument {
    std::size_t dim_system = 0;
    std::vector<InstrumentBranch> branches;
    // || Tr_out(sum_x C_x) - I ||_F : zero iff the summed map is trace preserving.
    double trace_preservation_residual = 0.0;

    ComplexMatrix apply(std::size_t branch, const ComplexMatrix& rho) const { return branches.at(branch).apply(rho); }
    // sum_x Tr[I_x(rho)]
    double total_probability(const ComplexMatrix& rho) const;
};

// Recovers each branch's Choi matrix from the instrument's action on PSD basis
// states, then checks complete positivity (Choi min eigenvalue >= -tol) and
// trace preservation (residual <= tol). Failures throw InstrumentAxiomError.
Instrument extract_instrument(const MeasuringProcess& mp, std::size_t dim_system, double tol = default_tolerance());

// Choi matrix of rho -> sum_i K_i rho K_i^dagger, built directly from the Kraus operators.
ComplexMatrix choi_from_kraus(const std::vector<ComplexMatrix>& kraus);

}  // namespace qctx
