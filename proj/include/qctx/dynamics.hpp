#pragma once

#include <cstddef>
#include <span>

#include "qctx/linalg.hpp"
#include "qctx/quantum.hpp"

namespace qctx {

inline constexpr double kDefaultResidualStep = 1e-4;

/// H = H_S (x) I + I (x) H_M + H_SM on the system (x) meter space, hbar = 1.
class CompositeHamiltonian {
public:
    // Validates Hermiticity of all three parts and the composite dimension.
    CompositeHamiltonian(ComplexMatrix h_system, ComplexMatrix h_meter, ComplexMatrix h_interaction,
                         double tol = default_tolerance());
    // Interaction-free convenience form.
    CompositeHamiltonian(ComplexMatrix h_system, ComplexMatrix h_meter, double tol = default_tolerance());

    const ComplexMatrix& h_system() const noexcept { return h_system_; }
    const ComplexMatrix& h_meter() const noexcept { return h_meter_; }
    const ComplexMatrix& h_interaction() const noexcept { return h_interaction_; }
    std::size_t dim_system() const noexcept { return h_system_.dim(); }
    std::size_t dim_meter() const noexcept { return h_meter_.dim(); }
    std::size_t dim() const noexcept { return h_interaction_.dim(); }

private:
    ComplexMatrix h_system_;
    ComplexMatrix h_meter_;
    ComplexMatrix h_interaction_;
};

ComplexMatrix total_hamiltonian(const CompositeHamiltonian& ch);

// One eigendecomposition of H shared by every time it is asked for.
class Evolution {
public:
    explicit Evolution(const CompositeHamiltonian& ch);

    const ComplexMatrix& hamiltonian() const noexcept { return h_; }
    ComplexMatrix propagator(double t) const;

private:
    ComplexMatrix h_;
    Eigensystem spectrum_;
};

ComplexMatrix propagator(const CompositeHamiltonian& ch, double t);

// U(t) psi0. psi0 must be normalized within the default tolerance.
ComplexVector evolve_pure(std::span<const Complex> psi0, const CompositeHamiltonian& ch, double t);

// U(t) R0 U(t)^dagger.
DensityOperator evolve_density(const DensityOperator& r0, const CompositeHamiltonian& ch, double t);

// || (R(t+dt) - R(t-dt)) / (2 dt) + i [H, R(t)] ||_F with R(t) evolved from r.
double von_neumann_residual(const DensityOperator& r, const CompositeHamiltonian& ch, double t,
                            double dt = kDefaultResidualStep);

}  // namespace qctx
