#include "qctx/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "qctx/errors.hpp"

namespace qctx {

namespace {

ComplexMatrix conjugate_by(const ComplexMatrix& u, const ComplexMatrix& r) {
    return matmul(matmul(u, r), adjoint(u));
}

void require_time(double t) {
    if (!std::isfinite(t)) throw NonFiniteError("evolution time must be finite");
}

}  // namespace

CompositeHamiltonian::CompositeHamiltonian(ComplexMatrix h_system, ComplexMatrix h_meter,
                                           ComplexMatrix h_interaction, double tol)
    : h_system_(std::move(h_system)), h_meter_(std::move(h_meter)), h_interaction_(std::move(h_interaction)) {
    if (h_system_.dim() == 0 || h_meter_.dim() == 0) throw DimensionError("Hamiltonian parts must be non-empty");
    const std::size_t composite = h_system_.dim() * h_meter_.dim();
    ensure_capacity(composite);
    if (h_interaction_.dim() != composite) {
        std::ostringstream os;
        os << "interaction Hamiltonian dim " << h_interaction_.dim() << " != " << h_system_.dim() << " x "
           << h_meter_.dim();
        throw DimensionError(os.str());
    }
    require_hermitian(h_system_, tol);
    require_hermitian(h_meter_, tol);
    require_hermitian(h_interaction_, tol);
}

CompositeHamiltonian::CompositeHamiltonian(ComplexMatrix h_system, ComplexMatrix h_meter, double tol)
    : CompositeHamiltonian(h_system, h_meter, ComplexMatrix::zero(h_system.dim() * h_meter.dim()), tol) {}

ComplexMatrix total_hamiltonian(const CompositeHamiltonian& ch) {
    ComplexMatrix h = tensor(ch.h_system(), ComplexMatrix::identity(ch.dim_meter()));
    h += tensor(ComplexMatrix::identity(ch.dim_system()), ch.h_meter());
    h += ch.h_interaction();
    return h;
}

Evolution::Evolution(const CompositeHamiltonian& ch) : h_(total_hamiltonian(ch)) {
    spectrum_ = hermitian_eigensystem(h_);
}

ComplexMatrix Evolution::propagator(double t) const {
    require_time(t);
    return spectral_exponential(spectrum_, t);
}

ComplexMatrix propagator(const CompositeHamiltonian& ch, double t) { return Evolution(ch).propagator(t); }

ComplexVector evolve_pure(std::span<const Complex> psi0, const CompositeHamiltonian& ch, double t) {
    if (psi0.size() != ch.dim()) {
        throw DimensionError("evolve_pure: state length " + std::to_string(psi0.size()) + " vs composite dim " +
                             std::to_string(ch.dim()));
    }
    ensure_finite(psi0);
    const double norm_err = std::abs(vector_norm(psi0) - 1.0);
    if (norm_err > default_tolerance()) {
        throw NormalizationError("evolve_pure: initial state is not normalized", norm_err);
    }
    return matvec(propagator(ch, t), psi0);
}

DensityOperator evolve_density(const DensityOperator& r0, const CompositeHamiltonian& ch, double t) {
    if (r0.dim() != ch.dim()) {
        throw DimensionError("evolve_density: state dim " + std::to_string(r0.dim()) + " vs composite dim " +
                             std::to_string(ch.dim()));
    }
    return DensityOperator::from_matrix(conjugate_by(propagator(ch, t), r0.matrix()));
}

double von_neumann_residual(const DensityOperator& r, const CompositeHamiltonian& ch, double t, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw NonFiniteError("von_neumann_residual: dt must be positive");
    if (r.dim() != ch.dim()) throw DimensionError("von_neumann_residual: state and Hamiltonian dims differ");
    const Evolution evo(ch);
    const ComplexMatrix& h = evo.hamiltonian();
    const ComplexMatrix now = conjugate_by(evo.propagator(t), r.matrix());
    const ComplexMatrix ahead = conjugate_by(evo.propagator(t + dt), r.matrix());
    const ComplexMatrix behind = conjugate_by(evo.propagator(t - dt), r.matrix());

    ComplexMatrix derivative = (ahead - behind) * Complex(1.0 / (2.0 * dt));
    const ComplexMatrix comm = matmul(h, now) - matmul(now, h);
    derivative += comm * Complex(0.0, 1.0);
    return frobenius_norm(derivative);
}

}  // namespace qctx
