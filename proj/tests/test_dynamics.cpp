#include <cmath>
#include <numbers>

#include "qctx/dynamics.hpp"
#include "qctx/errors.hpp"
#include "qctx/random.hpp"
#include "test_support.hpp"

using namespace qctx;
using namespace qctx::test;

TEST(Dynamics, RabiFlip) {
    // H = sigma_x (x) sigma_x, U(pi/2) = -i sigma_x (x) sigma_x, so |00> -> -i|11>.
    const CompositeHamiltonian ch(ComplexMatrix::zero(2), ComplexMatrix::zero(2), tensor(sigma_x(), sigma_x()));
    const ComplexVector psi = evolve_pure(ComplexVector{1.0, 0.0, 0.0, 0.0}, ch, std::numbers::pi / 2);
    EXPECT_NEAR(std::abs(psi[0]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(psi[1]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(psi[2]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(psi[3] - Complex(0.0, -1.0)), 0.0, 1e-15);
}

TEST(Dynamics, TotalHamiltonianLayout) {
    const CompositeHamiltonian ch(sigma_z(), 2.0 * sigma_x());
    const ComplexMatrix expected = tensor(sigma_z(), id(2)) + tensor(id(2), 2.0 * sigma_x());
    EXPECT_TRUE(matrix_near(total_hamiltonian(ch), expected, 0.0));
    EXPECT_EQ(ch.dim(), 4u);
}

TEST(Dynamics, LocalPhase) {
    // H_S = sigma_z alone: |+> (x) |0> picks up relative phase e^{-2it}.
    const CompositeHamiltonian ch(sigma_z(), ComplexMatrix::zero(2));
    const double t = 0.3;
    const double r = 1.0 / std::sqrt(2.0);
    const ComplexVector psi = evolve_pure(ComplexVector{r, 0.0, r, 0.0}, ch, t);
    EXPECT_NEAR(std::abs(psi[0] - r * std::polar(1.0, -t)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(psi[2] - r * std::polar(1.0, t)), 0.0, 1e-15);
}

TEST(Dynamics, Errors) {
    EXPECT_THROW(CompositeHamiltonian(id(2), id(2), id(3)), DimensionError);
    EXPECT_THROW(CompositeHamiltonian(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}, id(2)), HermiticityError);
    const CompositeHamiltonian ch(sigma_z(), sigma_x());
    EXPECT_THROW(evolve_pure(ComplexVector{1.0, 0.0}, ch, 1.0), DimensionError);
    EXPECT_THROW(evolve_pure(ComplexVector{1.0, 1.0, 0.0, 0.0}, ch, 1.0), NormalizationError);
    EXPECT_THROW(propagator(ch, INFINITY), NonFiniteError);
    EXPECT_THROW(von_neumann_residual(DensityOperator::maximally_mixed(4), ch, 0.0, 0.0), NonFiniteError);
}

namespace {

CompositeHamiltonian random_composite(std::size_t ds, std::size_t dm, Rng& rng) {
    return CompositeHamiltonian(random_hermitian(ds, rng), random_hermitian(dm, rng), random_hermitian(ds * dm, rng));
}

}  // namespace

TEST(DynamicsProperty, PropagatorComposition) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        Rng rng(21, s);
        const CompositeHamiltonian ch = random_composite(2, 3, rng);
        const Evolution evo(ch);
        const double t1 = rng.normal(), t2 = rng.normal();
        EXPECT_LE(unitarity_residual(evo.propagator(t1)), 1e-10);
        EXPECT_LE(frobenius_distance(evo.propagator(t1) * evo.propagator(t2), evo.propagator(t1 + t2)), 1e-10);
        EXPECT_LE(frobenius_distance(adjoint(evo.propagator(t1)), evo.propagator(-t1)), 1e-10);
    }
}

TEST(DynamicsProperty, SpectrumPreserved) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        Rng rng(22, s);
        const CompositeHamiltonian ch = random_composite(3, 2, rng);
        const DensityOperator r0 = random_density(6, rng);
        const DensityOperator rt = evolve_density(r0, ch, 2.0 * rng.uniform());
        const auto e0 = hermitian_eigensystem(r0.matrix()).eigenvalues;
        const auto et = hermitian_eigensystem(rt.matrix()).eigenvalues;
        for (std::size_t k = 0; k < e0.size(); ++k) EXPECT_NEAR(e0[k], et[k], 1e-10);
        EXPECT_NEAR(rt.purity(), r0.purity(), 1e-10);
    }
}

TEST(DynamicsProperty, PureAndDensityAgree) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        Rng rng(23, s);
        const CompositeHamiltonian ch = random_composite(2, 2, rng);
        const ComplexVector psi0 = random_pure_vector(4, rng);
        const double t = 3.0 * rng.uniform();
        const ComplexVector psi = evolve_pure(psi0, ch, t);
        EXPECT_NEAR(vector_norm(psi), 1.0, 1e-12);
        const DensityOperator rt = evolve_density(pure_state(psi0), ch, t);
        EXPECT_LE(frobenius_distance(ComplexMatrix::outer(psi, psi), rt.matrix()), 1e-9);
    }
}

TEST(DynamicsProperty, ResidualIsSecondOrder) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        Rng rng(24, s);
        const CompositeHamiltonian ch = random_composite(2, 2, rng);
        const DensityOperator r0 = random_density(4, rng);
        const double t = rng.uniform();
        const double coarse = von_neumann_residual(r0, ch, t, 1e-2);
        const double fine = von_neumann_residual(r0, ch, t, 5e-3);
        ASSERT_GT(fine, 0.0);
        const double ratio = coarse / fine;
        EXPECT_GE(ratio, 3.5);
        EXPECT_LE(ratio, 4.5);
    }
}

TEST(DynamicsProperty, StationaryStateHasTinyResidual) {
    // A state commuting with H does not move, so only rounding remains.
    const CompositeHamiltonian ch(sigma_z(), sigma_z());
    const auto r = DensityOperator::from_matrix(diag({0.4, 0.3, 0.2, 0.1}));
    EXPECT_LE(von_neumann_residual(r, ch, 0.7), 1e-10);
}
