#include <cmath>

#include "qctx/errors.hpp"
#include "qctx/random.hpp"
#include "test_support.hpp"

using namespace qctx;
using namespace qctx::test;

TEST(Linalg, PauliProducts) {
    // sigma_x sigma_z = -i sigma_y
    EXPECT_TRUE(matrix_near(sigma_x() * sigma_z(), ComplexMatrix{{0.0, -1.0}, {1.0, 0.0}}, 1e-15));
    EXPECT_TRUE(matrix_near(sigma_x() * sigma_y(), I * sigma_z(), 1e-15));
    EXPECT_TRUE(matrix_near(sigma_y() * sigma_y(), id(2), 1e-15));
}

TEST(Linalg, AdjointAndTrace) {
    ComplexMatrix a{{1.0, Complex(2.0, 1.0)}, {Complex(0.0, 3.0), 4.0}};
    ComplexMatrix expected{{1.0, Complex(0.0, -3.0)}, {Complex(2.0, -1.0), 4.0}};
    EXPECT_TRUE(matrix_near(adjoint(a), expected, 0.0));
    EXPECT_EQ(a.trace(), Complex(5.0, 0.0));
}

TEST(Linalg, TensorOrderingIsLeftMajor) {
    // |1> (x) |0> on C^2 (x) C^3 sits at composite index 1*3 + 0 = 3.
    const ComplexMatrix a = ComplexMatrix::outer(ComplexVector{0.0, 1.0}, ComplexVector{0.0, 1.0});
    const ComplexMatrix b = ComplexMatrix::outer(ComplexVector{1.0, 0.0, 0.0}, ComplexVector{1.0, 0.0, 0.0});
    const ComplexMatrix ab = tensor(a, b);
    ASSERT_EQ(ab.dim(), 6u);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(ab(i, j), (i == 3 && j == 3) ? Complex(1.0) : Complex(0.0));
}

TEST(Linalg, TensorOfPaulis) {
    const ComplexMatrix xz = tensor(sigma_x(), sigma_z());
    const ComplexMatrix expected{{0.0, 0.0, 1.0, 0.0}, {0.0, 0.0, 0.0, -1.0}, {1.0, 0.0, 0.0, 0.0}, {0.0, -1.0, 0.0, 0.0}};
    EXPECT_TRUE(matrix_near(xz, expected, 0.0));
}

TEST(Linalg, EigensystemOfSigmaX) {
    const Eigensystem es = hermitian_eigensystem(sigma_x());
    ASSERT_EQ(es.eigenvalues.size(), 2u);
    EXPECT_NEAR(es.eigenvalues[0], -1.0, 1e-14);
    EXPECT_NEAR(es.eigenvalues[1], 1.0, 1e-14);
    const ComplexVector v = es.eigenvector(1);
    EXPECT_NEAR(std::abs(v[0]), 1.0 / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(std::abs(v[0] - v[1]), 0.0, 1e-14);
}

TEST(Linalg, ExpmOfSigmaX) {
    // exp(-i t sigma_x) = cos t I - i sin t sigma_x
    const double t = 0.7;
    const ComplexMatrix u = expm_skew(sigma_x(), t);
    const ComplexMatrix expected = std::cos(t) * id(2) + Complex(0.0, -std::sin(t)) * sigma_x();
    EXPECT_TRUE(matrix_near(u, expected, 1e-14));
}

TEST(Linalg, ErrorsOnBadInput) {
    EXPECT_THROW(ComplexMatrix(2, std::vector<Complex>(3)), DimensionError);
    EXPECT_THROW(ComplexMatrix(2, std::vector<Complex>{1.0, NAN, 0.0, 1.0}), NonFiniteError);
    EXPECT_THROW(ensure_capacity(kMaxDimension + 1), CapacityError);
    EXPECT_NO_THROW(ensure_capacity(kMaxDimension));
    EXPECT_THROW(matmul(id(2), id(3)), DimensionError);
    EXPECT_THROW(partial_trace_right(id(4), 3, 2), DimensionError);
    EXPECT_THROW(require_hermitian(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}), HermiticityError);
    EXPECT_THROW(require_unitary(2.0 * id(2)), UnitarityError);
    EXPECT_THROW(hermitian_eigensystem(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}), HermiticityError);
}

TEST(Linalg, ResidualErrorsCarryResidual) {
    try {
        require_unitary(2.0 * id(2));
        FAIL();
    } catch (const UnitarityError& e) {
        // ||4I - I||_F = 3 sqrt 2
        EXPECT_NEAR(e.residual(), 3.0 * std::sqrt(2.0), 1e-12);
    }
}

// Property tests over random inputs.

class LinalgProperty : public ::testing::TestWithParam<std::size_t> {};

TEST_P(LinalgProperty, EigenReconstruction) {
    const std::size_t d = GetParam();
    for (std::uint64_t s = 0; s < 20; ++s) {
        Rng rng(101, s * 16 + d);
        const ComplexMatrix h = random_hermitian(d, rng);
        const Eigensystem es = hermitian_eigensystem(h);
        const ComplexMatrix back = spectral_sum(es, es.eigenvalues);
        EXPECT_LE(frobenius_distance(back, h), 1e-10 * std::max(1.0, frobenius_norm(h)));
        EXPECT_LE(unitarity_residual(es.eigenvectors), 1e-10);
        for (std::size_t k = 1; k < d; ++k) EXPECT_LE(es.eigenvalues[k - 1], es.eigenvalues[k]);
    }
}

TEST_P(LinalgProperty, ExponentialGroupLaw) {
    const std::size_t d = GetParam();
    for (std::uint64_t s = 0; s < 20; ++s) {
        Rng rng(202, s * 16 + d);
        const ComplexMatrix h = random_hermitian(d, rng);
        const double t1 = rng.uniform() * 3.0, t2 = rng.uniform() * 3.0;
        const ComplexMatrix u1 = expm_skew(h, t1), u2 = expm_skew(h, t2);
        EXPECT_LE(unitarity_residual(u1), 1e-10);
        EXPECT_LE(frobenius_distance(u1 * u2, expm_skew(h, t1 + t2)), 1e-10);
        EXPECT_LE(frobenius_distance(expm_skew(h, 0.0), id(d)), 1e-12);
    }
}

TEST_P(LinalgProperty, TensorMixedProduct) {
    const std::size_t d = GetParam();
    Rng rng(303, d);
    const ComplexMatrix a = random_ginibre(d, rng), b = random_ginibre(2, rng);
    const ComplexMatrix c = random_ginibre(d, rng), e = random_ginibre(2, rng);
    const ComplexMatrix lhs = tensor(a, b) * tensor(c, e);
    const ComplexMatrix rhs = tensor(a * c, b * e);
    EXPECT_LE(frobenius_distance(lhs, rhs), 1e-11 * std::max(1.0, frobenius_norm(rhs)));
}

INSTANTIATE_TEST_SUITE_P(Dims, LinalgProperty, ::testing::Values(1u, 2u, 3u, 4u, 6u));

namespace {

// Direct index-by-index partial traces used as the reference.
ComplexMatrix brute_trace_right(const ComplexMatrix& m, std::size_t dl, std::size_t dr) {
    ComplexMatrix out(dl);
    for (std::size_t i = 0; i < dl; ++i)
        for (std::size_t j = 0; j < dl; ++j)
            for (std::size_t k = 0; k < dr; ++k) out(i, j) += m(i * dr + k, j * dr + k);
    return out;
}

ComplexMatrix brute_trace_left(const ComplexMatrix& m, std::size_t dl, std::size_t dr) {
    ComplexMatrix out(dr);
    for (std::size_t i = 0; i < dr; ++i)
        for (std::size_t j = 0; j < dr; ++j)
            for (std::size_t k = 0; k < dl; ++k) out(i, j) += m(k * dr + i, k * dr + j);
    return out;
}

}  // namespace

TEST(LinalgPartialTrace, MatchesIndexOracle) {
    const std::pair<std::size_t, std::size_t> shapes[] = {{2, 2}, {2, 3}, {3, 2}, {1, 4}, {4, 1}};
    std::uint64_t s = 0;
    for (auto [dl, dr] : shapes) {
        Rng rng(404, s++);
        const ComplexMatrix m = random_ginibre(dl * dr, rng);
        EXPECT_TRUE(matrix_near(partial_trace_right(m, dl, dr), brute_trace_right(m, dl, dr), 1e-13));
        EXPECT_TRUE(matrix_near(partial_trace_left(m, dl, dr), brute_trace_left(m, dl, dr), 1e-13));
    }
}

TEST(LinalgPartialTrace, ProductStates) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        Rng rng(505, s);
        const ComplexMatrix x = random_ginibre(3, rng), y = random_ginibre(2, rng);
        const ComplexMatrix xy = tensor(x, y);
        EXPECT_TRUE(matrix_near(partial_trace_right(xy, 3, 2), y.trace() * x, 1e-12));
        EXPECT_TRUE(matrix_near(partial_trace_left(xy, 3, 2), x.trace() * y, 1e-12));
    }
}
