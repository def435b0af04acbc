#include "qctx/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qctx {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

ComplexMatrix random_ginibre(std::size_t dim, Rng& rng) {
    ComplexMatrix g(dim);
    for (auto& e : g.data()) e = rng.complex_normal();
    return g;
}

ComplexMatrix random_hermitian(std::size_t dim, Rng& rng) {
    const ComplexMatrix g = random_ginibre(dim, rng);
    ComplexMatrix h = g + adjoint(g);
    h *= 0.5;
    return h;
}

DensityOperator random_density(std::size_t dim, Rng& rng) {
    const ComplexMatrix g = random_ginibre(dim, rng);
    ComplexMatrix r = matmul(g, adjoint(g));
    r *= 1.0 / r.trace().real();
    // Symmetrize away rounding so validation sees an exactly Hermitian matrix.
    ComplexMatrix sym = r + adjoint(r);
    sym *= 0.5;
    return DensityOperator::from_matrix(std::move(sym));
}

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
    ComplexMatrix q = random_ginibre(dim, rng);
    // Modified Gram-Schmidt over columns.
    for (std::size_t k = 0; k < dim; ++k) {
        for (std::size_t j = 0; j < k; ++j) {
            Complex overlap{};
            for (std::size_t i = 0; i < dim; ++i) overlap += std::conj(q(i, j)) * q(i, k);
            for (std::size_t i = 0; i < dim; ++i) q(i, k) -= overlap * q(i, j);
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < dim; ++i) norm += std::norm(q(i, k));
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < dim; ++i) q(i, k) /= norm;
    }
    return q;
}

ComplexVector random_pure_vector(std::size_t dim, Rng& rng) {
    ComplexVector v(dim);
    for (auto& e : v) e = rng.complex_normal();
    return normalized(v);
}

ComplexMatrix random_dichotomic(std::size_t dim, Rng& rng) {
    const ComplexMatrix v = random_unitary(dim, rng);
    std::vector<double> signs(dim, -1.0);
    const std::size_t positives = dim >= 2 ? 1 + rng.index(dim - 1) : rng.index(2);
    std::fill(signs.begin(), signs.begin() + static_cast<std::ptrdiff_t>(positives), 1.0);
    ComplexMatrix scaled = v;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k) scaled(i, k) *= signs[k];
    ComplexMatrix out = matmul(scaled, adjoint(v));
    ComplexMatrix sym = out + adjoint(out);
    sym *= 0.5;
    return sym;
}

ComplexMatrix random_dichotomic_function_of(const Observable& a, Rng& rng) {
    ComplexMatrix out(a.dim());
    for (const auto& comp : a.spectrum()) {
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        out += comp.projection * Complex(sign);
    }
    return out;
}

}  // namespace qctx
