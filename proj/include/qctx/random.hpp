#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "qctx/linalg.hpp"
#include "qctx/quantum.hpp"

namespace qctx {

// splitmix64 finalizer; also the counter-based stream splitter.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Independent, reproducible stream number `index` derived from a master seed.
// Stream i never depends on how many other streams were drawn, so parallel
// sweeps see the same numbers as serial ones.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t master, std::uint64_t index) : engine_(stream_seed(master, index)) {}

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
    Complex complex_normal() { return {normal(), normal()}; }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Ginibre matrix: i.i.d. standard complex normal entries.
ComplexMatrix random_ginibre(std::size_t dim, Rng& rng);
// (G + G^dagger) / 2
ComplexMatrix random_hermitian(std::size_t dim, Rng& rng);
// G G^dagger / Tr[G G^dagger] (Hilbert-Schmidt measure).
DensityOperator random_density(std::size_t dim, Rng& rng);
// Haar measure, via Gram-Schmidt on a Ginibre matrix.
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);
// Haar-random unit vector.
ComplexVector random_pure_vector(std::size_t dim, Rng& rng);
// V diag(+-1) V^dagger with Haar V; both signs present when dim >= 2.
ComplexMatrix random_dichotomic(std::size_t dim, Rng& rng);
// sum_k s_k E_k over the spectral projections of a, with random signs s_k.
ComplexMatrix random_dichotomic_function_of(const Observable& a, Rng& rng);

}  // namespace qctx
