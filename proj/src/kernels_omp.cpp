#include <algorithm>

#include "qctx/kernels.hpp"

namespace qctx::kernels::omp {

namespace {
// OpenMP wants a signed loop index.
using Index = long long;
}

void matmul(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out, std::size_t n) {
    const Index rows = static_cast<Index>(n);
#pragma omp parallel for schedule(static) if (n * n >= kParallelThreshold)
    for (Index i = 0; i < rows; ++i) {
        Complex* row = out.data() + static_cast<std::size_t>(i) * n;
        std::fill(row, row + n, Complex{});
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a[static_cast<std::size_t>(i) * n + k];
            if (aik == Complex{}) continue;
            const Complex* brow = b.data() + k * n;
            for (std::size_t j = 0; j < n; ++j) row[j] += aik * brow[j];
        }
    }
}

void tensor(std::span<const Complex> a, std::size_t na, std::span<const Complex> b, std::size_t nb,
            std::span<Complex> out) {
    const std::size_t n = na * nb;
    const Index rows = static_cast<Index>(n);
#pragma omp parallel for schedule(static) if (n * n >= kParallelThreshold)
    for (Index r = 0; r < rows; ++r) {
        const std::size_t i = static_cast<std::size_t>(r) / nb;
        const std::size_t k = static_cast<std::size_t>(r) % nb;
        Complex* dst = out.data() + static_cast<std::size_t>(r) * n;
        const Complex* src = b.data() + k * nb;
        for (std::size_t j = 0; j < na; ++j) {
            const Complex aij = a[i * na + j];
            for (std::size_t l = 0; l < nb; ++l) dst[j * nb + l] = aij * src[l];
        }
    }
}

void partial_trace_right(std::span<const Complex> m, std::size_t dl, std::size_t dr, std::span<Complex> out) {
    const std::size_t n = dl * dr;
    const Index cells = static_cast<Index>(dl * dl);
#pragma omp parallel for schedule(static) if (n * n >= kParallelThreshold)
    for (Index c = 0; c < cells; ++c) {
        const std::size_t i = static_cast<std::size_t>(c) / dl;
        const std::size_t j = static_cast<std::size_t>(c) % dl;
        Complex acc{};
        for (std::size_t a = 0; a < dr; ++a) acc += m[(i * dr + a) * n + (j * dr + a)];
        out[static_cast<std::size_t>(c)] = acc;
    }
}

void partial_trace_left(std::span<const Complex> m, std::size_t dl, std::size_t dr, std::span<Complex> out) {
    const std::size_t n = dl * dr;
    const Index cells = static_cast<Index>(dr * dr);
#pragma omp parallel for schedule(static) if (n * n >= kParallelThreshold)
    for (Index c = 0; c < cells; ++c) {
        const std::size_t a = static_cast<std::size_t>(c) / dr;
        const std::size_t b = static_cast<std::size_t>(c) % dr;
        Complex acc{};
        for (std::size_t i = 0; i < dl; ++i) acc += m[(i * dr + a) * n + (i * dr + b)];
        out[static_cast<std::size_t>(c)] = acc;
    }
}

}  // namespace qctx::kernels::omp
