#include <algorithm>

#include "qctx/kernels.hpp"

namespace qctx::kernels::serial {

void matmul(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out, std::size_t n) {
    std::fill(out.begin(), out.end(), Complex{});
    for (std::size_t i = 0; i < n; ++i) {
        Complex* row = out.data() + i * n;
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a[i * n + k];
            if (aik == Complex{}) continue;
            const Complex* brow = b.data() + k * n;
            for (std::size_t j = 0; j < n; ++j) row[j] += aik * brow[j];
        }
    }
}

void tensor(std::span<const Complex> a, std::size_t na, std::span<const Complex> b, std::size_t nb,
            std::span<Complex> out) {
    const std::size_t n = na * nb;
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < na; ++j) {
            const Complex aij = a[i * na + j];
            for (std::size_t k = 0; k < nb; ++k) {
                Complex* dst = out.data() + (i * nb + k) * n + j * nb;
                const Complex* src = b.data() + k * nb;
                for (std::size_t l = 0; l < nb; ++l) dst[l] = aij * src[l];
            }
        }
    }
}

void partial_trace_right(std::span<const Complex> m, std::size_t dl, std::size_t dr, std::span<Complex> out) {
    const std::size_t n = dl * dr;
    for (std::size_t i = 0; i < dl; ++i) {
        for (std::size_t j = 0; j < dl; ++j) {
            Complex acc{};
            for (std::size_t a = 0; a < dr; ++a) acc += m[(i * dr + a) * n + (j * dr + a)];
            out[i * dl + j] = acc;
        }
    }
}

void partial_trace_left(std::span<const Complex> m, std::size_t dl, std::size_t dr, std::span<Complex> out) {
    const std::size_t n = dl * dr;
    for (std::size_t a = 0; a < dr; ++a) {
        for (std::size_t b = 0; b < dr; ++b) {
            Complex acc{};
            for (std::size_t i = 0; i < dl; ++i) acc += m[(i * dr + a) * n + (i * dr + b)];
            out[a * dr + b] = acc;
        }
    }
}

}  // namespace qctx::kernels::serial
