#pragma once

#include <cstddef>
#include <span>

#include "qctx/linalg.hpp"

// Raw dense kernels over row-major storage. The serial variants are the
// reference implementation; the omp variants split the outer loop across
// threads and must agree with the serial ones bit for bit (each output
// element is reduced in the same order by exactly one thread).
//
// Callers own all buffers and validate dimensions beforehand.
namespace qctx::kernels {

namespace serial {
void matmul(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out, std::size_t n);
void tensor(std::span<const Complex> a, std::size_t na, std::span<const Complex> b, std::size_t nb,
            std::span<Complex> out);
void partial_trace_right(std::span<const Complex> m, std::size_t dl, std::size_t dr, std::span<Complex> out);
void partial_trace_left(std::span<const Complex> m, std::size_t dl, std::size_t dr, std::span<Complex> out);
}  // namespace serial

namespace omp {
void matmul(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out, std::size_t n);
void tensor(std::span<const Complex> a, std::size_t na, std::span<const Complex> b, std::size_t nb,
            std::span<Complex> out);
void partial_trace_right(std::span<const Complex> m, std::size_t dl, std::size_t dr, std::span<Complex> out);
void partial_trace_left(std::span<const Complex> m, std::size_t dl, std::size_t dr, std::span<Complex> out);
}  // namespace omp

// Below this many output elements the omp kernels stay on one thread.
inline constexpr std::size_t kParallelThreshold = 4096;

}  // namespace qctx::kernels
