#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace qctx {

// Randomized property sweeps. Sample i draws from stream_seed(seed, i), so
// the parallel and serial execution modes produce identical statistics.
struct SweepOptions {
    std::uint64_t seed = 0;
    std::size_t samples = 1000;
    std::size_t dim_a = 2;  // system dim (or CHSH site A)
    std::size_t dim_b = 2;  // meter dim (or CHSH site B)
    bool parallel = true;
};

struct SweepStats {
    std::string property;
    std::size_t samples = 0;
    double min = 0.0;
    double max = 0.0;
    std::size_t failures = 0;
    double threshold = 0.0;
};

// |S| over Haar-random pure states and random dichotomic local observables;
// failure when |S| > 2 sqrt 2 + 1e-9.
SweepStats tsirelson_sweep(const SweepOptions& opt);
// |S| with [A1, A2] = [B1, B2] = 0 by construction; failure when |S| > 2 + 1e-9.
SweepStats compatible_chsh_sweep(const SweepOptions& opt);
// max |p_indirect(x) - p_born(x)| for von Neumann models of random observables; failure above 1e-9.
SweepStats born_equivalence_sweep(const SweepOptions& opt);
// Schrodinger-Robertson slack over random (A, B, rho); failure below -1e-9.
SweepStats uncertainty_sweep(const SweepOptions& opt);
// Min Choi eigenvalue over random measuring processes (Haar U, random sigma,
// random meter); failure on CP violation, normalization error, or
// Tr I_x(rho) != p(x) beyond 1e-10.
SweepStats instrument_sweep(const SweepOptions& opt);

}  // namespace qctx
