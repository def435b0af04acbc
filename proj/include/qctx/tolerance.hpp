#pragma once

namespace qctx {

// Global default for the Hermiticity / unitarity / reconstruction checks,
// relative to the Frobenius norm of the operand. Configure once at startup
// (CLI flag or QCTX_TOL); afterwards it is only read.
inline constexpr double kDefaultTolerance = 1e-9;

double default_tolerance() noexcept;
void set_default_tolerance(double tol);

// Reads QCTX_TOL if set and parseable; returns whether it was applied.
bool apply_tolerance_from_env();

}  // namespace qctx
