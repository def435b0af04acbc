#include "qctx/tolerance.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>

#include "qctx/errors.hpp"

namespace qctx {
namespace {
std::atomic<double> g_tolerance{kDefaultTolerance};
}

double default_tolerance() noexcept { return g_tolerance.load(std::memory_order_relaxed); }

void set_default_tolerance(double tol) {
    if (!std::isfinite(tol) || tol <= 0.0) {
        throw NonFiniteError("tolerance must be a positive finite number, got " + std::to_string(tol));
    }
    g_tolerance.store(tol, std::memory_order_relaxed);
}

bool apply_tolerance_from_env() {
    const char* raw = std::getenv("QCTX_TOL");
    if (raw == nullptr || *raw == '\0') return false;
    char* end = nullptr;
    const double tol = std::strtod(raw, &end);
    if (end == raw || *end != '\0') return false;
    set_default_tolerance(tol);
    return true;
}

}  // namespace qctx
