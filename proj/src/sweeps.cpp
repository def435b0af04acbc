#include "qctx/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <vector>

#include "qctx/contextuality.hpp"
#include "qctx/errors.hpp"
#include "qctx/measurement.hpp"
#include "qctx/random.hpp"

namespace qctx {

namespace {

struct Sample {
    double metric;
    bool failed;
};

// Runs `draw` once per sample index. Results land in index order, and the
// reduction below is serial, so thread count never changes the output.
template <class Draw>
SweepStats run_sweep(const SweepOptions& opt, std::string property, double threshold, Draw draw) {
    std::vector<Sample> results(opt.samples);
    std::vector<std::exception_ptr> errors(opt.samples);
    const auto n = static_cast<long long>(opt.samples);

#pragma omp parallel for schedule(dynamic, 8) if (opt.parallel)
    for (long long i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            Rng rng(opt.seed, idx);
            results[idx] = draw(rng);
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    SweepStats stats;
    stats.property = std::move(property);
    stats.samples = opt.samples;
    stats.threshold = threshold;
    if (results.empty()) return stats;
    stats.min = stats.max = results.front().metric;
    for (const auto& r : results) {
        stats.min = std::min(stats.min, r.metric);
        stats.max = std::max(stats.max, r.metric);
        if (r.failed) ++stats.failures;
    }
    return stats;
}

Observable dichotomic(std::size_t dim, Rng& rng) { return make_observable(random_dichotomic(dim, rng)); }

}  // namespace

SweepStats tsirelson_sweep(const SweepOptions& opt) {
    const double bound = kTsirelsonBound + kInequalitySlack;
    return run_sweep(opt, "tsirelson_bound", bound, [&](Rng& rng) {
        const auto psi = random_pure_vector(opt.dim_a * opt.dim_b, rng);
        ChshScenario s(pure_state(psi), dichotomic(opt.dim_a, rng), dichotomic(opt.dim_a, rng),
                       dichotomic(opt.dim_b, rng), dichotomic(opt.dim_b, rng));
        const double v = std::abs(chsh_value(s).value);
        return Sample{v, v > bound};
    });
}

SweepStats compatible_chsh_sweep(const SweepOptions& opt) {
    const double bound = 2.0 + kInequalitySlack;
    return run_sweep(opt, "classical_bound_under_compatibility", bound, [&](Rng& rng) {
        const auto psi = random_pure_vector(opt.dim_a * opt.dim_b, rng);
        Observable a1 = dichotomic(opt.dim_a, rng);
        Observable b1 = dichotomic(opt.dim_b, rng);
        Observable a2 = make_observable(random_dichotomic_function_of(a1, rng));
        Observable b2 = make_observable(random_dichotomic_function_of(b1, rng));
        ChshScenario s(pure_state(psi), std::move(a1), std::move(a2), std::move(b1), std::move(b2));
        const double v = std::abs(chsh_value(s).value);
        return Sample{v, v > bound};
    });
}

SweepStats born_equivalence_sweep(const SweepOptions& opt) {
    constexpr double kBound = 1e-9;
    return run_sweep(opt, "born_equivalence", kBound, [&](Rng& rng) {
        const Observable a = make_observable(random_hermitian(opt.dim_a, rng));
        const DensityOperator rho = random_density(opt.dim_a, rng);
        const auto indirect = outcome_probabilities(build_von_neumann_model(a), rho);
        const auto direct = born_distribution(a, rho);
        double worst = 0.0;
        for (std::size_t k = 0; k < direct.entries.size(); ++k)
            worst = std::max(worst, std::abs(indirect.entries[k].probability - direct.entries[k].probability));
        return Sample{worst, worst > kBound};
    });
}

SweepStats uncertainty_sweep(const SweepOptions& opt) {
    const double bound = -kInequalitySlack;
    return run_sweep(opt, "schrodinger_robertson", bound, [&](Rng& rng) {
        const Observable a = make_observable(random_hermitian(opt.dim_a, rng));
        const Observable b = make_observable(random_hermitian(opt.dim_a, rng));
        const auto check = schrodinger_robertson_check(a, b, random_density(opt.dim_a, rng));
        return Sample{check.slack, check.slack < bound};
    });
}

SweepStats instrument_sweep(const SweepOptions& opt) {
    const double bound = -kInequalitySlack;
    return run_sweep(opt, "instrument_axioms", bound, [&](Rng& rng) {
        const MeasuringProcess mp(random_density(opt.dim_b, rng), random_unitary(opt.dim_a * opt.dim_b, rng),
                                  make_observable(random_hermitian(opt.dim_b, rng)));
        Instrument inst;
        try {
            inst = extract_instrument(mp, opt.dim_a);
        } catch (const InstrumentAxiomError& e) {
            return Sample{-e.residual(), true};
        }
        double min_eig = inst.branches.front().choi_min_eigenvalue;
        for (const auto& b : inst.branches) min_eig = std::min(min_eig, b.choi_min_eigenvalue);

        const DensityOperator rho = random_density(opt.dim_a, rng);
        const bool normalized = std::abs(inst.total_probability(rho.matrix()) - 1.0) <= 1e-9;
        const auto dist = outcome_probabilities(mp, rho);
        bool consistent = true;
        for (std::size_t k = 0; k < dist.entries.size(); ++k) {
            const double tr = apply_instrument_to(mp, rho.matrix(), k).trace().real();
            consistent = consistent && std::abs(tr - dist.entries[k].probability) <= 1e-10;
        }
        return Sample{min_eig, min_eig < bound || !normalized || !consistent};
    });
}

}  // namespace qctx
