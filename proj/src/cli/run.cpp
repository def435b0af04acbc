#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qctx/cli/report.hpp"
#include "qctx/contextuality.hpp"
#include "qctx/dynamics.hpp"
#include "qctx/measurement.hpp"
#include "qctx/quantum.hpp"
#include "qctx/random.hpp"

namespace qctx::cli {

namespace {

constexpr double kProbabilitySum = 1e-9;
constexpr double kTraceConsistency = 1e-10;
constexpr double kBornEquivalence = 1e-9;
constexpr double kLuders = 1e-9;

// Makes the spec's effective tolerance the library default for one run.
class ToleranceScope {
public:
    explicit ToleranceScope(double tol) : saved_(default_tolerance()) { set_default_tolerance(tol); }
    ~ToleranceScope() { set_default_tolerance(saved_); }
    ToleranceScope(const ToleranceScope&) = delete;
    ToleranceScope& operator=(const ToleranceScope&) = delete;

private:
    double saved_;
};

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json vector_json(std::span<const Complex> v) {
    Json out = Json::array();
    for (const auto& z : v) out.push_back(complex_json(z));
    return out;
}

Json digest(const ComplexMatrix& m) { return Json{{"dim", m.dim()}, {"frobenius_norm", frobenius_norm(m)}}; }

std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void add_check(Report& r, std::string name, double residual, double threshold) {
    r.checks.push_back({std::move(name), residual, threshold, residual <= threshold});
}

// Lower-bound style check: passes when value >= bound.
void add_floor_check(Report& r, std::string name, double value, double bound) {
    r.checks.push_back({std::move(name), value, bound, value >= bound});
}

Json distribution_json(Report& r, const OutcomeDistribution& dist) {
    Json out = Json::array();
    for (std::size_t k = 0; k < dist.entries.size(); ++k) {
        const auto& e = dist.entries[k];
        const bool null_event = e.probability < kNullEventProbability;
        if (null_event) r.warnings.push_back("null_event: outcome " + fmt12(e.value));
        if (e.probability < 0.0 || e.probability > 1.0) {
            r.warnings.push_back("clamped_probability: outcome " + fmt12(e.value));
        }
        out.push_back(Json{{"index", k},
                           {"key", outcome_key(k, e.value)},
                           {"outcome", e.value},
                           {"p", clamp_probability(e.probability)},
                           {"raw", e.probability},
                           {"null_event", null_event}});
    }
    return out;
}

Observable observable_of(const ComplexMatrix& m, const ExperimentSpec& s) {
    return make_observable(m, s.cluster_tol, s.effective_tol);
}

MeasuringProcess process_of(const ProcessSpec& p, const ExperimentSpec& s) {
    if (p.von_neumann) return build_von_neumann_model(observable_of(p.observable, s));
    return MeasuringProcess(DensityOperator::from_matrix(p.sigma), p.unitary, observable_of(p.meter, s));
}

Json process_digest(const ProcessSpec& p, const MeasuringProcess& mp) {
    Json d{{"model", p.von_neumann ? "von_neumann" : "explicit"},
           {"dim_system", mp.dim_system()},
           {"dim_meter", mp.dim_meter()},
           {"meter_outcomes", mp.meter().outcome_count()}};
    if (p.von_neumann) d["observable"] = digest(p.observable);
    return d;
}

double max_trace_gap(const MeasuringProcess& mp, const DensityOperator& rho, const OutcomeDistribution& dist) {
    double worst = 0.0;
    for (std::size_t k = 0; k < dist.entries.size(); ++k) {
        const double tr = apply_instrument_to(mp, rho.matrix(), k).trace().real();
        worst = std::max(worst, std::abs(tr - dist.entries[k].probability));
    }
    return worst;
}

void run_born(Report& r, const ExperimentSpec& s, const BornSpec& p) {
    const Observable a = observable_of(p.observable, s);
    const DensityOperator rho = DensityOperator::from_matrix(p.state);
    r.inputs = Json{{"observable", digest(p.observable)}, {"state", digest(p.state)}};

    const auto dist = born_distribution(a, rho);
    const double mean = expectation(a, rho);
    double moment = 0.0;
    for (const auto& e : dist.entries) moment += e.value * e.probability;

    Json spectrum = Json::array();
    for (const auto& c : a.spectrum()) spectrum.push_back(Json{{"value", c.value}, {"multiplicity", c.multiplicity}});
    r.results = Json{{"distribution", distribution_json(r, dist)},
                     {"expectation", mean},
                     {"variance", variance(a, rho)},
                     {"spectrum", spectrum}};

    add_check(r, "probability_sum", std::abs(dist.total() - 1.0), kProbabilitySum);
    add_check(r, "born_trace_forms", dist.consistency_residual, kTraceConsistency);
    add_check(r, "spectral_resolution", a.spectral_residual(), s.effective_tol * tolerance_scale(p.observable));
    add_check(r, "expectation_matches_distribution", std::abs(mean - moment), 1e-9);
}

void run_indirect(Report& r, const ExperimentSpec& s, const IndirectSpec& p) {
    const MeasuringProcess mp = process_of(p.process, s);
    const DensityOperator rho = DensityOperator::from_matrix(p.state);
    r.inputs = Json{{"process", process_digest(p.process, mp)}, {"state", digest(p.state)}};

    const auto dist = outcome_probabilities(mp, rho);
    Json post = Json::array();
    for (std::size_t k = 0; k < dist.entries.size(); ++k) {
        const double x = dist.entries[k].value;
        Json entry{{"key", outcome_key(k, x)}, {"outcome", x}};
        if (dist.entries[k].probability > kNullEventProbability) {
            entry["state"] = matrix_json(selective_post_state(mp, rho, x).matrix());
        } else {
            entry["state"] = nullptr;
        }
        post.push_back(std::move(entry));
    }
    const DensityOperator averaged = nonselective_post_state(mp, rho);

    r.results = Json{{"distribution", distribution_json(r, dist)},
                     {"post_states", post},
                     {"nonselective_state", matrix_json(averaged.matrix())}};
    if (p.condition_on) {
        const DensityOperator conditioned = selective_post_state(mp, rho, *p.condition_on);
        r.results["conditioned"] = Json{{"outcome", *p.condition_on}, {"state", matrix_json(conditioned.matrix())}};
    }

    add_check(r, "probability_sum", dist.consistency_residual, kProbabilitySum);
    add_check(r, "instrument_trace_matches_probability", max_trace_gap(mp, rho, dist), kTraceConsistency);
    add_check(r, "interaction_unitarity", unitarity_residual(mp.unitary()),
              s.effective_tol * tolerance_scale(mp.unitary()));
    add_check(r, "nonselective_trace", std::abs(averaged.matrix().trace().real() - 1.0), kProbabilitySum);
    if (p.process.von_neumann) {
        const auto born = born_distribution(observable_of(p.process.observable, s), rho);
        double worst = 0.0;
        for (std::size_t k = 0; k < born.entries.size(); ++k)
            worst = std::max(worst, std::abs(born.entries[k].probability - dist.entries[k].probability));
        add_check(r, "born_equivalence", worst, kBornEquivalence);
    }
}

void run_instrument(Report& r, const ExperimentSpec& s, const InstrumentCheckSpec& p) {
    const MeasuringProcess mp = process_of(p.process, s);
    r.inputs = Json{{"process", process_digest(p.process, mp)}, {"samples", p.samples}};

    const Instrument inst = extract_instrument(mp, p.system_dim);
    Json branches = Json::array();
    double min_eig = 0.0;
    for (std::size_t k = 0; k < inst.branches.size(); ++k) {
        const auto& b = inst.branches[k];
        min_eig = k == 0 ? b.choi_min_eigenvalue : std::min(min_eig, b.choi_min_eigenvalue);
        branches.push_back(Json{{"key", outcome_key(k, b.outcome)},
                                {"outcome", b.outcome},
                                {"choi_min_eigenvalue", b.choi_min_eigenvalue},
                                {"kraus_rank", b.kraus().size()},
                                {"choi", matrix_json(b.choi)}});
    }
    r.results = Json{{"branches", branches}, {"trace_preservation_residual", inst.trace_preservation_residual}};

    add_floor_check(r, "complete_positivity", min_eig, -kInequalitySlack);
    add_check(r, "trace_preservation", inst.trace_preservation_residual, s.effective_tol);

    // Normalization and probability consistency on seeded random states.
    const std::uint64_t seed = s.seed.value_or(0);
    double norm_gap = 0.0;
    double trace_gap = 0.0;
    for (std::size_t i = 0; i < p.samples; ++i) {
        Rng rng(seed, i);
        const DensityOperator rho = random_density(p.system_dim, rng);
        norm_gap = std::max(norm_gap, std::abs(inst.total_probability(rho.matrix()) - 1.0));
        trace_gap = std::max(trace_gap, max_trace_gap(mp, rho, outcome_probabilities(mp, rho)));
    }
    add_check(r, "normalization", norm_gap, kProbabilitySum);
    add_check(r, "instrument_trace_matches_probability", trace_gap, kTraceConsistency);

    if (p.process.von_neumann) {
        const Observable a = observable_of(p.process.observable, s);
        double worst = 0.0;
        for (std::size_t k = 0; k < inst.branches.size(); ++k) {
            const ComplexMatrix luders = choi_from_kraus({a.spectrum()[k].projection});
            worst = std::max(worst, frobenius_distance(inst.branches[k].choi, luders));
        }
        r.results["luders_choi_distance"] = worst;
        add_check(r, "luders_recovery", worst, kLuders);
    }
}

void run_evolve(Report& r, const ExperimentSpec&, const EvolveSpec& p) {
    const CompositeHamiltonian ch(p.h_system, p.h_meter, p.h_interaction);
    const Evolution evo(ch);
    const ComplexMatrix u = evo.propagator(p.t);
    r.inputs = Json{{"h_system", digest(p.h_system)},
                    {"h_meter", digest(p.h_meter)},
                    {"h_interaction", digest(p.h_interaction)},
                    {"t", p.t},
                    {"dt", p.dt}};

    const double h_norm = frobenius_norm(evo.hamiltonian());
    add_check(r, "propagator_unitarity", unitarity_residual(u), 1e-10 * tolerance_scale(u));

    DensityOperator r0 = p.rho0 ? DensityOperator::from_matrix(*p.rho0) : pure_state(*p.psi0);
    if (p.psi0) {
        const ComplexVector psi = evolve_pure(*p.psi0, ch, p.t);
        r.results["psi"] = vector_json(psi);
        r.results["norm"] = vector_norm(psi);
        add_check(r, "norm_preservation", std::abs(vector_norm(psi) - 1.0), 1e-9);
        const DensityOperator via_density = evolve_density(r0, ch, p.t);
        const ComplexMatrix via_vector = ComplexMatrix::outer(psi, psi);
        add_check(r, "schrodinger_von_neumann_agreement", frobenius_distance(via_density.matrix(), via_vector), 1e-9);
    }
    const DensityOperator rt = evolve_density(r0, ch, p.t);
    r.results["rho"] = matrix_json(rt.matrix());
    r.results["purity"] = rt.purity();
    add_check(r, "trace_preservation", std::abs(rt.matrix().trace().real() - 1.0), 1e-9);
    add_check(r, "purity_preservation", std::abs(rt.purity() - r0.purity()), 1e-9);

    // Central difference: truncation <= dt^2/6 ||[H,[H,[H,R]]]|| <= dt^2/6 (2||H||)^3 ||R||,
    // plus rounding that grows like 1/dt.
    const double residual = von_neumann_residual(r0, ch, p.t, p.dt);
    const double bound = p.dt * p.dt / 6.0 * std::pow(2.0 * h_norm, 3) * frobenius_norm(r0.matrix()) +
                         1e-13 * std::max(1.0, h_norm) / p.dt;
    r.results["von_neumann_residual"] = residual;
    add_check(r, "von_neumann_equation", residual, bound);
}

void run_chsh(Report& r, const ExperimentSpec& s, const ChshSpec& p) {
    const ChshScenario sc(DensityOperator::from_matrix(p.state), observable_of(p.a1, s), observable_of(p.a2, s),
                          observable_of(p.b1, s), observable_of(p.b2, s));
    r.inputs = Json{{"state", digest(p.state)}, {"dim_a", sc.dim_a()}, {"dim_b", sc.dim_b()}};
    const ChshResult v = chsh_value(sc);
    const LocalIncompatibility inc = chsh_local_incompatibility(sc);
    r.results = Json{{"value", v.value},
                     {"correlators", Json{{"a1b1", v.correlators[0]},
                                          {"a1b2", v.correlators[1]},
                                          {"a2b1", v.correlators[2]},
                                          {"a2b2", v.correlators[3]}}},
                     {"comm_a", inc.comm_a},
                     {"comm_b", inc.comm_b},
                     {"tsirelson_bound", kTsirelsonBound},
                     {"violates_classical_bound", !v.within_classical}};
    r.formula_source["chsh"] = "standard";

    add_check(r, "tsirelson_bound", std::abs(v.value), kTsirelsonBound + kInequalitySlack);
    // Commuting local settings on either side force the classical bound.
    const bool compatible = inc.comm_a <= s.effective_tol || inc.comm_b <= s.effective_tol;
    add_check(r, "compatibility_implies_classical_bound", compatible ? std::abs(v.value) : 0.0,
              2.0 + kInequalitySlack);
}

void run_uncertainty(Report& r, const ExperimentSpec& s, const UncertaintySpec& p) {
    const Observable a = observable_of(p.a, s);
    const Observable b = observable_of(p.b, s);
    const DensityOperator rho = DensityOperator::from_matrix(p.state);
    r.inputs = Json{{"a", digest(p.a)}, {"b", digest(p.b)}, {"state", digest(p.state)}};
    const UncertaintyCheck c = schrodinger_robertson_check(a, b, rho);
    r.results = Json{{"lhs", c.lhs},
                     {"rhs", c.rhs},
                     {"commutator_term", c.commutator_term},
                     {"covariance_term", c.covariance_term},
                     {"holds", c.holds},
                     {"slack", c.slack}};
    r.formula_source["schrodinger_robertson"] = "standard";
    add_floor_check(r, "schrodinger_robertson", c.slack, -kInequalitySlack);
}

void run_contexts(Report& r, const ExperimentSpec& s, const ContextCompareSpec& p) {
    const MeasuringProcess mp1 = process_of(p.first.process, s);
    const MeasuringProcess mp2 = process_of(p.second.process, s);
    const DensityOperator rho1 = DensityOperator::from_matrix(p.first.rho);
    const DensityOperator rho2 = DensityOperator::from_matrix(p.second.rho);
    const Context c1 = Context::from_process(rho1, mp1, p.first.label);
    const Context c2 = Context::from_process(rho2, mp2, p.second.label);
    r.inputs = Json{{"contexts", Json::array({Json{{"label", p.first.label}, {"process", process_digest(p.first.process, mp1)}},
                                              Json{{"label", p.second.label},
                                                   {"process", process_digest(p.second.process, mp2)}}})}};

    const ContextDistance d = context_distance(c1, c2);
    r.results["distance"] = Json{{"d_rho", d.d_rho}, {"d_sigma", d.d_sigma}, {"d_u", d.d_u}, {"identical", d.identical}};

    if (d.d_rho <= s.effective_tol) {
        const Unifiability u = contexts_unifiable(c1, c2, mp1.meter(), mp2.meter());
        r.results["unifiability"] =
            Json{{"pointer_compatible", u.pointer_compatible}, {"detail", u.detail}, {"criterion", u.criterion}};
        r.formula_source["unifiability"] = "design-choice: " + u.criterion;
    } else {
        r.warnings.push_back("unifiability_skipped: contexts prepare different system states");
    }

    // The pointer effects must reproduce the indirect statistics of each context.
    const MeasuringProcess* mps[2] = {&mp1, &mp2};
    const DensityOperator* rhos[2] = {&rho1, &rho2};
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
        const auto effects = pointer_effects(mps[i]->sigma(), mps[i]->unitary(), mps[i]->meter());
        const auto dist = outcome_probabilities(*mps[i], *rhos[i]);
        for (std::size_t k = 0; k < effects.size(); ++k)
            worst = std::max(worst, std::abs(trace_of_product(effects[k], rhos[i]->matrix()).real() -
                                             dist.entries[k].probability));
    }
    add_check(r, "pointer_effects_reproduce_statistics", worst, kTraceConsistency);
}

}  // namespace

bool Report::all_checks_passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

Json Report::to_json() const {
    Json checks_json = Json::array();
    for (const auto& c : checks) {
        checks_json.push_back(
            Json{{"name", c.name}, {"residual", c.residual}, {"threshold", c.threshold}, {"passed", c.passed}});
    }
    return Json{{"schema", kSchemaVersion}, {"kind", kind},         {"spec", spec},
                {"inputs", inputs},         {"results", results},   {"checks", checks_json},
                {"formula_source", formula_source}, {"warnings", warnings}};
}

Report run_experiment(const ExperimentSpec& spec) {
    ToleranceScope scope(spec.effective_tol);
    Report r;
    r.kind = kind_name(spec.kind);
    r.spec = spec_to_json(spec);
    r.inputs = Json::object();
    r.results = Json::object();
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, BornSpec>) run_born(r, spec, p);
            else if constexpr (std::is_same_v<T, IndirectSpec>) run_indirect(r, spec, p);
            else if constexpr (std::is_same_v<T, InstrumentCheckSpec>) run_instrument(r, spec, p);
            else if constexpr (std::is_same_v<T, EvolveSpec>) run_evolve(r, spec, p);
            else if constexpr (std::is_same_v<T, ChshSpec>) run_chsh(r, spec, p);
            else if constexpr (std::is_same_v<T, UncertaintySpec>) run_uncertainty(r, spec, p);
            else run_contexts(r, spec, p);
        },
        spec.payload);
    return r;
}

Report run_sweep(const ExperimentSpec& spec, std::size_t samples, bool parallel) {
    ToleranceScope scope(spec.effective_tol);
    const auto [dim_a, dim_b] = sweep_dims(spec);
    SweepOptions opt;
    opt.seed = spec.seed.value_or(0);
    opt.samples = samples;
    opt.dim_a = dim_a;
    opt.dim_b = dim_b;
    opt.parallel = parallel;

    SweepStats stats;
    switch (spec.kind) {
        case Kind::chsh: stats = tsirelson_sweep(opt); break;
        case Kind::born:
        case Kind::indirect_measurement: stats = born_equivalence_sweep(opt); break;
        case Kind::uncertainty: stats = uncertainty_sweep(opt); break;
        case Kind::instrument_check: stats = instrument_sweep(opt); break;
        default:
            throw SpecValidationError("kind", std::string("no randomized sweep for kind '") + kind_name(spec.kind) + "'");
    }

    Report r;
    r.kind = std::string("sweep:") + kind_name(spec.kind);
    r.spec = spec_to_json(spec);
    r.inputs = Json{{"samples", samples}, {"seed", opt.seed}, {"dim_a", dim_a}, {"dim_b", dim_b}};
    r.results = Json{{"property", stats.property}, {"min", stats.min}, {"max", stats.max}, {"failures", stats.failures},
                     {"threshold", stats.threshold}};
    r.checks.push_back({stats.property + "_failures", static_cast<double>(stats.failures), 0.0, stats.failures == 0});
    if (spec.kind == Kind::chsh) r.formula_source["chsh"] = "standard";
    if (spec.kind == Kind::uncertainty) r.formula_source["schrodinger_robertson"] = "standard";
    return r;
}

}  // namespace qctx::cli
