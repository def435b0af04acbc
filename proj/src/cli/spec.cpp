#include "qctx/cli/spec.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "qctx/contextuality.hpp"
#include "qctx/dynamics.hpp"
#include "qctx/measurement.hpp"
#include "qctx/quantum.hpp"

namespace qctx::cli {

namespace {

std::string join(const std::string& base, const std::string& field) {
    return base.empty() ? field : base + "." + field;
}

std::string index(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

const Json& require(const Json& obj, const std::string& base, const std::string& field) {
    if (!obj.is_object()) throw SpecSyntaxError(base, "expected an object");
    auto it = obj.find(field);
    if (it == obj.end()) throw SpecSyntaxError(join(base, field), "missing required field");
    return *it;
}

const Json* optional_field(const Json& obj, const std::string& field) {
    auto it = obj.find(field);
    return it == obj.end() ? nullptr : &*it;
}

double parse_real(const Json& v, const std::string& path) {
    if (!v.is_number()) throw SpecSyntaxError(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw SpecValidationError(path, "value is not finite");
    return x;
}

std::size_t parse_count(const Json& v, const std::string& path) {
    if (!v.is_number_unsigned()) throw SpecSyntaxError(path, "expected a non-negative integer");
    return v.get<std::size_t>();
}

Complex parse_complex(const Json& v, const std::string& path) {
    if (v.is_number()) return {parse_real(v, path), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {parse_real(v[0], index(path, 0)), parse_real(v[1], index(path, 1))};
    }
    throw SpecSyntaxError(path, "expected a number or a [re, im] pair");
}

ComplexVector parse_vector(const Json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) throw SpecSyntaxError(path, "expected a non-empty array of amplitudes");
    ComplexVector out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(parse_complex(v[i], index(path, i)));
    ensure_capacity(out.size());
    return out;
}

ComplexMatrix named_matrix(const std::string& name, const Json& node, const std::string& path) {
    const Complex I(0.0, 1.0);
    if (name == "sigma_x") return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}};
    if (name == "sigma_y") return ComplexMatrix{{0.0, -I}, {I, 0.0}};
    if (name == "sigma_z") return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}};
    if (name == "identity" || name == "zero") {
        const std::size_t dim = parse_count(require(node, path, "dim"), join(path, "dim"));
        if (dim == 0) throw SpecValidationError(join(path, "dim"), "dimension must be positive");
        ensure_capacity(dim);
        return name == "identity" ? ComplexMatrix::identity(dim) : ComplexMatrix::zero(dim);
    }
    throw SpecSyntaxError(join(path, "named"), "unknown matrix name '" + name + "'");
}

ComplexMatrix parse_matrix(const Json& node, const std::string& path) {
    if (!node.is_object()) throw SpecSyntaxError(path, "expected a matrix object");
    if (const Json* entries = optional_field(node, "entries")) {
        const std::string epath = join(path, "entries");
        if (!entries->is_array() || entries->empty()) throw SpecSyntaxError(epath, "expected an array of rows");
        const std::size_t n = entries->size();
        ensure_capacity(n);
        std::vector<Complex> flat;
        flat.reserve(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            const Json& row = (*entries)[i];
            const std::string rpath = index(epath, i);
            if (!row.is_array()) throw SpecSyntaxError(rpath, "expected a row array");
            for (std::size_t j = 0; j < row.size(); ++j) flat.push_back(parse_complex(row[j], index(rpath, j)));
            if (row.size() != n) {
                throw SpecValidationError(rpath, "row has " + std::to_string(row.size()) + " entries, matrix is " +
                                                     std::to_string(n) + " x " + std::to_string(n));
            }
        }
        return ComplexMatrix(n, std::move(flat));
    }
    if (const Json* name = optional_field(node, "named")) {
        if (!name->is_string()) throw SpecSyntaxError(join(path, "named"), "expected a string");
        return named_matrix(name->get<std::string>(), node, path);
    }
    if (const Json* diag = optional_field(node, "diag")) {
        const std::string dpath = join(path, "diag");
        if (!diag->is_array() || diag->empty()) throw SpecSyntaxError(dpath, "expected a non-empty array");
        std::vector<double> values;
        for (std::size_t i = 0; i < diag->size(); ++i) values.push_back(parse_real((*diag)[i], index(dpath, i)));
        ensure_capacity(values.size());
        return ComplexMatrix::diagonal(values);
    }
    if (const Json* factors = optional_field(node, "tensor")) {
        const std::string tpath = join(path, "tensor");
        if (!factors->is_array() || factors->size() < 2) throw SpecSyntaxError(tpath, "expected two or more factors");
        ComplexMatrix out = parse_matrix((*factors)[0], index(tpath, 0));
        for (std::size_t i = 1; i < factors->size(); ++i) out = tensor(out, parse_matrix((*factors)[i], index(tpath, i)));
        return out;
    }
    throw SpecSyntaxError(path, "matrix needs one of 'entries', 'named', 'diag', 'tensor'");
}

// Density matrices may also be given as a pure vector or as maximally mixed.
ComplexMatrix parse_state(const Json& node, const std::string& path) {
    if (!node.is_object()) throw SpecSyntaxError(path, "expected a state object");
    if (const Json* pure = optional_field(node, "pure")) {
        const auto amps = parse_vector(*pure, join(path, "pure"));
        try {
            return pure_state(amps).matrix();
        } catch (const DegenerateInputError& e) {
            throw SpecValidationError(join(path, "pure"), e.what());
        }
    }
    if (const Json* mixed = optional_field(node, "maximally_mixed")) {
        const std::size_t dim = parse_count(*mixed, join(path, "maximally_mixed"));
        if (dim == 0) throw SpecValidationError(join(path, "maximally_mixed"), "dimension must be positive");
        ensure_capacity(dim);
        return DensityOperator::maximally_mixed(dim).matrix();
    }
    return parse_matrix(node, path);
}

// Re-raise a core validation failure against the spec path that caused it.
template <class F>
auto validated(const std::string& path, F&& build) {
    try {
        return build();
    } catch (const CapacityError&) {
        throw;
    } catch (const ResidualError& e) {
        throw SpecValidationError(path, e.what(), e.residual());
    } catch (const SpecSyntaxError&) {
        throw;
    } catch (const SpecValidationError&) {
        throw;
    } catch (const Error& e) {
        throw SpecValidationError(path, e.what());
    }
}

DensityOperator as_density(const ComplexMatrix& m, const std::string& path, double tol) {
    return validated(path, [&] { return DensityOperator::from_matrix(m, tol); });
}

Observable as_observable(const ComplexMatrix& m, const std::string& path, const ExperimentSpec& s) {
    return validated(path, [&] { return make_observable(m, s.cluster_tol, s.effective_tol); });
}

ProcessSpec parse_process(const Json& node, const std::string& path) {
    if (!node.is_object()) throw SpecSyntaxError(path, "expected a process object");
    ProcessSpec p;
    if (const Json* model = optional_field(node, "model")) {
        if (!model->is_string() || model->get<std::string>() != "von_neumann") {
            throw SpecSyntaxError(join(path, "model"), "only the 'von_neumann' model is built in");
        }
        p.von_neumann = true;
        p.observable = parse_matrix(require(node, path, "observable"), join(path, "observable"));
        return p;
    }
    p.sigma = parse_state(require(node, path, "sigma"), join(path, "sigma"));
    p.unitary = parse_matrix(require(node, path, "unitary"), join(path, "unitary"));
    p.meter = parse_matrix(require(node, path, "meter"), join(path, "meter"));
    return p;
}

MeasuringProcess build_process(const ProcessSpec& p, const std::string& path, const ExperimentSpec& s) {
    if (p.von_neumann) {
        const Observable a = as_observable(p.observable, join(path, "observable"), s);
        return validated(path, [&] { return build_von_neumann_model(a); });
    }
    DensityOperator sigma = as_density(p.sigma, join(path, "sigma"), s.effective_tol);
    Observable meter = as_observable(p.meter, join(path, "meter"), s);
    return validated(join(path, "unitary"),
                     [&] { return MeasuringProcess(sigma, p.unitary, meter, s.effective_tol); });
}

void require_dim(std::size_t got, std::size_t want, const std::string& path, const std::string& what) {
    if (got != want) {
        throw SpecValidationError(path, what + ": dimension " + std::to_string(got) + ", expected " +
                                            std::to_string(want));
    }
}

void validate(const ExperimentSpec& s) {
    const double tol = s.effective_tol;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, BornSpec>) {
                as_observable(p.observable, "observable", s);
                as_density(p.state, "state", tol);
                require_dim(p.state.dim(), p.observable.dim(), "state", "state and observable differ");
            } else if constexpr (std::is_same_v<T, IndirectSpec>) {
                const auto mp = build_process(p.process, "process", s);
                as_density(p.state, "state", tol);
                require_dim(p.state.dim(), mp.dim_system(), "state", "state does not fit the process");
                if (p.condition_on && !mp.meter().find_outcome(*p.condition_on)) {
                    throw SpecValidationError("condition_on", "not an outcome of the meter");
                }
            } else if constexpr (std::is_same_v<T, InstrumentCheckSpec>) {
                const auto mp = build_process(p.process, "process", s);
                require_dim(p.system_dim, mp.dim_system(), "system_dim", "system_dim does not fit the process");
            } else if constexpr (std::is_same_v<T, EvolveSpec>) {
                validated("hamiltonian",
                          [&] { return CompositeHamiltonian(p.h_system, p.h_meter, p.h_interaction, tol); });
                const std::size_t dim = p.h_system.dim() * p.h_meter.dim();
                if (p.psi0) {
                    require_dim(p.psi0->size(), dim, "psi0", "initial state does not fit the composite space");
                    const double err = std::abs(vector_norm(*p.psi0) - 1.0);
                    if (err > tol) throw SpecValidationError("psi0", "initial state is not normalized", err);
                } else {
                    as_density(*p.rho0, "rho0", tol);
                    require_dim(p.rho0->dim(), dim, "rho0", "initial state does not fit the composite space");
                }
                if (!(p.dt > 0.0)) throw SpecValidationError("dt", "must be positive");
            } else if constexpr (std::is_same_v<T, ChshSpec>) {
                const auto state = as_density(p.state, "state", tol);
                validated("", [&] {
                    return ChshScenario(state, as_observable(p.a1, "a1", s), as_observable(p.a2, "a2", s),
                                        as_observable(p.b1, "b1", s), as_observable(p.b2, "b2", s), tol);
                });
            } else if constexpr (std::is_same_v<T, UncertaintySpec>) {
                as_observable(p.a, "a", s);
                as_observable(p.b, "b", s);
                as_density(p.state, "state", tol);
                require_dim(p.b.dim(), p.a.dim(), "b", "observables differ");
                require_dim(p.state.dim(), p.a.dim(), "state", "state and observables differ");
            } else if constexpr (std::is_same_v<T, ContextCompareSpec>) {
                const ContextSpec* ctx[2] = {&p.first, &p.second};
                for (std::size_t i = 0; i < 2; ++i) {
                    const std::string base = index("contexts", i);
                    const auto mp = build_process(ctx[i]->process, join(base, "process"), s);
                    const auto rho = as_density(ctx[i]->rho, join(base, "rho"), tol);
                    require_dim(rho.dim(), mp.dim_system(), join(base, "rho"), "state does not fit the process");
                }
                require_dim(p.second.rho.dim(), p.first.rho.dim(), "contexts[1].rho", "contexts differ");
                const auto mp0 = build_process(p.first.process, "contexts[0].process", s);
                const auto mp1 = build_process(p.second.process, "contexts[1].process", s);
                require_dim(mp1.dim_meter(), mp0.dim_meter(), "contexts[1].process", "meter spaces differ");
            }
        },
        s.payload);
}

Kind parse_kind(const Json& v) {
    if (!v.is_string()) throw SpecSyntaxError("kind", "expected a string");
    const std::string k = v.get<std::string>();
    for (Kind kind : {Kind::born, Kind::indirect_measurement, Kind::instrument_check, Kind::evolve, Kind::chsh,
                      Kind::uncertainty, Kind::context_compare}) {
        if (k == kind_name(kind)) return kind;
    }
    throw SpecSyntaxError("kind", "unknown experiment kind '" + k + "'");
}

ContextSpec parse_context(const Json& node, const std::string& path) {
    if (!node.is_object()) throw SpecSyntaxError(path, "expected a context object");
    ContextSpec c;
    if (const Json* label = optional_field(node, "label")) {
        if (!label->is_string()) throw SpecSyntaxError(join(path, "label"), "expected a string");
        c.label = label->get<std::string>();
    }
    c.rho = parse_state(require(node, path, "rho"), join(path, "rho"));
    c.process = parse_process(require(node, path, "process"), join(path, "process"));
    return c;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return Json{{"entries", std::move(rows)}};
}

Json vector_json(const ComplexVector& v) {
    Json out = Json::array();
    for (const auto& z : v) out.push_back(complex_json(z));
    return out;
}

Json process_json(const ProcessSpec& p) {
    if (p.von_neumann) return Json{{"model", "von_neumann"}, {"observable", matrix_json(p.observable)}};
    return Json{{"sigma", matrix_json(p.sigma)}, {"unitary", matrix_json(p.unitary)}, {"meter", matrix_json(p.meter)}};
}

Json context_json(const ContextSpec& c) {
    return Json{{"label", c.label}, {"rho", matrix_json(c.rho)}, {"process", process_json(c.process)}};
}

}  // namespace

const char* kind_name(Kind k) noexcept {
    switch (k) {
        case Kind::born: return "born";
        case Kind::indirect_measurement: return "indirect_measurement";
        case Kind::instrument_check: return "instrument_check";
        case Kind::evolve: return "evolve";
        case Kind::chsh: return "chsh";
        case Kind::uncertainty: return "uncertainty";
        case Kind::context_compare: return "context_compare";
    }
    return "unknown";
}

ExperimentSpec parse_spec(const Json& doc, std::optional<double> tol_override) {
    if (!doc.is_object()) throw SpecSyntaxError("", "spec document must be an object");
    ExperimentSpec s;
    s.kind = parse_kind(require(doc, "", "kind"));

    if (const Json* schema = optional_field(doc, "schema")) {
        if (!schema->is_number_integer() || schema->get<long long>() != 1) {
            throw SpecSyntaxError("schema", "unsupported schema version (expected 1)");
        }
    }
    if (const Json* tol = optional_field(doc, "tol")) {
        s.tol = parse_real(*tol, "tol");
        if (*s.tol <= 0.0) throw SpecValidationError("tol", "must be positive");
    }
    if (const Json* seed = optional_field(doc, "seed")) {
        if (!seed->is_number_unsigned()) throw SpecSyntaxError("seed", "expected a non-negative integer");
        s.seed = seed->get<std::uint64_t>();
    }
    if (const Json* ct = optional_field(doc, "cluster_tol")) {
        s.cluster_tol = parse_real(*ct, "cluster_tol");
        if (s.cluster_tol < 0.0) throw SpecValidationError("cluster_tol", "must be non-negative");
    }
    s.effective_tol = tol_override ? *tol_override : s.tol ? *s.tol : default_tolerance();

    switch (s.kind) {
        case Kind::born:
            s.payload = BornSpec{parse_matrix(require(doc, "", "observable"), "observable"),
                                 parse_state(require(doc, "", "state"), "state")};
            break;
        case Kind::indirect_measurement: {
            IndirectSpec p{parse_process(require(doc, "", "process"), "process"),
                           parse_state(require(doc, "", "state"), "state"), std::nullopt};
            if (const Json* x = optional_field(doc, "condition_on")) p.condition_on = parse_real(*x, "condition_on");
            s.payload = std::move(p);
            break;
        }
        case Kind::instrument_check: {
            InstrumentCheckSpec p;
            p.process = parse_process(require(doc, "", "process"), "process");
            if (const Json* d = optional_field(doc, "system_dim")) {
                p.system_dim = parse_count(*d, "system_dim");
            } else if (p.process.von_neumann) {
                p.system_dim = p.process.observable.dim();
            } else if (p.process.sigma.dim() > 0) {
                p.system_dim = p.process.unitary.dim() / p.process.sigma.dim();
            }
            if (const Json* n = optional_field(doc, "samples")) p.samples = parse_count(*n, "samples");
            s.payload = std::move(p);
            break;
        }
        case Kind::evolve: {
            EvolveSpec p;
            const Json& h = require(doc, "", "hamiltonian");
            p.h_system = parse_matrix(require(h, "hamiltonian", "system"), "hamiltonian.system");
            p.h_meter = parse_matrix(require(h, "hamiltonian", "meter"), "hamiltonian.meter");
            if (const Json* hi = optional_field(h, "interaction")) {
                p.h_interaction = parse_matrix(*hi, "hamiltonian.interaction");
            } else {
                const std::size_t dim = p.h_system.dim() * p.h_meter.dim();
                ensure_capacity(dim);
                p.h_interaction = ComplexMatrix::zero(dim);
            }
            p.t = parse_real(require(doc, "", "t"), "t");
            if (const Json* dt = optional_field(doc, "dt")) p.dt = parse_real(*dt, "dt");
            const Json* psi = optional_field(doc, "psi0");
            const Json* rho = optional_field(doc, "rho0");
            if ((psi == nullptr) == (rho == nullptr)) throw SpecSyntaxError("psi0", "give exactly one of psi0, rho0");
            if (psi) p.psi0 = parse_vector(*psi, "psi0");
            if (rho) p.rho0 = parse_state(*rho, "rho0");
            s.payload = std::move(p);
            break;
        }
        case Kind::chsh:
            s.payload = ChshSpec{parse_state(require(doc, "", "state"), "state"),
                                 parse_matrix(require(doc, "", "a1"), "a1"), parse_matrix(require(doc, "", "a2"), "a2"),
                                 parse_matrix(require(doc, "", "b1"), "b1"), parse_matrix(require(doc, "", "b2"), "b2")};
            break;
        case Kind::uncertainty:
            s.payload = UncertaintySpec{parse_matrix(require(doc, "", "a"), "a"), parse_matrix(require(doc, "", "b"), "b"),
                                        parse_state(require(doc, "", "state"), "state")};
            break;
        case Kind::context_compare: {
            const Json& ctx = require(doc, "", "contexts");
            if (!ctx.is_array() || ctx.size() != 2) throw SpecSyntaxError("contexts", "expected exactly two contexts");
            s.payload = ContextCompareSpec{parse_context(ctx[0], "contexts[0]"), parse_context(ctx[1], "contexts[1]")};
            break;
        }
    }
    validate(s);
    return s;
}

ExperimentSpec parse_spec_text(const std::string& text, std::optional<double> tol_override) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw SpecSyntaxError("", std::string("malformed document: ") + e.what());
    }
    return parse_spec(doc, tol_override);
}

ExperimentSpec parse_spec_file(const std::string& path, std::optional<double> tol_override) {
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    } else {
        std::ifstream in(path);
        if (!in) throw SpecSyntaxError("", "cannot open spec file '" + path + "'");
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    return parse_spec_text(text, tol_override);
}

Json spec_to_json(const ExperimentSpec& spec) {
    Json out{{"schema", 1}, {"kind", kind_name(spec.kind)}, {"cluster_tol", spec.cluster_tol}};
    if (spec.tol) out["tol"] = *spec.tol;
    if (spec.seed) out["seed"] = *spec.seed;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, BornSpec>) {
                out["observable"] = matrix_json(p.observable);
                out["state"] = matrix_json(p.state);
            } else if constexpr (std::is_same_v<T, IndirectSpec>) {
                out["process"] = process_json(p.process);
                out["state"] = matrix_json(p.state);
                if (p.condition_on) out["condition_on"] = *p.condition_on;
            } else if constexpr (std::is_same_v<T, InstrumentCheckSpec>) {
                out["process"] = process_json(p.process);
                out["system_dim"] = p.system_dim;
                out["samples"] = p.samples;
            } else if constexpr (std::is_same_v<T, EvolveSpec>) {
                out["hamiltonian"] = Json{{"system", matrix_json(p.h_system)},
                                          {"meter", matrix_json(p.h_meter)},
                                          {"interaction", matrix_json(p.h_interaction)}};
                out["t"] = p.t;
                out["dt"] = p.dt;
                if (p.psi0) out["psi0"] = vector_json(*p.psi0);
                if (p.rho0) out["rho0"] = matrix_json(*p.rho0);
            } else if constexpr (std::is_same_v<T, ChshSpec>) {
                out["state"] = matrix_json(p.state);
                out["a1"] = matrix_json(p.a1);
                out["a2"] = matrix_json(p.a2);
                out["b1"] = matrix_json(p.b1);
                out["b2"] = matrix_json(p.b2);
            } else if constexpr (std::is_same_v<T, UncertaintySpec>) {
                out["a"] = matrix_json(p.a);
                out["b"] = matrix_json(p.b);
                out["state"] = matrix_json(p.state);
            } else if constexpr (std::is_same_v<T, ContextCompareSpec>) {
                out["contexts"] = Json::array({context_json(p.first), context_json(p.second)});
            }
        },
        spec.payload);
    return out;
}

std::pair<std::size_t, std::size_t> sweep_dims(const ExperimentSpec& spec) {
    return std::visit(
        [](const auto& p) -> std::pair<std::size_t, std::size_t> {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, BornSpec>) {
                return {p.observable.dim(), 1};
            } else if constexpr (std::is_same_v<T, IndirectSpec> || std::is_same_v<T, InstrumentCheckSpec>) {
                const std::size_t meter = p.process.von_neumann ? 0 : p.process.sigma.dim();
                const std::size_t system =
                    p.process.von_neumann ? p.process.observable.dim() : p.process.unitary.dim() / meter;
                return {system, p.process.von_neumann ? system : meter};
            } else if constexpr (std::is_same_v<T, EvolveSpec>) {
                return {p.h_system.dim(), p.h_meter.dim()};
            } else if constexpr (std::is_same_v<T, ChshSpec>) {
                return {p.a1.dim(), p.b1.dim()};
            } else if constexpr (std::is_same_v<T, UncertaintySpec>) {
                return {p.a.dim(), 1};
            } else {
                return {p.first.rho.dim(), 1};
            }
        },
        spec.payload);
}

}  // namespace qctx::cli
