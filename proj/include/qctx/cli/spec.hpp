#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "qctx/errors.hpp"
#include "qctx/linalg.hpp"

namespace qctx::cli {

using Json = nlohmann::json;

// Malformed document: bad JSON, missing field, wrong type. `path` names the
// offending field, e.g. "observable.entries[0][1]".
class SpecSyntaxError : public Error {
public:
    SpecSyntaxError(std::string path, const std::string& what)
        : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// Well-formed document whose values fail a dimensional or physical invariant.
class SpecValidationError : public Error {
public:
    SpecValidationError(std::string path, const std::string& what, std::optional<double> residual = std::nullopt)
        : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)), residual_(residual) {}
    const std::string& path() const noexcept { return path_; }
    std::optional<double> residual() const noexcept { return residual_; }

private:
    std::string path_;
    std::optional<double> residual_;
};

enum class Kind { born, indirect_measurement, instrument_check, evolve, chsh, uncertainty, context_compare };

const char* kind_name(Kind k) noexcept;

// Either the canonical model of `observable`, or an explicit quadruple.
struct ProcessSpec {
    bool von_neumann = false;
    ComplexMatrix observable;  // von_neumann only
    ComplexMatrix sigma;       // explicit only
    ComplexMatrix unitary;
    ComplexMatrix meter;
};

struct BornSpec {
    ComplexMatrix observable;
    ComplexMatrix state;
};

struct IndirectSpec {
    ProcessSpec process;
    ComplexMatrix state;
    std::optional<double> condition_on;
};

struct InstrumentCheckSpec {
    ProcessSpec process;
    std::size_t system_dim = 0;
    std::size_t samples = 5;
};

struct EvolveSpec {
    ComplexMatrix h_system;
    ComplexMatrix h_meter;
    ComplexMatrix h_interaction;
    double t = 0.0;
    double dt = 1e-4;
    std::optional<ComplexVector> psi0;
    std::optional<ComplexMatrix> rho0;
};

struct ChshSpec {
    ComplexMatrix state;
    ComplexMatrix a1, a2, b1, b2;
};

struct UncertaintySpec {
    ComplexMatrix a, b;
    ComplexMatrix state;
};

struct ContextSpec {
    std::string label;
    ComplexMatrix rho;
    ProcessSpec process;
};

struct ContextCompareSpec {
    ContextSpec first;
    ContextSpec second;
};

using Payload = std::variant<BornSpec, IndirectSpec, InstrumentCheckSpec, EvolveSpec, ChshSpec, UncertaintySpec,
                             ContextCompareSpec>;

struct ExperimentSpec {
    Kind kind = Kind::born;
    std::optional<double> tol;   // as written in the document
    double effective_tol = 1e-9; // flag > document > QCTX_TOL > built-in default
    std::optional<std::uint64_t> seed;
    double cluster_tol = 1e-8;
    Payload payload;
};

// Parses and fully validates (every matrix finite, dimensions consistent,
// Hermiticity / unitarity / density invariants) before returning.
// `tol_override` is the command-line --tol, which beats the document's own value.
ExperimentSpec parse_spec(const Json& doc, std::optional<double> tol_override = std::nullopt);
ExperimentSpec parse_spec_text(const std::string& text, std::optional<double> tol_override = std::nullopt);
// "-" reads standard input.
ExperimentSpec parse_spec_file(const std::string& path, std::optional<double> tol_override = std::nullopt);

// Canonical echo: every matrix written out as explicit [re, im] entries.
// parse_spec(spec_to_json(s)) reproduces s.
Json spec_to_json(const ExperimentSpec& spec);

// Dimensions the sweep command should use for this spec (system/site A, meter/site B).
std::pair<std::size_t, std::size_t> sweep_dims(const ExperimentSpec& spec);

}  // namespace qctx::cli
