#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qctx/cli/spec.hpp"
#include "qctx/sweeps.hpp"

namespace qctx::cli {

inline constexpr int kSchemaVersion = 1;

struct Check {
    std::string name;
    double residual;
    double threshold;
    bool passed;
};

struct Report {
    std::string kind;
    Json spec;     // canonical echo of the input
    Json inputs;   // dimensions and norms
    Json results;
    std::vector<Check> checks;
    Json formula_source = Json::object();
    std::vector<std::string> warnings;

    bool all_checks_passed() const noexcept;
    Json to_json() const;
};

// Deterministic for a fixed spec (and seed, where the kind draws samples).
Report run_experiment(const ExperimentSpec& spec);

// Randomized property sweep chosen by the spec kind: chsh -> Tsirelson,
// born / indirect_measurement -> Born equivalence, uncertainty ->
// Schrodinger-Robertson, instrument_check -> instrument axioms.
Report run_sweep(const ExperimentSpec& spec, std::size_t samples, bool parallel = true);

enum class Format { structured, table };

// Structured: JSON with sorted keys, 12 significant digits, complex numbers
// as [re, im]. Values under a "raw" key and the "spec" echo keep 17 digits.
std::string emit(const Report& report, Format format);
std::string emit_structured(const Json& doc);

// 12-significant-digit rendering used for every reported number.
std::string format_number(double x);

}  // namespace qctx::cli
