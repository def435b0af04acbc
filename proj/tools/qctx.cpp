// qctx: batch front end for indirect-measurement and contextuality experiments.
//
//   qctx run   <spec|-> [--out PATH] [--format structured|table] [--tol X] [--seed N]
//   qctx check <spec|-> [--tol X]
//   qctx sweep <spec|-> --n N [--out PATH] [--format ...] [--tol X] [--seed N] [--serial]
//
// Exit codes: 0 success, 1 usage or I/O, 2 spec syntax, 3 spec validation,
// 4 numerical invariant violation, 5 capacity.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qctx/cli/report.hpp"
#include "qctx/cli/spec.hpp"
#include "qctx/errors.hpp"
#include "qctx/tolerance.hpp"

namespace {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kSyntax = 2,
    kValidation = 3,
    kNumerical = 4,
    kCapacity = 5,
};

struct Options {
    std::string spec_path;
    std::string out_path;
    std::string format = "structured";
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    std::size_t samples = 1000;
    bool serial = false;
};

int write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return kOk;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out || !(out << text)) {
        std::cerr << "qctx: cannot write '" << out_path << "'\n";
        return kUsage;
    }
    return kOk;
}

qctx::cli::ExperimentSpec load(const Options& opt) {
    auto spec = qctx::cli::parse_spec_file(opt.spec_path, opt.tol);
    if (opt.seed) spec.seed = opt.seed;
    return spec;
}

int finish(const qctx::cli::Report& report, const Options& opt) {
    const auto format = opt.format == "table" ? qctx::cli::Format::table : qctx::cli::Format::structured;
    if (int rc = write_output(qctx::cli::emit(report, format), opt.out_path); rc != kOk) return rc;
    if (!report.all_checks_passed()) {
        for (const auto& c : report.checks)
            if (!c.passed) std::cerr << "qctx: check failed: " << c.name << "\n";
        return kNumerical;
    }
    return kOk;
}

template <class F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const qctx::cli::SpecSyntaxError& e) {
        std::cerr << "qctx: spec syntax error: " << e.what() << "\n";
        return kSyntax;
    } catch (const qctx::cli::SpecValidationError& e) {
        std::cerr << "qctx: spec validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const qctx::CapacityError& e) {
        std::cerr << "qctx: capacity exceeded: " << e.what() << "\n";
        return kCapacity;
    } catch (const qctx::OutcomeError& e) {
        std::cerr << "qctx: spec validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const qctx::Error& e) {
        std::cerr << "qctx: numerical invariant violation: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::bad_alloc&) {
        std::cerr << "qctx: out of memory\n";
        return kCapacity;
    } catch (const std::exception& e) {
        std::cerr << "qctx: error: " << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-dimensional indirect measurement and contextuality engine"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("spec", opt.spec_path, "Experiment spec (JSON), '-' for stdin")->required();
        cmd->add_option("--tol", opt.tol, "Override the numerical tolerance (beats QCTX_TOL)");
    };
    auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("--out", opt.out_path, "Write the report here instead of stdout");
        cmd->add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"structured", "table"}));
        cmd->add_option("--seed", opt.seed, "Override the spec's random seed");
    };

    auto* run = app.add_subcommand("run", "Run an experiment and emit its report");
    add_common(run);
    add_output(run);

    auto* check = app.add_subcommand("check", "Validate a spec without computing");
    add_common(check);

    auto* sweep = app.add_subcommand("sweep", "Randomized property sweep for the spec's kind");
    add_common(sweep);
    add_output(sweep);
    sweep->add_option("--n", opt.samples, "Number of random samples")->required()->check(CLI::PositiveNumber);
    sweep->add_flag("--serial", opt.serial, "Use the single-threaded reference loop");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    return guarded([&]() -> int {
        qctx::apply_tolerance_from_env();
        if (opt.tol) qctx::set_default_tolerance(*opt.tol);

        if (run->parsed()) return finish(qctx::cli::run_experiment(load(opt)), opt);
        if (sweep->parsed()) return finish(qctx::cli::run_sweep(load(opt), opt.samples, !opt.serial), opt);

        const auto spec = load(opt);
        std::cout << "ok: " << qctx::cli::kind_name(spec.kind) << "\n";
        return kOk;
    });
}
