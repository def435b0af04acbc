// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 only if all pass.
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qctx/cli/spec.hpp"
#include "qctx/contextuality.hpp"
#include "qctx/dynamics.hpp"
#include "qctx/measurement.hpp"
#include "qctx/random.hpp"
#include "qctx/sweeps.hpp"

using namespace qctx;

namespace {

struct Verdict {
    bool passed;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Shared corpus: 200 observables over dims {2, 3, 4}.
Observable corpus_observable(std::size_t i) {
    const std::size_t dims[] = {2, 3, 4};
    Rng rng(1001, i);
    return make_observable(random_hermitian(dims[i % 3], rng));
}

// Shared corpus: 200 processes with Haar-random U, random sigma and random meter.
MeasuringProcess corpus_process(std::size_t i) {
    Rng rng(1002, i);
    const std::size_t d = 2 + i % 3, m = 2 + (i / 3) % 2;
    return MeasuringProcess(random_density(m, rng), random_unitary(d * m, rng), make_observable(random_hermitian(m, rng)));
}

// 1. The von Neumann model reproduces the Born distribution.
Verdict born_equivalence() {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (std::size_t i = 0; i < 200; ++i) {
        const Observable a = corpus_observable(i);
        const MeasuringProcess mp = build_von_neumann_model(a);
        Rng rng(1011, i);
        for (int r = 0; r < 10; ++r) {
            const DensityOperator rho = random_density(a.dim(), rng);
            const OutcomeDistribution direct = born_distribution(a, rho);
            const OutcomeDistribution pointer = outcome_probabilities(mp, rho);
            for (std::size_t k = 0; k < direct.entries.size(); ++k)
                worst = std::max(worst, std::abs(direct.entries[k].probability - pointer.entries[k].probability));
        }
    }
    const double secs = seconds_since(start);
    return {worst <= 1e-9 && secs <= 30.0, fmt("max |p_pointer - p_born| %.3g, %.2fs", worst, secs)};
}

// 2. Instrument axioms: CP (Choi >= 0) and normalization.
Verdict instrument_axioms() {
    const auto start = std::chrono::steady_clock::now();
    double min_eig = INFINITY, worst_norm = 0.0;
    std::size_t errors = 0;
    for (std::size_t i = 0; i < 200; ++i) {
        const MeasuringProcess mp = corpus_process(i);
        Rng rng(1012, i);
        try {
            const Instrument inst = extract_instrument(mp, mp.dim_system());
            for (const auto& b : inst.branches) min_eig = std::min(min_eig, b.choi_min_eigenvalue);
            for (int r = 0; r < 5; ++r) {
                const DensityOperator rho = random_density(mp.dim_system(), rng);
                worst_norm = std::max(worst_norm, std::abs(inst.total_probability(rho.matrix()) - 1.0));
            }
        } catch (const Error&) {
            ++errors;
        }
    }
    const double secs = seconds_since(start);
    const bool ok = errors == 0 && min_eig >= -1e-9 && worst_norm <= 1e-9 && secs <= 60.0;
    return {ok, fmt("min Choi eigenvalue %.3g, max |sum Tr I_x - 1| %.3g", min_eig, worst_norm) +
                    fmt(", %.2fs", secs) + (errors ? ", " + std::to_string(errors) + " axiom errors" : "")};
}

// 3. Tr I_x(rho) equals the pointer probability p(x), same corpus.
Verdict trace_matches_probability() {
    double worst = 0.0;
    for (std::size_t i = 0; i < 200; ++i) {
        const MeasuringProcess mp = corpus_process(i);
        Rng rng(1012, i);
        for (int r = 0; r < 5; ++r) {
            const DensityOperator rho = random_density(mp.dim_system(), rng);
            const OutcomeDistribution dist = outcome_probabilities(mp, rho);
            for (std::size_t k = 0; k < dist.entries.size(); ++k)
                worst = std::max(worst, std::abs(apply_instrument_to(mp, rho.matrix(), k).trace().real() -
                                                 dist.entries[k].probability));
        }
    }
    return {worst <= 1e-10, fmt("max |Tr I_x - p| %.3g", worst)};
}

// 4. Schrodinger / von Neumann agreement and second-order residual convergence.
Verdict dynamics_consistency() {
    double worst_gap = 0.0, lo = INFINITY, hi = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
        Rng rng(1004, i);
        const std::size_t ds = 2, dm = 2 + i % 2;
        const CompositeHamiltonian ch(random_hermitian(ds, rng), random_hermitian(dm, rng),
                                      random_hermitian(ds * dm, rng));
        const ComplexVector psi0 = random_pure_vector(ds * dm, rng);
        const double t = 2.0 * rng.uniform();
        const ComplexVector psi = evolve_pure(psi0, ch, t);
        const DensityOperator rt = evolve_density(pure_state(psi0), ch, t);
        worst_gap = std::max(worst_gap, frobenius_distance(ComplexMatrix::outer(psi, psi), rt.matrix()));
        const double ratio = von_neumann_residual(pure_state(psi0), ch, t, 1e-3) /
                             von_neumann_residual(pure_state(psi0), ch, t, 5e-4);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    const bool ok = worst_gap <= 1e-9 && lo >= 3.5 && hi <= 4.5;
    return {ok, fmt("max pure/density gap %.3g", worst_gap) + fmt(", residual ratio in [%.4f, %.4f]", lo, hi)};
}

// 5. Tsirelson bound on random scenarios, attained by the singlet.
Verdict tsirelson() {
    const auto start = std::chrono::steady_clock::now();
    SweepOptions opt;
    opt.seed = 1005;
    opt.samples = 10000;
    const SweepStats s = tsirelson_sweep(opt);
    const double r = 1.0 / std::sqrt(2.0);
    const ComplexMatrix x{{0.0, 1.0}, {1.0, 0.0}}, z{{1.0, 0.0}, {0.0, -1.0}};
    const ChshScenario singlet(pure_state(ComplexVector{0.0, r, -r, 0.0}), make_observable(z), make_observable(x),
                               make_observable(-r * (z + x)), make_observable(r * (x - z)));
    const double gap = std::abs(chsh_value(singlet).value - kTsirelsonBound);
    const double secs = seconds_since(start);
    return {s.failures == 0 && gap <= 1e-9 && secs <= 60.0,
            fmt("max |S| %.12f over 1e4, singlet gap %.3g", s.max, gap) + fmt(", %.2fs", secs)};
}

// 6. Commuting local settings keep |S| <= 2.
Verdict compatibility_classical() {
    SweepOptions opt;
    opt.seed = 1006;
    opt.samples = 1000;
    const SweepStats s = compatible_chsh_sweep(opt);
    return {s.failures == 0, fmt("max |S| %.12f over 1e3", s.max)};
}

// 7. Schrodinger-Robertson inequality, and its saturation.
Verdict uncertainty() {
    double min_slack = INFINITY;
    std::size_t failures = 0;
    for (std::size_t d = 2; d <= 4; ++d) {
        SweepOptions opt;
        opt.seed = 1007 + d;
        opt.samples = 3334;
        opt.dim_a = d;
        const SweepStats s = uncertainty_sweep(opt);
        min_slack = std::min(min_slack, s.min);
        failures += s.failures;
    }
    const ComplexMatrix x{{0.0, 1.0}, {1.0, 0.0}}, y{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}};
    const double sat = std::abs(
        schrodinger_robertson_check(make_observable(x), make_observable(y), pure_state(ComplexVector{1.0, 0.0})).slack);
    return {failures == 0 && sat <= 1e-9,
            fmt("min slack %.3g over 10002 triples, dims 2-4, saturated |slack| %.3g", min_slack, sat)};
}

// 8. The canonical von Neumann model realizes the Luders instrument.
Verdict luders() {
    double worst = 0.0;
    for (std::size_t i = 0; i < 200; ++i) {
        const Observable a = corpus_observable(i);
        const Instrument inst = extract_instrument(build_von_neumann_model(a), a.dim());
        for (std::size_t k = 0; k < a.outcome_count(); ++k)
            worst = std::max(worst, frobenius_distance(inst.branches[k].choi,
                                                       choi_from_kraus({a.spectrum()[k].projection})));
    }
    return {worst <= 1e-9, fmt("max Choi distance %.3g over 200 observables", worst)};
}

// 9. CLI: golden corpus exit codes and byte-identical repeated runs.
int run_cli(const std::string& args, const std::string& out_path) {
    const std::string cmd = std::string("\"") + QCTX_CLI_PATH + "\" " + args + " > \"" + out_path + "\" 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Verdict cli_contract() {
    namespace fs = std::filesystem;
    const fs::path golden(QCTX_GOLDEN_DIR);
    const cli::Json manifest = cli::Json::parse(slurp((golden / "manifest.json").string()));
    const fs::path tmp = fs::temp_directory_path() / ("qctx_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(tmp);
    std::size_t ok = 0, total = 0;
    std::string bad;
    for (auto it = manifest.begin(); it != manifest.end(); ++it) {
        ++total;
        const std::string spec = "\"" + (golden / it.key()).string() + "\"";
        const std::string a = (tmp / "a.json").string(), b = (tmp / "b.json").string();
        const int expected = it.value().get<int>();
        bool good = run_cli("run " + spec, a) == expected;
        if (good && expected == 0) good = run_cli("run " + spec, b) == 0 && slurp(a) == slurp(b);
        if (good) {
            ++ok;
        } else {
            bad += " " + it.key();
        }
    }
    // Seeded randomized runs must also repeat exactly.
    const std::string sweep = "sweep \"" + (golden / "chsh_singlet.json").string() + "\" --n 500 --seed 42";
    const std::string a = (tmp / "a.json").string(), b = (tmp / "b.json").string();
    ++total;
    if (run_cli(sweep, a) == 0 && run_cli(sweep + " --serial", b) == 0 && slurp(a) == slurp(b)) {
        ++ok;
    } else {
        bad += " seeded-sweep";
    }
    fs::remove_all(tmp);
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " golden specs and seeded sweep" +
                             (bad.empty() ? "" : ", failing:" + bad)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"born equivalence of the von neumann model", born_equivalence},
        {"instrument axioms", instrument_axioms},
        {"instrument trace equals pointer probability", trace_matches_probability},
        {"schrodinger / von neumann consistency", dynamics_consistency},
        {"tsirelson bound", tsirelson},
        {"compatibility implies classical chsh bound", compatibility_classical},
        {"schrodinger-robertson uncertainty", uncertainty},
        {"von neumann model gives luders instrument", luders},
        {"cli determinism and exit codes", cli_contract},
    };
    bool all = true;
    int n = 0;
    for (const auto& [name, fn] : criteria) {
        ++n;
        Verdict o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.passed;
        std::printf("criterion %d %s: %s (%s)\n", n, o.passed ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
