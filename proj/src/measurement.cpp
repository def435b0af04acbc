#include "qctx/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "qctx/errors.hpp"

namespace qctx {

namespace {

constexpr double kProbabilitySumTolerance = 1e-9;

void require_system(const MeasuringProcess& mp, std::size_t dim, const char* op) {
    if (dim != mp.dim_system()) {
        std::ostringstream os;
        os << op << ": system dim " << dim << " does not match measuring process (system dim "
           << mp.dim_system() << ", meter dim " << mp.dim_meter() << ")";
        throw DimensionError(os.str());
    }
}

ComplexMatrix unit_matrix(std::size_t n, std::size_t i, std::size_t j) {
    ComplexMatrix m(n);
    m(i, j) = 1.0;
    return m;
}

}  // namespace

MeasuringProcess::MeasuringProcess(DensityOperator sigma, ComplexMatrix u, Observable meter, double tol)
    : sigma_(std::move(sigma)), u_(std::move(u)), meter_(std::move(meter)) {
    const std::size_t dm = sigma_.dim();
    if (dm == 0 || u_.dim() == 0 || u_.dim() % dm != 0) {
        std::ostringstream os;
        os << "interaction unitary dim " << u_.dim() << " is not a multiple of meter dim " << dm;
        throw DimensionError(os.str());
    }
    if (meter_.dim() != dm) {
        throw DimensionError("meter observable dim " + std::to_string(meter_.dim()) + " != apparatus state dim " +
                             std::to_string(dm));
    }
    require_unitary(u_, tol);
}

ComplexMatrix MeasuringProcess::joint_state(const DensityOperator& rho) const {
    require_system(*this, rho.dim(), "joint_state");
    const ComplexMatrix product = tensor(rho.matrix(), sigma_.matrix());
    return matmul(matmul(u_, product), adjoint(u_));
}

ComplexMatrix MeasuringProcess::lifted_projection(std::size_t k) const {
    return tensor(ComplexMatrix::identity(dim_system()), meter_.spectrum()[k].projection);
}

OutcomeDistribution outcome_probabilities(const MeasuringProcess& mp, const DensityOperator& rho) {
    const ComplexMatrix joint = mp.joint_state(rho);
    OutcomeDistribution dist;
    const auto spectrum = mp.meter().spectrum();
    dist.entries.resize(spectrum.size());
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        dist.entries[k] = {spectrum[k].value, trace_of_product(mp.lifted_projection(k), joint).real()};
    }
    dist.consistency_residual = std::abs(dist.total() - 1.0);
    if (dist.consistency_residual > kProbabilitySumTolerance) {
        throw InvariantViolation("pointer probabilities do not sum to one", dist.consistency_residual);
    }
    return dist;
}

ComplexMatrix apply_instrument_to(const MeasuringProcess& mp, const ComplexMatrix& x, std::size_t k) {
    require_system(mp, x.dim(), "apply_instrument");
    if (k >= mp.meter().outcome_count()) throw OutcomeError("outcome index out of range");
    const ComplexMatrix joint =
        matmul(matmul(mp.unitary(), tensor(x, mp.sigma().matrix())), adjoint(mp.unitary()));
    return partial_trace_right(matmul(mp.lifted_projection(k), joint), mp.dim_system(), mp.dim_meter());
}

ComplexMatrix apply_instrument_at(const MeasuringProcess& mp, const DensityOperator& rho, std::size_t k) {
    ComplexMatrix out = apply_instrument_to(mp, rho.matrix(), k);
    const auto es = hermitian_eigensystem(out, 1e-6);
    const double smallest = es.eigenvalues.empty() ? 0.0 : es.eigenvalues.front();
    if (smallest < -default_tolerance()) {
        throw InvariantViolation("instrument output is not positive semidefinite", -smallest);
    }
    return out;
}

ComplexMatrix apply_instrument(const MeasuringProcess& mp, const DensityOperator& rho, double outcome) {
    return apply_instrument_at(mp, rho, mp.meter().outcome_index(outcome));
}

DensityOperator selective_post_state(const MeasuringProcess& mp, const DensityOperator& rho, double outcome) {
    const std::size_t k = mp.meter().outcome_index(outcome);
    ComplexMatrix branch = apply_instrument_at(mp, rho, k);
    const double p = branch.trace().real();
    if (p <= kNullEventProbability) {
        std::ostringstream os;
        os.precision(12);
        os << "cannot condition on outcome " << mp.meter().spectrum()[k].value << " with probability " << p;
        throw ZeroProbabilityError(os.str());
    }
    branch *= Complex(1.0 / p);
    return DensityOperator::from_matrix(std::move(branch));
}

DensityOperator nonselective_post_state(const MeasuringProcess& mp, const DensityOperator& rho) {
    ComplexMatrix total(rho.dim());
    for (std::size_t k = 0; k < mp.meter().outcome_count(); ++k) total += apply_instrument_at(mp, rho, k);
    return DensityOperator::from_matrix(std::move(total));
}

ComplexMatrix cyclic_shift(std::size_t m, std::size_t k) {
    ComplexMatrix s(m);
    for (std::size_t j = 0; j < m; ++j) s((j + k) % m, j) = 1.0;
    return s;
}

MeasuringProcess build_von_neumann_model(const Observable& a) {
    const auto spectrum = a.spectrum();
    const std::size_t m = spectrum.size();
    if (m == 0) throw DegenerateInputError("observable has no outcomes");

    ComplexMatrix u(a.dim() * m);
    std::vector<double> pointer_values(m);
    for (std::size_t k = 0; k < m; ++k) {
        u += tensor(spectrum[k].projection, cyclic_shift(m, k));
        pointer_values[k] = spectrum[k].value;
    }
    ComplexMatrix ground(m);
    ground(0, 0) = 1.0;

    // The pointer is diagonal, so it needs no clustering beyond the system's.
    return MeasuringProcess(DensityOperator::from_matrix(std::move(ground)), std::move(u),
                            make_observable(ComplexMatrix::diagonal(pointer_values), a.cluster_tolerance()));
}

std::size_t InstrumentBranch::dim_system() const noexcept {
    return static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(choi.dim()))));
}

ComplexMatrix InstrumentBranch::apply(const ComplexMatrix& rho) const {
    const std::size_t d = dim_system();
    if (rho.dim() != d) throw DimensionError("instrument branch applied to wrong dimension");
    // I_x(rho) = sum_ij rho_ij * block(i, j) of the Choi matrix.
    ComplexMatrix out(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const Complex r = rho(i, j);
            if (r == Complex{}) continue;
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b) out(a, b) += r * choi(i * d + a, j * d + b);
        }
    return out;
}

std::vector<ComplexMatrix> InstrumentBranch::kraus() const {
    const std::size_t d = dim_system();
    const auto es = hermitian_eigensystem(choi, 1e-6);
    std::vector<ComplexMatrix> ops;
    for (std::size_t k = es.eigenvalues.size(); k-- > 0;) {
        const double lambda = es.eigenvalues[k];
        if (lambda <= kKrausCutoff) break;
        const double s = std::sqrt(lambda);
        ComplexMatrix op(d);
        // Choi eigenvector w has w[i*d + a] = K[a][i].
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t a = 0; a < d; ++a) op(a, i) = s * es.eigenvectors(i * d + a, k);
        ops.push_back(std::move(op));
    }
    return ops;
}

double Instrument::total_probability(const ComplexMatrix& rho) const {
    double total = 0.0;
    for (const auto& b : branches) total += b.apply(rho).trace().real();
    return total;
}

ComplexMatrix choi_from_kraus(const std::vector<ComplexMatrix>& kraus) {
    if (kraus.empty()) throw DegenerateInputError("choi_from_kraus: no Kraus operators");
    const std::size_t d = kraus.front().dim();
    ComplexMatrix choi(d * d);
    for (const auto& op : kraus) {
        if (op.dim() != d) throw DimensionError("choi_from_kraus: Kraus operators differ in dimension");
        ComplexVector w(d * d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t a = 0; a < d; ++a) w[i * d + a] = op(a, i);
        choi += ComplexMatrix::outer(w, w);
    }
    return choi;
}

Instrument extract_instrument(const MeasuringProcess& mp, std::size_t dim_system, double tol) {
    require_system(mp, dim_system, "extract_instrument");
    const std::size_t d = dim_system;
    const std::size_t outcomes = mp.meter().outcome_count();

    Instrument inst;
    inst.dim_system = d;
    inst.branches.resize(outcomes);
    std::vector<std::exception_ptr> failures(outcomes);

    // Each branch touches only its own slot, so the loop is order independent.
#pragma omp parallel for schedule(dynamic) if (outcomes > 1 && d >= 4)
    for (long long kk = 0; kk < static_cast<long long>(outcomes); ++kk) {
        const auto k = static_cast<std::size_t>(kk);
        try {
        auto image = [&](const ComplexMatrix& x) { return apply_instrument_to(mp, x, k); };

        // Images of the matrix units |i><j|, assembled from PSD inputs only:
        //   P = (|i>+|j>)(<i|+<j|)/2,  Q = (|i>+i|j>)(<i|-i<j|)/2,  D = (|i><i| + |j><j|)/2
        //   |i><j| = P + iQ - (1+i) D,  |j><i| = P - iQ - (1-i) D
        std::vector<ComplexMatrix> diag_images(d);
        for (std::size_t i = 0; i < d; ++i) diag_images[i] = image(unit_matrix(d, i, i));

        ComplexMatrix choi(d * d);
        auto place = [&](std::size_t i, std::size_t j, const ComplexMatrix& block) {
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b) choi(i * d + a, j * d + b) = block(a, b);
        };
        for (std::size_t i = 0; i < d; ++i) place(i, i, diag_images[i]);

        const Complex I(0.0, 1.0);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = i + 1; j < d; ++j) {
                ComplexMatrix p(d), q(d);
                p(i, i) = p(j, j) = p(i, j) = p(j, i) = 0.5;
                q(i, i) = q(j, j) = 0.5;
                q(i, j) = -0.5 * I;
                q(j, i) = 0.5 * I;
                const ComplexMatrix ip = image(p);
                const ComplexMatrix iq = image(q);
                const ComplexMatrix id = (diag_images[i] + diag_images[j]) * Complex(0.5);
                place(i, j, ip + iq * I - id * (1.0 + I));
                place(j, i, ip - iq * I - id * (1.0 - I));
            }
        }

        const auto es = hermitian_eigensystem(choi, 1e-6);
        inst.branches[k] = {mp.meter().spectrum()[k].value, std::move(choi),
                            es.eigenvalues.empty() ? 0.0 : es.eigenvalues.front()};
        } catch (...) {
            failures[k] = std::current_exception();
        }
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);

    for (const auto& b : inst.branches) {
        if (b.choi_min_eigenvalue < -tol) {
            std::ostringstream os;
            os.precision(12);
            os << "outcome " << b.outcome << " is not completely positive: Choi min eigenvalue "
               << b.choi_min_eigenvalue;
            throw InstrumentAxiomError(os.str(), -b.choi_min_eigenvalue);
        }
    }

    ComplexMatrix summed(d * d);
    for (const auto& b : inst.branches) summed += b.choi;
    // Choi layout is input (x) output; tracing the output leaves sum_ij |i><j| Tr I(|i><j|).
    inst.trace_preservation_residual =
        frobenius_distance(partial_trace_right(summed, d, d), ComplexMatrix::identity(d));
    if (inst.trace_preservation_residual > tol) {
        throw InstrumentAxiomError("instrument is not trace preserving", inst.trace_preservation_residual);
    }
    return inst;
}

}  // namespace qctx
