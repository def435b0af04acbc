#include "qctx/contextuality.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qctx/errors.hpp"

namespace qctx {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* op) {
    if (a != b) {
        std::ostringstream os;
        os << op << ": dimension mismatch (" << a << " vs " << b << ")";
        throw DimensionError(os.str());
    }
}

void require_dichotomic(const Observable& o, const char* name, double tol) {
    const ComplexMatrix sq = matmul(o.matrix(), o.matrix());
    const double r = frobenius_distance(sq, ComplexMatrix::identity(o.dim()));
    if (r > tol * tolerance_scale(sq)) {
        std::ostringstream os;
        os << "observable " << name << " is not dichotomic: ||A^2 - I||_F = " << r;
        throw SpectrumError(os.str(), r);
    }
}

double correlator(const Observable& a, const Observable& b, const DensityOperator& state) {
    const Complex v = trace_of_product(tensor(a.matrix(), b.matrix()), state.matrix());
    const double bound = 1.0 + kInequalitySlack;
    if (std::abs(v.imag()) > kInequalitySlack || std::abs(v.real()) > bound) {
        throw InvariantViolation("CHSH correlator outside [-1, 1]", std::max(std::abs(v.imag()), std::abs(v.real()) - 1));
    }
    return v.real();
}

}  // namespace

Context::Context(DensityOperator rho, DensityOperator sigma, ComplexMatrix u, std::string label, double tol)
    : rho_(std::move(rho)), sigma_(std::move(sigma)), u_(std::move(u)), label_(std::move(label)) {
    if (u_.dim() != rho_.dim() * sigma_.dim()) {
        std::ostringstream os;
        os << "context '" << label_ << "': unitary dim " << u_.dim() << " != " << rho_.dim() << " x "
           << sigma_.dim();
        throw DimensionError(os.str());
    }
    require_unitary(u_, tol);
}

Context Context::from_process(const DensityOperator& rho, const MeasuringProcess& mp, std::string label) {
    return Context(rho, mp.sigma(), mp.unitary(), std::move(label));
}

ChshScenario::ChshScenario(DensityOperator state, Observable a1, Observable a2, Observable b1, Observable b2,
                           double tol)
    : state_(std::move(state)), a1_(std::move(a1)), a2_(std::move(a2)), b1_(std::move(b1)), b2_(std::move(b2)) {
    require_same_dim(a1_.dim(), a2_.dim(), "CHSH A settings");
    require_same_dim(b1_.dim(), b2_.dim(), "CHSH B settings");
    require_same_dim(state_.dim(), a1_.dim() * b1_.dim(), "CHSH state");
    require_dichotomic(a1_, "a1", tol);
    require_dichotomic(a2_, "a2", tol);
    require_dichotomic(b1_, "b1", tol);
    require_dichotomic(b2_, "b2", tol);
}

ChshScenario ChshScenario::permuted() const { return ChshScenario(state_, a2_, a1_, b2_, b1_); }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a.dim(), b.dim(), "commutator");
    return matmul(a, b) - matmul(b, a);
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a.dim(), b.dim(), "anticommutator");
    return matmul(a, b) + matmul(b, a);
}

ComplexMatrix commutator(const Observable& a, const Observable& b) { return commutator(a.matrix(), b.matrix()); }

bool is_compatible(const Observable& a, const Observable& b, double tol) {
    return frobenius_norm(commutator(a, b)) <= tol;
}

UncertaintyCheck schrodinger_robertson_check(const Observable& a, const Observable& b, const DensityOperator& rho) {
    require_same_dim(a.dim(), b.dim(), "schrodinger_robertson_check");
    require_same_dim(a.dim(), rho.dim(), "schrodinger_robertson_check");
    const double mean_a = expectation(a, rho);
    const double mean_b = expectation(b, rho);
    const Complex comm = trace_of_product(commutator(a, b), rho.matrix());
    const Complex anti = trace_of_product(anticommutator(a.matrix(), b.matrix()), rho.matrix());

    UncertaintyCheck out{};
    out.lhs = variance(a, rho) * variance(b, rho);
    out.commutator_term = std::norm(0.5 * comm);
    out.covariance_term = std::norm(0.5 * anti - mean_a * mean_b);
    out.rhs = out.commutator_term + out.covariance_term;
    out.slack = out.lhs - out.rhs;
    out.holds = out.lhs >= out.rhs - kInequalitySlack;
    return out;
}

ChshResult chsh_value(const ChshScenario& s) {
    ChshResult r{};
    r.correlators = {correlator(s.a1(), s.b1(), s.state()), correlator(s.a1(), s.b2(), s.state()),
                     correlator(s.a2(), s.b1(), s.state()), correlator(s.a2(), s.b2(), s.state())};
    r.value = r.correlators[0] + r.correlators[1] + r.correlators[2] - r.correlators[3];
    r.within_tsirelson = std::abs(r.value) <= kTsirelsonBound + kInequalitySlack;
    r.within_classical = std::abs(r.value) <= 2.0 + kInequalitySlack;
    return r;
}

LocalIncompatibility chsh_local_incompatibility(const ChshScenario& s) {
    return {frobenius_norm(commutator(s.a1(), s.a2())), frobenius_norm(commutator(s.b1(), s.b2()))};
}

double phase_invariant_distance(const ComplexMatrix& u1, const ComplexMatrix& u2) {
    require_same_dim(u1.dim(), u2.dim(), "phase_invariant_distance");
    const Complex overlap = trace_of_product(adjoint(u2), u1);
    const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
    return frobenius_distance(u1, u2 * phase);
}

ContextDistance context_distance(const Context& c1, const Context& c2) {
    require_same_dim(c1.rho().dim(), c2.rho().dim(), "context_distance (rho)");
    require_same_dim(c1.sigma().dim(), c2.sigma().dim(), "context_distance (sigma)");
    ContextDistance d{};
    d.d_rho = frobenius_distance(c1.rho().matrix(), c2.rho().matrix());
    d.d_sigma = frobenius_distance(c1.sigma().matrix(), c2.sigma().matrix());
    d.d_u = phase_invariant_distance(c1.unitary(), c2.unitary());
    d.identical = d.d_rho <= kInequalitySlack && d.d_sigma <= kInequalitySlack && d.d_u <= kInequalitySlack;
    return d;
}

std::vector<ComplexMatrix> pointer_effects(const DensityOperator& sigma, const ComplexMatrix& u,
                                           const Observable& meter) {
    const std::size_t dk = sigma.dim();
    if (dk == 0 || u.dim() % dk != 0) throw DimensionError("pointer_effects: unitary does not factor over meter");
    const std::size_t dh = u.dim() / dk;
    require_same_dim(meter.dim(), dk, "pointer_effects (meter)");

    const ComplexMatrix lifted_sigma = tensor(ComplexMatrix::identity(dh), sigma.matrix());
    const ComplexMatrix u_dag = adjoint(u);
    std::vector<ComplexMatrix> effects;
    for (const auto& comp : meter.spectrum()) {
        const ComplexMatrix heisenberg = matmul(matmul(u_dag, tensor(ComplexMatrix::identity(dh), comp.projection)), u);
        effects.push_back(partial_trace_right(matmul(lifted_sigma, heisenberg), dh, dk));
    }
    return effects;
}

Unifiability contexts_unifiable(const Context& c1, const Context& c2, const Observable& meter1,
                                const Observable& meter2, double tol) {
    require_same_dim(c1.rho().dim(), c2.rho().dim(), "contexts_unifiable");
    if (frobenius_distance(c1.rho().matrix(), c2.rho().matrix()) > tol) {
        throw Error("contexts_unifiable: contexts must share the system state");
    }
    const auto f1 = pointer_effects(c1.sigma(), c1.unitary(), meter1);
    const auto f2 = pointer_effects(c2.sigma(), c2.unitary(), meter2);
    Unifiability u{};
    u.detail = 0.0;
    for (const auto& x : f1)
        for (const auto& y : f2) u.detail = std::max(u.detail, frobenius_norm(commutator(x, y)));
    u.pointer_compatible = u.detail <= tol;
    return u;
}

}  // namespace qctx
