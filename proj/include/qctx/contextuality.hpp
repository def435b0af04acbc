#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qctx/linalg.hpp"
#include "qctx/measurement.hpp"
#include "qctx/quantum.hpp"

namespace qctx {

// Slack allowed on every inequality verified in this module.
inline constexpr double kInequalitySlack = 1e-9;

/// Experimental conditions of one measurement: system preparation rho,
/// apparatus preparation sigma, and the interaction u on H (x) K.
class Context {
public:
    Context(DensityOperator rho, DensityOperator sigma, ComplexMatrix u, std::string label = {},
            double tol = default_tolerance());
    // Context of a measuring process applied to rho.
    static Context from_process(const DensityOperator& rho, const MeasuringProcess& mp, std::string label = {});

    const DensityOperator& rho() const noexcept { return rho_; }
    const DensityOperator& sigma() const noexcept { return sigma_; }
    const ComplexMatrix& unitary() const noexcept { return u_; }
    const std::string& label() const noexcept { return label_; }

private:
    DensityOperator rho_;
    DensityOperator sigma_;
    ComplexMatrix u_;
    std::string label_;
};

/// Bipartite CHSH setting with dichotomic (+-1) local observables.
class ChshScenario {
public:
    // SpectrumError if an observable does not square to the identity.
    ChshScenario(DensityOperator state, Observable a1, Observable a2, Observable b1, Observable b2,
                 double tol = default_tolerance());

    const DensityOperator& state() const noexcept { return state_; }
    const Observable& a1() const noexcept { return a1_; }
    const Observable& a2() const noexcept { return a2_; }
    const Observable& b1() const noexcept { return b1_; }
    const Observable& b2() const noexcept { return b2_; }
    std::size_t dim_a() const noexcept { return a1_.dim(); }
    std::size_t dim_b() const noexcept { return b1_.dim(); }

    // Same state, settings swapped a1<->a2 and b1<->b2.
    ChshScenario permuted() const;

private:
    DensityOperator state_;
    Observable a1_, a2_, b1_, b2_;
};

ComplexMatrix commutator(const Observable& a, const Observable& b);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

// ||[A, B]||_F <= tol
bool is_compatible(const Observable& a, const Observable& b, double tol = default_tolerance());

struct UncertaintyCheck {
    double lhs;          // Var(A) Var(B)
    double rhs;          // |<[A,B]>/2|^2 + |<{A,B}>/2 - <A><B>|^2
    double commutator_term;
    double covariance_term;
    bool holds;          // lhs >= rhs - kInequalitySlack
    double slack;        // lhs - rhs
};

UncertaintyCheck schrodinger_robertson_check(const Observable& a, const Observable& b, const DensityOperator& rho);

struct ChshResult {
    double value;                       // E11 + E12 + E21 - E22
    std::array<double, 4> correlators;  // E(a1,b1), E(a1,b2), E(a2,b1), E(a2,b2)
    bool within_tsirelson;              // |value| <= 2 sqrt 2 + slack
    bool within_classical;              // |value| <= 2 + slack
};

inline const double kTsirelsonBound = 2.0 * std::sqrt(2.0);

ChshResult chsh_value(const ChshScenario& s);

struct LocalIncompatibility {
    double comm_a;  // ||[A1, A2]||_F
    double comm_b;  // ||[B1, B2]||_F
};

LocalIncompatibility chsh_local_incompatibility(const ChshScenario& s);

struct ContextDistance {
    double d_rho;
    double d_sigma;
    double d_u;    // min over theta of ||u1 - e^{i theta} u2||_F
    bool identical;
};

ContextDistance context_distance(const Context& c1, const Context& c2);

// min_theta ||u1 - e^{i theta} u2||_F; the optimum is theta = arg Tr[u2^dagger u1].
double phase_invariant_distance(const ComplexMatrix& u1, const ComplexMatrix& u2);

struct Unifiability {
    bool pointer_compatible;
    double detail;  // max_{x,y} ||[F1(x), F2(y)]||_F
    std::string criterion = "commuting-pointer-povms";
};

// Effects F(x) = Tr_K[(I (x) sigma) U^dagger (I (x) E^M(x)) U], so that the
// pointer statistics are p(x) = Tr[F(x) rho].
std::vector<ComplexMatrix> pointer_effects(const DensityOperator& sigma, const ComplexMatrix& u,
                                           const Observable& meter);

Unifiability contexts_unifiable(const Context& c1, const Context& c2, const Observable& meter1,
                                const Observable& meter2, double tol = default_tolerance());

}  // namespace qctx
