#include <cmath>

#include "qctx/contextuality.hpp"
#include "qctx/errors.hpp"
#include "qctx/measurement.hpp"
#include "qctx/random.hpp"
#include "test_support.hpp"

using namespace qctx;
using namespace qctx::test;

namespace {

DensityOperator singlet() {
    const double r = 1.0 / std::sqrt(2.0);
    return pure_state(ComplexVector{0.0, r, -r, 0.0});
}

ChshScenario optimal_singlet() {
    const double r = 1.0 / std::sqrt(2.0);
    return ChshScenario(singlet(), make_observable(sigma_z()), make_observable(sigma_x()),
                        make_observable(-r * (sigma_z() + sigma_x())), make_observable(r * (sigma_x() - sigma_z())));
}

Observable obs(const ComplexMatrix& m) { return make_observable(m); }

}  // namespace

TEST(Contextuality, PauliCommutator) {
    const ComplexMatrix c = commutator(obs(sigma_x()), obs(sigma_z()));
    EXPECT_TRUE(matrix_near(c, Complex(0.0, -2.0) * sigma_y(), 1e-15));
    EXPECT_NEAR(frobenius_norm(c), 2.0 * std::sqrt(2.0), 1e-15);
    EXPECT_TRUE(matrix_near(anticommutator(sigma_x(), sigma_z()), ComplexMatrix::zero(2), 0.0));
    EXPECT_FALSE(is_compatible(obs(sigma_x()), obs(sigma_z())));
    EXPECT_TRUE(is_compatible(obs(sigma_z()), obs(diag({3.0, -1.0}))));
}

TEST(Contextuality, RobertsonSaturation) {
    // sigma_x, sigma_y on |0>: Var = 1 each, |<[X,Y]>/2|^2 = |<i Z>|^2 = 1.
    const UncertaintyCheck u = schrodinger_robertson_check(obs(sigma_x()), obs(sigma_y()), ket0());
    EXPECT_NEAR(u.lhs, 1.0, 1e-15);
    EXPECT_NEAR(u.commutator_term, 1.0, 1e-15);
    EXPECT_NEAR(u.covariance_term, 0.0, 1e-15);
    EXPECT_NEAR(u.slack, 0.0, 1e-15);
    EXPECT_TRUE(u.holds);
}

TEST(Contextuality, CovarianceTerm) {
    // A = B = sigma_z on |+>: Var^2 = 1 = covariance^2, commutator 0.
    const UncertaintyCheck u = schrodinger_robertson_check(obs(sigma_z()), obs(sigma_z()), plus());
    EXPECT_NEAR(u.commutator_term, 0.0, 1e-15);
    EXPECT_NEAR(u.covariance_term, 1.0, 1e-15);
    EXPECT_NEAR(u.slack, 0.0, 1e-15);
}

TEST(Contextuality, SingletReachesTsirelson) {
    const ChshResult r = chsh_value(optimal_singlet());
    const double h = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(r.correlators[0], h, 1e-15);
    EXPECT_NEAR(r.correlators[1], h, 1e-15);
    EXPECT_NEAR(r.correlators[2], h, 1e-15);
    EXPECT_NEAR(r.correlators[3], -h, 1e-15);
    EXPECT_NEAR(r.value, kTsirelsonBound, 1e-9);
    EXPECT_TRUE(r.within_tsirelson);
    EXPECT_FALSE(r.within_classical);
    const LocalIncompatibility li = chsh_local_incompatibility(optimal_singlet());
    EXPECT_NEAR(li.comm_a, 2.0 * std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(li.comm_b, 2.0 * std::sqrt(2.0), 1e-14);
}

TEST(Contextuality, ProductStateIsClassical) {
    const ChshScenario s(pure_state(ComplexVector{1.0, 0.0, 0.0, 0.0}), obs(sigma_z()), obs(sigma_z()),
                         obs(sigma_z()), obs(sigma_z()));
    EXPECT_NEAR(chsh_value(s).value, 2.0, 1e-15);
    EXPECT_TRUE(chsh_value(s).within_classical);
}

TEST(Contextuality, ScenarioValidation) {
    EXPECT_THROW(ChshScenario(singlet(), obs(diag({1.0, 0.5})), obs(sigma_x()), obs(sigma_z()), obs(sigma_x())),
                 SpectrumError);
    EXPECT_THROW(ChshScenario(singlet(), obs(id(3)), obs(id(3)), obs(sigma_z()), obs(sigma_x())), DimensionError);
}

TEST(Contextuality, PointerEffectsOfVonNeumannModel) {
    const Observable z = obs(sigma_z());
    const MeasuringProcess mp = build_von_neumann_model(z);
    const auto f = pointer_effects(mp.sigma(), mp.unitary(), mp.meter());
    ASSERT_EQ(f.size(), 2u);
    for (std::size_t k = 0; k < 2; ++k) EXPECT_TRUE(matrix_near(f[k], z.spectrum()[k].projection, 1e-14));
}

TEST(Contextuality, ZVersusXNotUnifiable) {
    // [|0><0|, (I + X)/2] has Frobenius norm sqrt(2)/2.
    const auto mix = DensityOperator::maximally_mixed(2);
    const MeasuringProcess mz = build_von_neumann_model(obs(sigma_z()));
    const MeasuringProcess mx = build_von_neumann_model(obs(sigma_x()));
    const Context cz = Context::from_process(mix, mz, "z"), cx = Context::from_process(mix, mx, "x");
    const Unifiability u = contexts_unifiable(cz, cx, mz.meter(), mx.meter());
    EXPECT_FALSE(u.pointer_compatible);
    EXPECT_NEAR(u.detail, std::sqrt(2.0) / 2.0, 1e-14);
    EXPECT_EQ(u.criterion, "commuting-pointer-povms");

    const MeasuringProcess mz2 = build_von_neumann_model(obs(diag({5.0, -2.0})));
    const Unifiability same = contexts_unifiable(cz, Context::from_process(mix, mz2), mz.meter(), mz2.meter());
    EXPECT_TRUE(same.pointer_compatible);

    EXPECT_THROW(contexts_unifiable(cz, Context::from_process(ket0(), mx), mz.meter(), mx.meter()), Error);
}

TEST(Contextuality, ContextDistanceExamples) {
    const auto mix = DensityOperator::maximally_mixed(2);
    const MeasuringProcess mz = build_von_neumann_model(obs(sigma_z()));
    const Context a = Context::from_process(mix, mz);
    const Context b(mix, mz.sigma(), Complex(0.0, 1.0) * mz.unitary());
    const ContextDistance d = context_distance(a, b);
    EXPECT_NEAR(d.d_u, 0.0, 1e-14);
    EXPECT_TRUE(d.identical);
    // ||I - Z||_F = 2, and no phase does better.
    EXPECT_NEAR(phase_invariant_distance(id(2), sigma_z()), 2.0, 1e-14);
}

// Property tests.

TEST(ContextualityProperty, DistanceIsPseudometric) {
    for (std::uint64_t s = 0; s < 30; ++s) {
        Rng rng(41, s);
        auto make = [&] {
            return Context(random_density(2, rng), random_density(2, rng), random_unitary(4, rng));
        };
        const Context a = make(), b = make(), c = make();
        const ContextDistance aa = context_distance(a, a);
        EXPECT_NEAR(aa.d_rho + aa.d_sigma + aa.d_u, 0.0, 1e-12);
        const ContextDistance ab = context_distance(a, b), ba = context_distance(b, a);
        EXPECT_NEAR(ab.d_rho, ba.d_rho, 1e-14);
        EXPECT_NEAR(ab.d_sigma, ba.d_sigma, 1e-14);
        EXPECT_NEAR(ab.d_u, ba.d_u, 1e-12);
        const ContextDistance bc = context_distance(b, c), ac = context_distance(a, c);
        EXPECT_LE(ac.d_u, ab.d_u + bc.d_u + 1e-12);
        EXPECT_LE(ac.d_rho, ab.d_rho + bc.d_rho + 1e-12);
        const double theta = 6.0 * rng.uniform();
        EXPECT_LE(phase_invariant_distance(a.unitary(), std::polar(1.0, theta) * a.unitary()), 1e-12);
    }
}

TEST(ContextualityProperty, PermutationKeepsBound) {
    for (std::uint64_t s = 0; s < 200; ++s) {
        Rng rng(42, s);
        const ChshScenario sc(random_density(4, rng), obs(random_dichotomic(2, rng)), obs(random_dichotomic(2, rng)),
                              obs(random_dichotomic(2, rng)), obs(random_dichotomic(2, rng)));
        const ChshResult r = chsh_value(sc), p = chsh_value(sc.permuted());
        EXPECT_NEAR(p.correlators[0], r.correlators[3], 1e-14);
        EXPECT_NEAR(p.correlators[1], r.correlators[2], 1e-14);
        EXPECT_NEAR(p.correlators[2], r.correlators[1], 1e-14);
        EXPECT_NEAR(p.correlators[3], r.correlators[0], 1e-14);
        EXPECT_LE(std::abs(r.value), kTsirelsonBound + 1e-9);
        EXPECT_LE(std::abs(p.value), kTsirelsonBound + 1e-9);
    }
}

TEST(ContextualityProperty, CommutingSettingsStayClassical) {
    for (std::uint64_t s = 0; s < 200; ++s) {
        Rng rng(43, s);
        const Observable a1 = obs(random_dichotomic(2, rng));
        const ComplexMatrix a2 = random_dichotomic_function_of(a1, rng);
        const ChshScenario sc(random_density(4, rng), a1, obs(a2), obs(random_dichotomic(2, rng)),
                              obs(random_dichotomic(2, rng)));
        EXPECT_LE(std::abs(chsh_value(sc).value), 2.0 + 1e-9);
    }
}

TEST(ContextualityProperty, UncertaintyHolds) {
    for (std::uint64_t s = 0; s < 200; ++s) {
        Rng rng(44, s);
        const std::size_t d = 2 + s % 3;
        const UncertaintyCheck u = schrodinger_robertson_check(obs(random_hermitian(d, rng)),
                                                               obs(random_hermitian(d, rng)), random_density(d, rng));
        EXPECT_GE(u.slack, -1e-9);
        EXPECT_TRUE(u.holds);
    }
}
