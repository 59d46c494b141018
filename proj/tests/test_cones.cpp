#include "oracles.hpp"

#include <lpgeom/cones.hpp>
#include <lpgeom/verification.hpp>

#include <gtest/gtest.h>

using namespace lpgeom;

namespace {

const LpSpace X3(3, 3.0);
const PrimalVec kU{-25.0, -37.0, -77.0};
const PrimalVec kX{3.0, -2.0, -1.0};
const PrimalVec kY{1.0, -3.0, 2.0};
const PrimalVec kH{7.0 / 3.0, -7.0 / 3.0, 0.0};
const PrimalVec kW{-28.0, -35.0, -76.0};

ConeWithVertex l3_ray() { return ConeWithVertex(PrimalVec::zero(3), {kU}); }

} // namespace

TEST(Cones, Construction) {
    EXPECT_THROW(ConeWithVertex(PrimalVec::zero(3), {}), std::invalid_argument);
    EXPECT_THROW(ConeWithVertex(PrimalVec::zero(3), {PrimalVec::zero(3)}), std::invalid_argument);
    EXPECT_THROW(ConeWithVertex::from_set(Ball{1.0}), std::invalid_argument);
    const auto K = ConeWithVertex::from_set(Ray{PrimalVec{1, 2, 3}, kU});
    EXPECT_EQ(K.vertex(), (PrimalVec{1, 2, 3}));
    EXPECT_TRUE(std::holds_alternative<Ray>(K.as_set()));
}

TEST(Cones, MetricDualMembershipOfCounterexample) {
    const auto K = l3_ray();
    EXPECT_TRUE(member_metric_dual(X3, K, kX));
    EXPECT_TRUE(member_metric_dual(X3, K, kY));
    EXPECT_TRUE(member_metric_dual(X3, K, K.vertex()));
    EXPECT_FALSE(member_metric_dual(X3, K, kH));
    // Pairings with the generator: <J x, u> = 0, <J h, u> = -12 * 7 * 4^(1/3) / 6 per unit of u.
    EXPECT_NEAR(X3.pair(X3.duality_map(kX), kU), 0.0, 1e-12);
    EXPECT_NEAR(X3.pair(X3.duality_map(kH), -1.0 * kU), -14.0 * std::cbrt(4.0), 1e-9);
    EXPECT_NEAR(metric_dual_margin(X3, K, kH), -14.0 * std::cbrt(4.0), 1e-9);
}

TEST(Cones, GeneralizedDualMembership) {
    const auto K = l3_ray();
    EXPECT_TRUE(member_generalized_dual(X3, K, X3.duality_map(K.vertex())));
    EXPECT_TRUE(member_generalized_dual(X3, K, X3.duality_map(kX)));
    EXPECT_FALSE(member_generalized_dual(X3, K, X3.duality_map(kU)));
}

TEST(Cones, NonconvexityWitnessOnL3Ray) {
    const auto w = probe_nonconvexity_metric_dual(X3, l3_ray(), 10, 1);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->kind, WitnessKind::nonconvexity);
    ASSERT_EQ(w->points.size(), 3u);
    EXPECT_EQ(w->points[0], kX);
    EXPECT_EQ(w->points[1], kY);
    EXPECT_LT(max_abs_diff(w->points[2], kH), 1e-15);
    EXPECT_NEAR(w->scalars[0], 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(w->value, -14.0 * std::cbrt(4.0), 1e-9);
    EXPECT_TRUE(verify_witness(X3, l3_ray(), *w));
}

TEST(Cones, WitnessVerificationRejectsTampering) {
    auto w = *probe_nonconvexity_metric_dual(X3, l3_ray(), 10, 1);
    w.value = 1.0;
    EXPECT_FALSE(verify_witness(X3, l3_ray(), w));
}

TEST(Cones, DoubleDualViolationOnL3Ray) {
    const auto w = metric_double_dual_violation(X3, l3_ray(), 10, 1);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->kind, WitnessKind::double_dual_violation);
    EXPECT_LT(w->value, -1e-6);
    EXPECT_NEAR(X3.pair(X3.duality_map(kU), -1.0 * kX), w->value, 1e-9 * (1 + std::abs(w->value)));
    EXPECT_TRUE(verify_witness(X3, l3_ray(), *w));
}

TEST(Cones, DoubleDualOrthogonalPairGivesNoWitness) {
    const ConeWithVertex K(PrimalVec::zero(3), {PrimalVec{1, 0, 0}});
    EXPECT_TRUE(member_metric_dual(X3, K, PrimalVec{0, 1, 0}));
    EXPECT_EQ(X3.pair(X3.duality_map(PrimalVec{1, 0, 0}), PrimalVec{0, -1, 0}), 0.0);
}

TEST(Cones, DoubleDualRequiresOriginVertex) {
    const ConeWithVertex K(PrimalVec{1, 0, 0}, {kU});
    EXPECT_THROW(metric_double_dual_violation(X3, K, 10, 1), std::invalid_argument);
}

TEST(Cones, NoNegativePhenomenaAtTwo) {
    const LpSpace H(3, 2.0);
    EXPECT_FALSE(probe_nonconvexity_metric_dual(H, l3_ray(), 500, 3));
    EXPECT_FALSE(metric_double_dual_violation(H, l3_ray(), 500, 3));
    EXPECT_FALSE(hilbert_identity_violation(H, l3_ray(), kW));
}

TEST(Cones, HilbertIdentityFailsOnL3Ray) {
    const auto d = identity_defect(X3, l3_ray(), kW);
    EXPECT_LT(max_abs_diff(d.projection.point, kU), 1e-6 * 77);
    EXPECT_LT(d.delta, -1e-3);
    // Hoelder: <Jw, u> <= ||w|| ||u|| < ||u||^2.
    EXPECT_LT(X3.norm(kW) * X3.norm(kU), X3.norm(kU) * X3.norm(kU));
    const auto w = hilbert_identity_violation(X3, l3_ray(), kW);
    ASSERT_TRUE(w);
    EXPECT_TRUE(verify_witness(X3, l3_ray(), *w));
    // w in K gives zero defect.
    EXPECT_NEAR(identity_defect(X3, l3_ray(), 0.5 * kU).delta, 0.0, 1e-8);
}

TEST(Cones, GeneralizedDoubleDual) {
    const auto K = l3_ray();
    for (const auto &z : sample(X3, K.as_set(), 7, 20)) {
        const auto v = generalized_double_dual_member(X3, K, z);
        EXPECT_TRUE(v.primal_member);
        EXPECT_TRUE(v.agree());
    }
    EXPECT_TRUE(generalized_double_dual_member(X3, K, K.vertex()).agree());
    const auto out = generalized_double_dual_member(X3, K, kX);
    EXPECT_FALSE(out.primal_member);
    EXPECT_FALSE(out.certificate_member);
    ASSERT_TRUE(out.certificate);
    EXPECT_TRUE(member_generalized_dual(X3, K, *out.certificate));
    EXPECT_LT(out.certificate_value, 0.0);
}

TEST(Cones, IntersectionOfCoordinateCones) {
    const PrimalVec e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};
    const ConeWithVertex C(PrimalVec::zero(3), {e1, e2}), K(PrimalVec::zero(3), {e2, e3});
    for (double p : {2.0, 3.0}) {
        const LpSpace X(3, p);
        const auto r = intersection_dual_check(X, C, K, 60, 9);
        EXPECT_TRUE(r.passed()) << "p=" << p;
        EXPECT_GT(r.forward_checked, 0);
        EXPECT_GT(r.backward_checked, 0);
        const auto I = intersect(X, std::vector<ConeWithVertex>{C, K});
        ASSERT_EQ(I.generators().size(), 1u);
        EXPECT_LT(max_abs_diff(I.generators()[0] / I.generators()[0].coords().norm(), e2), 1e-12);
    }
    const ConeWithVertex T(PrimalVec::zero(3), {PrimalVec{0.5, 1, 0}, PrimalVec{-0.5, 1, 0}, e3});
    EXPECT_TRUE(intersection_dual_check(X3, std::vector<ConeWithVertex>{C, K, T}, 40, 11).passed());
}

TEST(Cones, Pointedness) {
    EXPECT_TRUE(is_pointed(ConeWithVertex(PrimalVec::zero(3), {PrimalVec{1, 0, 0}, PrimalVec{0, 1, 0}})));
    EXPECT_FALSE(is_pointed(ConeWithVertex(PrimalVec::zero(3), {PrimalVec{1, 0, 0}, PrimalVec{-1, 0, 0}})));
}

TEST(Cones, DeriveSeedIsStable) {
    EXPECT_EQ(derive_seed(7, 0), derive_seed(7, 0));
    EXPECT_NE(derive_seed(7, 0), derive_seed(7, 1));
    EXPECT_NE(derive_seed(7, 0), derive_seed(8, 0));
}

// Properties.
TEST(ConesProperty, MetricDualIsConeAndMatchesProjectionRoute) {
    verify::Rng rng(41);
    for (double p : {1.5, 3.0}) {
        const LpSpace X(p, rng.weights(3));
        for (int t = 0; t < 40; ++t) {
            const auto K = verify::random_pointed_cone(rng, 3, rng.integer(1, 3), true);
            for (const auto &x : sample_metric_dual(X, K, 5, rng.engine()())) {
                ASSERT_TRUE(member_metric_dual(X, K, x));
                for (double s : {0.1, 2.0, 17.0})
                    EXPECT_TRUE(member_metric_dual(X, K, K.vertex() + s * (x - K.vertex())));
                EXPECT_TRUE(inverse_image_member_metric(X, K.as_set(), K.vertex(), x));
            }
            const PrimalVec z = K.vertex() + PrimalVec(rng.gaussian(3));
            if (std::abs(metric_dual_margin(X, K, z)) > 1e-6)
                EXPECT_EQ(member_metric_dual(X, K, z), inverse_image_member_metric(X, K.as_set(), K.vertex(), z));
        }
    }
}

TEST(ConesProperty, GeneralizedDualConvexAndMonotone) {
    verify::Rng rng(43);
    const LpSpace X(3, 3.0);
    for (int t = 0; t < 30; ++t) {
        const auto K = verify::random_cone(rng, 3, 3, true);
        const auto s = sample_generalized_dual(X, K, 20, rng.engine()());
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            const double lam = rng.uniform(0, 1);
            EXPECT_TRUE(member_generalized_dual(X, K, DualVec(lam * s[i].coords() + (1 - lam) * s[i + 1].coords())));
        }
        // C subset of K (two of K's generators) means K_pi^perp is inside C_pi^perp.
        const ConeWithVertex C(K.vertex(), {K.generators()[0], K.generators()[1]});
        for (const auto &psi : s)
            EXPECT_TRUE(member_generalized_dual(X, C, psi));
    }
}

TEST(ConesProperty, GeneralizedDoubleDualRoutesAgree) {
    verify::Rng rng(47);
    for (double p : {1.5, 2.0, 3.0}) {
        const LpSpace X(p, rng.weights(3));
        for (int t = 0; t < 15; ++t) {
            const auto K = verify::random_pointed_cone(rng, 3, rng.integer(1, 3), true);
            for (const auto &z : sample(X, K.as_set(), rng.engine()(), 5))
                EXPECT_TRUE(generalized_double_dual_member(X, K, z).primal_member);
            const PrimalVec z = K.vertex() + PrimalVec(rng.gaussian(3) * 2.0);
            if (coefficient_residual(X, K.as_set(), z) < 1e-3)
                continue;
            const auto v = generalized_double_dual_member(X, K, z, kExactTol, 32, rng.engine()());
            EXPECT_FALSE(v.primal_member);
            EXPECT_TRUE(v.agree());
        }
    }
}

TEST(ConesProperty, IdentityHoldsAtTwo) {
    verify::Rng rng(53);
    const LpSpace H(3, 2.0);
    for (int t = 0; t < 30; ++t) {
        const auto K = verify::random_pointed_cone(rng, 3, 3);
        EXPECT_LE(std::abs(identity_defect(H, K, PrimalVec(rng.gaussian(3) * 3.0)).delta), 1e-8);
    }
}
