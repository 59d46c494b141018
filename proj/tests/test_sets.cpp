#include "oracles.hpp"

#include <lpgeom/faces.hpp>
#include <lpgeom/sets.hpp>

#include <gtest/gtest.h>

using namespace lpgeom;

namespace {

const LpSpace X3(3, 3.0);
const PrimalVec kU{-25.0, -37.0, -77.0};
const PrimalVec kU5{25.0, 37.0, 77.0};

std::vector<ConvexSet> sample_sets() {
    return {
        Segment{PrimalVec{0, 0, 0}, PrimalVec{1, 2, -1}},
        Ray{PrimalVec{1, 0, 0}, PrimalVec{0, 1, 1}},
        Line{PrimalVec{0, 1, 0}, PrimalVec{1, -1, 2}},
        FinitelyGeneratedCone{PrimalVec{0, 0, 1}, {PrimalVec{1, 0, 0}, PrimalVec{0, 1, 0}, PrimalVec{1, 1, 1}}},
        Polytope{{PrimalVec{0, 0, 0}, PrimalVec{2, 0, 0}, PrimalVec{0, 2, 0}, PrimalVec{0, 0, 2}}},
        Ball{1.5},
        Subspace{{PrimalVec{1, 0, 1}, PrimalVec{0, 1, 0}}},
    };
}

} // namespace

TEST(Sets, Validation) {
    EXPECT_THROW(validate(X3, Ray{PrimalVec{0, 0, 0}, PrimalVec{0, 0, 0}}), std::invalid_argument);
    EXPECT_THROW(validate(X3, Ball{-1.0}), std::invalid_argument);
    EXPECT_THROW(validate(X3, Polytope{{}}), std::invalid_argument);
    EXPECT_THROW(validate(X3, Segment{PrimalVec{0, 0}, PrimalVec{1, 1, 1}}), std::invalid_argument);
    EXPECT_THROW(validate(X3, Subspace{{PrimalVec{1, 0, 0}, PrimalVec{2, 0, 0}}}), std::invalid_argument);
}

TEST(Sets, ContainsExamples) {
    EXPECT_TRUE(contains(X3, Ray{X3.zero(), kU}, 0.5 * kU));
    EXPECT_FALSE(contains(X3, Ray{X3.zero(), kU}, -0.5 * kU));
    EXPECT_FALSE(contains(X3, Ball{1.0}, PrimalVec{2.0, 0, 0}));
    const FinitelyGeneratedCone K{X3.zero(), {PrimalVec{1, 0, 0}, PrimalVec{0, 1, 0}}};
    EXPECT_FALSE(contains(X3, K, PrimalVec{1, 1, -0.1}));
    EXPECT_NEAR(coefficient_residual(X3, K, PrimalVec{1, 1, -0.1}), 0.1, 1e-12);
    EXPECT_TRUE(contains(X3, K, PrimalVec{1, 1, 0}));
    EXPECT_THROW(contains(X3, K, PrimalVec{1, 1}), std::invalid_argument);
}

TEST(Sets, SupportExamples) {
    const Ray C{X3.zero(), kU5};
    EXPECT_EQ(support(X3, C, DualVec{-9, 4, 1}), 0.0);
    EXPECT_TRUE(std::isinf(support(X3, C, DualVec{1, 1, 1})));
    const double M = 1.0;
    EXPECT_DOUBLE_EQ(support(LpSpace(5, 1.0), Ball{M}, window_functional(LpSpace(5, 1.0), {0, 1})), M);
    EXPECT_DOUBLE_EQ(support(X3, Segment{PrimalVec{1, 0, 0}, PrimalVec{0, 3, 0}}, DualVec{1, 1, 0}), 3.0);
    EXPECT_TRUE(std::isinf(support(X3, Line{X3.zero(), PrimalVec{1, 0, 0}}, DualVec{1, 0, 0})));
    EXPECT_EQ(support(X3, Line{PrimalVec{0, 2, 0}, PrimalVec{1, 0, 0}}, DualVec{0, 1, 0}), 2.0);
    EXPECT_EQ(support(X3, Subspace{{PrimalVec{1, 0, 0}}}, DualVec{0, 5, 1}), 0.0);
}

TEST(Sets, ParameterizeExamples) {
    const auto pr = parameterize(X3, Ray{PrimalVec{1, 2, 3}, kU});
    ASSERT_TRUE(pr);
    EXPECT_EQ(pr->base, (PrimalVec{1, 2, 3}));
    ASSERT_EQ(pr->directions.size(), 1u);
    EXPECT_EQ(pr->directions[0], kU);
    EXPECT_EQ(pr->domain, CoefficientDomain::nonnegative);

    const auto pp = parameterize(X3, Polytope{{PrimalVec{1, 0, 0}, PrimalVec{0, 1, 0}, PrimalVec{0, 0, 1}}});
    ASSERT_TRUE(pp);
    EXPECT_TRUE(pp->base.is_zero());
    EXPECT_EQ(pp->directions.size(), 3u);
    EXPECT_EQ(pp->domain, CoefficientDomain::simplex);

    const auto ps = parameterize(X3, Subspace{{PrimalVec{1, 0, 0}, PrimalVec{0, 1, 0}}});
    ASSERT_TRUE(ps);
    EXPECT_EQ(ps->domain, CoefficientDomain::unrestricted);

    const auto pg = parameterize(X3, Segment{PrimalVec{1, 0, 0}, PrimalVec{0, 1, 0}});
    ASSERT_TRUE(pg);
    EXPECT_EQ(pg->domain, CoefficientDomain::unit_box);
    EXPECT_FALSE(parameterize(X3, Ball{1.0}));
}

TEST(Sets, SegmentSamplesLieOnSegment) {
    const PrimalVec a{0, 0, 0}, b{1, 2, -1};
    for (const auto &x : sample(X3, Segment{a, b}, 3, 50)) {
        const double t = x[0];
        EXPECT_GE(t, -1e-15);
        EXPECT_LE(t, 1 + 1e-15);
        EXPECT_LT(max_abs_diff(x, t * b), 1e-12);
    }
}

TEST(Sets, BallSamplesInsideBall) {
    for (double p : {1.0, 1.5, 3.0}) {
        const LpSpace X(4, p);
        for (const auto &x : sample(X, Ball{2.0}, 9, 100))
            EXPECT_LE(X.norm(x), 2.0 * (1 + 1e-12));
    }
}

// Properties over every set type.
TEST(SetsProperty, SamplesAreMembersAndDeterministic) {
    for (const auto &C : sample_sets()) {
        const auto a = sample(X3, C, 42, 200);
        const auto b = sample(X3, C, 42, 200);
        ASSERT_EQ(a.size(), 200u) << kind_name(C);
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_EQ(a[i], b[i]);
            EXPECT_TRUE(contains(X3, C, a[i], 1e-9)) << kind_name(C);
        }
    }
}

TEST(SetsProperty, ZeroFunctionalExposesEverything) {
    for (const auto &C : sample_sets()) {
        if (contains(X3, C, X3.zero()))
            EXPECT_EQ(support(X3, C, X3.dual_zero()), 0.0) << kind_name(C);
        for (const auto &x : sample(X3, C, 5, 50))
            EXPECT_TRUE(face_membership(X3, C, X3.dual_zero(), x)) << kind_name(C);
    }
}

TEST(SetsProperty, SupportDominatesSamplesAndIsSublinear) {
    std::mt19937_64 rng(3);
    for (const auto &C : sample_sets()) {
        const auto pts = sample(X3, C, 8, 100);
        for (int t = 0; t < 100; ++t) {
            const DualVec a(oracle::gaussian(rng, 3)), b(oracle::gaussian(rng, 3));
            const double sa = support(X3, C, a), sb = support(X3, C, b), sab = support(X3, C, a + b);
            if (std::isfinite(sa))
                for (const auto &x : pts)
                    EXPECT_LE(X3.pair(a, x), sa + 1e-9 * (1 + std::abs(sa) + X3.norm(x) * X3.dual_norm(a)));
            if (std::isfinite(sa) && std::isfinite(sb))
                EXPECT_LE(sab, sa + sb + 1e-9 * (1 + std::abs(sa) + std::abs(sb))) << kind_name(C);
        }
    }
}

TEST(SetsProperty, ConeSupportIsVertexPairingWhenFinite) {
    std::mt19937_64 rng(5);
    const FinitelyGeneratedCone K{PrimalVec{1, -1, 2}, {PrimalVec{1, 0, 0}, PrimalVec{0, 1, 0}}};
    int finite = 0;
    for (int t = 0; t < 400; ++t) {
        const DualVec psi(oracle::gaussian(rng, 3));
        const double s = support(X3, K, psi);
        if (std::isfinite(s)) {
            ++finite;
            EXPECT_DOUBLE_EQ(s, X3.pair(psi, K.vertex));
        }
    }
    EXPECT_GT(finite, 0);
}

// Generator reduction of "for all z in K" against dense sampling of K.
TEST(SetsProperty, GeneratorReductionMatchesDenseSampling) {
    std::mt19937_64 rng(17);
    const FinitelyGeneratedCone K{PrimalVec{0.5, 0, -1}, {PrimalVec{1, 0.2, 0}, PrimalVec{0, 1, 0.3}, PrimalVec{0.2, 0.1, 1}}};
    const auto pts = sample(X3, K, 99, 2000);
    for (int t = 0; t < 200; ++t) {
        const DualVec psi(oracle::gaussian(rng, 3));
        bool all_nonpos = true;
        for (const auto &g : K.generators)
            all_nonpos = all_nonpos && X3.pair(psi, g) <= 0;
        double worst = -kInf;
        for (const auto &z : pts)
            worst = std::max(worst, X3.pair(psi, z - K.vertex));
        if (all_nonpos)
            EXPECT_LE(worst, 1e-9);
        else
            EXPECT_GT(worst, 0.0);
    }
}
