#include "oracles.hpp"

#include <lpgeom/faces.hpp>
#include <lpgeom/paper_suite.hpp>

#include <gtest/gtest.h>

using namespace lpgeom;

namespace {

const LpSpace X3(3, 3.0);
const PrimalVec kU{25.0, 37.0, 77.0};
const PrimalVec kX{3.0, -2.0, -1.0};
const PrimalVec kH{7.0 / 3.0, -7.0 / 3.0, 0.0};

const Ray kRay{PrimalVec::zero(3), kU};

} // namespace

TEST(Faces, RayFaces) {
    const auto a = face(X3, kRay, DualVec{-9, 4, 1});
    EXPECT_EQ(a.kind, FaceKind::whole_set);
    EXPECT_EQ(a.level, 0.0);
    EXPECT_TRUE(face_membership(X3, kRay, DualVec{-9, 4, 1}, 2.0 * kU));

    const auto b = face(X3, kRay, DualVec{-1, -1, -1});
    EXPECT_EQ(b.kind, FaceKind::singleton);
    ASSERT_EQ(b.representatives.size(), 1u);
    EXPECT_TRUE(b.representatives[0].is_zero());
    // any psi <= 0 with psi_1 + psi_2 + psi_3 < 0
    EXPECT_EQ(face(X3, kRay, DualVec{0, 0, -2}).kind, FaceKind::singleton);

    const auto c = face(X3, kRay, DualVec{1, 1, 1});
    EXPECT_EQ(c.kind, FaceKind::empty);
    EXPECT_EQ(c.cause, EmptyCause::unbounded);
    EXPECT_TRUE(std::isinf(c.level));
    EXPECT_EQ(face(X3, kRay, DualVec{0, 0.5, 0}).kind, FaceKind::empty);
}

TEST(Faces, ZeroFunctionalGivesWholeSet) {
    EXPECT_EQ(face(X3, Ball{2.0}, X3.dual_zero()).kind, FaceKind::whole_set);
    EXPECT_EQ(face(X3, Polytope{{kU, kX}}, X3.dual_zero()).kind, FaceKind::whole_set);
}

TEST(Faces, PolytopeTiesKeepAllVertices) {
    const Polytope P{{PrimalVec{1, 0, 0}, PrimalVec{0, 1, 0}, PrimalVec{0, 0, 1}, PrimalVec{-1, -1, -1}}};
    const auto f = face(X3, P, DualVec{1, 1, 0});
    EXPECT_EQ(f.kind, FaceKind::vertex_subset);
    EXPECT_EQ(f.representatives.size(), 2u);
    EXPECT_EQ(f.level, 1.0);
    const auto g = face(X3, P, DualVec{2, 1, 0});
    ASSERT_EQ(g.representatives.size(), 1u);
    EXPECT_EQ(g.representatives[0], (PrimalVec{1, 0, 0}));
}

TEST(Faces, WindowOnUnitBallAtOne) {
    const LpSpace X(5, 1.0);
    const double M   = 1.0;
    const DualVec psi = window_functional(X, {0, 1});
    const auto f     = face(X, Ball{M}, psi);
    EXPECT_EQ(f.kind, FaceKind::affine_slice);
    EXPECT_DOUBLE_EQ(f.level, M);
    ASSERT_FALSE(f.representatives.empty());
    EXPECT_LT(max_abs_diff(f.representatives[0], PrimalVec{M / 2, M / 2, 0, 0, 0}), 1e-15);
    EXPECT_TRUE(face_membership(X, Ball{M}, psi, PrimalVec{M, 0, 0, 0, 0}));
    EXPECT_FALSE(face_membership(X, Ball{M}, psi, PrimalVec{(M - 0.1) / 2, (M - 0.1) / 2, 0, 0, 0}));
}

TEST(Faces, WindowOnBallAtThreeHasHolderLevel) {
    const LpSpace X(5, 3.0);
    const auto f = face(X, Ball{1.0}, window_functional(X, {0, 1}));
    EXPECT_EQ(f.kind, FaceKind::singleton);
    // level = ||window||_{3/2} = 2^{2/3}; face point = 2^{-1/3} on the window
    EXPECT_NEAR(f.level, std::pow(2.0, 2.0 / 3.0), 1e-12);
    EXPECT_LT(max_abs_diff(f.representatives[0], PrimalVec{std::cbrt(0.5), std::cbrt(0.5), 0, 0, 0}), 1e-12);
}

TEST(Faces, VisionDualMember) {
    EXPECT_TRUE(vision_dual_member(X3, kRay, 0.5 * kU, X3.dual_zero()));
    EXPECT_THROW(vision_dual_member(X3, kRay, kX, X3.dual_zero()), std::domain_error);
    for (double p : {1.5, 3.0, 4.0}) {
        const LpSpace X(3, p);
        PrimalVec y{1.0, -2.0, 0.5};
        y = (2.0 / X.norm(y)) * y;
        for (double t : {0.0, 0.5, 3.0})
            EXPECT_TRUE(vision_dual_member(X, Ball{2.0}, y, t * X.duality_map(y)));
        const DualVec other = X.duality_map(y) + DualVec{0.3, 0.1, -0.2};
        EXPECT_LT(X.pair(other, y), 2.0 * X.dual_norm(other));
        EXPECT_FALSE(vision_dual_member(X, Ball{2.0}, y, other));
    }
}

TEST(Faces, VisionPrimalMember) {
    const Segment C{PrimalVec::zero(3), kU};
    EXPECT_TRUE(vision_primal_member(X3, C, kU, kX));
    EXPECT_FALSE(vision_primal_member(X3, C, kU, kH));
    EXPECT_TRUE(vision_primal_member(X3, C, kU, X3.zero()));
    EXPECT_THROW(vision_primal_member(LpSpace(3, 1.0), C, kU, kX), std::domain_error);
}

TEST(Faces, PrimalVisionNonconvexWitness) {
    const Segment C{PrimalVec::zero(3), kU};
    const auto w = probe_nonconvexity_primal_vision(X3, C, kU, 50, 1);
    ASSERT_TRUE(w);
    EXPECT_TRUE(vision_primal_member(X3, C, kU, w->u));
    EXPECT_TRUE(vision_primal_member(X3, C, kU, w->z));
    EXPECT_FALSE(vision_primal_member(X3, C, kU, w->h));
}

TEST(Faces, ConjugationInstances) {
    const Segment C{PrimalVec::zero(3), kU};
    EXPECT_TRUE(vision_dual_member(X3, C, kU, X3.duality_map(PrimalVec{1, -3, 2})));
    EXPECT_TRUE(vision_primal_member(X3, C, kU, X3.inverse_duality_map(X3.duality_map(PrimalVec{1, -3, 2}))));
    EXPECT_TRUE(vision_conjugation_check(X3, C, kU, 40, 3).passed());
    PrimalVec y{1, 1, 1};
    y = (1.0 / X3.norm(y)) * y;
    EXPECT_TRUE(vision_conjugation_check(X3, Ball{1.0}, y, 40, 3).passed());
}

TEST(Faces, ClassifyBall) {
    const auto in = classify_point(X3, Ball{2.0}, PrimalVec{1, 0, 0});
    EXPECT_EQ(in.verdict, Verdict::internal);
    EXPECT_EQ(in.method, ClassifyMethod::closed_form);
    EXPECT_FALSE(in.witness);
    const auto out = classify_point(X3, Ball{2.0}, PrimalVec{2, 0, 0});
    EXPECT_EQ(out.verdict, Verdict::cuticle);
    ASSERT_TRUE(out.witness);
    EXPECT_TRUE(face_membership(X3, Ball{2.0}, *out.witness, PrimalVec{2, 0, 0}));
}

TEST(Faces, ClassifySubspaceAndSegment) {
    const auto s = classify_point(X3, Subspace{{PrimalVec{1, 0, 0}}}, PrimalVec{5, 0, 0});
    EXPECT_EQ(s.verdict, Verdict::cuticle);
    ASSERT_TRUE(s.witness);
    EXPECT_FALSE(s.witness->is_zero());
    EXPECT_NEAR(X3.pair(*s.witness, PrimalVec{1, 0, 0}), 0.0, 1e-12);

    const auto g = classify_point(X3, Segment{PrimalVec::zero(3), kU}, 0.5 * kU);
    EXPECT_EQ(g.verdict, Verdict::cuticle);
    ASSERT_TRUE(g.witness);
    EXPECT_TRUE(face_membership(X3, Segment{PrimalVec::zero(3), kU}, *g.witness, 0.5 * kU));
}

TEST(Faces, ClassifyPolytopeInterior) {
    const LpSpace X(2, 3.0);
    const Polytope T{{PrimalVec{0, 0}, PrimalVec{2, 0}, PrimalVec{0, 2}}};
    EXPECT_EQ(classify_point(X, T, PrimalVec{0.5, 0.5}).verdict, Verdict::internal);
    EXPECT_EQ(classify_point(X, T, PrimalVec{1, 1}).verdict, Verdict::cuticle);
}

TEST(Faces, ClassifyHighDimensionIsFlagged) {
    const LpSpace X(4, 3.0);
    std::vector<PrimalVec> verts{PrimalVec::zero(4)};
    for (Eigen::Index i = 0; i < 4; ++i)
        verts.push_back(PrimalVec::unit(4, i));
    const auto r = classify_point(X, Polytope{verts}, PrimalVec{0.1, 0.1, 0.1, 0.1});
    EXPECT_EQ(r.verdict, Verdict::internal);
    EXPECT_TRUE(r.heuristic());
    const auto c = classify_point(X, Polytope{verts}, PrimalVec{0.5, 0.5, 0, 0});
    EXPECT_EQ(c.verdict, Verdict::cuticle);
}

TEST(Faces, FixedPointInstances) {
    // J u annihilates the ray direction: the whole ray is the face.
    const DualVec psi{-9, 4, 1};
    const PrimalVec u = X3.inverse_duality_map(psi);
    const auto a      = fixed_point_check(X3, kRay, u, 2.0 * kU);
    EXPECT_TRUE(a.face_member && a.metric_fixed && a.generalized_fixed);
    const auto b = fixed_point_check(X3, kRay, X3.zero(), 0.3 * kU);
    EXPECT_TRUE(b.face_member && b.metric_fixed && b.generalized_fixed);
    const auto c = fixed_point_check(X3, Segment{PrimalVec::zero(3), kU}, kH, kU);
    EXPECT_FALSE(c.face_member || c.metric_fixed || c.generalized_fixed);
}

TEST(Faces, SolveVi) {
    const Polytope P{{PrimalVec{1, 0, 0}, PrimalVec{0, 1, 0}, PrimalVec{0, 0, 1}}};
    const auto s = solve_vi(X3, P, DualVec{0.3, 0.9, 0.1});
    ASSERT_TRUE(s.has_solution());
    ASSERT_EQ(s.face.representatives.size(), 1u);
    EXPECT_EQ(s.face.representatives[0], (PrimalVec{0, 1, 0}));
    EXPECT_TRUE(s.cross_checked);
    EXPECT_LT(s.metric_distance, 1e-6);
    EXPECT_LT(s.generalized_distance, 1e-6);
    EXPECT_EQ(solve_vi(X3, P, X3.dual_zero()).face.kind, FaceKind::whole_set);
    EXPECT_FALSE(solve_vi(X3, kRay, DualVec{1, 1, 1}).has_solution());
}

TEST(Faces, BridgeInstances) {
    const ConeWithVertex K(PrimalVec::zero(3), {PrimalVec{-25, -37, -77}});
    const DualVec jv = X3.duality_map(K.vertex());
    EXPECT_TRUE(member_generalized_dual(X3, K, jv));
    EXPECT_TRUE(vision_dual_member(X3, K.as_set(), K.vertex(), jv - jv));
    const DualVec psi = jv + X3.duality_map(kX);
    EXPECT_TRUE(member_generalized_dual(X3, K, psi));
    EXPECT_TRUE(vision_dual_member(X3, K.as_set(), K.vertex(), psi - jv));
    const DualVec bad = jv + X3.duality_map(K.generators()[0]);
    EXPECT_FALSE(member_generalized_dual(X3, K, bad));
    EXPECT_FALSE(vision_dual_member(X3, K.as_set(), K.vertex(), bad - jv));
    EXPECT_TRUE(dual_cone_vision_bridge(X3, K, 30, 5).passed());
}

// Properties.
TEST(FacesProperty, RepresentativesAndCombinationsAreInFace) {
    verify::Rng rng(61);
    for (double p : {1.0, 1.5, 3.0}) {
        const LpSpace X(3, p);
        for (int t = 0; t < 40; ++t) {
            const std::vector<ConvexSet> sets = {verify::random_polytope(rng, 3, 5), verify::random_segment(rng, 3),
                                                 verify::random_ray(rng, 3), Ball{rng.uniform(0.5, 2)}};
            for (const auto &C : sets) {
                // integer-valued functionals make ties likely
                DualVec psi{static_cast<double>(rng.integer(-2, 2)), static_cast<double>(rng.integer(-2, 2)),
                            static_cast<double>(rng.integer(-2, 2))};
                const auto f = face(X, C, psi);
                EXPECT_EQ(f.level, support(X, C, psi));
                EXPECT_EQ(f.kind == FaceKind::empty, std::isinf(f.level));
                for (std::size_t i = 0; i < f.representatives.size(); ++i) {
                    EXPECT_TRUE(face_membership(X, C, psi, f.representatives[i])) << kind_name(C);
                    EXPECT_LE(std::abs(f.gaps[i]), 1e-9 * (1 + std::abs(f.level)));
                    for (std::size_t j = 0; j < i; ++j) {
                        const double lam = rng.uniform(0, 1);
                        EXPECT_TRUE(face_membership(X, C, psi,
                                                    lam * f.representatives[i] + (1 - lam) * f.representatives[j]));
                    }
                }
            }
        }
    }
}

TEST(FacesProperty, VisionIsConvexCone) {
    verify::Rng rng(67);
    const LpSpace X(3, 3.0);
    for (int t = 0; t < 40; ++t) {
        const auto C = verify::random_polytope(rng, 3, 5);
        const auto &verts = std::get<Polytope>(C).vertices;
        const PrimalVec y = verts[0];
        std::vector<DualVec> members;
        for (int k = 0; k < 200 && members.size() < 4; ++k) {
            const DualVec psi(rng.gaussian(3));
            if (vision_dual_member(X, C, y, psi))
                members.push_back(psi);
        }
        for (std::size_t i = 0; i + 1 < members.size(); ++i) {
            const double a = rng.uniform(0, 5), b = rng.uniform(0, 5);
            EXPECT_TRUE(vision_dual_member(X, C, y, a * members[i] + b * members[i + 1]));
            // primal vision is a cone
            const PrimalVec u = X.inverse_duality_map(members[i]);
            EXPECT_TRUE(vision_primal_member(X, C, y, rng.uniform(0.01, 10) * u));
        }
    }
}

TEST(FacesProperty, BallPartitionAndAlignment) {
    verify::Rng rng(71);
    for (int t = 0; t < 1000; ++t) {
        const double p  = std::vector<double>{1.5, 2.0, 3.0, 4.0}[t % 4];
        const LpSpace X(p, rng.weights(3));
        const double r  = rng.uniform(0.5, 3.0);
        const PrimalVec d(rng.nonzero_gaussian(3));
        const bool edge = t % 3 == 0;
        const PrimalVec y = ((edge ? r : r * rng.uniform(0, 0.999)) / X.norm(d)) * d;
        const auto c      = classify_point(X, Ball{r}, y);
        EXPECT_EQ(c.verdict == Verdict::cuticle, edge);
        if (edge) {
            // any member of the vision is aligned with J y
            const DualVec psi = rng.uniform(0.1, 4) * X.duality_map(y);
            EXPECT_NEAR(X.pair(psi, y), r * X.dual_norm(psi), 1e-9 * (1 + r * X.dual_norm(psi)));
        }
    }
}

TEST(FacesProperty, FixedPointAgreement) {
    verify::Rng rng(73);
    for (double p : {1.5, 3.0}) {
        const LpSpace X(p, rng.weights(3));
        for (int t = 0; t < 30; ++t) {
            const auto inst = verify::detail::fixed_point_instance(X, rng, t % 3, t % 2 == 0);
            const auto rep  = fixed_point_check(X, inst.set, inst.u, inst.y);
            if (rep.inconclusive)
                continue;
            EXPECT_TRUE(rep.agree()) << kind_name(inst.set);
        }
    }
}

TEST(FacesProperty, InternalMeansOnlyTrivialProjectionSolutions) {
    const LpSpace X(2, 3.0);
    const Polytope T{{PrimalVec{0, 0}, PrimalVec{2, 0}, PrimalVec{0, 2}}};
    verify::Rng rng(79);
    for (int t = 0; t < 50; ++t) {
        const PrimalVec y{rng.uniform(0.1, 0.8), rng.uniform(0.1, 0.8)};
        ASSERT_EQ(classify_point(X, T, y).verdict, Verdict::internal);
        const DualVec psi(rng.nonzero_gaussian(2));
        const auto r = generalized_project(X, T, psi + X.duality_map(y));
        EXPECT_GT(X.norm(r.point - y), 1e-6);
    }
}
