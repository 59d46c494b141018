#include "oracles.hpp"

#include <lpgeom/space.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace lpgeom;

namespace {

const PrimalVec kX{3.0, -2.0, -1.0};
const PrimalVec kH{7.0 / 3.0, -7.0 / 3.0, 0.0};

} // namespace

TEST(Space, RejectsBadParameters) {
    EXPECT_THROW(LpSpace(0, 2.0), std::invalid_argument);
    EXPECT_THROW(LpSpace(3, 0.5), std::invalid_argument);
    EXPECT_THROW(LpSpace(2.0, Eigen::Vector3d(1.0, -1.0, 1.0)), std::invalid_argument);
    EXPECT_NO_THROW(LpSpace(3, 1.0));
}

TEST(Space, ConjugateExponentAndDual) {
    const LpSpace X(4, 3.0);
    EXPECT_DOUBLE_EQ(X.conjugate_exponent(), 1.5);
    EXPECT_DOUBLE_EQ(X.dual().exponent(), 1.5);
    EXPECT_DOUBLE_EQ(X.dual().dual().exponent(), 3.0);
    EXPECT_EQ(X.dual().dimension(), 4);
    EXPECT_TRUE(std::isinf(LpSpace(2, 1.0).conjugate_exponent()));
}

TEST(Space, NormOfCounterexamplePoint) {
    const LpSpace X(3, 3.0);
    EXPECT_NEAR(X.norm(kX), std::cbrt(36.0), 1e-14);
    EXPECT_EQ(X.norm(X.zero()), 0.0);
}

TEST(Space, ProjectedPointIsShorterThanRayPoint) {
    const LpSpace X(3, 3.0);
    const PrimalVec w{-28.0, -35.0, -76.0}, u{-25.0, -37.0, -77.0};
    EXPECT_NEAR(X.norm(w), std::cbrt(28.0 * 28 * 28 + 35.0 * 35 * 35 + 76.0 * 76 * 76), 1e-12);
    EXPECT_LT(X.norm(w), X.norm(u));
}

TEST(Space, Pairing) {
    const LpSpace X(3, 3.0);
    const PrimalVec u{25.0, 37.0, 77.0};
    EXPECT_EQ(X.pair(DualVec{9.0, -4.0, -1.0}, u), 0.0);
    EXPECT_EQ(X.pair(DualVec{1.0, -1.0, 0.0}, u), -12.0);
    EXPECT_EQ(X.pair(X.dual_zero(), u), 0.0);
}

TEST(Space, DualNormAtInfinity) {
    const LpSpace X(3, 1.0);
    EXPECT_DOUBLE_EQ(X.dual_norm(DualVec{1.0, -4.0, 2.0}), 4.0);
}

TEST(Space, DualityMapMatchesClosedFormAtThree) {
    const LpSpace X(3, 3.0);
    const DualVec jx = X.duality_map(kX);
    const double c   = std::cbrt(36.0);
    EXPECT_NEAR(jx[0], 9.0 / c, 1e-12);
    EXPECT_NEAR(jx[1], -4.0 / c, 1e-12);
    EXPECT_NEAR(jx[2], -1.0 / c, 1e-12);

    const DualVec jh = X.duality_map(kH);
    const double s   = 7.0 * std::cbrt(4.0) / 6.0;
    EXPECT_NEAR(jh[0], s, 1e-12);
    EXPECT_NEAR(jh[1], -s, 1e-12);
    EXPECT_EQ(jh[2], 0.0);
}

TEST(Space, DualityMapIsIdentityAtTwo) {
    const LpSpace X(4, 2.0);
    const PrimalVec x{1.5, -2.0, 0.0, 3.25};
    EXPECT_EQ(X.duality_map(x).coords(), x.coords());
    EXPECT_EQ(X.inverse_duality_map(DualVec(x.coords())).coords(), x.coords());
}

TEST(Space, DualityMapRejectsNonSmooth) {
    EXPECT_THROW(LpSpace(3, 1.0).duality_map(kX), std::domain_error);
}

TEST(Space, DualityMapOfZero) {
    const LpSpace X(3, 1.5);
    EXPECT_TRUE(X.duality_map(X.zero()).is_zero());
    EXPECT_TRUE(X.inverse_duality_map(X.dual_zero()).is_zero());
}

TEST(Space, InverseRoundTrip) {
    const LpSpace X(3, 3.0);
    const PrimalVec y{1.0, -3.0, 2.0};
    EXPECT_LT(max_abs_diff(X.inverse_duality_map(X.duality_map(y)), y), 1e-12);
}

TEST(Space, Lyapunov) {
    const LpSpace X(3, 3.0);
    EXPECT_NEAR(X.lyapunov(X.duality_map(kX), kX), 0.0, 1e-12);
    EXPECT_NEAR(X.lyapunov(X.dual_zero(), kX), 36.0 / std::cbrt(36.0), 1e-12);
    EXPECT_DOUBLE_EQ(LpSpace(3, 2.0).lyapunov(DualVec{1, 0, 0}, PrimalVec{0, 1, 0}), 2.0);
}

TEST(Space, WindowFunctional) {
    const LpSpace X(5, 1.0);
    EXPECT_EQ(window_functional(X, {1, 2}).coords(), (Eigen::VectorXd(5) << 0, 1, 1, 0, 0).finished());
    EXPECT_EQ(window_functional(LpSpace(3, 2.0), {2}).coords(), Eigen::Vector3d(0, 0, 1));
    EXPECT_EQ(window_functional(LpSpace(3, 2.0), {0, 1, 2}).coords(), Eigen::Vector3d::Ones());
    EXPECT_THROW(window_functional(X, std::span<const Eigen::Index>{}), std::invalid_argument);
    EXPECT_THROW(window_functional(X, {5}), std::out_of_range);
}

// Property: identities and homogeneity against the definition-level oracle.
TEST(SpaceProperty, IdentitiesAgainstOracle) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> scale(-2.0, 1.0);
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
        for (int trial = 0; trial < 250; ++trial) {
            const Eigen::Index n    = 1 + trial % 6;
            const Eigen::VectorXd w = oracle::weights(rng, n);
            const LpSpace X(p, w);
            const PrimalVec x(oracle::gaussian(rng, n) * std::pow(10.0, scale(rng)));
            const double nx  = X.norm(x);
            const DualVec jx = X.duality_map(x);

            EXPECT_NEAR(nx, oracle::norm(x.coords(), w, p), 1e-12 * (1 + nx));
            EXPECT_LT((jx.coords() - oracle::duality(x.coords(), w, p)).cwiseAbs().maxCoeff(), 1e-12 * (1 + nx));
            EXPECT_LE(std::abs(X.pair(jx, x) - nx * nx), 1e-10 * (1 + nx * nx));
            EXPECT_LE(std::abs(X.dual_norm(jx) - nx), 1e-10 * (1 + nx));
            EXPECT_LE(X.norm(X.inverse_duality_map(jx) - x), 1e-8 * (1 + nx));
            EXPECT_LE(X.dual_norm(X.duality_map(X.inverse_duality_map(jx)) - jx), 1e-8 * (1 + nx));
            EXPECT_LE(std::abs(X.lyapunov(jx, x)), 1e-10 * (1 + nx * nx));

            const double t = std::abs(oracle::gaussian(rng, 1)(0)) * 3.0;
            EXPECT_LE((X.duality_map(t * x).coords() - t * jx.coords()).cwiseAbs().maxCoeff(),
                      1e-12 * (1 + t * jx.coords().cwiseAbs().maxCoeff()));
            EXPECT_EQ(X.duality_map(-x).coords(), (-jx).coords());

            const DualVec psi(oracle::gaussian(rng, n));
            const double np = X.dual_norm(psi);
            EXPECT_GE(X.lyapunov(psi, x), (np - nx) * (np - nx) - 1e-12 * (1 + np * np + nx * nx));
            EXPECT_LE(std::abs(X.pair(psi, x)), np * nx * (1 + 1e-12) + 1e-15);
        }
    }
}
