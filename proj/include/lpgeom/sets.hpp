#pragma once

#include <lpgeom/detail/linalg.hpp>
#include <lpgeom/space.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace lpgeom {

/// Closed segment {a + t (b - a) : t in [0, 1]}.
struct Segment {
    PrimalVec a, b;
};

/// Closed ray {vertex + t direction : t >= 0}.
struct Ray {
    PrimalVec vertex, direction;
};

/// Line {point + t direction : t in R}.
struct Line {
    PrimalVec point, direction;
};

/// {vertex + sum_i t_i g_i : t >= 0}.
struct FinitelyGeneratedCone {
    PrimalVec vertex;
    std::vector<PrimalVec> generators;
};

/// Convex hull of finitely many points.
struct Polytope {
    std::vector<PrimalVec> vertices;
};

/// Closed ball of the given radius centred at the origin, in the space's norm.
struct Ball {
    double radius = 1.0;
};

/// Linear span of linearly independent basis vectors.
struct Subspace {
    std::vector<PrimalVec> basis;
};

using ConvexSet = std::variant<Segment, Ray, Line, FinitelyGeneratedCone, Polytope, Ball, Subspace>;

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

inline const char *kind_name(const ConvexSet &c) {
    return std::visit(overloaded{
                          [](const Segment &) { return "segment"; },
                          [](const Ray &) { return "ray"; },
                          [](const Line &) { return "line"; },
                          [](const FinitelyGeneratedCone &) { return "cone"; },
                          [](const Polytope &) { return "polytope"; },
                          [](const Ball &) { return "ball"; },
                          [](const Subspace &) { return "subspace"; },
                      },
                      c);
}

namespace detail {

inline Eigen::MatrixXd columns(const std::vector<PrimalVec> &vs, Eigen::Index n) {
    Eigen::MatrixXd M(n, static_cast<Eigen::Index>(vs.size()));
    for (std::size_t j = 0; j < vs.size(); ++j)
        M.col(static_cast<Eigen::Index>(j)) = vs[j].coords();
    return M;
}

inline double inf_norm(const Eigen::VectorXd &v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

/// Whether <psi, d> <= 0 up to a relative tolerance.
inline bool nonpositive_pairing(const LpSpace &space, const DualVec &psi, const PrimalVec &d, double tol) {
    return space.pair(psi, d) <= tol * pairing_scale(space, psi, d);
}

inline bool annihilates(const LpSpace &space, const DualVec &psi, const PrimalVec &d, double tol) {
    return std::abs(space.pair(psi, d)) <= tol * pairing_scale(space, psi, d);
}

} // namespace detail

/// Throws std::invalid_argument when C is malformed or does not live in `space`.
inline void validate(const LpSpace &space, const ConvexSet &C) {
    const auto n   = space.dimension();
    auto nonzero   = [](const PrimalVec &d, const char *what) {
        if (d.is_zero())
            throw std::invalid_argument(std::string(what) + " must be nonzero");
    };
    std::visit(overloaded{
                   [&](const Segment &s) {
                       space.check(s.a.size(), "segment");
                       space.check(s.b.size(), "segment");
                   },
                   [&](const Ray &r) {
                       space.check(r.vertex.size(), "ray");
                       space.check(r.direction.size(), "ray");
                       nonzero(r.direction, "ray direction");
                   },
                   [&](const Line &l) {
                       space.check(l.point.size(), "line");
                       space.check(l.direction.size(), "line");
                       nonzero(l.direction, "line direction");
                   },
                   [&](const FinitelyGeneratedCone &k) {
                       space.check(k.vertex.size(), "cone");
                       if (k.generators.empty())
                           throw std::invalid_argument("cone needs at least one generator");
                       for (const auto &g : k.generators) {
                           space.check(g.size(), "cone generator");
                           nonzero(g, "cone generator");
                       }
                   },
                   [&](const Polytope &p) {
                       if (p.vertices.empty())
                           throw std::invalid_argument("polytope needs at least one vertex");
                       for (const auto &v : p.vertices)
                           space.check(v.size(), "polytope vertex");
                   },
                   [&](const Ball &b) {
                       if (!(b.radius > 0.0) || !std::isfinite(b.radius))
                           throw std::invalid_argument("ball radius must be positive");
                   },
                   [&](const Subspace &s) {
                       if (s.basis.empty())
                           throw std::invalid_argument("subspace needs a nonempty basis");
                       for (const auto &b : s.basis)
                           space.check(b.size(), "subspace basis");
                       if (detail::kernel_of(detail::columns(s.basis, n), static_cast<Eigen::Index>(s.basis.size()))
                               .rank != static_cast<Eigen::Index>(s.basis.size()))
                           throw std::invalid_argument("subspace basis must be linearly independent");
                   },
               },
               C);
}

/// Euclidean distance from x to C measured through the coefficient fit of
/// the set's description (the Banach norm for balls).
inline double coefficient_residual(const LpSpace &space, const ConvexSet &C, const PrimalVec &x) {
    validate(space, C);
    space.check(x.size(), "contains");
    const auto n = space.dimension();
    using Eigen::VectorXd;
    return std::visit(
        overloaded{
            [&](const Segment &s) {
                const VectorXd d  = s.b.coords() - s.a.coords();
                const double dd   = d.squaredNorm();
                const double t    = dd > 0 ? std::clamp(d.dot(x.coords() - s.a.coords()) / dd, 0.0, 1.0) : 0.0;
                return (x.coords() - s.a.coords() - t * d).norm();
            },
            [&](const Ray &r) {
                const VectorXd &d = r.direction.coords();
                const double t    = std::max(0.0, d.dot(x.coords() - r.vertex.coords()) / d.squaredNorm());
                return (x.coords() - r.vertex.coords() - t * d).norm();
            },
            [&](const Line &l) {
                const VectorXd &d = l.direction.coords();
                const double t    = d.dot(x.coords() - l.point.coords()) / d.squaredNorm();
                return (x.coords() - l.point.coords() - t * d).norm();
            },
            [&](const FinitelyGeneratedCone &k) {
                const auto G     = detail::columns(k.generators, n);
                const VectorXd b = x.coords() - k.vertex.coords();
                return (G * detail::nnls(G, b) - b).norm();
            },
            [&](const Polytope &p) {
                // Lift to homogeneous coordinates: x in conv(V) iff (x, 1) in cone{(v_j, 1)}.
                const auto V       = detail::columns(p.vertices, n);
                const double scale = std::max(1.0, V.cwiseAbs().maxCoeff());
                Eigen::MatrixXd A(n + 1, V.cols());
                A.topRows(n) = V;
                A.row(n).setConstant(scale);
                VectorXd b(n + 1);
                b.head(n) = x.coords();
                b(n)      = scale;
                return (A * detail::nnls(A, b) - b).norm();
            },
            [&](const Ball &b) { return std::max(0.0, space.norm(x) - b.radius); },
            [&](const Subspace &s) {
                const auto B = detail::columns(s.basis, n);
                const VectorXd c = B.colPivHouseholderQr().solve(x.coords());
                return (B * c - x.coords()).norm();
            },
        },
        C);
}

/// Membership up to `tol`, scaled by the magnitude of x.
inline bool contains(const LpSpace &space, const ConvexSet &C, const PrimalVec &x, double tol = kExactTol) {
    const double r = coefficient_residual(space, C, x);
    return r <= tol * (1.0 + detail::inf_norm(x.coords()));
}

/// Support function sup_{x in C} <psi, x>, possibly +inf. Sign tests on
/// unbounded directions use a relative tolerance `tol`.
inline double support(const LpSpace &space, const ConvexSet &C, const DualVec &psi, double tol = kExactTol) {
    validate(space, C);
    space.check(psi.size(), "support");
    return std::visit(
        overloaded{
            [&](const Segment &s) { return std::max(space.pair(psi, s.a), space.pair(psi, s.b)); },
            [&](const Ray &r) {
                return detail::nonpositive_pairing(space, psi, r.direction, tol) ? space.pair(psi, r.vertex) : kInf;
            },
            [&](const Line &l) {
                return detail::annihilates(space, psi, l.direction, tol) ? space.pair(psi, l.point) : kInf;
            },
            [&](const FinitelyGeneratedCone &k) {
                for (const auto &g : k.generators)
                    if (!detail::nonpositive_pairing(space, psi, g, tol))
                        return kInf;
                return space.pair(psi, k.vertex);
            },
            [&](const Polytope &p) {
                double best = -kInf;
                for (const auto &v : p.vertices)
                    best = std::max(best, space.pair(psi, v));
                return best;
            },
            [&](const Ball &b) { return b.radius * space.dual_norm(psi); },
            [&](const Subspace &s) {
                for (const auto &b : s.basis)
                    if (!detail::annihilates(space, psi, b, tol))
                        return kInf;
                return 0.0;
            },
        },
        C);
}

/// Coefficient magnitudes for unbounded sets are drawn log-uniformly from
/// [kSampleMinCoeff, kSampleMaxCoeff].
inline constexpr double kSampleMinCoeff = 1e-2;
inline constexpr double kSampleMaxCoeff = 1e2;

namespace detail {

inline double log_uniform(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(std::log(kSampleMinCoeff), std::log(kSampleMaxCoeff));
    return std::exp(u(rng));
}

} // namespace detail

/// Deterministic sample of `count` points of C for the given seed. Cone
/// samples zero each coefficient with probability 1/4 so that points on
/// lower-dimensional faces are represented.
inline std::vector<PrimalVec> sample(const LpSpace &space, const ConvexSet &C, std::uint64_t seed, int count) {
    validate(space, C);
    if (count < 1)
        throw std::invalid_argument("sample: count must be at least 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::bernoulli_distribution drop(0.25), flip(0.5);
    const auto n = space.dimension();

    std::vector<PrimalVec> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        PrimalVec x = std::visit(
            overloaded{
                [&](const Segment &s) {
                    const double t = unit(rng);
                    return s.a + t * (s.b - s.a);
                },
                [&](const Ray &r) { return r.vertex + detail::log_uniform(rng) * r.direction; },
                [&](const Line &l) {
                    const double t = detail::log_uniform(rng) * (flip(rng) ? 1.0 : -1.0);
                    return l.point + t * l.direction;
                },
                [&](const FinitelyGeneratedCone &c) {
                    PrimalVec x = c.vertex;
                    for (const auto &g : c.generators)
                        if (!drop(rng))
                            x += detail::log_uniform(rng) * g;
                    return x;
                },
                [&](const Polytope &p) {
                    // Normalized exponentials give a uniform point of the simplex.
                    std::exponential_distribution<double> e(1.0);
                    Eigen::VectorXd lam(static_cast<Eigen::Index>(p.vertices.size()));
                    for (Eigen::Index j = 0; j < lam.size(); ++j)
                        lam(j) = e(rng);
                    lam /= lam.sum();
                    PrimalVec x = space.zero();
                    for (std::size_t j = 0; j < p.vertices.size(); ++j)
                        x += lam(static_cast<Eigen::Index>(j)) * p.vertices[j];
                    return x;
                },
                [&](const Ball &b) {
                    PrimalVec d = space.zero();
                    do {
                        for (Eigen::Index i = 0; i < n; ++i)
                            d[i] = gauss(rng);
                    } while (d.is_zero());
                    const double rad = b.radius * std::pow(unit(rng), 1.0 / static_cast<double>(n));
                    return (rad / space.norm(d)) * d;
                },
                [&](const Subspace &s) {
                    PrimalVec x = space.zero();
                    for (const auto &b : s.basis)
                        x += detail::log_uniform(rng) * (flip(rng) ? 1.0 : -1.0) * b;
                    return x;
                },
            },
            C);
        out.push_back(std::move(x));
    }
    return out;
}

/// Feasible region of the coefficients of a Parameterization.
enum class CoefficientDomain { nonnegative, unit_box, simplex, unrestricted };

/// {base + sum_i t_i directions_i : t in domain}.
struct Parameterization {
    PrimalVec base;
    std::vector<PrimalVec> directions;
    CoefficientDomain domain = CoefficientDomain::unrestricted;

    PrimalVec point(const Eigen::VectorXd &t) const {
        PrimalVec x = base;
        for (std::size_t i = 0; i < directions.size(); ++i)
            x += t(static_cast<Eigen::Index>(i)) * directions[i];
        return x;
    }

    Eigen::VectorXd project_coefficients(const Eigen::VectorXd &t) const {
        switch (domain) {
        case CoefficientDomain::nonnegative:
            return t.cwiseMax(0.0);
        case CoefficientDomain::unit_box:
            return t.cwiseMax(0.0).cwiseMin(1.0);
        case CoefficientDomain::simplex:
            return detail::project_simplex(t);
        case CoefficientDomain::unrestricted:
            break;
        }
        return t;
    }
};

/// Exact affine parameterization of C; balls have none (their projections
/// use closed forms).
inline std::optional<Parameterization> parameterize(const LpSpace &space, const ConvexSet &C) {
    validate(space, C);
    return std::visit(
        overloaded{
            [&](const Segment &s) -> std::optional<Parameterization> {
                return Parameterization{s.a, {s.b - s.a}, CoefficientDomain::unit_box};
            },
            [&](const Ray &r) -> std::optional<Parameterization> {
                return Parameterization{r.vertex, {r.direction}, CoefficientDomain::nonnegative};
            },
            [&](const Line &l) -> std::optional<Parameterization> {
                return Parameterization{l.point, {l.direction}, CoefficientDomain::unrestricted};
            },
            [&](const FinitelyGeneratedCone &k) -> std::optional<Parameterization> {
                return Parameterization{k.vertex, k.generators, CoefficientDomain::nonnegative};
            },
            [&](const Polytope &p) -> std::optional<Parameterization> {
                return Parameterization{space.zero(), p.vertices, CoefficientDomain::simplex};
            },
            [&](const Ball &) -> std::optional<Parameterization> { return std::nullopt; },
            [&](const Subspace &s) -> std::optional<Parameterization> {
                return Parameterization{space.zero(), s.basis, CoefficientDomain::unrestricted};
            },
        },
        C);
}

} // namespace lpgeom
