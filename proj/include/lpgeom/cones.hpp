#pragma once

#include <lpgeom/detail/linalg.hpp>
#include <lpgeom/project.hpp>
#include <lpgeom/sets.hpp>
#include <lpgeom/space.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpgeom {

/// Per-trial seed derivation for randomized searches: the i-th trial of a
/// run with base seed s uses splitmix64(s + (i + 1) * golden_gamma), so
/// trials are independent of execution order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z               = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z               = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Finitely generated cone {v + sum t_i g_i : t >= 0} with an explicit vertex.
///
/// Every "for all z in K" condition in this module is linear in z, so it
/// holds on K iff it holds at z = v and along each generator; checks below
/// reduce to those finitely many pairings.
class ConeWithVertex {
  public:
    ConeWithVertex(PrimalVec vertex, std::vector<PrimalVec> generators)
        : vertex_(std::move(vertex)), generators_(std::move(generators)) {
        if (generators_.empty())
            throw std::invalid_argument("ConeWithVertex: at least one generator required");
        for (const auto &g : generators_) {
            if (g.size() != vertex_.size())
                throw std::invalid_argument("ConeWithVertex: generator dimension mismatch");
            if (g.is_zero())
                throw std::invalid_argument("ConeWithVertex: generators must be nonzero");
        }
    }

    static ConeWithVertex from_set(const ConvexSet &C) {
        if (const auto *r = std::get_if<Ray>(&C))
            return ConeWithVertex(r->vertex, {r->direction});
        if (const auto *k = std::get_if<FinitelyGeneratedCone>(&C))
            return ConeWithVertex(k->vertex, k->generators);
        throw std::invalid_argument(std::string("ConeWithVertex: expected a ray or cone, got ") + kind_name(C));
    }

    const PrimalVec &vertex() const { return vertex_; }
    const std::vector<PrimalVec> &generators() const { return generators_; }
    Eigen::Index dimension() const { return vertex_.size(); }

    /// Single-generator cones become rays so that projections use the 1-D solver.
    ConvexSet as_set() const {
        if (generators_.size() == 1)
            return Ray{vertex_, generators_.front()};
        return FinitelyGeneratedCone{vertex_, generators_};
    }

    /// Functionals generating the polar {phi : <phi, g> <= 0 for all generators}.
    std::vector<DualVec> polar_generators(const LpSpace &space) const {
        space.check(dimension(), "polar_generators");
        const auto pg = detail::polar_generators(detail::columns(generators_, dimension()), space.weights());
        std::vector<DualVec> out;
        for (auto &phi : pg.all())
            out.emplace_back(phi);
        return out;
    }

  private:
    PrimalVec vertex_;
    std::vector<PrimalVec> generators_;
};

enum class WitnessKind { nonconvexity, double_dual_violation, identity_violation };

inline const char *witness_kind_name(WitnessKind k) {
    switch (k) {
    case WitnessKind::nonconvexity:
        return "nonconvexity";
    case WitnessKind::double_dual_violation:
        return "double-dual-violation";
    case WitnessKind::identity_violation:
        return "identity-violation";
    }
    return "unknown";
}

/// Data exhibiting a failed identity, stored with the evaluated value of the
/// violated inequality.
///
///   nonconvexity:          points {x, y, h}, scalars {lambda}; value = margin of h
///   double_dual_violation: points {z, x}, scalars {alpha}; value = <J(z - v), v - x>
///   identity_violation:    points {w, P_K w}; value = <J w, P_K w> - ||P_K w||^2
struct Witness {
    WitnessKind kind = WitnessKind::nonconvexity;
    std::vector<PrimalVec> points;
    std::vector<double> scalars;
    double value = 0.0;
};

namespace detail {

template <class Tag>
double worst_generator_margin(const LpSpace &space, const ConeWithVertex &K, const DualVec &phi) {
    double m = kInf;
    for (const auto &g : K.generators())
        m = std::min(m, -space.pair(phi, g));
    return m;
}

inline bool polar_member(const LpSpace &space, const ConeWithVertex &K, const DualVec &phi, double tol) {
    for (const auto &g : K.generators())
        if (!nonpositive_pairing(space, phi, g, tol))
            return false;
    return true;
}

} // namespace detail

/// min over z in K \ {v} directions of <J(x - v), v - z>, evaluated at
/// z = v + g for each generator g. Nonnegative iff x is in K_P^perp.
inline double metric_dual_margin(const LpSpace &space, const ConeWithVertex &K, const PrimalVec &x) {
    return detail::worst_generator_margin<PrimalTag>(space, K, space.duality_map(x - K.vertex()));
}

/// Membership in the metric dual cone {x : <J(x - v), v - z> >= 0 for all z in K}.
inline bool member_metric_dual(const LpSpace &space, const ConeWithVertex &K, const PrimalVec &x,
                               double tol = kExactTol) {
    space.check(x.size(), "member_metric_dual");
    return detail::polar_member(space, K, space.duality_map(x - K.vertex()), tol);
}

/// Same margin for the generalized dual cone, with psi - J v in place of J(x - v).
inline double generalized_dual_margin(const LpSpace &space, const ConeWithVertex &K, const DualVec &psi) {
    return detail::worst_generator_margin<DualTag>(space, K, psi - space.duality_map(K.vertex()));
}

/// Membership in the generalized dual cone {psi : <psi - J v, v - z> >= 0 for all z in K}.
inline bool member_generalized_dual(const LpSpace &space, const ConeWithVertex &K, const DualVec &psi,
                                    double tol = kExactTol) {
    space.check(psi.size(), "member_generalized_dual");
    return detail::polar_member(space, K, psi - space.duality_map(K.vertex()), tol);
}

/// Deterministic sample of the polar cone of K. Half the draws are
/// Gaussian rejection samples accepted by the exact generator test; the
/// rest (and any rejection-starved draw) are conic combinations of the
/// polar generators, which include boundary functionals.
inline std::vector<DualVec> sample_polar(const LpSpace &space, const ConeWithVertex &K, int count,
                                         std::uint64_t seed) {
    const auto gens = K.polar_generators(space);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    std::vector<DualVec> out;
    for (int s = 0; s < count; ++s) {
        std::optional<DualVec> phi;
        if (coin(rng)) {
            for (int attempt = 0; attempt < 32 && !phi; ++attempt) {
                DualVec cand = space.dual_zero();
                for (Eigen::Index i = 0; i < cand.size(); ++i)
                    cand[i] = gauss(rng);
                if (detail::polar_member(space, K, cand, 0.0))
                    phi = cand;
            }
        }
        if (!phi) {
            DualVec cand = space.dual_zero();
            if (!gens.empty()) {
                std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
                cand += detail::log_uniform(rng) * gens[pick(rng)];
                for (const auto &g : gens)
                    if (coin(rng))
                        cand += detail::log_uniform(rng) * g;
            }
            phi = cand;
        }
        out.push_back(*phi);
    }
    return out;
}

/// Members v + J*(phi), phi in the polar of K; this parameterizes K_P^perp exactly.
inline std::vector<PrimalVec> sample_metric_dual(const LpSpace &space, const ConeWithVertex &K, int count,
                                                 std::uint64_t seed) {
    std::vector<PrimalVec> out;
    for (const auto &phi : sample_polar(space, K, count, seed))
        out.push_back(K.vertex() + space.inverse_duality_map(phi));
    return out;
}

/// Members J v + phi, phi in the polar of K.
inline std::vector<DualVec> sample_generalized_dual(const LpSpace &space, const ConeWithVertex &K, int count,
                                                    std::uint64_t seed) {
    const DualVec jv = space.duality_map(K.vertex());
    std::vector<DualVec> out;
    for (const auto &phi : sample_polar(space, K, count, seed))
        out.push_back(jv + phi);
    return out;
}

namespace detail {

/// Known l_3 counterexample data, tried before any random search.
inline const PrimalVec &seed_point_x() {
    static const PrimalVec x{3.0, -2.0, -1.0};
    return x;
}
inline const PrimalVec &seed_point_y() {
    static const PrimalVec y{1.0, -3.0, 2.0};
    return y;
}

inline std::optional<Witness> nonconvexity_candidate(const LpSpace &space, const ConeWithVertex &K,
                                                     const PrimalVec &x, const PrimalVec &y, double lambda,
                                                     double tol) {
    if (!member_metric_dual(space, K, x, tol) || !member_metric_dual(space, K, y, tol))
        return std::nullopt;
    const PrimalVec h = lambda * x + (1.0 - lambda) * y;
    if (member_metric_dual(space, K, h, tol))
        return std::nullopt;
    return Witness{WitnessKind::nonconvexity, {x, y, h}, {lambda}, metric_dual_margin(space, K, h)};
}

inline std::optional<Witness> double_dual_candidate(const LpSpace &space, const ConeWithVertex &K,
                                                    const PrimalVec &z, double alpha, const PrimalVec &x,
                                                    double tol) {
    if (!member_metric_dual(space, K, x, tol))
        return std::nullopt;
    const DualVec jz = space.duality_map(z - K.vertex());
    const double val = space.pair(jz, K.vertex() - x);
    if (val < -tol * pairing_scale(space, jz, K.vertex() - x))
        return Witness{WitnessKind::double_dual_violation, {z, x}, {alpha}, val};
    return std::nullopt;
}

} // namespace detail

/// Searches for x, y in K_P^perp and lambda in (0, 1) whose convex
/// combination leaves K_P^perp. The known l_3 pair is tried first.
inline std::optional<Witness> probe_nonconvexity_metric_dual(const LpSpace &space, const ConeWithVertex &K,
                                                             int trials, std::uint64_t seed,
                                                             double tol = kExactTol) {
    space.require_smooth("probe_nonconvexity_metric_dual");
    space.check(K.dimension(), "probe_nonconvexity_metric_dual");
    if (K.dimension() == 3) {
        const PrimalVec x = K.vertex() + detail::seed_point_x();
        const PrimalVec y = K.vertex() + detail::seed_point_y();
        if (auto w = detail::nonconvexity_candidate(space, K, x, y, 2.0 / 3.0, tol))
            return w;
    }
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(t));
        const auto members    = sample_metric_dual(space, K, 2, s);
        std::mt19937_64 rng(s ^ 0x5bd1e995ULL);
        const double lambda = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
        if (auto w = detail::nonconvexity_candidate(space, K, members[0], members[1], lambda, tol))
            return w;
    }
    return std::nullopt;
}

/// Searches for z in K and x in K_P^perp with <J(z - v), v - x> < 0,
/// which shows z is outside the metric double dual. Requires vertex theta.
inline std::optional<Witness> metric_double_dual_violation(const LpSpace &space, const ConeWithVertex &K,
                                                           int trials, std::uint64_t seed,
                                                           double tol = kExactTol) {
    space.require_smooth("metric_double_dual_violation");
    space.check(K.dimension(), "metric_double_dual_violation");
    if (!K.vertex().is_zero())
        throw std::invalid_argument("metric_double_dual_violation: cone must have vertex at the origin");
    if (K.dimension() == 3)
        for (const auto &g : K.generators())
            if (auto w = detail::double_dual_candidate(space, K, g, 1.0, detail::seed_point_x(), tol))
                return w;
    const ConvexSet set = K.as_set();
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(t));
        const PrimalVec z     = sample(space, set, s, 1).front();
        const PrimalVec x     = sample_metric_dual(space, K, 1, s ^ 0x2545F491ULL).front();
        if (auto w = detail::double_dual_candidate(space, K, z, 1.0, x, tol))
            return w;
    }
    return std::nullopt;
}

/// Outcome of deciding z in (K_pi^perp)_pi^perp by two independent routes.
struct DoubleDualVerdict {
    /// Route (i): the double dual is K itself, so test z in K.
    bool primal_member = false;
    /// Route (ii): no functional of K_pi^perp violates the defining inequality.
    bool certificate_member = false;
    std::optional<DualVec> certificate;
    double certificate_value = 0.0;

    bool agree() const { return primal_member == certificate_member; }
};

/// Decides z in (K_pi^perp)_pi^perp = {z : <psi - J v, v - z> >= 0 for all psi in K_pi^perp}.
///
/// The certificate route searches the polar generators of K (facet normals
/// and annihilators, enumerated combinatorially) plus `samples` rejection
/// draws; it never calls the coefficient fit used by the primal route.
inline DoubleDualVerdict generalized_double_dual_member(const LpSpace &space, const ConeWithVertex &K,
                                                        const PrimalVec &z, double tol = kExactTol,
                                                        int samples = 64, std::uint64_t seed = 0) {
    space.require_smooth("generalized_double_dual_member");
    space.check(z.size(), "generalized_double_dual_member");
    DoubleDualVerdict out;
    out.primal_member = contains(space, K.as_set(), z, tol);

    const DualVec jv    = space.duality_map(K.vertex());
    const PrimalVec off = K.vertex() - z;
    auto candidates     = K.polar_generators(space);
    for (const auto &phi : sample_polar(space, K, samples, seed))
        candidates.push_back(phi);
    for (const auto &phi : candidates) {
        const DualVec psi = jv + phi;
        if (!member_generalized_dual(space, K, psi, tol))
            continue;
        const double val = space.pair(psi - jv, off);
        if (val < -tol * pairing_scale(space, phi, off) && val < out.certificate_value) {
            out.certificate       = psi;
            out.certificate_value = val;
        }
    }
    out.certificate_member = !out.certificate.has_value();
    return out;
}

/// Counts from the sampled two-sided check of
/// (K_1 cap ... cap K_m)_pi^perp = closed convex hull of the union of (K_i)_pi^perp.
struct IntersectionReport {
    std::vector<PrimalVec> intersection_generators;
    int forward_checked   = 0;
    int forward_failures  = 0;
    int backward_checked  = 0;
    int backward_failures = 0;
    double max_forward_violation = 0.0;
    double max_backward_residual = 0.0;

    bool passed() const { return forward_failures == 0 && backward_failures == 0; }
};

/// Generators of the intersection of cones with a common vertex, computed
/// from the union of their facet descriptions (dimension <= 4, pointed
/// intersections only).
inline ConeWithVertex intersect(const LpSpace &space, std::span<const ConeWithVertex> family) {
    if (family.empty())
        throw std::invalid_argument("intersect: empty family");
    const PrimalVec &v = family.front().vertex();
    std::vector<Eigen::VectorXd> functionals;
    for (const auto &K : family) {
        if (max_abs_diff(K.vertex(), v) > 1e-12)
            throw std::invalid_argument("intersect: cones must share a vertex");
        for (const auto &phi : K.polar_generators(space))
            functionals.push_back(phi.coords());
    }
    std::vector<PrimalVec> gens;
    for (auto &d : detail::extreme_rays(functionals, space.weights()))
        gens.emplace_back(std::move(d));
    return ConeWithVertex(v, std::move(gens));
}

/// Sampled two-sided inclusion check for the generalized dual of an intersection.
///
/// Forward: random convex combinations of members of the individual duals
/// must be members of the intersection's dual. Backward: members psi of the
/// intersection's dual must decompose as J v + sum of nonnegative multiples
/// of polar generators of the individual cones, found by a nonnegative fit
/// with residual at most tol (1 + ||psi - J v||).
inline IntersectionReport intersection_dual_check(const LpSpace &space, std::span<const ConeWithVertex> family,
                                                  int samples, std::uint64_t seed, double tol = 1e-8) {
    space.require_smooth("intersection_dual_check");
    IntersectionReport rep;
    const ConeWithVertex inter = intersect(space, family);
    rep.intersection_generators = inter.generators();
    const DualVec jv            = space.duality_map(inter.vertex());

    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    for (int s = 0; s < samples; ++s) {
        DualVec psi = space.dual_zero();
        double total = 0.0;
        for (std::size_t i = 0; i < family.size(); ++i) {
            const auto members = sample_generalized_dual(space, family[i], 2, derive_seed(seed, s * 31 + i));
            for (const auto &m : members) {
                const double wgt = expo(rng);
                psi += wgt * m;
                total += wgt;
            }
        }
        psi = psi / total;
        ++rep.forward_checked;
        if (!member_generalized_dual(space, inter, psi, tol)) {
            ++rep.forward_failures;
            rep.max_forward_violation =
                std::max(rep.max_forward_violation, -generalized_dual_margin(space, inter, psi));
        }
    }

    std::vector<Eigen::VectorXd> cols;
    for (const auto &K : family)
        for (const auto &phi : K.polar_generators(space))
            cols.push_back(phi.coords());
    Eigen::MatrixXd A(space.dimension(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        A.col(static_cast<Eigen::Index>(j)) = cols[j];
    for (const auto &psi : sample_generalized_dual(space, inter, samples, derive_seed(seed, 0xB0B))) {
        const Eigen::VectorXd phi = (psi - jv).coords();
        const double resid        = (A * detail::nnls(A, phi) - phi).norm();
        ++rep.backward_checked;
        rep.max_backward_residual = std::max(rep.max_backward_residual, resid);
        if (resid > tol * (1.0 + phi.norm()))
            ++rep.backward_failures;
    }
    return rep;
}

inline IntersectionReport intersection_dual_check(const LpSpace &space, const ConeWithVertex &C,
                                                  const ConeWithVertex &K, int samples, std::uint64_t seed,
                                                  double tol = 1e-8) {
    const ConeWithVertex pair[] = {C, K};
    return intersection_dual_check(space, std::span<const ConeWithVertex>(pair), samples, seed, tol);
}

/// Pointedness oracle for cones with vertex theta: K is pointed iff no
/// convex combination of generators vanishes (lifted nonnegative fit).
inline bool is_pointed(const ConeWithVertex &K) {
    if (!K.vertex().is_zero())
        return false;
    const auto n = K.dimension();
    const auto G = detail::columns(K.generators(), n);
    Eigen::MatrixXd A(n + 1, G.cols());
    for (Eigen::Index j = 0; j < G.cols(); ++j) {
        A.col(j).head(n) = G.col(j) / G.col(j).norm();
        A(n, j)          = 1.0;
    }
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
    b(n)              = 1.0;
    return (A * detail::nnls(A, b) - b).norm() > 1e-9;
}

/// Delta = <J w, P_K w> - ||P_K w||^2 together with the projection used.
struct IdentityDefect {
    ProjectionResult projection;
    double delta = 0.0;
};

inline IdentityDefect identity_defect(const LpSpace &space, const ConeWithVertex &K, const PrimalVec &w,
                                      const SolverOptions &opts = {}) {
    IdentityDefect out;
    out.projection  = metric_project(space, K.as_set(), w, opts);
    const double np = space.norm(out.projection.point);
    out.delta       = space.pair(space.duality_map(w), out.projection.point) - np * np;
    return out;
}

/// Witness that <J w, P_K w> != ||P_K w||^2, when |Delta| > tol (1 + ||P_K w||^2).
inline std::optional<Witness> hilbert_identity_violation(const LpSpace &space, const ConeWithVertex &K,
                                                         const PrimalVec &w, const SolverOptions &opts = {},
                                                         double tol = kExactTol) {
    const auto d    = identity_defect(space, K, w, opts);
    const double np = space.norm(d.projection.point);
    if (std::abs(d.delta) <= tol * (1.0 + np * np))
        return std::nullopt;
    return Witness{WitnessKind::identity_violation, {w, d.projection.point}, {}, d.delta};
}

/// Re-evaluates the stored inequality and confirms the violation.
inline bool verify_witness(const LpSpace &space, const ConeWithVertex &K, const Witness &w,
                           double tol = kExactTol) {
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * (1.0 + std::abs(a)); };
    switch (w.kind) {
    case WitnessKind::nonconvexity: {
        if (w.points.size() != 3 || w.scalars.size() != 1)
            return false;
        const double lam  = w.scalars[0];
        const PrimalVec h = lam * w.points[0] + (1.0 - lam) * w.points[1];
        return max_abs_diff(h, w.points[2]) <= 1e-12 * (1.0 + space.norm(h)) &&
               member_metric_dual(space, K, w.points[0], tol) && member_metric_dual(space, K, w.points[1], tol) &&
               !member_metric_dual(space, K, w.points[2], tol) &&
               close(metric_dual_margin(space, K, w.points[2]), w.value) && w.value < 0;
    }
    case WitnessKind::double_dual_violation: {
        if (w.points.size() != 2)
            return false;
        const DualVec jz = space.duality_map(w.points[0] - K.vertex());
        const double val = space.pair(jz, K.vertex() - w.points[1]);
        return contains(space, K.as_set(), w.points[0], tol) && member_metric_dual(space, K, w.points[1], tol) &&
               close(val, w.value) && val < 0;
    }
    case WitnessKind::identity_violation: {
        if (w.points.size() != 2)
            return false;
        const double np  = space.norm(w.points[1]);
        const double val = space.pair(space.duality_map(w.points[0]), w.points[1]) - np * np;
        return close(val, w.value) && std::abs(val) > tol * (1.0 + np * np);
    }
    }
    return false;
}

} // namespace lpgeom
