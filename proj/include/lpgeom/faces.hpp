#pragma once

#include <lpgeom/cones.hpp>
#include <lpgeom/detail/linalg.hpp>
#include <lpgeom/project.hpp>
#include <lpgeom/sets.hpp>
#include <lpgeom/space.hpp>

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace lpgeom {

enum class FaceKind { empty, whole_set, singleton, vertex_subset, affine_slice };
enum class EmptyCause { none, unbounded, unattained };

inline const char *face_kind_name(FaceKind k) {
    switch (k) {
    case FaceKind::empty:
        return "empty";
    case FaceKind::whole_set:
        return "whole-set";
    case FaceKind::singleton:
        return "singleton";
    case FaceKind::vertex_subset:
        return "vertex-subset";
    case FaceKind::affine_slice:
        return "affine-slice";
    }
    return "unknown";
}

inline const char *empty_cause_name(EmptyCause c) {
    switch (c) {
    case EmptyCause::none:
        return "none";
    case EmptyCause::unbounded:
        return "unbounded";
    case EmptyCause::unattained:
        return "unattained";
    }
    return "unknown";
}

/// Argmax set of psi over C.
///
/// vertex_subset means the convex hull of the listed representatives (for
/// polytopes and segments), or, for cones, the vertex plus the cone over the
/// annihilated generators (representatives are v and v + g). For closed sets
/// of the supported types a finite supremum is always attained, so the only
/// empty cause that occurs is `unbounded`.
struct FaceDescription {
    double level      = 0.0;
    FaceKind kind     = FaceKind::empty;
    EmptyCause cause  = EmptyCause::none;
    std::vector<PrimalVec> representatives;
    /// level - <psi, y> for each representative.
    std::vector<double> gaps;
};

namespace detail {

/// Points that describe C when psi = theta*.
inline std::vector<PrimalVec> anchor_points(const LpSpace &space, const ConvexSet &C) {
    return std::visit(overloaded{
                          [](const Segment &s) { return std::vector<PrimalVec>{s.a, s.b}; },
                          [](const Ray &r) { return std::vector<PrimalVec>{r.vertex, r.vertex + r.direction}; },
                          [](const Line &l) { return std::vector<PrimalVec>{l.point, l.point + l.direction}; },
                          [](const FinitelyGeneratedCone &k) {
                              std::vector<PrimalVec> out{k.vertex};
                              for (const auto &g : k.generators)
                                  out.push_back(k.vertex + g);
                              return out;
                          },
                          [](const Polytope &p) { return p.vertices; },
                          [&](const Ball &) { return std::vector<PrimalVec>{space.zero()}; },
                          [&](const Subspace &s) {
                              std::vector<PrimalVec> out{space.zero()};
                              for (const auto &b : s.basis)
                                  out.push_back(b);
                              return out;
                          },
                      },
                      C);
}

inline bool ties(double value, double level, double scale, double tol) { return value >= level - tol * scale; }

/// A point of the p = 1 or p = inf ball of radius r where psi attains r ||psi||_*.
inline PrimalVec ball_slice_point(const LpSpace &space, double r, const DualVec &psi) {
    const auto n  = space.dimension();
    const auto &w = space.weights();
    PrimalVec y   = space.zero();
    if (space.exponent() == 1.0) {
        const double top = psi.coords().cwiseAbs().maxCoeff();
        double mass      = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (std::abs(psi[i]) == top)
                mass += w(i);
        for (Eigen::Index i = 0; i < n; ++i)
            if (std::abs(psi[i]) == top)
                y[i] = sign(psi[i]) * r / mass;
    } else {
        for (Eigen::Index i = 0; i < n; ++i)
            y[i] = r * sign(psi[i]);
    }
    return y;
}

} // namespace detail

/// The face F_C(psi) = {y in C : <psi, y> = sup_C psi}. Valid for any p >= 1.
inline FaceDescription face(const LpSpace &space, const ConvexSet &C, const DualVec &psi, double tol = kExactTol) {
    FaceDescription out;
    out.level = support(space, C, psi, tol);
    if (std::isinf(out.level)) {
        out.kind  = FaceKind::empty;
        out.cause = EmptyCause::unbounded;
        return out;
    }
    auto finish = [&](FaceKind kind, std::vector<PrimalVec> reps) {
        out.kind            = kind;
        out.representatives = std::move(reps);
        for (const auto &y : out.representatives)
            out.gaps.push_back(out.level - space.pair(psi, y));
        return out;
    };
    if (psi.is_zero())
        return finish(FaceKind::whole_set, detail::anchor_points(space, C));

    auto argmax_vertices = [&](const std::vector<PrimalVec> &verts) {
        std::vector<PrimalVec> hit;
        for (const auto &v : verts)
            if (detail::ties(space.pair(psi, v), out.level, pairing_scale(space, psi, v), tol))
                hit.push_back(v);
        return finish(hit.size() == verts.size() ? FaceKind::whole_set : FaceKind::vertex_subset, hit);
    };
    auto cone_face = [&](const PrimalVec &v, const std::vector<PrimalVec> &gens) {
        std::vector<PrimalVec> reps{v};
        for (const auto &g : gens)
            if (detail::annihilates(space, psi, g, tol))
                reps.push_back(v + g);
        if (reps.size() == 1)
            return finish(FaceKind::singleton, reps);
        return finish(reps.size() == gens.size() + 1 ? FaceKind::whole_set : FaceKind::vertex_subset, reps);
    };

    return std::visit(overloaded{
                          [&](const Segment &s) { return argmax_vertices({s.a, s.b}); },
                          [&](const Polytope &p) { return argmax_vertices(p.vertices); },
                          [&](const Ray &r) { return cone_face(r.vertex, {r.direction}); },
                          [&](const FinitelyGeneratedCone &k) { return cone_face(k.vertex, k.generators); },
                          [&](const Line &l) {
                              return finish(FaceKind::whole_set, {l.point, l.point + l.direction});
                          },
                          [&](const Subspace &) { return finish(FaceKind::whole_set, detail::anchor_points(space, C)); },
                          [&](const Ball &b) {
                              if (space.smooth()) {
                                  const PrimalVec d = space.inverse_duality_map(psi);
                                  return finish(FaceKind::singleton, {(b.radius / space.norm(d)) * d});
                              }
                              return finish(FaceKind::affine_slice, {detail::ball_slice_point(space, b.radius, psi)});
                          },
                      },
                      C);
}

/// y in F_C(psi): y in C and <psi, y> >= sup_C psi - tol.
inline bool face_membership(const LpSpace &space, const ConvexSet &C, const DualVec &psi, const PrimalVec &y,
                            double tol = kExactTol) {
    if (!contains(space, C, y, tol))
        return false;
    const double level = support(space, C, psi, tol);
    if (std::isinf(level))
        return false;
    return detail::ties(space.pair(psi, y), level, pairing_scale(space, psi, y), tol);
}

namespace detail {

inline void require_point_of(const LpSpace &space, const ConvexSet &C, const PrimalVec &y, double tol,
                             const char *where) {
    if (!contains(space, C, y, tol))
        throw std::domain_error(std::string(where) + ": point is not in the set");
}

} // namespace detail

/// psi in F_C^{-1}(y), i.e. y in F_C(psi). Requires y in C.
inline bool vision_dual_member(const LpSpace &space, const ConvexSet &C, const PrimalVec &y, const DualVec &psi,
                               double tol = kExactTol) {
    detail::require_point_of(space, C, y, tol, "vision_dual_member");
    return face_membership(space, C, psi, y, tol);
}

/// u in F_C^{-2}(y), i.e. y in F_C(J u). Requires a smooth space and y in C.
inline bool vision_primal_member(const LpSpace &space, const ConvexSet &C, const PrimalVec &y, const PrimalVec &u,
                                 double tol = kExactTol) {
    space.require_smooth("vision_primal_member");
    return vision_dual_member(space, C, y, space.duality_map(u), tol);
}

struct ConjugationReport {
    int checked       = 0;
    int members       = 0;
    int discrepancies = 0;
    bool passed() const { return discrepancies == 0; }
};

/// Sampled check that psi in F_C^{-1}(y) iff J* psi in F_C^{-2}(y).
///
/// Candidates are theta*, J(y - x) and J(x - y) for sampled x in C (these
/// hit supporting functionals at boundary points), and Gaussian functionals.
inline ConjugationReport vision_conjugation_check(const LpSpace &space, const ConvexSet &C, const PrimalVec &y,
                                                  int samples, std::uint64_t seed, double tol = kExactTol) {
    space.require_smooth("vision_conjugation_check");
    detail::require_point_of(space, C, y, tol, "vision_conjugation_check");
    std::vector<DualVec> cands{space.dual_zero()};
    if (!y.is_zero())
        cands.push_back(space.duality_map(y));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto pts = sample(space, C, derive_seed(seed, 1), samples);
    for (const auto &x : pts) {
        cands.push_back(space.duality_map(y - x));
        cands.push_back(space.duality_map(x - y));
        DualVec g = space.dual_zero();
        for (Eigen::Index i = 0; i < g.size(); ++i)
            g[i] = gauss(rng);
        cands.push_back(g);
    }
    ConjugationReport rep;
    for (const auto &psi : cands) {
        const bool a = vision_dual_member(space, C, y, psi, tol);
        const bool b = vision_primal_member(space, C, y, space.inverse_duality_map(psi), tol);
        ++rep.checked;
        rep.members += a ? 1 : 0;
        rep.discrepancies += a != b ? 1 : 0;
    }
    return rep;
}

enum class Verdict { internal, cuticle };
enum class ClassifyMethod { closed_form, grid_search, multistart };

inline const char *verdict_name(Verdict v) { return v == Verdict::internal ? "internal" : "cuticle"; }
inline const char *classify_method_name(ClassifyMethod m) {
    switch (m) {
    case ClassifyMethod::closed_form:
        return "closed-form";
    case ClassifyMethod::grid_search:
        return "grid-search";
    case ClassifyMethod::multistart:
        return "multistart";
    }
    return "unknown";
}

struct ClassifyOptions {
    int azimuth_steps = 720;
    int polar_steps   = 360;
    int multistarts   = 64;
    int ascent_iters  = 400;
    double tol        = 1e-9;
    std::uint64_t seed = 0;
};

struct ClassifyResult {
    Verdict verdict = Verdict::internal;
    std::optional<DualVec> witness;
    ClassifyMethod method = ClassifyMethod::closed_form;
    /// Best value of min_j <psi, d_j> / |d_j| found by the search (closed forms: 0 or -1).
    double score = 0.0;
    /// True when an internal verdict only means "no witness found".
    bool heuristic() const { return verdict == Verdict::internal && method == ClassifyMethod::multistart; }
};

namespace detail {

/// psi is a supporting functional of C at y iff <psi, d> >= 0 for each
/// direction d returned here: y - x_j for vertices, and y - v, -g_i for cones.
inline std::vector<Eigen::VectorXd> support_directions(const ConvexSet &C, const PrimalVec &y) {
    std::vector<Eigen::VectorXd> out;
    auto vertex_dirs = [&](const std::vector<PrimalVec> &verts) {
        for (const auto &v : verts)
            out.push_back((y - v).coords());
    };
    auto cone_dirs = [&](const PrimalVec &v, const std::vector<PrimalVec> &gens) {
        out.push_back((y - v).coords());
        for (const auto &g : gens)
            out.push_back(-g.coords());
    };
    std::visit(overloaded{
                   [&](const Segment &s) { vertex_dirs({s.a, s.b}); },
                   [&](const Polytope &p) { vertex_dirs(p.vertices); },
                   [&](const Ray &r) { cone_dirs(r.vertex, {r.direction}); },
                   [&](const FinitelyGeneratedCone &k) { cone_dirs(k.vertex, k.generators); },
                   [](const auto &) { throw std::logic_error("support_directions: closed-form set"); },
               },
               C);
    return out;
}

/// Rows (w o d)^T / |w o d| so that row . psi is the normalized pairing.
/// Zero directions impose nothing and are dropped.
inline Eigen::MatrixXd normalized_rows(const std::vector<Eigen::VectorXd> &dirs, const Eigen::VectorXd &w) {
    std::vector<Eigen::VectorXd> rows;
    for (const auto &d : dirs) {
        const Eigen::VectorXd r = w.cwiseProduct(d);
        const double nr         = r.norm();
        if (nr > 1e-14 * (1.0 + d.cwiseAbs().maxCoeff()))
            rows.push_back(r / nr);
    }
    Eigen::MatrixXd R(static_cast<Eigen::Index>(rows.size()), w.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        R.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    return R;
}

inline double maximin(const Eigen::MatrixXd &R, const Eigen::VectorXd &psi) { return (R * psi).minCoeff(); }

/// Refines a near-optimal unit psi by projecting it onto the annihilator of
/// small subsets of its least-satisfied constraints. Exact support
/// functionals usually lie on such an intersection.
inline void polish(const Eigen::MatrixXd &R, Eigen::VectorXd &best, double &best_val) {
    const Eigen::Index n = R.cols();
    const Eigen::Index m = R.rows();
    const Eigen::VectorXd vals = R * best;
    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return vals(a) < vals(b); });
    const Eigen::Index pool = std::min<Eigen::Index>(m, 6);
    const Eigen::VectorXd start = best;
    for (Eigen::Index k = 1; k <= std::min<Eigen::Index>(pool, n - 1); ++k) {
        for_each_subset(pool, k, [&](const std::vector<Eigen::Index> &S) {
            Eigen::MatrixXd B(k, n);
            for (Eigen::Index i = 0; i < k; ++i)
                B.row(i) = R.row(order[static_cast<std::size_t>(S[static_cast<std::size_t>(i)])]);
            const KernelResult ker = kernel_of(B, n);
            if (ker.kernel.cols() == 0)
                return;
            Eigen::VectorXd cand = ker.kernel * (ker.kernel.transpose() * start);
            if (cand.norm() < 1e-12)
                return;
            cand.normalize();
            const double v = maximin(R, cand);
            if (v > best_val) {
                best_val = v;
                best     = cand;
            }
        });
    }
}

inline Eigen::VectorXd sphere_point(Eigen::Index n, int a, int b, int az, int pol) {
    using std::numbers::pi;
    Eigen::VectorXd psi(n);
    if (n == 1) {
        psi(0) = a == 0 ? 1.0 : -1.0;
    } else if (n == 2) {
        const double t = 2.0 * pi * a / az;
        psi << std::cos(t), std::sin(t);
    } else {
        const double t = 2.0 * pi * a / az;
        const double s = pi * (b + 0.5) / pol;
        psi << std::sin(s) * std::cos(t), std::sin(s) * std::sin(t), std::cos(s);
    }
    return psi;
}

} // namespace detail

/// Internal/cuticle classification of y in C.
///
/// Balls, subspaces and lines use closed forms. Other sets search the unit
/// sphere for psi maximizing min_j <psi, d_j> / |d_j| over the directions
/// from `support_directions`; a value >= -tol, re-validated by
/// face_membership, gives a cuticle witness. n <= 3 uses a grid, larger n a
/// seeded multistart ascent whose internal verdicts are heuristic.
inline ClassifyResult classify_point(const LpSpace &space, const ConvexSet &C, const PrimalVec &y,
                                     const ClassifyOptions &opts = {}) {
    detail::require_point_of(space, C, y, opts.tol, "classify_point");
    const auto n  = space.dimension();
    const auto &w = space.weights();
    ClassifyResult out;

    auto annihilator_witness = [&](const std::vector<PrimalVec> &span) {
        Eigen::MatrixXd M(static_cast<Eigen::Index>(span.size()), n);
        for (std::size_t j = 0; j < span.size(); ++j)
            M.row(static_cast<Eigen::Index>(j)) = w.cwiseProduct(span[j].coords()).transpose();
        const auto ker = detail::kernel_of(M, n);
        if (ker.kernel.cols() == 0) {
            out.verdict = Verdict::internal;
            out.score   = -1.0;
        } else {
            out.verdict = Verdict::cuticle;
            out.witness = DualVec(ker.kernel.col(0).normalized());
        }
        return out;
    };

    if (const auto *b = std::get_if<Ball>(&C)) {
        const double ny = space.norm(y);
        if (ny < b->radius * (1.0 - opts.tol)) {
            out.verdict = Verdict::internal;
            out.score   = -1.0;
            return out;
        }
        out.verdict = Verdict::cuticle;
        if (space.smooth()) {
            out.witness = space.duality_map(y);
        } else if (space.exponent() == 1.0) {
            DualVec psi = space.dual_zero();
            for (Eigen::Index i = 0; i < n; ++i)
                psi[i] = detail::sign(y[i]);
            out.witness = psi;
        } else {
            Eigen::Index k;
            y.coords().cwiseAbs().maxCoeff(&k);
            DualVec psi = space.dual_zero();
            psi[k]      = detail::sign(y[k]);
            out.witness = psi;
        }
        return out;
    }
    if (const auto *s = std::get_if<Subspace>(&C))
        return annihilator_witness(s->basis);
    if (const auto *l = std::get_if<Line>(&C))
        return annihilator_witness({l->direction});

    const Eigen::MatrixXd R = detail::normalized_rows(detail::support_directions(C, y), w);
    if (R.rows() == 0) {
        // y is the only point constraining psi (e.g. a single-vertex polytope).
        out.verdict = Verdict::cuticle;
        out.witness = DualVec(Eigen::VectorXd::Unit(n, 0));
        out.method  = ClassifyMethod::grid_search;
        out.score   = 0.0;
        return out;
    }

    Eigen::VectorXd best;
    double best_val = -kInf;
    if (n <= 3) {
        out.method   = ClassifyMethod::grid_search;
        const int na = n == 1 ? 2 : opts.azimuth_steps;
        const int np = n == 3 ? opts.polar_steps : 1;
        // Serial scan with a strict improvement test: ties keep the lowest grid index.
        for (int a = 0; a < na; ++a)
            for (int b = 0; b < np; ++b) {
                const Eigen::VectorXd psi = detail::sphere_point(n, a, b, opts.azimuth_steps, opts.polar_steps);
                const double v            = detail::maximin(R, psi);
                if (v > best_val) {
                    best_val = v;
                    best     = psi;
                }
            }
        detail::polish(R, best, best_val);
    } else {
        out.method = ClassifyMethod::multistart;
        std::mt19937_64 rng(opts.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int s = 0; s < opts.multistarts; ++s) {
            Eigen::VectorXd psi(n);
            for (Eigen::Index i = 0; i < n; ++i)
                psi(i) = gauss(rng);
            psi.normalize();
            // Subgradient ascent on the concave min of linear terms, kept on the sphere.
            for (int it = 0; it < opts.ascent_iters; ++it) {
                Eigen::Index j;
                (R * psi).minCoeff(&j);
                psi += (0.5 / std::sqrt(1.0 + it)) * R.row(j).transpose();
                psi.normalize();
            }
            double v = detail::maximin(R, psi);
            detail::polish(R, psi, v);
            if (v > best_val) {
                best_val = v;
                best     = psi;
            }
        }
    }
    out.score = best_val;
    if (best_val >= -opts.tol) {
        const DualVec psi(best);
        if (face_membership(space, C, psi, y, opts.tol)) {
            out.verdict = Verdict::cuticle;
            out.witness = psi;
            return out;
        }
    }
    out.verdict = Verdict::internal;
    return out;
}

/// Points u, z of F_C^{-2}(y) whose combination h = lambda u + (1 - lambda) z is not.
struct VisionWitness {
    PrimalVec u, z, h;
    double lambda = 0.0;
};

/// Seeded search for a non-convexity witness of F_C^{-2}(y) on sets with
/// vertices or generators. Members are J*(psi) for psi in F_C^{-1}(y):
/// Gaussian functionals accepted by the exact test, and functionals
/// projected onto the annihilator of one support direction (these sit on
/// the boundary of the vision, where non-convexity shows).
inline std::optional<VisionWitness> probe_nonconvexity_primal_vision(const LpSpace &space, const ConvexSet &C,
                                                                     const PrimalVec &y, int trials,
                                                                     std::uint64_t seed, double tol = kExactTol) {
    space.require_smooth("probe_nonconvexity_primal_vision");
    detail::require_point_of(space, C, y, tol, "probe_nonconvexity_primal_vision");
    const auto dirs = detail::support_directions(C, y);
    const auto &w   = space.weights();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, dirs.size() - 1);
    auto member = [&]() -> std::optional<PrimalVec> {
        for (int attempt = 0; attempt < 16; ++attempt) {
            Eigen::VectorXd psi(space.dimension());
            for (Eigen::Index i = 0; i < psi.size(); ++i)
                psi(i) = gauss(rng);
            if (attempt % 2 == 0) {
                const Eigen::VectorXd wd = w.cwiseProduct(dirs[pick(rng)]);
                if (wd.squaredNorm() > 0)
                    psi -= (psi.dot(wd) / wd.squaredNorm()) * wd;
            }
            if (psi.norm() > 1e-9 && vision_dual_member(space, C, y, DualVec(psi), tol))
                return space.inverse_duality_map(DualVec(psi));
        }
        return std::nullopt;
    };
    std::uniform_real_distribution<double> lam(0.05, 0.95);
    for (int t = 0; t < trials; ++t) {
        const auto u = member();
        const auto z = member();
        if (!u || !z)
            continue;
        const double l    = lam(rng);
        const PrimalVec h = l * *u + (1.0 - l) * *z;
        if (!vision_primal_member(space, C, y, h, tol))
            return VisionWitness{*u, *z, h, l};
    }
    return std::nullopt;
}

/// The three conditions of the fixed-point characterization of F_C(J u):
/// (i) y in F_C(J u); (ii) y = P_C(u + y); (iii) y = pi_C(J u + J y).
struct FixedPointReport {
    bool face_member       = false;
    bool metric_fixed      = false;
    bool generalized_fixed = false;
    double metric_distance      = 0.0;
    double generalized_distance = 0.0;
    /// A projection solver did not converge; the comparison is not decided.
    bool inconclusive = false;

    bool agree() const { return face_member == metric_fixed && metric_fixed == generalized_fixed; }
};

inline FixedPointReport fixed_point_check(const LpSpace &space, const ConvexSet &C, const PrimalVec &u,
                                          const PrimalVec &y, double tol = 1e-6, const SolverOptions &opts = {}) {
    space.require_smooth("fixed_point_check");
    detail::require_point_of(space, C, y, kExactTol, "fixed_point_check");
    FixedPointReport rep;
    const DualVec ju    = space.duality_map(u);
    rep.face_member     = face_membership(space, C, ju, y, tol);
    const auto metric   = metric_project(space, C, u + y, opts);
    const auto general  = generalized_project(space, C, ju + space.duality_map(y), opts);
    rep.metric_distance      = space.norm(y - metric.point);
    rep.generalized_distance = space.norm(y - general.point);
    const double scale       = 1.0 + space.norm(y);
    rep.metric_fixed         = rep.metric_distance <= tol * scale;
    rep.generalized_fixed    = rep.generalized_distance <= tol * scale;
    rep.inconclusive         = !metric.converged || !general.converged;
    return rep;
}

/// Solution set of <psi, y - x> >= 0 for all x in C, which is F_C(psi),
/// with one representative cross-checked through y = P_C(J* psi + y) and
/// y = pi_C(psi + J y) when the space is smooth.
struct VISolution {
    FaceDescription face;
    bool cross_checked          = false;
    double metric_distance      = 0.0;
    double generalized_distance = 0.0;

    bool has_solution() const { return face.kind != FaceKind::empty; }
};

inline VISolution solve_vi(const LpSpace &space, const ConvexSet &C, const DualVec &psi,
                           const SolverOptions &opts = {}, double tol = kExactTol) {
    VISolution out;
    out.face = face(space, C, psi, tol);
    if (!out.has_solution() || !space.smooth() || out.face.representatives.empty())
        return out;
    const PrimalVec &y = out.face.representatives.front();
    out.metric_distance =
        space.norm(y - metric_project(space, C, space.inverse_duality_map(psi) + y, opts).point);
    out.generalized_distance = space.norm(y - generalized_project(space, C, psi + space.duality_map(y), opts).point);
    out.cross_checked        = true;
    return out;
}

struct BridgeReport {
    int checked       = 0;
    int members       = 0;
    int disagreements = 0;
    bool passed() const { return disagreements == 0; }
};

/// Sampled check of K_pi^perp = J v + F_K^{-1}(v): for each candidate psi,
/// generalized dual membership must match vision membership of psi - J v at v.
/// Candidates: J v, J v + (polar samples), J v + J g_i, and Gaussian functionals.
inline BridgeReport dual_cone_vision_bridge(const LpSpace &space, const ConeWithVertex &K, int samples,
                                            std::uint64_t seed, double tol = kExactTol) {
    space.require_smooth("dual_cone_vision_bridge");
    const DualVec jv    = space.duality_map(K.vertex());
    const ConvexSet set = K.as_set();
    std::vector<DualVec> cands{jv};
    for (const auto &g : K.generators())
        cands.push_back(jv + space.duality_map(g));
    for (const auto &psi : sample_generalized_dual(space, K, samples, seed))
        cands.push_back(psi);
    std::mt19937_64 rng(derive_seed(seed, 7));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int s = 0; s < samples; ++s) {
        DualVec g = space.dual_zero();
        for (Eigen::Index i = 0; i < g.size(); ++i)
            g[i] = gauss(rng);
        cands.push_back(jv + g);
    }
    BridgeReport rep;
    for (const auto &psi : cands) {
        const bool a = member_generalized_dual(space, K, psi, tol);
        const bool b = vision_dual_member(space, set, K.vertex(), psi - jv, tol);
        ++rep.checked;
        rep.members += a ? 1 : 0;
        rep.disagreements += a != b ? 1 : 0;
    }
    return rep;
}

} // namespace lpgeom
