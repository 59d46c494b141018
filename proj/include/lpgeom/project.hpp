#pragma once

#include <lpgeom/sets.hpp>
#include <lpgeom/space.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace lpgeom {

struct SolverOptions {
    int max_iters        = 10000;
    double grad_tol      = 1e-10;
    double vi_tol        = 1e-6;
    double armijo_shrink = 0.5;
    double armijo_slope  = 1e-4;
    double initial_step  = 1.0;
    /// Ray and line brackets grow by doubling up to this coefficient bound.
    double bracket_limit = 1e8;
    /// Record the objective after every accepted projected-gradient step.
    bool record_trace = false;

    void validate() const {
        if (max_iters <= 0 || !(grad_tol > 0) || !(vi_tol > 0) || !(armijo_slope > 0) ||
            !(initial_step > 0) || !(bracket_limit > 0))
            throw std::invalid_argument("SolverOptions: all parameters must be positive");
        if (!(armijo_shrink > 0 && armijo_shrink < 1))
            throw std::invalid_argument("SolverOptions: armijo_shrink must lie in (0, 1)");
    }
};

enum class ProjectionMethod { closed_form, one_dimensional, projected_gradient };

inline const char *method_name(ProjectionMethod m) {
    switch (m) {
    case ProjectionMethod::closed_form:
        return "closed-form";
    case ProjectionMethod::one_dimensional:
        return "one-dimensional";
    case ProjectionMethod::projected_gradient:
        return "projected-gradient";
    }
    return "unknown";
}

struct ProjectionResult {
    PrimalVec point;
    /// ||x - u||^2 for the metric projection, V(psi, y) for the generalized one.
    double objective   = 0.0;
    double vi_residual = 0.0;
    int iterations     = 0;
    bool converged     = false;
    ProjectionMethod method = ProjectionMethod::closed_form;
    /// Coefficients of `point` in the set's parameterization (empty for balls).
    Eigen::VectorXd coefficients;
    std::vector<double> trace;
};

/// Maximum violation of <phi, u - z> >= 0 over z in C, reduced exactly to
/// the finitely many extreme points and directions of C. The inequality is
/// linear in z, so it holds on C iff it holds at every vertex and every
/// recession generator is paired nonpositively. Returns a value >= 0; zero
/// certifies that u is the solution of the corresponding variational
/// inequality.
inline double vi_violation(const LpSpace &space, const ConvexSet &C, const DualVec &phi, const PrimalVec &u) {
    auto gap = [&](const PrimalVec &z) { return space.pair(phi, z - u); };
    double worst = 0.0;
    std::visit(overloaded{
                   [&](const Segment &s) { worst = std::max({worst, gap(s.a), gap(s.b)}); },
                   [&](const Polytope &p) {
                       for (const auto &v : p.vertices)
                           worst = std::max(worst, gap(v));
                   },
                   [&](const Ray &r) {
                       worst = std::max({worst, gap(r.vertex), space.pair(phi, r.direction)});
                   },
                   [&](const FinitelyGeneratedCone &k) {
                       worst = std::max(worst, gap(k.vertex));
                       for (const auto &g : k.generators)
                           worst = std::max(worst, space.pair(phi, g));
                   },
                   [&](const Line &l) {
                       const double pd = space.pair(phi, l.direction);
                       worst           = std::max({worst, gap(l.point), pd, -pd});
                   },
                   [&](const Subspace &s) {
                       worst = std::max(worst, gap(space.zero()));
                       for (const auto &b : s.basis) {
                           const double pb = space.pair(phi, b);
                           worst           = std::max({worst, pb, -pb});
                       }
                   },
                   [&](const Ball &b) {
                       worst = std::max(worst, b.radius * space.dual_norm(phi) - space.pair(phi, u));
                   },
               },
               C);
    return worst;
}

namespace detail {

/// Membership tolerance for points handed to the certificate routines.
inline constexpr double kSolverMembershipTol = 1e-6;

inline void require_member(const LpSpace &space, const ConvexSet &C, const PrimalVec &u, const char *where) {
    if (!contains(space, C, u, kSolverMembershipTol))
        throw std::domain_error(std::string(where) + ": point does not belong to the set");
}

/// ||x - u||^2; its gradient functional is -2 J(x - u).
struct MetricObjective {
    const LpSpace &space;
    PrimalVec x;

    double value(const PrimalVec &u) const {
        const double d = space.norm(x - u);
        return d * d;
    }
    DualVec vi_functional(const PrimalVec &u) const { return space.duality_map(x - u); }
    PrimalVec unconstrained_minimizer() const { return x; }
};

/// V(psi, y); its gradient functional is 2 (J y - psi).
struct GeneralizedObjective {
    const LpSpace &space;
    DualVec psi;

    double value(const PrimalVec &y) const { return space.lyapunov(psi, y); }
    DualVec vi_functional(const PrimalVec &y) const { return psi - space.duality_map(y); }
    PrimalVec unconstrained_minimizer() const { return space.inverse_duality_map(psi); }
};

/// Euclidean coefficient fit of `target` used as a starting point.
inline Eigen::VectorXd warm_start(const Parameterization &P, const PrimalVec &target) {
    const auto n = target.size();
    const Eigen::MatrixXd D = columns(P.directions, n);
    const Eigen::VectorXd b = target.coords() - P.base.coords();
    switch (P.domain) {
    case CoefficientDomain::nonnegative:
        return nnls(D, b);
    case CoefficientDomain::simplex: {
        Eigen::VectorXd lam = nnls(D, b);
        return lam.sum() > 0 ? P.project_coefficients(lam / lam.sum())
                             : P.project_coefficients(Eigen::VectorXd::Zero(D.cols()));
    }
    case CoefficientDomain::unit_box:
        return P.project_coefficients(D.colPivHouseholderQr().solve(b));
    case CoefficientDomain::unrestricted:
        break;
    }
    return D.colPivHouseholderQr().solve(b);
}

/// Minimizes a strictly convex objective along base + t d, t in [lo, hi].
/// Golden-section search narrows the bracket, then bisection on the sign of
/// the directional derivative resolves the minimizer to machine precision so
/// the certificate can be checked at tight tolerances.
template <class Objective>
ProjectionResult minimize_1d(const LpSpace &space, const ConvexSet &C, const Objective &obj,
                             const Parameterization &P, const SolverOptions &opts) {
    const PrimalVec &d = P.directions.front();
    auto at            = [&](double t) { return P.base + t * d; };
    auto deriv         = [&](double t) { return -2.0 * space.pair(obj.vi_functional(at(t)), d); };
    auto f             = [&](double t) { return obj.value(at(t)); };

    ProjectionResult res;
    res.method = ProjectionMethod::one_dimensional;
    int evals  = 0;

    auto finish = [&](double t, bool bracket_ok) {
        res.point        = at(t);
        res.coefficients = Eigen::VectorXd::Constant(1, t);
        res.objective    = obj.value(res.point);
        res.vi_residual  = vi_violation(space, C, obj.vi_functional(res.point), res.point);
        res.iterations   = evals;
        res.converged    = bracket_ok && res.vi_residual <= opts.vi_tol;
        return res;
    };

    double lo = 0.0, hi = 0.0;
    const double g0 = deriv(0.0);
    ++evals;
    switch (P.domain) {
    case CoefficientDomain::unit_box: {
        if (g0 >= 0.0)
            return finish(0.0, true);
        const double g1 = deriv(1.0);
        ++evals;
        if (g1 <= 0.0)
            return finish(1.0, true);
        lo = 0.0;
        hi = 1.0;
        break;
    }
    case CoefficientDomain::nonnegative:
    case CoefficientDomain::unrestricted: {
        if (g0 == 0.0)
            return finish(0.0, true);
        if (g0 > 0.0 && P.domain == CoefficientDomain::nonnegative)
            return finish(0.0, true);
        const double dir = g0 < 0.0 ? 1.0 : -1.0;
        double near = 0.0, far = dir;
        while (dir * deriv(far) < 0.0) {
            ++evals;
            near = far;
            far *= 2.0;
            if (std::abs(far) > opts.bracket_limit)
                return finish(near, false);
        }
        ++evals;
        lo = std::min(near, far);
        hi = std::max(near, far);
        break;
    }
    case CoefficientDomain::simplex:
        throw std::logic_error("minimize_1d: simplex domain is not one-dimensional");
    }

    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a), e = a + kInvPhi * (b - a);
    double fc = f(c), fe = f(e);
    evals += 2;
    while (b - a > 1e-6 * (1.0 + std::abs(a) + std::abs(b)) && evals < opts.max_iters) {
        if (fc < fe) {
            b  = e;
            e  = c;
            fe = fc;
            c  = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a  = c;
            c  = e;
            fc = fe;
            e  = a + kInvPhi * (b - a);
            fe = f(e);
        }
        ++evals;
    }
    // Golden-section keeps the minimizer inside [a, b]; widen by one step
    // on each side to absorb rounding in the function comparisons.
    const double w = b - a;
    a              = std::max(lo, a - w);
    b              = std::min(hi, b + w);
    double ga = deriv(a), gb = deriv(b);
    evals += 2;
    if (ga >= 0.0)
        return finish(a, true);
    if (gb <= 0.0)
        return finish(b, true);
    while (evals < opts.max_iters) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b)
            break;
        const double gm = deriv(m);
        ++evals;
        if (gm < 0.0) {
            a  = m;
            ga = gm;
        } else if (gm > 0.0) {
            b  = m;
            gb = gm;
        } else {
            return finish(m, true);
        }
    }
    return finish(std::abs(ga) <= std::abs(gb) ? a : b, true);
}

/// Projected gradient with Barzilai-Borwein trial steps and monotone Armijo
/// backtracking on the coefficients of the parameterization.
template <class Objective>
ProjectionResult minimize_pg(const LpSpace &space, const ConvexSet &C, const Objective &obj,
                             const Parameterization &P, const SolverOptions &opts) {
    const auto k = static_cast<Eigen::Index>(P.directions.size());
    auto grad    = [&](const Eigen::VectorXd &t) {
        const DualVec phi = obj.vi_functional(P.point(t));
        Eigen::VectorXd g(k);
        for (Eigen::Index i = 0; i < k; ++i)
            g(i) = -2.0 * space.pair(phi, P.directions[static_cast<std::size_t>(i)]);
        return g;
    };

    ProjectionResult res;
    res.method        = ProjectionMethod::projected_gradient;
    Eigen::VectorXd t = P.project_coefficients(warm_start(P, obj.unconstrained_minimizer()));
    double f          = obj.value(P.point(t));
    if (opts.record_trace)
        res.trace.push_back(f);

    Eigen::VectorXd t_prev, g_prev;
    double step = opts.initial_step;
    int it      = 0;
    for (; it < opts.max_iters; ++it) {
        const Eigen::VectorXd g = grad(t);
        if ((t - P.project_coefficients(t - g)).lpNorm<Eigen::Infinity>() <= opts.grad_tol)
            break;
        if (it > 0) {
            const Eigen::VectorXd s = t - t_prev, y = g - g_prev;
            const double sy         = s.dot(y);
            step = sy > 0 ? std::clamp(s.squaredNorm() / sy, 1e-12, 1e12) : std::min(2.0 * step, 1e12);
        }
        bool accepted = false;
        Eigen::VectorXd t_new;
        double f_new = f;
        while (step > 1e-30) {
            t_new = P.project_coefficients(t - step * g);
            f_new = obj.value(P.point(t_new));
            if (f_new <= f + opts.armijo_slope * g.dot(t_new - t)) {
                accepted = true;
                break;
            }
            step *= opts.armijo_shrink;
        }
        if (!accepted || (t_new - t).lpNorm<Eigen::Infinity>() == 0.0)
            break;
        t_prev = t;
        g_prev = g;
        t      = t_new;
        f      = f_new;
        if (opts.record_trace)
            res.trace.push_back(f);
    }

    res.point        = P.point(t);
    res.coefficients = t;
    res.objective    = obj.value(res.point);
    res.vi_residual  = vi_violation(space, C, obj.vi_functional(res.point), res.point);
    res.iterations   = it;
    res.converged    = res.vi_residual <= opts.vi_tol;
    return res;
}

template <class Objective>
ProjectionResult minimize_on(const LpSpace &space, const ConvexSet &C, const Objective &obj,
                             const SolverOptions &opts) {
    const auto P = parameterize(space, C);
    if (!P)
        throw std::logic_error("minimize_on: set has no parameterization");
    if (std::holds_alternative<Segment>(C) || std::holds_alternative<Ray>(C) || std::holds_alternative<Line>(C))
        return minimize_1d(space, C, obj, *P, opts);
    return minimize_pg(space, C, obj, *P, opts);
}

inline ProjectionResult closed_form(const LpSpace &space, const ConvexSet &C, PrimalVec point, double objective,
                                    const DualVec &phi, const SolverOptions &opts) {
    ProjectionResult res;
    res.method      = ProjectionMethod::closed_form;
    res.objective   = objective;
    res.vi_residual = vi_violation(space, C, phi, point);
    res.converged   = res.vi_residual <= opts.vi_tol;
    res.point       = std::move(point);
    return res;
}

} // namespace detail

/// Metric projection P_C(x): the nearest point of C in the space's norm.
inline ProjectionResult metric_project(const LpSpace &space, const ConvexSet &C, const PrimalVec &x,
                                       const SolverOptions &opts = {}) {
    opts.validate();
    space.require_smooth("metric_project");
    validate(space, C);
    space.check(x.size(), "metric_project");
    detail::MetricObjective obj{space, x};
    if (const auto *ball = std::get_if<Ball>(&C)) {
        const double nx = space.norm(x);
        PrimalVec u     = nx <= ball->radius ? x : (ball->radius / nx) * x;
        return detail::closed_form(space, C, u, obj.value(u), obj.vi_functional(u), opts);
    }
    return detail::minimize_on(space, C, obj, opts);
}

/// Generalized projection pi_C(psi): the minimizer of V(psi, .) over C.
inline ProjectionResult generalized_project(const LpSpace &space, const ConvexSet &C, const DualVec &psi,
                                            const SolverOptions &opts = {}) {
    opts.validate();
    space.require_smooth("generalized_project");
    validate(space, C);
    space.check(psi.size(), "generalized_project");
    detail::GeneralizedObjective obj{space, psi};
    if (const auto *ball = std::get_if<Ball>(&C)) {
        // For fixed ||y|| = s the pairing is maximized along J*psi, leaving
        // s^2 - 2 s ||psi||, minimized at s = min(r, ||psi||).
        const double npsi = space.dual_norm(psi);
        PrimalVec y       = space.inverse_duality_map(psi);
        if (npsi > ball->radius)
            y = (ball->radius / npsi) * y;
        return detail::closed_form(space, C, y, obj.value(y), obj.vi_functional(y), opts);
    }
    return detail::minimize_on(space, C, obj, opts);
}

/// Exact violation of <J(x - u), u - z> >= 0 over z in C.
inline double vi_residual_metric(const LpSpace &space, const ConvexSet &C, const PrimalVec &x, const PrimalVec &u) {
    validate(space, C);
    detail::require_member(space, C, u, "vi_residual_metric");
    return vi_violation(space, C, space.duality_map(x - u), u);
}

/// Exact violation of <psi - J y, y - z> >= 0 over z in C.
inline double vi_residual_generalized(const LpSpace &space, const ConvexSet &C, const DualVec &psi,
                                      const PrimalVec &y) {
    validate(space, C);
    detail::require_member(space, C, y, "vi_residual_generalized");
    return vi_violation(space, C, psi - space.duality_map(y), y);
}

/// Whether P_C(x) = y, decided by the variational characterization alone.
inline bool inverse_image_member_metric(const LpSpace &space, const ConvexSet &C, const PrimalVec &y,
                                        const PrimalVec &x, const SolverOptions &opts = {}) {
    return vi_residual_metric(space, C, x, y) <= opts.vi_tol;
}

/// Whether pi_C(psi) = y, decided by the variational characterization alone.
inline bool inverse_image_member_generalized(const LpSpace &space, const ConvexSet &C, const PrimalVec &y,
                                             const DualVec &psi, const SolverOptions &opts = {}) {
    return vi_residual_generalized(space, C, psi, y) <= opts.vi_tol;
}

} // namespace lpgeom
