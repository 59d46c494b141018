#pragma once

// Brute-force reference computations for verification runs. Nothing here
// is used by the solvers; the norm is re-implemented directly from its
// definition so that a bug in LpSpace does not cancel out.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>

namespace lpgeom::oracle {

/// |a|^p with exact fast paths for the exponents the checks use most.
inline double abs_pow(double a, double p) {
    a = std::abs(a);
    if (p == 2.0)
        return a * a;
    if (p == 3.0)
        return a * a * a;
    if (p == 1.5)
        return a * std::sqrt(a);
    return std::pow(a, p);
}

/// sum_i w_i |v_i|^p by direct summation.
inline double power_sum(const Eigen::VectorXd &v, const Eigen::VectorXd &w, double p) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        s += w(i) * abs_pow(v(i), p);
    return s;
}

/// (sum_i w_i |v_i|^p)^(1/p).
inline double pnorm(const Eigen::VectorXd &v, const Eigen::VectorXd &w, double p) {
    return std::pow(power_sum(v, w, p), 1.0 / p);
}

struct Minimum {
    double t     = 0.0;
    double value = std::numeric_limits<double>::infinity();
};

/// Minimizes a unimodal f on [lo, hi]: evaluates `points` equally spaced
/// samples, then runs golden-section search on the two cells around the
/// best sample until the bracket is below machine resolution.
template <class F>
Minimum grid_golden_minimize(const F &f, double lo, double hi, std::size_t points = 1000000) {
    Minimum best;
    std::size_t best_k = 0;
    const double h     = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k) {
        const double t = lo + h * static_cast<double>(k);
        const double v = f(t);
        if (v < best.value) {
            best   = {t, v};
            best_k = k;
        }
    }
    double a = best_k == 0 ? lo : lo + h * static_cast<double>(best_k - 1);
    double b = best_k + 1 >= points ? hi : lo + h * static_cast<double>(best_k + 1);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && b - a > 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(a)); ++it) {
        if (fc <= fd) {
            b  = d;
            d  = c;
            fd = fc;
            c  = b - g * (b - a);
            fc = f(c);
        } else {
            a  = c;
            c  = d;
            fc = fd;
            d  = a + g * (b - a);
            fd = f(d);
        }
    }
    for (double t : {a, b, c, d}) {
        const double v = f(t);
        if (v < best.value)
            best = {t, v};
    }
    return best;
}

/// Euclidean projections used as closed-form references at p = 2 with unit weights.
inline Eigen::VectorXd euclidean_ball(const Eigen::VectorXd &x, double r) {
    const double nx = x.norm();
    return nx <= r ? x : Eigen::VectorXd(x * (r / nx));
}

inline Eigen::VectorXd euclidean_segment(const Eigen::VectorXd &x, const Eigen::VectorXd &a,
                                         const Eigen::VectorXd &b) {
    const Eigen::VectorXd d = b - a;
    double t                = d.dot(x - a) / d.squaredNorm();
    t                       = t < 0 ? 0 : (t > 1 ? 1 : t);
    return a + t * d;
}

inline Eigen::VectorXd euclidean_orthant(const Eigen::VectorXd &x) { return x.cwiseMax(0.0); }

} // namespace lpgeom::oracle
