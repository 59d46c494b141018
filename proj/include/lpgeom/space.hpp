#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

namespace lpgeom {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Default absolute tolerance for exact (non-solver) comparisons.
inline constexpr double kExactTol = 1e-9;

struct PrimalTag {};
struct DualTag {};

/// Coordinate vector tagged with the space it lives in (X or X*).
///
/// The tag keeps points and functionals from being mixed up: only
/// `LpSpace::pair` combines the two, and the duality maps convert
/// between them.
template <class Tag>
class Coords {
  public:
    Coords() = default;
    explicit Coords(Eigen::VectorXd c) : c_(std::move(c)) {}
    Coords(std::initializer_list<double> values) : c_(static_cast<Eigen::Index>(values.size())) {
        std::copy(values.begin(), values.end(), c_.data());
    }

    static Coords zero(Eigen::Index n) { return Coords(Eigen::VectorXd::Zero(n)); }
    static Coords unit(Eigen::Index n, Eigen::Index i) {
        Coords e = zero(n);
        e.c_(i)  = 1.0;
        return e;
    }

    Eigen::Index size() const { return c_.size(); }
    double operator[](Eigen::Index i) const { return c_(i); }
    double &operator[](Eigen::Index i) { return c_(i); }

    const Eigen::VectorXd &coords() const { return c_; }
    Eigen::VectorXd &coords() { return c_; }

    bool is_zero() const { return (c_.array() == 0.0).all(); }

    Coords &operator+=(const Coords &o) {
        c_ += o.c_;
        return *this;
    }
    Coords &operator-=(const Coords &o) {
        c_ -= o.c_;
        return *this;
    }
    Coords &operator*=(double s) {
        c_ *= s;
        return *this;
    }

    friend Coords operator+(Coords a, const Coords &b) { return a += b; }
    friend Coords operator-(Coords a, const Coords &b) { return a -= b; }
    friend Coords operator-(Coords a) {
        a.c_ = -a.c_;
        return a;
    }
    friend Coords operator*(double s, Coords a) { return a *= s; }
    friend Coords operator*(Coords a, double s) { return a *= s; }
    friend Coords operator/(Coords a, double s) { return a *= (1.0 / s); }
    friend bool operator==(const Coords &a, const Coords &b) {
        return a.size() == b.size() && a.c_ == b.c_;
    }

  private:
    Eigen::VectorXd c_;
};

using PrimalVec = Coords<PrimalTag>;
using DualVec   = Coords<DualTag>;

/// Largest coordinate difference, used by tests and tolerance checks.
template <class Tag>
double max_abs_diff(const Coords<Tag> &a, const Coords<Tag> &b) {
    if (a.size() != b.size())
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    return a.size() == 0 ? 0.0 : (a.coords() - b.coords()).cwiseAbs().maxCoeff();
}

namespace detail {

inline double sign(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

/// (sum_i w_i |v_i|^p)^(1/p), with max|v_i| for p = inf. Scaled by the
/// largest entry so that large or tiny coordinates do not overflow.
inline double weighted_pnorm(const Eigen::VectorXd &v, const Eigen::VectorXd &w, double p) {
    if (v.size() == 0)
        return 0.0;
    const double m = v.cwiseAbs().maxCoeff();
    if (m == 0.0 || std::isinf(p))
        return m;
    if (p == 2.0)
        return m * std::sqrt((w.array() * (v.array() / m).square()).sum());
    if (p == 1.0)
        return (w.array() * v.array().abs()).sum();
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        s += w(i) * std::pow(std::abs(v(i)) / m, p);
    return m * std::pow(s, 1.0 / p);
}

/// Single-valued normalized duality map of the weighted l_p space with the
/// given exponent: (Jv)_i = |v_i|^(p-1) sign(v_i) ||v||^(2-p), written as
/// ||v|| (|v_i|/||v||)^(p-1) sign(v_i) to stay in range.
inline Eigen::VectorXd duality_formula(const Eigen::VectorXd &v, const Eigen::VectorXd &w,
                                       double p) {
    if (p == 2.0)
        return v;
    const double nv = weighted_pnorm(v, w, p);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
    if (nv == 0.0)
        return out;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v(i) != 0.0)
            out(i) = sign(v(i)) * nv * std::pow(std::abs(v(i)) / nv, p - 1.0);
    return out;
}

} // namespace detail

/// Finite-dimensional weighted l_p space: R^n with the norm
/// (sum_i mu_i |x_i|^p)^(1/p) and the pairing <psi, x> = sum_i mu_i psi_i x_i.
///
/// Its dual is the weighted l_q space over the same weights, 1/p + 1/q = 1.
/// Exponent infinity is accepted so that the dual of p = 1 is representable.
class LpSpace {
  public:
    LpSpace(Eigen::Index n, double p) : LpSpace(p, Eigen::VectorXd::Ones(n)) {}

    LpSpace(double p, Eigen::VectorXd weights) : p_(p), w_(std::move(weights)) {
        if (w_.size() < 1)
            throw std::invalid_argument("LpSpace: dimension must be at least 1");
        if (!(p_ >= 1.0))
            throw std::invalid_argument("LpSpace: exponent must satisfy p >= 1");
        for (Eigen::Index i = 0; i < w_.size(); ++i)
            if (!(w_(i) > 0.0) || !std::isfinite(w_(i)))
                throw std::invalid_argument("LpSpace: weights must be positive and finite");
        unit_weights_ = (w_.array() == 1.0).all();
    }

    Eigen::Index dimension() const { return w_.size(); }
    double exponent() const { return p_; }
    const Eigen::VectorXd &weights() const { return w_; }
    bool unit_weights() const { return unit_weights_; }

    double conjugate_exponent() const {
        if (p_ == 1.0)
            return kInf;
        if (std::isinf(p_))
            return 1.0;
        return p_ / (p_ - 1.0);
    }

    LpSpace dual() const { return LpSpace(conjugate_exponent(), w_); }

    /// True when the duality maps are single-valued and mutually inverse.
    bool smooth() const { return p_ > 1.0 && std::isfinite(p_); }

    double norm(const PrimalVec &x) const {
        check(x.size(), "norm");
        return detail::weighted_pnorm(x.coords(), w_, p_);
    }

    double dual_norm(const DualVec &psi) const {
        check(psi.size(), "dual_norm");
        return detail::weighted_pnorm(psi.coords(), w_, conjugate_exponent());
    }

    double pair(const DualVec &psi, const PrimalVec &x) const {
        check(psi.size(), "pair");
        check(x.size(), "pair");
        return (w_.array() * psi.coords().array() * x.coords().array()).sum();
    }

    /// Normalized duality map J : X -> X*.
    DualVec duality_map(const PrimalVec &x) const {
        require_smooth("duality_map");
        check(x.size(), "duality_map");
        return DualVec(detail::duality_formula(x.coords(), w_, p_));
    }

    /// Inverse duality map J* : X* -> X.
    PrimalVec inverse_duality_map(const DualVec &psi) const {
        require_smooth("inverse_duality_map");
        check(psi.size(), "inverse_duality_map");
        return PrimalVec(detail::duality_formula(psi.coords(), w_, conjugate_exponent()));
    }

    /// V(psi, x) = ||psi||^2 - 2 <psi, x> + ||x||^2.
    double lyapunov(const DualVec &psi, const PrimalVec &x) const {
        const double a = dual_norm(psi);
        const double b = norm(x);
        return a * a - 2.0 * pair(psi, x) + b * b;
    }

    PrimalVec zero() const { return PrimalVec::zero(dimension()); }
    DualVec dual_zero() const { return DualVec::zero(dimension()); }

    void check(Eigen::Index size, const char *where) const {
        if (size != dimension())
            throw std::invalid_argument(std::string(where) + ": dimension mismatch (got " +
                                        std::to_string(size) + ", space has " +
                                        std::to_string(dimension()) + ")");
    }

    void require_smooth(const char *where) const {
        if (!smooth())
            throw std::domain_error(std::string(where) +
                                    ": requires an exponent strictly between 1 and infinity");
    }

  private:
    double p_;
    Eigen::VectorXd w_;
    bool unit_weights_ = true;
};

/// Indicator functional of a coordinate set A (zero-based indices):
/// 1 on A, 0 elsewhere. For a contiguous A this is the window functional.
inline DualVec window_functional(const LpSpace &space, std::span<const Eigen::Index> indices) {
    if (indices.empty())
        throw std::invalid_argument("window_functional: index set must be nonempty");
    DualVec out = space.dual_zero();
    for (Eigen::Index i : indices) {
        if (i < 0 || i >= space.dimension())
            throw std::out_of_range("window_functional: index " + std::to_string(i) +
                                    " outside [0, " + std::to_string(space.dimension()) + ")");
        out[i] = 1.0;
    }
    return out;
}

inline DualVec window_functional(const LpSpace &space, std::initializer_list<Eigen::Index> indices) {
    return window_functional(space, std::span<const Eigen::Index>(indices.begin(), indices.size()));
}

/// Scale used for relative sign tests of a pairing <psi, x>: the Hoelder
/// bound ||psi||_* ||x||, floored at 1 so that tiny inputs compare absolutely.
inline double pairing_scale(const LpSpace &space, const DualVec &psi, const PrimalVec &x) {
    return std::max(1.0, space.dual_norm(psi) * space.norm(x));
}

} // namespace lpgeom
