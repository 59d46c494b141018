#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace lpgeom::detail {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Lawson-Hanson active-set solver for min ||A x - b||_2 subject to x >= 0.
inline VectorXd nnls(const MatrixXd &A, const VectorXd &b) {
    const Index n = A.cols();
    VectorXd x    = VectorXd::Zero(n);
    if (n == 0)
        return x;
    std::vector<bool> passive(static_cast<std::size_t>(n), false);
    const double eps = std::numeric_limits<double>::epsilon();
    const double tol = 10.0 * eps * std::max(1.0, A.norm()) * std::max(1.0, b.norm());

    auto solve_passive = [&](VectorXd &z) {
        std::vector<Index> cols;
        for (Index j = 0; j < n; ++j)
            if (passive[static_cast<std::size_t>(j)])
                cols.push_back(j);
        MatrixXd Ap(A.rows(), static_cast<Index>(cols.size()));
        for (std::size_t k = 0; k < cols.size(); ++k)
            Ap.col(static_cast<Index>(k)) = A.col(cols[k]);
        VectorXd zp = Ap.colPivHouseholderQr().solve(b);
        z.setZero(n);
        for (std::size_t k = 0; k < cols.size(); ++k)
            z(cols[k]) = zp(static_cast<Index>(k));
    };

    VectorXd w        = A.transpose() * (b - A * x);
    const int max_out = static_cast<int>(3 * n + 10);
    for (int outer = 0; outer < max_out; ++outer) {
        Index j_best = -1;
        double w_best = tol;
        for (Index j = 0; j < n; ++j)
            if (!passive[static_cast<std::size_t>(j)] && w(j) > w_best) {
                w_best = w(j);
                j_best = j;
            }
        if (j_best < 0)
            break;
        passive[static_cast<std::size_t>(j_best)] = true;

        VectorXd z;
        for (int inner = 0; inner < 3 * n + 10; ++inner) {
            solve_passive(z);
            bool feasible = true;
            for (Index j = 0; j < n; ++j)
                if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0)
                    feasible = false;
            if (feasible)
                break;
            double alpha = 1.0;
            for (Index j = 0; j < n; ++j)
                if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
                    const double gap = x(j) - z(j);
                    alpha            = std::min(alpha, gap > 0.0 ? x(j) / gap : 0.0);
                }
            x += alpha * (z - x);
            for (Index j = 0; j < n; ++j)
                if (passive[static_cast<std::size_t>(j)] && x(j) <= tol) {
                    passive[static_cast<std::size_t>(j)] = false;
                    x(j)                                  = 0.0;
                }
        }
        for (Index j = 0; j < n; ++j)
            x(j) = passive[static_cast<std::size_t>(j)] ? std::max(0.0, z(j)) : 0.0;
        w = A.transpose() * (b - A * x);
    }
    return x;
}

/// Euclidean projection onto the probability simplex {x >= 0, sum x = 1}.
inline VectorXd project_simplex(const VectorXd &y) {
    const Index n = y.size();
    std::vector<double> u(y.data(), y.data() + n);
    std::sort(u.begin(), u.end(), std::greater<>());
    double css = 0.0, theta = 0.0;
    for (Index j = 0; j < n; ++j) {
        css += u[static_cast<std::size_t>(j)];
        const double t = (css - 1.0) / static_cast<double>(j + 1);
        if (u[static_cast<std::size_t>(j)] - t > 0.0)
            theta = t;
    }
    return (y.array() - theta).max(0.0).matrix();
}

struct KernelResult {
    Index rank = 0;
    MatrixXd kernel; // columns span the null space
};

/// Numerical rank and null space of M via a full SVD.
inline KernelResult kernel_of(const MatrixXd &M, Index cols) {
    KernelResult out;
    if (M.rows() == 0) {
        out.kernel = MatrixXd::Identity(cols, cols);
        return out;
    }
    Eigen::JacobiSVD<MatrixXd> svd(M, Eigen::ComputeFullV);
    const auto &s    = svd.singularValues();
    const double thr = std::max<double>(M.rows(), cols) * std::numeric_limits<double>::epsilon() *
                       (s.size() ? s(0) : 0.0) * 16.0;
    Index r = 0;
    for (Index i = 0; i < s.size(); ++i)
        if (s(i) > thr)
            ++r;
    out.rank   = r;
    out.kernel = svd.matrixV().rightCols(cols - r);
    return out;
}

/// Calls fn(subset) for every k-subset of {0, ..., m-1} in lexicographic order.
inline void for_each_subset(Index m, Index k, const std::function<void(const std::vector<Index> &)> &fn) {
    if (k < 0 || k > m)
        return;
    std::vector<Index> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), Index{0});
    while (true) {
        fn(idx);
        Index i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i)
            --i;
        if (i < 0)
            return;
        ++idx[static_cast<std::size_t>(i)];
        for (Index j = i + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

inline bool contains_direction(const std::vector<VectorXd> &dirs, const VectorXd &d) {
    return std::any_of(dirs.begin(), dirs.end(),
                       [&](const VectorXd &e) { return (e - d).norm() <= 1e-10; });
}

/// Generators of the polar {phi : <phi, g_j>_w <= 0 for all j} of the cone
/// spanned by the columns of G, where <phi, g>_w = sum_i w_i phi_i g_i.
///
/// `lineality` spans the annihilator of span(G) (both signs belong to the
/// polar); `facets` are the unit normals of the facets of cone(G) inside its
/// span. Every facet of a polyhedral cone of dimension r contains r-1
/// linearly independent generators, so enumerating those subsets finds all
/// of them. Together they generate the polar exactly.
struct PolarGenerators {
    std::vector<VectorXd> lineality;
    std::vector<VectorXd> facets;

    std::vector<VectorXd> all() const {
        std::vector<VectorXd> out = facets;
        for (const auto &a : lineality) {
            out.push_back(a);
            out.push_back(-a);
        }
        return out;
    }
};

inline PolarGenerators polar_generators(const MatrixXd &G, const VectorXd &w) {
    const Index n = G.rows();
    const Index m = G.cols();
    if (m > 16)
        throw std::invalid_argument("polar_generators: too many generators for facet enumeration");
    // Row j is (w o g_j)^T so that row_j . phi = <phi, g_j>_w.
    MatrixXd R(m, n);
    for (Index j = 0; j < m; ++j)
        R.row(j) = (w.array() * G.col(j).array()).matrix().transpose();

    PolarGenerators out;
    KernelResult ann = kernel_of(R, n);
    for (Index c = 0; c < ann.kernel.cols(); ++c)
        out.lineality.push_back(ann.kernel.col(c).normalized());
    const Index r = ann.rank;
    if (r == 0)
        return out;

    for_each_subset(m, r - 1, [&](const std::vector<Index> &S) {
        MatrixXd B(static_cast<Index>(S.size()) + ann.kernel.cols(), n);
        Index row = 0;
        for (Index s : S)
            B.row(row++) = R.row(s);
        for (Index c = 0; c < ann.kernel.cols(); ++c)
            B.row(row++) = ann.kernel.col(c).transpose();
        KernelResult k = kernel_of(B, n);
        if (k.kernel.cols() != 1)
            return;
        VectorXd phi       = k.kernel.col(0).normalized();
        VectorXd vals      = R * phi;
        const double scale = std::max(1.0, R.rowwise().norm().maxCoeff());
        const double tol   = 1e-12 * scale;
        const bool all_nonpos = (vals.array() <= tol).all();
        const bool all_nonneg = (vals.array() >= -tol).all();
        if (all_nonpos == all_nonneg)
            return; // mixed signs (not a facet) or everything annihilated
        if (all_nonneg)
            phi = -phi;
        if (!contains_direction(out.facets, phi))
            out.facets.push_back(phi);
    });
    return out;
}

/// Extreme rays of the pointed polyhedral cone {x : <phi_k, x>_w <= 0 for all k}
/// for small dimensions. Throws when the cone contains a line (unsupported)
/// or reduces to the origin.
inline std::vector<VectorXd> extreme_rays(const std::vector<VectorXd> &functionals, const VectorXd &w) {
    const Index n = w.size();
    if (n > 4)
        throw std::invalid_argument("extreme_rays: only supported in dimension <= 4");
    const Index m = static_cast<Index>(functionals.size());
    MatrixXd H(m, n);
    for (Index k = 0; k < m; ++k)
        H.row(k) = (w.array() * functionals[static_cast<std::size_t>(k)].array()).matrix().transpose();
    if (kernel_of(H, n).kernel.cols() != 0)
        throw std::invalid_argument("extreme_rays: cone contains a line (non-pointed intersection)");

    std::vector<VectorXd> rays;
    const double scale = std::max(1.0, H.rowwise().norm().maxCoeff());
    for_each_subset(m, n - 1, [&](const std::vector<Index> &S) {
        MatrixXd B(static_cast<Index>(S.size()), n);
        for (std::size_t i = 0; i < S.size(); ++i)
            B.row(static_cast<Index>(i)) = H.row(S[i]);
        KernelResult k = kernel_of(B, n);
        if (k.kernel.cols() != 1)
            return;
        for (double sgn : {1.0, -1.0}) {
            VectorXd d = sgn * k.kernel.col(0).normalized();
            if (((H * d).array() <= 1e-12 * scale).all() && !contains_direction(rays, d))
                rays.push_back(d);
        }
    });
    if (rays.empty())
        throw std::invalid_argument("extreme_rays: cone reduces to its vertex");
    return rays;
}

} // namespace lpgeom::detail
