#pragma once

// Numerics of the level sets D(A) = {X : A - p(X) > 0}: the membership
// trichotomy, boundary-point construction from positive eigenpairs, the
// kernel-shrinking perturbation A + eps P, the negative index of the Hessian
// form on the clamped tangent plane, and the direct-sum witness amplifier.

#include <optional>

#include "freeconvex/calculus.hpp"
#include "freeconvex/eval.hpp"
#include "freeconvex/tangent.hpp"

namespace freeconvex {

enum class Membership { Interior, Boundary, Exterior };

inline const char* membership_name(Membership m) {
    switch (m) {
        case Membership::Interior: return "interior";
        case Membership::Boundary: return "boundary";
        case Membership::Exterior: return "exterior";
    }
    return "boundary";
}

// Trichotomy of X against D(A), at tolerance relative to the spectral radius
// of A - p(X). Boundary means PSD-within-tolerance with a nontrivial kernel.
inline Membership level_set_membership(const FreePoly& p, const Mat<double>& a,
                                       const SymTuple<double>& x, double tol = 1e-9) {
    if (min_eig(a) <= rel_threshold(a, tol))
        throw std::invalid_argument("A must be positive definite");
    Mat<double> s = a - eval(p, x);
    double thresh = rel_threshold(s, tol);
    double lo = min_eig(s);
    if (lo > thresh) return Membership::Interior;
    if (lo < -thresh) return Membership::Exterior;
    return Membership::Boundary;
}

struct BoundaryTriple {
    Mat<double> A;
    SymTuple<double> X;
    Eigen::VectorXd v;  // unit kernel vector of A - p(X)
    std::size_t kernel_dim = 0;
    double tol = 0;
};

namespace detail {

// Orthonormal basis with v/|v| in the first column.
inline Eigen::MatrixXd complete_basis(const Eigen::VectorXd& v) {
    Eigen::Index n = v.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    m.col(0) = v.normalized();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd q = qr.householderQ();
    // QR may flip the first column's sign
    if ((q.col(0) - v.normalized()).norm() > 1.0) q = -q;
    return q;
}

inline std::size_t kernel_dim_of(const Mat<double>& s, double tol) {
    return spectrum(s, rel_threshold(s, tol)).kernel_dim;
}

}  // namespace detail

// Builds a positive definite A with X on the boundary of D(A) and v spanning
// the kernel of A - p(X), from an eigenpair p(X)v = lambda v with lambda > 0.
// In the splitting [v] + [v]^perp, p(X) = diag(lambda, T) and
// A = diag(lambda, mu I) with mu = max_eig(T) + 1, so A - p(X) = diag(0, mu - T)
// has kernel exactly [v].
inline BoundaryTriple construct_boundary_A(const FreePoly& p, const SymTuple<double>& x,
                                           const Eigen::VectorXd& v, double lambda,
                                           double tol = 1e-9) {
    if (lambda <= tol) throw std::invalid_argument("eigenvalue must be positive");
    Mat<double> px = eval(p, x);
    Eigen::MatrixXd pxe = to_eigen(px);
    Eigen::VectorXd vn = v.normalized();
    double scale = std::max(1.0, pxe.norm());
    if ((pxe * vn - lambda * vn).norm() > 1e-6 * scale)
        throw std::invalid_argument("v is not an eigenvector of p(X) for lambda");

    Eigen::MatrixXd q = detail::complete_basis(vn);
    Eigen::Index n = vn.size();
    Eigen::MatrixXd t = q.rightCols(n - 1).transpose() * pxe * q.rightCols(n - 1);
    // mu > max_eig(T) keeps the complement strictly inside; mu > 0 keeps A PD
    double mu = n > 1 ? std::max(eigen_sym(from_eigen(t)).eigenvalues().maxCoeff(), 0.0) + 1.0 : 0.0;

    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(n, n);
    diag(0, 0) = lambda;
    for (Eigen::Index i = 1; i < n; ++i) diag(i, i) = mu;
    Mat<double> a = from_eigen(q * diag * q.transpose()).symmetrized();

    BoundaryTriple out{a, x, vn, detail::kernel_dim_of(a - px, tol), tol};
    return out;
}

// A_eps = A + eps (I - v v^T): shifts the orthogonal complement up, leaving
// the kernel of A_eps - p(X) spanned by v alone. ||A_eps - A|| = eps for n > 1.
inline BoundaryTriple shrink_kernel(const FreePoly& p, const Mat<double>& a,
                                    const SymTuple<double>& x, const Eigen::VectorXd& v,
                                    double eps, double tol = 1e-9) {
    Mat<double> s = a - eval(p, x);
    Eigen::VectorXd vn = v.normalized();
    double scale = std::max(1.0, to_eigen(s).norm());
    if ((to_eigen(s) * vn).norm() > 1e-6 * scale)
        throw std::invalid_argument("(A - p(X))v != 0: not a boundary pair");
    if (min_eig(s) < -rel_threshold(s, tol))
        throw std::invalid_argument("A - p(X) is not positive semidefinite");
    Eigen::Index n = vn.size();
    Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(n, n) - vn * vn.transpose();
    Mat<double> aeps = from_eigen(to_eigen(a) + eps * proj).symmetrized();
    return BoundaryTriple{aeps, x, vn, detail::kernel_dim_of(aeps - eval(p, x), tol), tol};
}

struct IndexReport {
    std::size_t index = 0;          // eigenvalues of the form matrix < -threshold
    Eigen::MatrixXd form_matrix;    // Gram of H -> <p''(X)[H]v,v> on T(X,v)
    Eigen::VectorXd eigenvalues;
    TangentBasis tangent;
    double threshold = 0;
    double tol = 0;
};

// Gram matrix of the quadratic form H -> <p''(X)[H]v, v> restricted to an
// orthonormal basis of T(X,v), assembled by polarization
//   b(H_i, H_j) = (q(H_i + H_j) - q(H_i) - q(H_j)) / 2,
// with the per-X word tables cached. The negative index counts eigenvalues
// below -tol relative to the form's scale.
inline IndexReport negative_index_on_tangent(const FreePoly& p, const SymTuple<double>& x,
                                             const Eigen::VectorXd& v, double tol = 1e-9) {
    IndexReport rep;
    rep.tol = tol;
    rep.tangent = clamped_tangent_basis(p, x, v, tol);
    const auto& basis = rep.tangent.basis;
    std::size_t m = basis.size();
    rep.form_matrix = Eigen::MatrixXd::Zero(m, m);
    if (m == 0) {
        rep.eigenvalues = Eigen::VectorXd(0);
        return rep;
    }

    HessianFormEvaluator q(hessian(p), x, v);
    std::vector<double> diag(m);
    for (std::size_t i = 0; i < m; ++i) diag[i] = q(basis[i]);
    for (std::size_t i = 0; i < m; ++i) {
        rep.form_matrix(i, i) = diag[i];
        for (std::size_t j = i + 1; j < m; ++j) {
            double bij = 0.5 * (q(basis[i] + basis[j]) - diag[i] - diag[j]);
            rep.form_matrix(i, j) = bij;
            rep.form_matrix(j, i) = bij;
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rep.form_matrix);
    rep.eigenvalues = es.eigenvalues();
    double scale = std::max(1.0, std::max(std::abs(rep.eigenvalues(0)),
                                          std::abs(rep.eigenvalues(m - 1))));
    rep.threshold = tol * scale;
    for (Eigen::Index i = 0; i < rep.eigenvalues.size(); ++i)
        if (rep.eigenvalues(i) < -rep.threshold) ++rep.index;
    return rep;
}

// Rank test on {w(X)v : |w| <= k}. Returns true iff the vectors are linearly
// independent; more words than dimensions is an immediate failure.
inline bool word_vector_independence(const SymTuple<Rat>& x, const std::vector<Rat>& v,
                                     std::size_t k) {
    std::size_t count = 1, level = 1;
    for (std::size_t j = 1; j <= k; ++j) {
        level *= x.g;
        count += level;
        if (count > x.n) return false;  // pigeonhole
    }
    std::vector<std::vector<Rat>> cols{v};
    std::vector<std::vector<Rat>> frontier{v};
    for (std::size_t len = 1; len <= k; ++len) {
        std::vector<std::vector<Rat>> next;
        for (const auto& c : frontier)
            for (std::size_t j = 0; j < x.g; ++j) {
                std::vector<Rat> nc(x.n, Rat(0));
                for (std::size_t r = 0; r < x.n; ++r)
                    for (std::size_t s = 0; s < x.n; ++s) nc[r] += x.mats[j](r, s) * c[s];
                next.push_back(std::move(nc));
            }
        cols.insert(cols.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    Mat<Rat> m(x.n, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < x.n; ++r) m(r, c) = cols[c][r];
    return rank_exact(m) == cols.size();
}

inline bool word_vector_independence(const SymTuple<double>& x, const Eigen::VectorXd& v,
                                     std::size_t k, double tol = 1e-9) {
    std::size_t count = 1, level = 1;
    for (std::size_t j = 1; j <= k; ++j) {
        level *= x.g;
        count += level;
        if (count > x.n) return false;
    }
    std::vector<Eigen::VectorXd> cols{v};
    std::vector<Eigen::VectorXd> frontier{v};
    std::vector<Eigen::MatrixXd> xe;
    for (const auto& mt : x.mats) xe.push_back(to_eigen(mt));
    for (std::size_t len = 1; len <= k; ++len) {
        std::vector<Eigen::VectorXd> next;
        for (const auto& c : frontier)
            for (std::size_t j = 0; j < x.g; ++j) next.push_back(xe[j] * c);
        cols.insert(cols.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    Eigen::MatrixXd m(x.n, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) m.col(static_cast<Eigen::Index>(c)) = cols[c];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    double thresh = tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++rank;
    return rank == cols.size();
}

// Direct-sum amplification: X = k copies of (X^1 + ... + X^t), v the stacked
// vectors. Any bounded-degree q with q(X)v = 0 kills every summand pair.
template <typename T, typename Vec>
std::pair<SymTuple<T>, Vec> amplify_witness(const std::vector<std::pair<SymTuple<T>, Vec>>& pairs,
                                            std::size_t copies = 1) {
    if (pairs.empty() || copies == 0) throw std::invalid_argument("nothing to amplify");
    SymTuple<T> z = pairs[0].first;
    Vec stacked = pairs[0].second;
    auto append = [](Vec& dst, const Vec& src) {
        Vec out(dst.size() + src.size());
        for (std::size_t i = 0; i < static_cast<std::size_t>(dst.size()); ++i) out[i] = dst[i];
        for (std::size_t i = 0; i < static_cast<std::size_t>(src.size()); ++i)
            out[dst.size() + i] = src[i];
        dst = std::move(out);
    };
    for (std::size_t i = 1; i < pairs.size(); ++i) {
        if (pairs[i].first.g != z.g) throw std::invalid_argument("mismatched variable counts");
        z = direct_sum(z, pairs[i].first);
        append(stacked, pairs[i].second);
    }
    SymTuple<T> x = z;
    Vec v = stacked;
    for (std::size_t c = 1; c < copies; ++c) {
        x = direct_sum(x, z);
        append(v, stacked);
    }
    return {x, v};
}

}  // namespace freeconvex
