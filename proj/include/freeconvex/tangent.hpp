#pragma once

// The clamped tangent plane T(X,v) = {H : p'(X)[H]v = 0}, computed as the
// kernel of the n x D constraint map over the coordinatized space of
// symmetric tuples. Coordinates use the upper triangle with off-diagonal
// entries weighted sqrt(2), so the trace inner product is the Euclidean one
// and SVD kernels come out orthonormal in the right geometry.

#include <Eigen/Dense>

#include "freeconvex/calculus.hpp"
#include "freeconvex/symtuple.hpp"

namespace freeconvex {

namespace detail {
inline constexpr double kSqrt2 = 1.4142135623730951;
}

inline Eigen::VectorXd tuple_to_vec(const SymTuple<double>& t) {
    Eigen::VectorXd out(sym_ambient_dim(t.g, t.n));
    std::size_t k = 0;
    for (std::size_t b = 0; b < t.g; ++b)
        for (std::size_t i = 0; i < t.n; ++i)
            for (std::size_t j = i; j < t.n; ++j)
                out(k++) = (i == j) ? t.mats[b](i, j) : detail::kSqrt2 * t.mats[b](i, j);
    return out;
}

inline SymTuple<double> vec_to_tuple(std::size_t g, std::size_t n, const Eigen::VectorXd& v) {
    SymTuple<double> out(g, n);
    std::size_t k = 0;
    for (std::size_t b = 0; b < g; ++b)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                double x = v(k++);
                if (i == j) {
                    out.mats[b](i, i) = x;
                } else {
                    out.mats[b](i, j) = x / detail::kSqrt2;
                    out.mats[b](j, i) = x / detail::kSqrt2;
                }
            }
    return out;
}

struct TangentBasis {
    SymTuple<double> X;
    Eigen::VectorXd v;
    std::vector<SymTuple<double>> basis;  // orthonormal in the trace inner product
    std::size_t ambient_dim = 0;
    // rank audit of the constraint map
    std::size_t rank = 0;
    std::vector<double> singular_values;
    double threshold = 0;
    double tol_used = 0;
};

inline TangentBasis clamped_tangent_basis(const FreePoly& p, const SymTuple<double>& x,
                                          const Eigen::VectorXd& v, double tol = 1e-9) {
    if (v.size() != static_cast<Eigen::Index>(x.n) || v.norm() == 0.0)
        throw std::invalid_argument("v must be a nonzero n-vector");
    std::size_t g = x.g, n = x.n;
    std::size_t dim = sym_ambient_dim(g, n);
    BiFreePoly deriv = derivative(p);

    // Linear in h, so columns are evaluations at the coordinate tuples.
    Eigen::MatrixXd c(n, dim);
    std::size_t col = 0;
    for (std::size_t b = 0; b < g; ++b)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                SymTuple<double> e(g, n);
                double w = (i == j) ? 1.0 : 1.0 / detail::kSqrt2;
                e.mats[b](i, j) = w;
                e.mats[b](j, i) = w;
                c.col(col++) = to_eigen(eval_bi(deriv, x, e)) * v;
            }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double smax = sv.size() > 0 ? sv(0) : 0.0;
    double thresh = tol * std::max(1.0, smax);

    TangentBasis tb;
    tb.X = x;
    tb.v = v;
    tb.ambient_dim = dim;
    tb.tol_used = tol;
    tb.threshold = thresh;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        tb.singular_values.push_back(sv(i));
        if (sv(i) > thresh) ++tb.rank;
    }
    for (std::size_t i = tb.rank; i < dim; ++i)
        tb.basis.push_back(vec_to_tuple(g, n, svd.matrixV().col(static_cast<Eigen::Index>(i))));
    return tb;
}

}  // namespace freeconvex
