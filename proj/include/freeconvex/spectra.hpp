#pragma once

// Double-precision spectral queries, bridged to Eigen's self-adjoint solver
// (deterministic given input bits). Exact positivity decisions live in
// ldl.hpp; everything here is tolerance-based.

#include <Eigen/Dense>

#include "freeconvex/matrix.hpp"
#include "freeconvex/symtuple.hpp"

namespace freeconvex {

struct SpectralReport {
    double min_eig = 0;
    double max_eig = 0;
    std::size_t kernel_dim = 0;  // eigenvalues with |lambda| <= tol
    double tol = 0;
};

inline Eigen::MatrixXd to_eigen(const Mat<double>& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

inline Mat<double> from_eigen(const Eigen::MatrixXd& m) {
    Mat<double> out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

inline Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen_sym(const Mat<double>& s) {
    Eigen::MatrixXd m = to_eigen(s);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        0.5 * (m + m.transpose()));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("symmetric eigendecomposition failed");
    return solver;
}

inline SpectralReport spectrum(const Mat<double>& s, double tol) {
    if (s.rows() == 0) return {0, 0, 0, tol};
    auto solver = eigen_sym(s);
    const auto& ev = solver.eigenvalues();
    SpectralReport rep;
    rep.min_eig = ev(0);
    rep.max_eig = ev(ev.size() - 1);
    rep.tol = tol;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev(i)) <= tol) ++rep.kernel_dim;
    return rep;
}

inline double min_eig(const Mat<double>& s) {
    return s.rows() == 0 ? 0.0 : eigen_sym(s).eigenvalues()(0);
}

inline double max_eig(const Mat<double>& s) {
    if (s.rows() == 0) return 0.0;
    auto ev = eigen_sym(s).eigenvalues();
    return ev(ev.size() - 1);
}

inline double spectral_radius(const Mat<double>& s) {
    if (s.rows() == 0) return 0.0;
    auto ev = eigen_sym(s).eigenvalues();
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

// Threshold for positivity decisions, relative to the spectral radius.
inline double rel_threshold(const Mat<double>& s, double tol) {
    return tol * std::max(1.0, spectral_radius(s));
}

}  // namespace freeconvex
