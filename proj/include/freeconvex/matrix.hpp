#pragma once

// Minimal dense matrix over an arbitrary scalar. The exact-rational paths of
// the library need nothing beyond ring operations, so this stays tiny; the
// double-precision spectral routines bridge to Eigen in spectra.hpp.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "freeconvex/rational.hpp"

namespace freeconvex {

template <typename T>
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t r, std::size_t c) : rows_(r), cols_(c), data_(r * c, T(0)) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Mat transpose() const {
        Mat out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    bool is_symmetric() const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

    Mat symmetrized() const {
        require_square();
        Mat out(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                out(i, j) = ((*this)(i, j) + (*this)(j, i)) / T(2);
        return out;
    }

    Mat& operator+=(const Mat& rhs) {
        require_same_shape(rhs);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
        return *this;
    }

    Mat& operator-=(const Mat& rhs) {
        require_same_shape(rhs);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
        return *this;
    }

    Mat& operator*=(const T& c) {
        for (auto& x : data_) x *= c;
        return *this;
    }

    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
    friend Mat operator*(Mat a, const T& c) { return a *= c; }
    friend Mat operator*(const T& c, Mat a) { return a *= c; }
    friend Mat operator-(const Mat& a) { return a * T(-1); }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch");
        Mat out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik == T(0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    bool operator==(const Mat& rhs) const {
        return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
    }

    template <typename F>
    auto map(F f) const -> Mat<decltype(f(std::declval<T>()))> {
        Mat<decltype(f(std::declval<T>()))> out(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(i, j) = f((*this)(i, j));
        return out;
    }

private:
    void require_same_shape(const Mat& rhs) const {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
            throw std::invalid_argument("matrix shape mismatch");
    }
    void require_square() const {
        if (rows_ != cols_) throw std::invalid_argument("matrix not square");
    }

    std::size_t rows_, cols_;
    std::vector<T> data_;
};

template <typename T>
Mat<T> direct_sum(const Mat<T>& a, const Mat<T>& b) {
    Mat<T> out(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, a.cols() + j) = b(i, j);
    return out;
}

inline Mat<double> to_double(const Mat<Rat>& m) {
    return m.map([](const Rat& r) { return rat_to_double(r); });
}

inline Mat<Rat> rationalize(const Mat<double>& m, const Int& max_den) {
    return m.map([&](double x) { return rat_from_double(x, max_den); });
}

// Exact determinant by fraction-free-ish Gaussian elimination over a field.
inline Rat det_exact(Mat<Rat> a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("matrix not square");
    std::size_t n = a.rows();
    Rat det(1);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a(piv, k) == 0) ++piv;
        if (piv == n) return Rat(0);
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(k, j));
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            Rat f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

// Column rank over the rationals, exact.
inline std::size_t rank_exact(Mat<Rat> a) {
    std::size_t n = a.rows(), m = a.cols(), rank = 0;
    for (std::size_t col = 0; col < m && rank < n; ++col) {
        std::size_t piv = rank;
        while (piv < n && a(piv, col) == 0) ++piv;
        if (piv == n) continue;
        for (std::size_t j = 0; j < m; ++j) std::swap(a(piv, j), a(rank, j));
        for (std::size_t i = 0; i < n; ++i) {
            if (i == rank || a(i, col) == 0) continue;
            Rat f = a(i, col) / a(rank, col);
            for (std::size_t j = 0; j < m; ++j) a(i, j) -= f * a(rank, j);
        }
        ++rank;
    }
    return rank;
}

}  // namespace freeconvex
