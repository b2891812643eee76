#pragma once

// Tuples of n x n symmetric matrices, the evaluation points of free
// polynomials. Rational-backed tuples must be exactly symmetric; double
// tuples are symmetrized on construction.

#include <type_traits>
#include <vector>

#include "freeconvex/matrix.hpp"
#include "freeconvex/random.hpp"

namespace freeconvex {

inline constexpr std::size_t kMaxTupleSize = 64;  // desk-scale hard cap

template <typename T>
struct SymTuple {
    std::size_t g = 0;
    std::size_t n = 0;
    std::vector<Mat<T>> mats;

    SymTuple() = default;

    SymTuple(std::size_t g_, std::size_t n_)
        : g(g_), n(n_), mats(g_, Mat<T>(n_, n_)) {
        if (n > kMaxTupleSize) throw std::invalid_argument("tuple size exceeds the n <= 64 cap");
    }

    static SymTuple from_mats(std::vector<Mat<T>> ms) {
        if (ms.empty()) throw std::invalid_argument("empty tuple");
        SymTuple out;
        out.g = ms.size();
        out.n = ms[0].rows();
        if (out.n > kMaxTupleSize)
            throw std::invalid_argument("tuple size exceeds the n <= 64 cap");
        for (auto& m : ms) {
            if (m.rows() != out.n || m.cols() != out.n)
                throw std::invalid_argument("tuple matrices must share one square size");
            if constexpr (std::is_same_v<T, double>) {
                m = m.symmetrized();
            } else {
                if (!m.is_symmetric())
                    throw std::invalid_argument("exact-backed tuple matrix not symmetric");
            }
        }
        out.mats = std::move(ms);
        return out;
    }

    const Mat<T>& operator[](std::size_t j) const { return mats[j]; }
    Mat<T>& operator[](std::size_t j) { return mats[j]; }

    SymTuple& operator+=(const SymTuple& rhs) {
        require_match(rhs);
        for (std::size_t j = 0; j < g; ++j) mats[j] += rhs.mats[j];
        return *this;
    }
    SymTuple& operator-=(const SymTuple& rhs) {
        require_match(rhs);
        for (std::size_t j = 0; j < g; ++j) mats[j] -= rhs.mats[j];
        return *this;
    }
    SymTuple& operator*=(const T& c) {
        for (auto& m : mats) m *= c;
        return *this;
    }
    friend SymTuple operator+(SymTuple a, const SymTuple& b) { return a += b; }
    friend SymTuple operator-(SymTuple a, const SymTuple& b) { return a -= b; }
    friend SymTuple operator*(SymTuple a, const T& c) { return a *= c; }
    friend SymTuple operator*(const T& c, SymTuple a) { return a *= c; }

    bool operator==(const SymTuple& rhs) const {
        return g == rhs.g && n == rhs.n && mats == rhs.mats;
    }

private:
    void require_match(const SymTuple& rhs) const {
        if (g != rhs.g || n != rhs.n) throw std::invalid_argument("tuple shape mismatch");
    }
};

template <typename T>
SymTuple<T> direct_sum(const SymTuple<T>& x, const SymTuple<T>& y) {
    if (x.g != y.g) throw std::invalid_argument("mismatched variable counts");
    SymTuple<T> out(x.g, x.n + y.n);
    for (std::size_t j = 0; j < x.g; ++j) out.mats[j] = direct_sum(x.mats[j], y.mats[j]);
    return out;
}

template <typename T>
SymTuple<T> self_direct_sum(const SymTuple<T>& x, std::size_t copies) {
    if (copies == 0) return SymTuple<T>(x.g, 0);
    SymTuple<T> out = x;
    for (std::size_t i = 1; i < copies; ++i) out = direct_sum(out, x);
    return out;
}

inline SymTuple<double> to_double(const SymTuple<Rat>& x) {
    SymTuple<double> out(x.g, x.n);
    for (std::size_t j = 0; j < x.g; ++j) out.mats[j] = to_double(x.mats[j]);
    return out;
}

inline SymTuple<Rat> rationalize(const SymTuple<double>& x, const Int& max_den) {
    SymTuple<Rat> out(x.g, x.n);
    for (std::size_t j = 0; j < x.g; ++j) {
        for (std::size_t a = 0; a < x.n; ++a)
            for (std::size_t b = a; b < x.n; ++b) {
                Rat r = rat_from_double(x.mats[j](a, b), max_den);
                out.mats[j](a, b) = r;
                out.mats[j](b, a) = r;
            }
    }
    return out;
}

// Entries i.i.d. standard Gaussian, then symmetrized.
inline SymTuple<double> random_gaussian_tuple(std::size_t g, std::size_t n, Rng& rng) {
    SymTuple<double> out(g, n);
    for (std::size_t j = 0; j < g; ++j) {
        Mat<double> m(n, n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) m(a, b) = rng.gaussian();
        out.mats[j] = m.symmetrized();
    }
    return out;
}

// Entries p/q with |p| <= height, 1 <= q <= height; symmetric by construction.
inline SymTuple<Rat> random_rational_tuple(std::size_t g, std::size_t n, Rng& rng,
                                           std::int64_t height = 10) {
    SymTuple<Rat> out(g, n);
    for (std::size_t j = 0; j < g; ++j)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a; b < n; ++b) {
                Rat r(Int(rng.uniform_int(-height, height)), Int(rng.uniform_int(1, height)));
                out.mats[j](a, b) = r;
                out.mats[j](b, a) = r;
            }
    return out;
}

inline std::size_t sym_ambient_dim(std::size_t g, std::size_t n) {
    return g * n * (n + 1) / 2;
}

}  // namespace freeconvex
