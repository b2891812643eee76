#pragma once

// Evaluation of free polynomials on symmetric tuples, with a per-point word
// cache, the randomized zero test, and the positive-eigenvalue witness
// search over tuples of growing size.

#include <map>
#include <optional>

#include "freeconvex/poly.hpp"
#include "freeconvex/spectra.hpp"
#include "freeconvex/symtuple.hpp"

namespace freeconvex {

template <typename T>
T scalar_from_rat(const Rat& r) {
    if constexpr (std::is_same_v<T, double>)
        return rat_to_double(r);
    else
        return r;
}

// Word-evaluation cache bound to one tuple. Prefix products are reused, which
// matters once the boundary lab evaluates many polynomials at the same point.
template <typename T>
class Evaluator {
public:
    explicit Evaluator(const SymTuple<T>& x) : x_(x) {
        cache_.emplace(FreeWord::empty(), Mat<T>::identity(x.n));
    }

    const SymTuple<T>& point() const { return x_; }

    const Mat<T>& word(const FreeWord& w) {
        auto it = cache_.find(w);
        if (it != cache_.end()) return it->second;
        for (auto l : w.letters)
            if (l == 0 || l > x_.g) throw std::invalid_argument("letter outside tuple range");
        FreeWord prefix = w;
        prefix.letters.pop_back();
        Mat<T> val = word(prefix) * x_.mats[w.letters.back() - 1];
        return cache_.emplace(w, std::move(val)).first->second;
    }

    Mat<T> operator()(const FreePoly& p) {
        if (p.g() != x_.g) throw std::invalid_argument("polynomial/tuple variable mismatch");
        Mat<T> out(x_.n, x_.n);
        for (const auto& [w, c] : p.terms()) out += word(w) * scalar_from_rat<T>(c);
        return out;
    }

private:
    SymTuple<T> x_;
    std::map<FreeWord, Mat<T>> cache_;
};

template <typename T>
Mat<T> eval(const FreePoly& p, const SymTuple<T>& x) {
    Evaluator<T> ev(x);
    return ev(p);
}

// Matrix-vector product w(X)v without forming w(X).
template <typename T>
std::vector<T> word_apply(const FreeWord& w, const SymTuple<T>& x, const std::vector<T>& v) {
    std::vector<T> cur = v;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        const Mat<T>& m = x.mats[*it - 1];
        std::vector<T> next(x.n, T(0));
        for (std::size_t i = 0; i < x.n; ++i)
            for (std::size_t j = 0; j < x.n; ++j) next[i] += m(i, j) * cur[j];
        cur = std::move(next);
    }
    return cur;
}

// Randomized polynomial identity test with exact rational samples: a nonzero
// evaluation certifies q != 0, and q = 0 always passes. Default sampling is
// 8 trials at n = deg(q)+1 with entry height <= 10.
inline std::optional<SymTuple<Rat>> find_nonzero_witness(const FreePoly& q,
                                                         std::size_t trials = 8,
                                                         std::size_t n = 0,
                                                         std::uint64_t seed = 0) {
    if (q.is_zero()) return std::nullopt;
    if (n == 0) n = static_cast<std::size_t>(q.degree_or(0)) + 1;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = Rng::derive(seed, t);
        SymTuple<Rat> x = random_rational_tuple(q.g(), n, rng);
        Mat<Rat> val = eval(q, x);
        if (!(val == Mat<Rat>(n, n))) return x;
    }
    return std::nullopt;
}

inline bool randomized_zero_test(const FreePoly& q, std::size_t trials = 8,
                                 std::size_t n = 0, std::uint64_t seed = 0) {
    return !find_nonzero_witness(q, trials, n, seed).has_value();
}

struct EigWitness {
    SymTuple<double> X;
    Eigen::VectorXd v;
    double lambda = 0;
};

// Searches tuples of size 1..n_max for a point where p takes a positive
// eigenvalue, i.e. membership in the sets K(n); the returned eigenpair is the
// K-hat datum the boundary lab consumes.
inline std::optional<EigWitness> find_positive_eig_witness(const FreePoly& p,
                                                           std::size_t n_max,
                                                           std::size_t trials,
                                                           std::uint64_t seed,
                                                           double tol = 1e-9) {
    if (!p.is_symmetric()) throw std::invalid_argument("p must be symmetric");
    for (std::size_t n = 1; n <= n_max; ++n) {
        for (std::size_t t = 0; t < trials; ++t) {
            Rng rng = Rng::derive(seed, n * 100003 + t);
            SymTuple<double> x = random_gaussian_tuple(p.g(), n, rng);
            Mat<double> val = eval(p, x);
            auto solver = eigen_sym(val);
            double lam = solver.eigenvalues()(n - 1);
            if (lam > rel_threshold(val, tol)) {
                EigWitness w;
                w.X = x;
                w.v = solver.eigenvectors().col(n - 1);
                w.lambda = lam;
                return w;
            }
        }
    }
    return std::nullopt;
}

}  // namespace freeconvex
