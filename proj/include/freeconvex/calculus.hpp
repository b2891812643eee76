#pragma once

// Formal calculus on free polynomials: the expansion p(x+th) collected by
// t-powers, the directional derivative p'(x)[h] (the t coefficient), the
// Hessian p''(x)[h] (twice the t^2 coefficient), and their evaluations.
//
// Polynomials in (x, h) live over 2g letters: 1..g are x-variables and
// g+1..2g are h-variables.

#include <Eigen/Dense>

#include "freeconvex/eval.hpp"
#include "freeconvex/poly.hpp"

namespace freeconvex {

struct BiFreePoly {
    std::size_t x_vars = 0;  // g; the underlying polynomial has 2g letters
    FreePoly poly{1};

    std::size_t h_degree(const FreeWord& w) const {
        std::size_t k = 0;
        for (auto l : w.letters)
            if (l > x_vars) ++k;
        return k;
    }

    // Every stored word carries exactly j h-letters.
    bool is_h_homogeneous(std::size_t j) const {
        for (const auto& [w, c] : poly.terms())
            if (h_degree(w) != j) return false;
        return true;
    }

    bool operator==(const BiFreePoly& rhs) const {
        return x_vars == rhs.x_vars && poly == rhs.poly;
    }
};

// Coefficients of p(x+th) by powers of t; entry j is homogeneous of degree j
// in h. The zero polynomial expands to an empty list.
inline std::vector<BiFreePoly> expand_shift(const FreePoly& p) {
    auto deg = p.degree();
    if (!deg) return {};
    std::size_t g = p.g();
    std::vector<BiFreePoly> out(static_cast<std::size_t>(*deg) + 1);
    for (auto& q : out) q = BiFreePoly{g, FreePoly(2 * g)};
    for (const auto& [w, c] : p.terms()) {
        std::size_t k = w.size();
        for (std::uint64_t mask = 0; mask < (1ULL << k); ++mask) {
            FreeWord nw = w;
            std::size_t hs = 0;
            for (std::size_t i = 0; i < k; ++i)
                if (mask >> i & 1) {
                    nw.letters[i] += static_cast<std::uint32_t>(g);
                    ++hs;
                }
            out[hs].poly.add_term(nw, c);
        }
    }
    return out;
}

inline BiFreePoly shift_component(const FreePoly& p, std::size_t j) {
    auto parts = expand_shift(p);
    if (j < parts.size()) return parts[j];
    return BiFreePoly{p.g(), FreePoly(2 * p.g())};
}

inline BiFreePoly derivative(const FreePoly& p) { return shift_component(p, 1); }

inline BiFreePoly hessian(const FreePoly& p) {
    BiFreePoly h = shift_component(p, 2);
    h.poly = Rat(2) * h.poly;
    return h;
}

template <typename T>
SymTuple<T> stack_xh(const SymTuple<T>& x, const SymTuple<T>& h) {
    if (x.g != h.g || x.n != h.n) throw std::invalid_argument("tuple shape mismatch");
    SymTuple<T> out(2 * x.g, x.n);
    for (std::size_t j = 0; j < x.g; ++j) {
        out.mats[j] = x.mats[j];
        out.mats[x.g + j] = h.mats[j];
    }
    return out;
}

template <typename T>
Mat<T> eval_bi(const BiFreePoly& q, const SymTuple<T>& x, const SymTuple<T>& h) {
    if (q.x_vars != x.g) throw std::invalid_argument("polynomial/tuple variable mismatch");
    return eval(q.poly, stack_xh(x, h));
}

inline double hessian_form(const BiFreePoly& hess, const SymTuple<double>& x,
                           const SymTuple<double>& h, const Eigen::VectorXd& v) {
    Eigen::MatrixXd m = to_eigen(eval_bi(hess, x, h));
    return v.dot(m * v);
}

inline double hessian_form(const FreePoly& p, const SymTuple<double>& x,
                           const SymTuple<double>& h, const Eigen::VectorXd& v) {
    return hessian_form(hessian(p), x, h, v);
}

// Evaluates H -> <p''(X)[H]v, v> with the x-only word products cached per
// (X, v). Each Hessian monomial c * u h_i m h_j w contributes
// c * (v^T u(X)) H_i m(X) H_j (w(X) v); the vectors and the middle matrix
// depend only on (X, v) and are precomputed. This is the dominant cost of
// the polarization assembly in the boundary lab.
class HessianFormEvaluator {
public:
    HessianFormEvaluator(const BiFreePoly& hess, const SymTuple<double>& x,
                         const Eigen::VectorXd& v)
        : g_(hess.x_vars), n_(x.n) {
        if (x.g != g_) throw std::invalid_argument("tuple/polynomial variable mismatch");
        Evaluator<double> ev(x);
        Eigen::VectorXd vv = v;
        for (const auto& [w, c] : hess.poly.terms()) {
            // split at the first and last h-letter
            std::size_t first = w.letters.size(), last = 0;
            std::size_t hcount = 0;
            for (std::size_t i = 0; i < w.letters.size(); ++i)
                if (w.letters[i] > g_) {
                    if (hcount == 0) first = i;
                    last = i;
                    ++hcount;
                }
            if (hcount != 2)
                throw std::invalid_argument("hessian monomial without exactly two h-letters");
            FreeWord u(std::vector<std::uint32_t>(w.letters.begin(), w.letters.begin() + first));
            FreeWord m(std::vector<std::uint32_t>(w.letters.begin() + first + 1,
                                                  w.letters.begin() + last));
            FreeWord tail(std::vector<std::uint32_t>(w.letters.begin() + last + 1,
                                                     w.letters.end()));
            Mono mono;
            mono.c = rat_to_double(c);
            mono.i = w.letters[first] - static_cast<std::uint32_t>(g_) - 1;
            mono.j = w.letters[last] - static_cast<std::uint32_t>(g_) - 1;
            mono.left = (to_eigen(ev.word(u)).transpose() * vv).transpose();
            mono.mid = to_eigen(ev.word(m));
            mono.right = to_eigen(ev.word(tail)) * vv;
            monos_.push_back(std::move(mono));
        }
    }

    double operator()(const SymTuple<double>& h) const {
        double s = 0;
        std::vector<Eigen::MatrixXd> hm(h.g);
        for (std::size_t j = 0; j < h.g; ++j) hm[j] = to_eigen(h.mats[j]);
        for (const auto& m : monos_)
            s += m.c * ((m.left * hm[m.i]) * m.mid * (hm[m.j] * m.right)).value();
        return s;
    }

private:
    struct Mono {
        double c;
        std::uint32_t i, j;
        Eigen::RowVectorXd left;
        Eigen::MatrixXd mid;
        Eigen::VectorXd right;
    };
    std::size_t g_, n_;
    std::vector<Mono> monos_;
};

}  // namespace freeconvex
