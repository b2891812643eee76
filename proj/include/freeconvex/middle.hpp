#pragma once

// Border-vector basis and the middle-matrix representation of the Hessian:
//
//   p''(x)[h] = V(x)[h]^T Z(x) V(x)[h],
//
// where V is the column of monomials h_l w over |w| <= d-2. Every Hessian
// monomial c * u h_i m h_j v (u, m, v words in x) splits uniquely at its
// first and last h-letter and lands in entry ((i, u*), (j, v)) with
// polynomial contribution c * m; that split realizes the uniqueness of Z.
// The numeric middle matrix is Z(0), the constant terms.

#include <vector>

#include "freeconvex/calculus.hpp"
#include "freeconvex/certificate.hpp"
#include "freeconvex/ldl.hpp"
#include "freeconvex/poly.hpp"

namespace freeconvex {

struct BorderBasis {
    std::size_t g = 0;
    int degree = 0;  // degree of p; rows cover |w| <= degree-2
    // (letter l, word w), ordered by |w| (the V_j blocks), then l, then
    // length-lex on w.
    std::vector<std::pair<std::uint32_t, FreeWord>> rows;

    static BorderBasis for_poly_degree(std::size_t g, int d) {
        BorderBasis b;
        b.g = g;
        b.degree = d;
        std::vector<FreeWord> level{FreeWord::empty()};
        for (int len = 0; len <= d - 2; ++len) {
            for (std::uint32_t l = 1; l <= g; ++l)
                for (const auto& w : level) b.rows.emplace_back(l, w);
            std::vector<FreeWord> next;
            for (const auto& w : level)
                for (std::uint32_t l = 1; l <= g; ++l) next.push_back(w * FreeWord::single(l));
            level = std::move(next);
        }
        return b;
    }

    std::size_t size() const { return rows.size(); }

    std::size_t index_of(std::uint32_t l, const FreeWord& w) const {
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i].first == l && rows[i].second == w) return i;
        throw std::out_of_range("border row not in basis");
    }
};

struct MiddleMatrixRep {
    BorderBasis basis;
    std::vector<FreePoly> zx;  // row-major size m*m, entries over the x letters
    Mat<Rat> z0;               // Z(0)

    const FreePoly& zx_at(std::size_t a, std::size_t b) const {
        return zx[a * basis.size() + b];
    }
};

inline MiddleMatrixRep build_middle_matrix(const FreePoly& p) {
    if (!p.is_symmetric()) throw std::invalid_argument("p must be symmetric");
    std::size_t g = p.g();
    int d = p.degree_or(0);

    MiddleMatrixRep rep;
    // degree <= 1: empty border basis and a 0x0 (vacuously PSD) middle matrix
    rep.basis = BorderBasis::for_poly_degree(g, d);
    std::size_t m = rep.basis.size();
    rep.zx.assign(m * m, FreePoly(g));
    rep.z0 = Mat<Rat>(m, m);
    if (d < 2) return rep;

    BiFreePoly hess = hessian(p);
    for (const auto& [w, c] : hess.poly.terms()) {
        std::size_t first = w.letters.size(), last = 0, hcount = 0;
        for (std::size_t i = 0; i < w.letters.size(); ++i)
            if (w.letters[i] > g) {
                if (hcount == 0) first = i;
                last = i;
                ++hcount;
            }
        if (hcount != 2)
            throw std::logic_error("hessian monomial without exactly two h-letters");
        FreeWord u(std::vector<std::uint32_t>(w.letters.begin(), w.letters.begin() + first));
        FreeWord mid(std::vector<std::uint32_t>(w.letters.begin() + first + 1,
                                                w.letters.begin() + last));
        FreeWord tail(std::vector<std::uint32_t>(w.letters.begin() + last + 1, w.letters.end()));
        std::uint32_t i = w.letters[first] - static_cast<std::uint32_t>(g);
        std::uint32_t j = w.letters[last] - static_cast<std::uint32_t>(g);
        std::size_t a = rep.basis.index_of(i, word_star(u));
        std::size_t b = rep.basis.index_of(j, tail);
        rep.zx[a * m + b].add_term(mid, c);
    }
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) rep.z0(a, b) = rep.zx[a * m + b].constant_term();
    return rep;
}

// Symbolic V(x)[h]^T Z(x) V(x)[h] over the 2g letters; must equal the
// Hessian exactly.
inline BiFreePoly reconstruct_hessian(const MiddleMatrixRep& rep) {
    std::size_t g = rep.basis.g;
    std::size_t m = rep.basis.size();
    BiFreePoly out{g, FreePoly(2 * g)};
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            const FreePoly& entry = rep.zx[a * m + b];
            if (entry.is_zero()) continue;
            const auto& [i, u] = rep.basis.rows[a];
            const auto& [j, v] = rep.basis.rows[b];
            FreeWord prefix = word_star(u) * FreeWord::single(i + static_cast<std::uint32_t>(g));
            FreeWord hsuffix = FreeWord::single(j + static_cast<std::uint32_t>(g)) * v;
            for (const auto& [mw, c] : entry.terms())
                out.poly.add_term(prefix * mw * hsuffix, c);
        }
    return out;
}

// Self-check of the antidiagonal structure consequence: if Z(0) is PSD, its
// only nonzero entries pair border rows with empty words (the V_0 block).
inline bool antidiagonal_psd_consequence(const MiddleMatrixRep& rep) {
    if (!psd_check_exact(rep.z0)) return true;  // vacuous
    std::size_t m = rep.basis.size();
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            if (rep.z0(a, b) == 0) continue;
            if (!rep.basis.rows[a].second.is_empty() || !rep.basis.rows[b].second.is_empty())
                return false;
        }
    return true;
}

// Extracts p = ell + sum_j w_j s_j* s_j from a PSD middle matrix. Requires
// p symmetric with p(0) = 0; a PSD middle matrix for degree > 2 input is an
// internal inconsistency (it cannot happen for symmetric p) and throws.
inline ConvexForm extract_convex_decomposition(const MiddleMatrixRep& rep, const FreePoly& p) {
    if (!p.is_symmetric()) throw std::invalid_argument("p must be symmetric");
    if (p.constant_term() != 0) throw std::invalid_argument("p(0) must be 0; normalize first");
    LdlResult ldl = ldlt_psd(rep.z0);
    if (!ldl.psd) throw std::invalid_argument("middle matrix is not PSD");
    if (p.degree_or(0) > 2)
        throw std::logic_error("PSD middle matrix with degree > 2: internal inconsistency");

    std::size_t g = p.g();
    ConvexForm out;
    out.ell = p.homogeneous_part(1);
    for (std::size_t k = 0; k < ldl.rank; ++k) {
        FreePoly form(g);
        for (std::size_t r = 0; r < rep.basis.size(); ++r) {
            if (ldl.l(r, k) == 0) continue;
            // V_0 rows only: |w| = 0, so the row stands for the letter h_l
            form += ldl.l(r, k) * FreePoly::variable(g, rep.basis.rows[r].first);
        }
        out.squares.push_back(folded(ldl.d[k] / 2, form));
    }

    if (out.ell + expand_squares(g, out.squares) != p)
        throw std::logic_error("convex decomposition failed exact round-trip");
    return out;
}

}  // namespace freeconvex
