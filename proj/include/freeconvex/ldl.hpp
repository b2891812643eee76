#pragma once

// Pivoted LDL^T over exact rationals. Pivots are chosen greedily as the
// largest remaining diagonal entry; for a PSD matrix this runs to completion
// with nonnegative pivots, and the first certificate of indefiniteness
// (negative diagonal in a Schur complement, or a nonzero row meeting a zero
// diagonal) stops the factorization. On success M = sum_k d_k l_k l_k^T
// exactly, which is what the decomposition extractors consume.

#include <vector>

#include "freeconvex/matrix.hpp"

namespace freeconvex {

struct LdlResult {
    bool psd = false;  // factorization ran to completion with d_k >= 0
    bool pd = false;   // psd and full rank
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_order;  // original index of the k-th pivot
    std::vector<Rat> d;                    // pivots, size rank, all > 0
    Mat<Rat> l;                            // n x rank, rows in original indexing
};

inline LdlResult ldlt_psd(const Mat<Rat>& m) {
    if (!m.is_symmetric()) throw std::invalid_argument("LDL^T input must be symmetric");
    std::size_t n = m.rows();
    Mat<Rat> a = m;
    std::vector<bool> done(n, false);

    LdlResult res;
    res.l = Mat<Rat>(n, n);

    for (std::size_t step = 0; step < n; ++step) {
        std::size_t piv = n;
        for (std::size_t j = 0; j < n; ++j)
            if (!done[j] && (piv == n || a(j, j) > a(piv, piv))) piv = j;
        if (piv == n) break;

        if (a(piv, piv) < 0) return res;  // not PSD
        if (a(piv, piv) == 0) {
            // max remaining diagonal is zero: PSD iff the whole block vanishes
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (!done[i] && !done[j] && a(i, j) != 0) return res;
            break;
        }

        const Rat d = a(piv, piv);
        res.pivot_order.push_back(piv);
        res.d.push_back(d);
        std::size_t k = res.d.size() - 1;
        res.l(piv, k) = 1;
        for (std::size_t i = 0; i < n; ++i)
            if (!done[i] && i != piv) res.l(i, k) = a(i, piv) / d;
        done[piv] = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (done[j]) continue;
                a(i, j) -= a(i, piv) * a(j, piv) / d;
            }
        }
    }

    res.rank = res.d.size();
    res.psd = true;
    res.pd = res.rank == n;
    // shrink L to the pivot count
    Mat<Rat> l(n, res.rank);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < res.rank; ++k) l(i, k) = res.l(i, k);
    res.l = std::move(l);
    return res;
}

// PSD test; zero-pivot rows must vanish for the factorization to certify.
inline bool psd_check_exact(const Mat<Rat>& m) { return ldlt_psd(m).psd; }

inline bool pd_check_exact(const Mat<Rat>& m) { return ldlt_psd(m).pd; }

// Reconstruction sum_k d_k l_k l_k^T, for verification.
inline Mat<Rat> ldlt_reconstruct(const LdlResult& r) {
    std::size_t n = r.l.rows();
    Mat<Rat> out(n, n);
    for (std::size_t k = 0; k < r.rank; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (r.l(i, k) == 0) continue;
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) += r.d[k] * r.l(i, k) * r.l(j, k);
        }
    return out;
}

}  // namespace freeconvex
