#pragma once

// Hermitian sum-of-squares engine.
//
// The Gram parametrization: with W the words of length <= k (2k = deg p),
// p = sum_{u,v in W} G[u,v] u* v holds iff for every word w the entries of G
// over the split pairs {(u,v) : u* v = w} sum to p_w. The split pairs of
// distinct words are disjoint, so the affine projection is closed-form per
// word group.
//
// The numeric phase (alternating projections between the PSD cone and the
// affine slice) is untrusted: a converged iterate is rounded to rationals,
// the constraints are repaired exactly by distributing each group's deficit
// evenly, and the result must pass the exact PSD test and the exact symbolic
// expansion before a certificate is emitted. Refutations are re-checked on
// rationalized sample points, so both outcomes are tolerance-free.

#include <variant>

#include "freeconvex/certificate.hpp"
#include "freeconvex/eval.hpp"
#include "freeconvex/ldl.hpp"
#include "freeconvex/parse.hpp"

namespace freeconvex {

struct GramSystem {
    std::size_t g = 0;
    std::size_t k = 0;                // half degree
    std::vector<FreeWord> basis;      // words of length <= k, length-lex
    struct Constraint {
        FreeWord w;
        Rat target;
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
    };
    std::vector<Constraint> constraints;
};

struct OddDegreeError : std::invalid_argument {
    OddDegreeError() : std::invalid_argument("odd degree: a hermitian sum of squares has even degree") {}
};

inline std::vector<FreeWord> words_up_to(std::size_t g, std::size_t k) {
    std::vector<FreeWord> out{FreeWord::empty()};
    std::vector<FreeWord> level{FreeWord::empty()};
    for (std::size_t len = 1; len <= k; ++len) {
        std::vector<FreeWord> next;
        for (const auto& w : level)
            for (std::uint32_t l = 1; l <= g; ++l) next.push_back(w * FreeWord::single(l));
        out.insert(out.end(), next.begin(), next.end());
        level = std::move(next);
    }
    return out;
}

inline GramSystem build_gram_system(const FreePoly& p) {
    if (!p.is_symmetric()) throw std::invalid_argument("p must be symmetric");
    int deg = p.degree_or(0);
    if (deg % 2 != 0) throw OddDegreeError();

    GramSystem sys;
    sys.g = p.g();
    sys.k = static_cast<std::size_t>(deg) / 2;
    sys.basis = words_up_to(sys.g, sys.k);

    std::map<FreeWord, std::vector<std::pair<std::size_t, std::size_t>>> groups;
    for (std::size_t a = 0; a < sys.basis.size(); ++a)
        for (std::size_t b = 0; b < sys.basis.size(); ++b)
            groups[word_star(sys.basis[a]) * sys.basis[b]].emplace_back(a, b);

    for (auto& [w, pairs] : groups)
        sys.constraints.push_back({w, p.coeff(w), std::move(pairs)});
    // every support word must be expressible; lengths <= 2k guarantee it
    for (const auto& [w, c] : p.terms())
        if (!groups.count(w)) throw std::logic_error("support word not expressible in the basis");
    return sys;
}

struct SosCertified {
    std::vector<WeightedSquare> squares;
};
struct SosRefuted {
    SymTuple<Rat> X;       // exact witness: p(X) has a negative eigenvalue
    double min_eig = 0;    // float estimate, for reporting
};
struct SosUnknown {
    double residual = 0;
    std::size_t iterations = 0;
    std::string note;
};
using SosOutcome = std::variant<SosCertified, SosRefuted, SosUnknown>;

struct SosOptions {
    double tol = 1e-10;          // residual tolerance of the projection loop
    std::size_t max_iter = 5000;
    std::uint64_t seed = 0;
    Int den_cap = 1000000;       // rounding denominator cap
    std::size_t refute_samples = 64;  // per matrix size, half Gaussian / half lattice
    std::size_t refute_n_max = 4;
    double refute_tol = 1e-9;
};

inline bool verify_sos_certificate(const FreePoly& p, const std::vector<WeightedSquare>& hs) {
    for (const auto& s : hs)
        if (s.weight <= 0) return false;
    return expand_squares(p.g(), hs) == p;
}

namespace detail {

// Sum-of-four-squares decomposition for small integers, used to flatten a
// weight a/b into plain squares via a*b = m1^2 + ... + m4^2. Returns empty
// when c is too large to scan.
inline std::vector<Int> four_squares(Int c) {
    if (c < 0) return {};
    if (c == 0) return {};
    if (c > Int(100000000)) return {};
    auto is_square = [](const Int& x, Int& root) {
        root = sqrt(x);
        return root * root == x;
    };
    for (Int m1 = sqrt(c); m1 >= 0; --m1) {
        Int r1 = c - m1 * m1;
        if (m1 * m1 * 4 < c) break;  // m1 must be the largest of the four parts
        // skip r1 of the form 4^a (8b+7): not a sum of three squares
        Int t = r1;
        while (t % 4 == 0) t /= 4;
        if (t % 8 == 7) continue;
        for (Int m2 = sqrt(r1); m2 >= 0; --m2) {
            Int r2 = r1 - m2 * m2;
            if (m2 * m2 * 3 < r1) break;
            for (Int m3 = sqrt(r2); m3 * m3 * 2 >= r2; --m3) {
                Int m4;
                if (is_square(r2 - m3 * m3, m4)) {
                    std::vector<Int> out;
                    for (const Int& m : {m1, m2, m3, m4})
                        if (m != 0) out.push_back(m);
                    return out;
                }
                if (m3 == 0) break;
            }
        }
    }
    return {};
}

// d * f*f with d = a/b rewrites exactly as sum_i (m_i/b f)*(m_i/b f) when
// a b is a reachable sum of squares; otherwise the weighted pair stays.
inline void push_flattened(std::vector<WeightedSquare>& out, const Rat& d, const FreePoly& f) {
    WeightedSquare fold = folded(d, f);
    if (fold.weight == 1) {
        out.push_back(std::move(fold));
        return;
    }
    Int a = numerator(d), b = denominator(d);
    auto parts = four_squares(a * b);
    if (parts.empty()) {
        out.push_back(std::move(fold));
        return;
    }
    for (const Int& m : parts) out.push_back({Rat(1), Rat(m, b) * f});
}

// Iterative diagonal pruning: a constraint with target 0 whose split pairs
// are all diagonal forces those Gram diagonal entries (hence rows) to zero in
// every PSD solution, so the words can be dropped. Sparse inputs collapse to
// tiny systems this way; x1^4 reduces to the single word x1^2.
// Empty result: some support word of p lost all of its splits, so no PSD
// Gram matrix can reproduce p and p is structurally not a sum of squares.
inline std::optional<GramSystem> reduced_gram_system(const FreePoly& p) {
    int deg = p.degree_or(0);
    if (deg % 2 != 0) throw OddDegreeError();
    std::size_t g = p.g();
    std::size_t k = static_cast<std::size_t>(deg) / 2;
    std::vector<FreeWord> words = words_up_to(g, k);

    bool changed = true;
    while (changed) {
        changed = false;
        std::map<FreeWord, std::vector<std::pair<std::size_t, std::size_t>>> groups;
        for (std::size_t a = 0; a < words.size(); ++a)
            for (std::size_t b = 0; b < words.size(); ++b)
                groups[word_star(words[a]) * words[b]].emplace_back(a, b);
        std::vector<bool> drop(words.size(), false);
        for (const auto& [w, pairs] : groups) {
            if (p.coeff(w) != 0) continue;
            bool all_diag = true;
            for (auto [a, b] : pairs)
                if (a != b) {
                    all_diag = false;
                    break;
                }
            if (!all_diag) continue;
            for (auto [a, b] : pairs) {
                if (!drop[a]) changed = true;
                drop[a] = true;
            }
        }
        if (changed) {
            std::vector<FreeWord> kept;
            for (std::size_t i = 0; i < words.size(); ++i)
                if (!drop[i]) kept.push_back(words[i]);
            words = std::move(kept);
        }
    }

    GramSystem sys;
    sys.g = g;
    sys.k = k;
    sys.basis = std::move(words);
    std::map<FreeWord, std::vector<std::pair<std::size_t, std::size_t>>> groups;
    for (std::size_t a = 0; a < sys.basis.size(); ++a)
        for (std::size_t b = 0; b < sys.basis.size(); ++b)
            groups[word_star(sys.basis[a]) * sys.basis[b]].emplace_back(a, b);
    for (auto& [w, pairs] : groups)
        sys.constraints.push_back({w, p.coeff(w), std::move(pairs)});
    for (const auto& [w, c] : p.terms())
        if (!groups.count(w)) return std::nullopt;
    return sys;
}

inline std::vector<WeightedSquare> squares_from_gram(const GramSystem& sys, const LdlResult& ldl) {
    std::vector<WeightedSquare> out;
    for (std::size_t k = 0; k < ldl.rank; ++k) {
        FreePoly f(sys.g);
        for (std::size_t i = 0; i < sys.basis.size(); ++i)
            if (ldl.l(i, k) != 0) f += ldl.l(i, k) * FreePoly::monomial(sys.g, sys.basis[i], 1);
        push_flattened(out, ldl.d[k], f);
    }
    return out;
}

inline Eigen::MatrixXd affine_project(const GramSystem& sys, Eigen::MatrixXd gm) {
    for (const auto& con : sys.constraints) {
        double s = 0;
        for (auto [a, b] : con.pairs) s += gm(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        double share = (rat_to_double(con.target) - s) / static_cast<double>(con.pairs.size());
        for (auto [a, b] : con.pairs)
            gm(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += share;
    }
    return gm;
}

// Projection onto {G >= floor * I}; floor > 0 targets interior points whose
// eigenvalue margin survives the rational rounding.
inline Eigen::MatrixXd psd_project(const Eigen::MatrixXd& gm, double floor = 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (gm + gm.transpose()));
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(floor);
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

// Round to a common denominator, then restore every constraint exactly by
// spreading the deficit evenly over its (disjoint) pair group. Symmetry is
// preserved because mirrored groups carry equal targets and equal sums.
inline Mat<Rat> round_and_repair(const GramSystem& sys, const Eigen::MatrixXd& gm, const Int& cap) {
    std::size_t m = sys.basis.size();
    Mat<Rat> out(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            double x = 0.5 * (gm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +
                              gm(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)));
            double scaled = std::nearbyint(x * static_cast<double>(cap));
            Rat r = Rat(Int(static_cast<long long>(scaled)), cap);
            out(i, j) = r;
            out(j, i) = r;
        }
    for (const auto& con : sys.constraints) {
        Rat s(0);
        for (auto [a, b] : con.pairs) s += out(a, b);
        if (s == con.target) continue;
        Rat share = (con.target - s) / Rat(con.pairs.size());
        for (auto [a, b] : con.pairs) out(a, b) += share;
    }
    if (!out.is_symmetric()) throw std::logic_error("gram repair lost symmetry");
    return out;
}

inline std::optional<SosRefuted> refute_by_sampling(const FreePoly& p, const SosOptions& opt) {
    for (std::size_t n = 1; n <= opt.refute_n_max; ++n) {
        for (std::size_t s = 0; s < opt.refute_samples; ++s) {
            Rng rng = Rng::derive(Rng::mix(opt.seed, 0xA11CE), n * 1000 + s);
            SymTuple<Rat> xr(p.g(), n);
            bool gaussian = s < opt.refute_samples / 2;
            if (gaussian) {
                SymTuple<double> xd = random_gaussian_tuple(p.g(), n, rng);
                Mat<double> e = eval(p, xd);
                if (min_eig(e) >= -rel_threshold(e, opt.refute_tol)) continue;
                xr = rationalize(xd, Int(4096));
            } else {
                xr = random_rational_tuple(p.g(), n, rng);
            }
            Mat<Rat> er = eval(p, xr);
            if (!psd_check_exact(er)) return SosRefuted{xr, min_eig(to_double(er))};
        }
    }
    return std::nullopt;
}

}  // namespace detail

// Decides whether p is a hermitian sum of squares. Certified and Refuted are
// exact; Unknown is an honest verdict (projections can stall on
// boundary-feasible systems, and rounding may miss irrational Gram slices).
inline SosOutcome sos_feasibility(const FreePoly& p, const SosOptions& opt = {}) {
    if (!p.is_symmetric()) throw std::invalid_argument("p must be symmetric");
    if (p.is_zero()) return SosCertified{{}};

    // (a) refutation pass: a single exact negative-eigenvalue point settles it
    if (auto ref = detail::refute_by_sampling(p, opt)) return *ref;

    if (p.degree_or(0) % 2 != 0)
        return SosUnknown{0.0, 0, "odd degree rules out a sum of squares, but no exact witness was sampled"};

    // (b) feasibility pass on the pruned system
    auto reduced = detail::reduced_gram_system(p);
    if (!reduced)
        return SosUnknown{0.0, 0,
                          "structurally not a sum of squares (a support word has no admissible "
                          "splits), but no exact witness was sampled"};
    const GramSystem& sys = *reduced;
    std::size_t m = sys.basis.size();

    double last_residual = std::numeric_limits<double>::infinity();
    std::size_t total_it = 0;
    // Descending eigenvalue floors, warm-started: a level that converges
    // yields an iterate with that margin inside the cone, which rounding
    // survives. Boundary-only systems fall through to floor 0.
    Eigen::MatrixXd gm = detail::affine_project(sys, Eigen::MatrixXd::Zero(m, m));
    for (double floor : {1e-2, 1e-3, 1e-5, 0.0}) {
        double residual = std::numeric_limits<double>::infinity();
        for (std::size_t it = 0; it < opt.max_iter; ++it) {
            Eigen::MatrixXd gp = detail::psd_project(gm, floor);
            Eigen::MatrixXd ga = detail::affine_project(sys, gp);
            residual = (ga - gp).norm() / (1.0 + ga.norm());
            gm = ga;
            ++total_it;
            if (residual < opt.tol) break;
        }
        last_residual = residual;
        if (residual >= opt.tol && floor > 0.0) continue;  // no interior at this margin

        if (!gm.allFinite() || gm.cwiseAbs().maxCoeff() > 1e9) continue;
        for (const Int& cap : {opt.den_cap, Int(10000), Int(100)}) {
            for (const Eigen::MatrixXd& candidate : {gm, detail::psd_project(gm)}) {
                Mat<Rat> grat = detail::round_and_repair(sys, candidate, cap);
                LdlResult ldl = ldlt_psd(grat);
                if (!ldl.psd) continue;
                auto squares = detail::squares_from_gram(sys, ldl);
                if (verify_sos_certificate(p, squares)) return SosCertified{std::move(squares)};
            }
        }
    }
    return SosUnknown{last_residual, total_it,
                      "projection iterate did not round to an exact PSD Gram matrix"};
}

}  // namespace freeconvex
