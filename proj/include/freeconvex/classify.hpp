#pragma once

// Top-level decision procedure. Pipeline on the normalization q = p - p(0):
//
//   1. build the middle matrix; exact PSD  -> ConvexForm (extraction)
//   2. otherwise test -q for sum of squares; certified -> NegSos
//   3. refuted (exact witness or odd degree) -> not quasi-convex; a level-set
//      midpoint violation is searched best-effort and attached when found
//   4. SOS outcome unknown -> Undecided
//
// Verdicts 1-3 rest on exact rational evidence; every emitted witness
// re-verifies with exact arithmetic before it leaves this module.

#include <chrono>

#include "freeconvex/boundary.hpp"
#include "freeconvex/middle.hpp"
#include "freeconvex/sos.hpp"

namespace freeconvex {

struct ClassifyOptions {
    double tol = 1e-9;
    std::uint64_t seed = 0;
    std::size_t n_max = 8;             // size cap for eigenpair searches
    std::int64_t budget_ms = 10000;    // witness search wall-clock cap
    std::size_t witness_samples = 10000;
};

struct ClassifyResult {
    Certificate certificate;
    FreePoly input{1};
    FreePoly normalized{1};
    bool was_normalized = false;
    bool middle_psd = false;
    std::string sos_summary = "skipped";
    double sos_residual = 0;
    std::size_t sos_iterations = 0;
    ClassifyOptions options;
};

namespace detail {

inline Int witness_den_cap() { return Int(1) << 20; }

// Exact re-verification of a midpoint violation against q (q(0) = 0).
inline bool witness_verifies(const FreePoly& q, const NonConvexWitness& w) {
    if (w.X.g != q.g() || w.Y.g != q.g() || w.X.n != w.n || w.Y.n != w.n) return false;
    if (!pd_check_exact(w.A)) return false;
    if (!pd_check_exact(w.A - eval(q, w.X))) return false;
    if (!pd_check_exact(w.A - eval(q, w.Y))) return false;
    SymTuple<Rat> mid = (w.X + w.Y) * Rat(1, 2);
    return !psd_check_exact(w.A - eval(q, mid));
}

class WitnessSearch {
public:
    WitnessSearch(const FreePoly& q, const ClassifyOptions& opt)
        : q_(q), opt_(opt), deadline_(std::chrono::steady_clock::now() +
                                      std::chrono::milliseconds(opt.budget_ms)) {}

    std::optional<NonConvexWitness> run() {
        if (auto w = guided_pass()) return w;
        return pair_pass();
    }

private:
    bool expired() const { return std::chrono::steady_clock::now() >= deadline_; }

    std::optional<NonConvexWitness> finalize(const Mat<double>& a, const SymTuple<double>& x,
                                             const SymTuple<double>& y) {
        NonConvexWitness w;
        w.n = x.n;
        w.A = rationalize(a.symmetrized(), witness_den_cap());
        w.X = rationalize(x, witness_den_cap());
        w.Y = rationalize(y, witness_den_cap());
        if (!witness_verifies(q_, w)) return std::nullopt;
        return w;
    }

    // Strategy A: at a boundary triple built from an eigenpair, a tangent
    // direction with a negative Hessian form makes X +- tH poke inside while
    // the midpoint X sits on the boundary; pulling A down along v by delta
    // turns the marginal violation into a strict one.
    std::optional<NonConvexWitness> guided_pass() {
        for (std::size_t n = 1; n <= std::min<std::size_t>(3, opt_.n_max) && !expired(); ++n) {
            for (std::size_t attempt = 0; attempt < 4 && !expired(); ++attempt) {
                auto eig = find_positive_eig_witness(q_, n, 8,
                                                     Rng::mix(opt_.seed, 0xA0 + n * 16 + attempt),
                                                     opt_.tol);
                if (!eig || eig->X.n < 2) continue;
                BoundaryTriple triple;
                try {
                    triple = construct_boundary_A(q_, eig->X, eig->v, eig->lambda, opt_.tol);
                } catch (const std::invalid_argument&) {
                    continue;
                }
                IndexReport rep = negative_index_on_tangent(q_, triple.X, triple.v, opt_.tol);
                if (rep.index == 0 || rep.tangent.basis.empty()) continue;

                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rep.form_matrix);
                double lam = es.eigenvalues()(0);
                if (lam >= 0) continue;
                Eigen::VectorXd dir = es.eigenvectors().col(0);
                SymTuple<double> h(q_.g(), triple.X.n);
                for (std::size_t i = 0; i < rep.tangent.basis.size(); ++i)
                    h += rep.tangent.basis[i] * dir(static_cast<Eigen::Index>(i));

                double anorm = spectral_radius(triple.A);
                Eigen::MatrixXd vvt = triple.v * triple.v.transpose();
                for (double dfac : {1e-1, 1e-2, 1e-3}) {
                    double delta = dfac * std::max(anorm, 1.0);
                    Mat<double> adef = triple.A - from_eigen(delta * vvt);
                    if (min_eig(adef) < opt_.tol) continue;
                    double tbase = std::sqrt(4.0 * delta / -lam);
                    for (double tfac : {1.0, 1.5, 2.0, 3.0}) {
                        double t = tbase * tfac;
                        SymTuple<double> xp = triple.X + h * t;
                        SymTuple<double> xm = triple.X - h * t;
                        double scale = std::max(1.0, spectral_radius(adef));
                        if (min_eig(adef - eval(q_, xp)) < 1e-6 * scale) continue;
                        if (min_eig(adef - eval(q_, xm)) < 1e-6 * scale) continue;
                        if (min_eig(adef - eval(q_, triple.X)) > -1e-6 * scale) continue;
                        if (auto w = finalize(adef, xp, xm)) return w;
                    }
                }
            }
        }
        return std::nullopt;
    }

    // Strategy B: sample an anisotropic A > 0, pull two random points to just
    // inside the boundary of D(A) along their rays, and test the dyadic
    // points of the segment for an inside-outside-inside pattern.
    std::optional<NonConvexWitness> pair_pass() {
        static constexpr double kKappa[] = {1.0, 10.0, 100.0, 1000.0, 10000.0};
        static constexpr double kFrac[] = {0.95, 0.9, 0.99};
        for (std::size_t trial = 0; trial < opt_.witness_samples; ++trial) {
            if (trial % 64 == 0 && expired()) break;
            std::size_t n = 1 + trial % std::min<std::size_t>(3, opt_.n_max);
            Rng rng = Rng::derive(Rng::mix(opt_.seed, 0xB000), trial);

            Mat<double> a = sample_a(n, kKappa[trial % 5], trial % 2 == 1, rng);
            double frac = kFrac[trial % 3];
            auto xb = pull_to_boundary(a, random_gaussian_tuple(q_.g(), n, rng), frac);
            auto yb = pull_to_boundary(a, random_gaussian_tuple(q_.g(), n, rng), frac);
            if (!xb || !yb) continue;

            // memberships at the dyadic points of the chord
            double scale = std::max(1.0, spectral_radius(a));
            auto margin = [&](const SymTuple<double>& pt) {
                return min_eig(a - eval(q_, pt));
            };
            SymTuple<double> pts[5] = {*xb,
                                       (*xb * 0.75 + *yb * 0.25),
                                       (*xb + *yb) * 0.5,
                                       (*xb * 0.25 + *yb * 0.75),
                                       *yb};
            double m[5];
            for (int i = 0; i < 5; ++i) m[i] = margin(pts[i]);
            static constexpr int kTriples[][3] = {{0, 2, 4}, {0, 1, 2}, {1, 2, 3}, {2, 3, 4}};
            for (auto [li, mi, ri] : kTriples) {
                if (m[li] > 1e-5 * scale && m[ri] > 1e-5 * scale && m[mi] < -1e-5 * scale) {
                    if (auto w = finalize(a, pts[li], pts[ri])) return w;
                }
            }
        }
        return std::nullopt;
    }

    Mat<double> sample_a(std::size_t n, double kappa, bool rotate, Rng& rng) {
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
        d(0, 0) = 1.0;
        for (std::size_t i = 1; i < n; ++i)
            d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
                1.0 + rng.uniform() * (kappa - 1.0);
        double s = std::exp(0.5 * rng.gaussian());
        Eigen::MatrixXd a = s * d;
        if (rotate && n > 1) {
            Eigen::MatrixXd g(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rng.gaussian();
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
            Eigen::MatrixXd qmat = qr.householderQ();
            a = qmat * a * qmat.transpose();
        }
        return from_eigen(a).symmetrized();
    }

    // Scales X along its ray to frac of the first boundary crossing; q(0)=0
    // keeps the origin strictly inside.
    std::optional<SymTuple<double>> pull_to_boundary(const Mat<double>& a,
                                                     const SymTuple<double>& x, double frac) {
        double scale = std::max(1.0, spectral_radius(a));
        auto inside = [&](double s) { return min_eig(a - eval(q_, x * s)) > 1e-9 * scale; };
        if (!inside(0.0)) return std::nullopt;
        double lo = 0.0, hi = 1.0;
        if (inside(1.0)) {
            while (inside(hi) && hi < 1e4) {
                lo = hi;
                hi *= 2;
            }
            if (hi >= 1e4) return std::nullopt;  // ray never leaves D(A)
        }
        for (int i = 0; i < 30; ++i) {
            double mid = 0.5 * (lo + hi);
            (inside(mid) ? lo : hi) = mid;
        }
        return x * (frac * lo);
    }

    const FreePoly& q_;
    ClassifyOptions opt_;
    std::chrono::steady_clock::time_point deadline_;
};

}  // namespace detail

// Best-effort search for a strict midpoint violation of the level sets of q
// (pre-normalized, q(0) = 0). Every returned witness has already passed the
// exact rational re-verification.
inline std::optional<NonConvexWitness> find_nonconvexity_witness(const FreePoly& q,
                                                                 const ClassifyOptions& opt = {}) {
    if (!q.is_symmetric()) throw std::invalid_argument("q must be symmetric");
    return detail::WitnessSearch(q, opt).run();
}

inline ClassifyResult classify(const FreePoly& p, const ClassifyOptions& opt = {}) {
    if (!p.is_symmetric()) throw std::invalid_argument("p must be symmetric");

    ClassifyResult res;
    res.options = opt;
    res.input = p;
    res.normalized = p - FreePoly::constant(p.g(), p.constant_term());
    res.was_normalized = p.constant_term() != 0;
    const FreePoly& q = res.normalized;

    MiddleMatrixRep rep = build_middle_matrix(q);
    res.middle_psd = psd_check_exact(rep.z0);
    if (res.middle_psd) {
        res.certificate = Certificate::convex_form(extract_convex_decomposition(rep, q));
        return res;
    }

    SosOptions sos_opt;
    sos_opt.seed = Rng::mix(opt.seed, 0x505);
    SosOutcome outcome = sos_feasibility(-q, sos_opt);

    if (auto* cert = std::get_if<SosCertified>(&outcome)) {
        res.sos_summary = "certified";
        res.certificate = Certificate::neg_sos(NegSos{cert->squares});
        return res;
    }

    bool odd = q.degree_or(0) % 2 != 0;
    if (auto* ref = std::get_if<SosRefuted>(&outcome)) {
        res.sos_summary = "refuted";
        NotQuasiConvex evidence;
        evidence.sos_refutation_point = ref->X;
        evidence.odd_degree = odd;
        evidence.witness = find_nonconvexity_witness(q, opt);
        res.certificate = Certificate::not_quasi_convex(std::move(evidence));
        return res;
    }

    auto* unk = std::get_if<SosUnknown>(&outcome);
    res.sos_summary = "unknown";
    res.sos_residual = unk->residual;
    res.sos_iterations = unk->iterations;
    if (odd) {
        // parity alone rules out -q being a sum of squares, exactly
        NotQuasiConvex evidence;
        evidence.odd_degree = true;
        evidence.witness = find_nonconvexity_witness(q, opt);
        res.certificate = Certificate::not_quasi_convex(std::move(evidence));
        return res;
    }
    res.certificate =
        Certificate::undecided(Undecided{res.middle_psd, "unknown", unk->residual,
                                         unk->iterations,
                                         "middle matrix not PSD and the SOS engine could not "
                                         "decide -q; verdict withheld"});
    return res;
}

// Exact re-verification of a certificate against p. Undecided never
// verifies; the other verdicts re-check their defining identities with
// rational arithmetic only.
inline bool verify_certificate(const FreePoly& p, const Certificate& cert) {
    if (!p.is_symmetric()) return false;
    FreePoly q = p - FreePoly::constant(p.g(), p.constant_term());

    switch (cert.verdict) {
        case Certificate::Verdict::ConvexForm: {
            const auto& c = std::get<ConvexForm>(cert.payload);
            if (c.ell.degree_or(0) > 1 || c.ell.constant_term() != 0) return false;
            for (const auto& s : c.squares)
                if (s.weight <= 0 || s.poly.degree_or(0) > 1 || s.poly.constant_term() != 0)
                    return false;
            return c.ell + expand_squares(q.g(), c.squares) == q;
        }
        case Certificate::Verdict::NegSos: {
            const auto& c = std::get<NegSos>(cert.payload);
            return verify_sos_certificate(-q, c.squares);
        }
        case Certificate::Verdict::NotQuasiConvex: {
            const auto& c = std::get<NotQuasiConvex>(cert.payload);
            // leg 1: middle matrix not PSD, recomputed
            if (psd_check_exact(build_middle_matrix(q).z0)) return false;
            // leg 2: -q is not a sum of squares, by exact point or parity
            bool sos_ruled_out = false;
            if (c.odd_degree && q.degree_or(0) % 2 != 0) sos_ruled_out = true;
            if (!sos_ruled_out && c.sos_refutation_point) {
                if (c.sos_refutation_point->g != q.g()) return false;
                sos_ruled_out = !psd_check_exact(eval(-q, *c.sos_refutation_point));
            }
            if (!sos_ruled_out) return false;
            if (c.witness && !detail::witness_verifies(q, *c.witness)) return false;
            return true;
        }
        case Certificate::Verdict::Undecided:
            return false;
    }
    return false;
}

}  // namespace freeconvex
