#pragma once

// Certificate payloads shared by the middle-matrix extractor, the SOS engine
// and the classifier. Squares carry positive rational weights so that exact
// verification never needs algebraic numbers: a pivot d that is not a
// rational square stays as the pair (d, form) and verification checks
// sum d_j form_j* form_j symbolically. Weights that are perfect squares are
// folded into the polynomial.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "freeconvex/poly.hpp"
#include "freeconvex/symtuple.hpp"

namespace freeconvex {

struct WeightedSquare {
    Rat weight{1};  // > 0
    FreePoly poly{1};
};

// Folds sqrt(weight) into the polynomial when the weight is a perfect square.
inline WeightedSquare folded(const Rat& weight, const FreePoly& poly) {
    Rat root;
    if (rat_sqrt_exact(weight, root)) return {Rat(1), root * poly};
    return {weight, poly};
}

// sum_j w_j q_j* q_j, the exact expansion every square-based certificate
// verifies against.
inline FreePoly expand_squares(std::size_t g, const std::vector<WeightedSquare>& squares) {
    FreePoly out(g);
    for (const auto& s : squares) out += s.weight * (s.poly.star() * s.poly);
    return out;
}

// p - p(0) = ell + sum_j w_j s_j* s_j with ell linear, s_j linear.
struct ConvexForm {
    FreePoly ell{1};
    std::vector<WeightedSquare> squares;
};

// -(p - p(0)) = sum_j w_j h_j* h_j.
struct NegSos {
    std::vector<WeightedSquare> squares;
};

// A > 0 with X, Y strictly inside the level set D(A) and the midpoint
// strictly outside; all data rational so the violation re-verifies exactly.
struct NonConvexWitness {
    std::size_t n = 0;
    Mat<Rat> A;
    SymTuple<Rat> X, Y;
};

// Exact evidence that p is not quasi-convex even when no witness was found:
// the middle matrix is not PSD and -p is not a sum of squares.
struct NotQuasiConvex {
    std::optional<NonConvexWitness> witness;
    std::optional<SymTuple<Rat>> sos_refutation_point;  // (-p)(X) has a negative eigenvalue
    bool odd_degree = false;                            // parity already rules out -p SOS
};

struct Undecided {
    bool middle_psd = false;
    std::string sos_outcome;
    double sos_residual = 0;
    std::size_t sos_iterations = 0;
    std::string notes;
};

struct Certificate {
    enum class Verdict { ConvexForm, NegSos, NotQuasiConvex, Undecided };

    Verdict verdict = Verdict::Undecided;
    std::variant<ConvexForm, NegSos, NotQuasiConvex, Undecided> payload = Undecided{};

    static Certificate convex_form(ConvexForm c) {
        return {Verdict::ConvexForm, std::move(c)};
    }
    static Certificate neg_sos(NegSos c) { return {Verdict::NegSos, std::move(c)}; }
    static Certificate not_quasi_convex(NotQuasiConvex c) {
        return {Verdict::NotQuasiConvex, std::move(c)};
    }
    static Certificate undecided(Undecided c) { return {Verdict::Undecided, std::move(c)}; }
};

inline const char* verdict_name(Certificate::Verdict v) {
    switch (v) {
        case Certificate::Verdict::ConvexForm: return "convex-form";
        case Certificate::Verdict::NegSos: return "neg-sos";
        case Certificate::Verdict::NotQuasiConvex: return "not-quasiconvex";
        case Certificate::Verdict::Undecided: return "undecided";
    }
    return "undecided";
}

}  // namespace freeconvex
