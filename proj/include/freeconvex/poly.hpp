#pragma once

// Sparse free polynomials with exact rational coefficients. Terms live in a
// length-lex ordered map and zero coefficients are never stored, so equality
// of canonical forms is plain container equality.

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "freeconvex/rational.hpp"
#include "freeconvex/word.hpp"

namespace freeconvex {

class FreePoly {
public:
    using TermMap = std::map<FreeWord, Rat>;

    explicit FreePoly(std::size_t g) : g_(g) {
        if (g == 0) throw std::invalid_argument("variable count must be >= 1");
    }

    static FreePoly zero(std::size_t g) { return FreePoly(g); }

    static FreePoly constant(std::size_t g, const Rat& c) {
        FreePoly p(g);
        p.add_term(FreeWord::empty(), c);
        return p;
    }

    static FreePoly variable(std::size_t g, std::uint32_t j) {
        return monomial(g, FreeWord::single(j), 1);
    }

    static FreePoly monomial(std::size_t g, const FreeWord& w, const Rat& c) {
        FreePoly p(g);
        for (auto l : w.letters)
            if (l == 0 || l > g) throw std::out_of_range("letter outside 1..g");
        p.add_term(w, c);
        return p;
    }

    std::size_t g() const { return g_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rat coeff(const FreeWord& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    Rat constant_term() const { return coeff(FreeWord::empty()); }

    void add_term(const FreeWord& w, const Rat& c) {
        if (c == 0) return;
        auto [it, fresh] = terms_.emplace(w, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    // degree(0) is minus infinity, represented as an empty optional so it can
    // never leak into index arithmetic.
    std::optional<int> degree() const {
        if (terms_.empty()) return std::nullopt;
        return static_cast<int>(terms_.rbegin()->first.size());
    }

    int degree_or(int fallback) const { return degree().value_or(fallback); }

    FreePoly star() const {
        FreePoly out(g_);
        for (const auto& [w, c] : terms_) out.add_term(word_star(w), c);
        return out;
    }

    bool is_symmetric() const { return *this == star(); }

    FreePoly homogeneous_part(std::size_t j) const {
        FreePoly out(g_);
        for (const auto& [w, c] : terms_)
            if (w.size() == j) out.add_term(w, c);
        return out;
    }

    // p = sum of components, components[j] homogeneous of degree j.
    // The zero polynomial splits into an empty list.
    std::vector<FreePoly> degree_split() const {
        auto d = degree();
        if (!d) return {};
        std::vector<FreePoly> out(static_cast<std::size_t>(*d) + 1, FreePoly(g_));
        for (const auto& [w, c] : terms_) out[w.size()].add_term(w, c);
        return out;
    }

    FreePoly& operator+=(const FreePoly& rhs) {
        require_same_g(rhs);
        for (const auto& [w, c] : rhs.terms_) add_term(w, c);
        return *this;
    }

    FreePoly& operator-=(const FreePoly& rhs) {
        require_same_g(rhs);
        for (const auto& [w, c] : rhs.terms_) add_term(w, -c);
        return *this;
    }

    friend FreePoly operator+(FreePoly a, const FreePoly& b) { return a += b; }
    friend FreePoly operator-(FreePoly a, const FreePoly& b) { return a -= b; }

    friend FreePoly operator*(const FreePoly& a, const FreePoly& b) {
        a.require_same_g(b);
        FreePoly out(a.g_);
        for (const auto& [wa, ca] : a.terms_)
            for (const auto& [wb, cb] : b.terms_) out.add_term(wa * wb, ca * cb);
        return out;
    }

    friend FreePoly operator*(const Rat& c, const FreePoly& p) {
        FreePoly out(p.g_);
        if (c == 0) return out;
        for (const auto& [w, k] : p.terms_) out.terms_.emplace(w, c * k);
        return out;
    }

    friend FreePoly operator*(const FreePoly& p, const Rat& c) { return c * p; }
    friend FreePoly operator-(const FreePoly& p) { return Rat(-1) * p; }

    FreePoly pow(std::size_t e) const {
        FreePoly out = constant(g_, 1);
        for (std::size_t i = 0; i < e; ++i) out = out * *this;
        return out;
    }

    bool operator==(const FreePoly& rhs) const {
        return g_ == rhs.g_ && terms_ == rhs.terms_;
    }

private:
    void require_same_g(const FreePoly& rhs) const {
        if (g_ != rhs.g_) throw std::invalid_argument("mismatched variable counts");
    }

    std::size_t g_;
    TermMap terms_;
};

inline FreePoly poly_star(const FreePoly& p) { return p.star(); }

}  // namespace freeconvex
