#pragma once

// Text grammar for free polynomials, the wire format of the CLI and of
// certificate files:
//
//   expr     := ['-'] term (('+'|'-') term)*
//   term     := factor ('*' factor)*
//   factor   := primary ('^' natural)*
//   primary  := rational | var | '(' expr ')'
//   rational := natural ('/' natural)?
//   var      := 'x' natural            (1-based, <= g)
//
// '^' binds tighter than '*', '*' is mandatory between factors, whitespace is
// insignificant. The h-extended variant additionally accepts 'h' natural,
// mapped to letters g+1..2g; it is what the calculus layer prints.

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>

#include "freeconvex/poly.hpp"

namespace freeconvex {

struct ParseError : std::runtime_error {
    std::size_t pos;
    ParseError(const std::string& what, std::size_t at)
        : std::runtime_error(what + " (at position " + std::to_string(at) + ")"), pos(at) {}
};

namespace detail {

class Parser {
public:
    Parser(std::string_view src, std::size_t g, bool allow_h)
        : src_(src), g_(g), allow_h_(allow_h) {}

    FreePoly run() {
        FreePoly p = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected trailing input");
        return p;
    }

private:
    std::size_t vars() const { return allow_h_ ? 2 * g_ : g_; }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    Int natural() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected a number");
        return Int(std::string(src_.substr(start, pos_ - start)));
    }

    FreePoly expr() {
        bool neg = eat('-');
        FreePoly p = term();
        if (neg) p = -p;
        for (;;) {
            if (eat('+')) {
                bool n2 = eat('-');
                FreePoly q = term();
                p += n2 ? -q : q;
            } else if (eat('-')) {
                p -= term();
            } else {
                return p;
            }
        }
    }

    // Expansion guard: (x1+x2)^k style inputs grow exponentially.
    static constexpr std::size_t kMaxTerms = 200000;

    void check_size(const FreePoly& p) {
        if (p.terms().size() > kMaxTerms) fail("expression expands to too many terms");
    }

    FreePoly term() {
        FreePoly p = factor();
        while (eat('*')) {
            p = p * factor();
            check_size(p);
        }
        return p;
    }

    FreePoly factor() {
        FreePoly p = primary();
        while (eat('^')) {
            Int e = natural();
            if (e > 64) fail("exponent too large");
            FreePoly out = FreePoly::constant(vars(), 1);
            for (Int i = 0; i < e; ++i) {
                out = out * p;
                check_size(out);
            }
            p = out;
        }
        return p;
    }

    FreePoly primary() {
        char c = peek();
        if (c == '(') {
            eat('(');
            FreePoly p = expr();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        if (c == 'x' || (allow_h_ && c == 'h')) {
            ++pos_;
            std::size_t at = pos_;
            Int idx = natural();
            if (idx < 1 || idx > Int(g_))
                throw ParseError("variable index out of range 1.." + std::to_string(g_), at);
            std::uint32_t letter = static_cast<std::uint32_t>(idx);
            if (c == 'h') letter += static_cast<std::uint32_t>(g_);
            return FreePoly::variable(vars(), letter);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Int num = natural();
            if (eat('/')) {
                Int den = natural();
                if (den == 0) fail("zero denominator");
                return FreePoly::constant(vars(), Rat(num, den));
            }
            return FreePoly::constant(vars(), Rat(num));
        }
        fail("expected a factor");
    }

    std::string_view src_;
    std::size_t g_;
    bool allow_h_;
    std::size_t pos_ = 0;
};

// Appends one word, compressing runs of a repeated letter into powers.
inline void print_word(std::ostringstream& out, const FreeWord& w, std::size_t g_split) {
    std::size_t i = 0;
    bool first = true;
    while (i < w.letters.size()) {
        std::size_t j = i;
        while (j < w.letters.size() && w.letters[j] == w.letters[i]) ++j;
        if (!first) out << "*";
        first = false;
        std::uint32_t l = w.letters[i];
        if (g_split > 0 && l > g_split)
            out << "h" << (l - g_split);
        else
            out << "x" << l;
        if (j - i > 1) out << "^" << (j - i);
        i = j;
    }
}

inline std::string print_poly_impl(const FreePoly& p, std::size_t g_split) {
    if (p.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [w, c] : p.terms()) {
        Rat a = c;
        if (first) {
            if (a < 0) {
                out << "-";
                a = -a;
            }
        } else {
            out << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        if (w.is_empty()) {
            out << rat_to_string(a);
        } else {
            if (a != 1) out << rat_to_string(a) << "*";
            print_word(out, w, g_split);
        }
    }
    return out.str();
}

}  // namespace detail

inline FreePoly parse_poly(std::string_view src, std::size_t g) {
    return detail::Parser(src, g, false).run();
}

// Parses over 2g letters with 'h' variables mapped to g+1..2g.
inline FreePoly parse_poly_xh(std::string_view src, std::size_t g) {
    return detail::Parser(src, g, true).run();
}

inline std::string print_poly(const FreePoly& p) {
    return detail::print_poly_impl(p, 0);
}

// Printer for polynomials over 2g letters; letters above g print as 'h'.
inline std::string print_poly_xh(const FreePoly& p, std::size_t g) {
    return detail::print_poly_impl(p, g);
}

inline std::string print_word(const FreeWord& w, std::size_t g_split = 0) {
    if (w.is_empty()) return "1";
    std::ostringstream out;
    detail::print_word(out, w, g_split);
    return out.str();
}

}  // namespace freeconvex
