#pragma once

// Exact rational scalar type and conversion helpers. All certificate-bearing
// arithmetic in this library runs over Rat; doubles appear only in the
// numeric (spectral / projection) layers.

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace freeconvex {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline std::string rat_to_string(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline double rat_to_double(const Rat& r) { return static_cast<double>(r); }

// Accepts "p", "-p", "p/q" with optional sign on the numerator.
inline Rat parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rat(num, den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("malformed rational: \"" + s + "\"");
    }
}

// Floor of an exact rational.
inline Int rat_floor(const Rat& r) {
    Int q = numerator(r) / denominator(r);
    if (r < 0 && q * denominator(r) != numerator(r)) --q;
    return q;
}

// Best rational approximation with denominator <= max_den, by walking the
// continued fraction of the (exactly converted) input.
inline Rat rat_from_double(double x, const Int& max_den = Int(1000000)) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
    Rat target(x);  // dyadic, exact
    Int h0 = 0, k0 = 1, h1 = 1, k1 = 0;
    Rat y = target;
    for (int it = 0; it < 128; ++it) {
        Int a = rat_floor(y);
        Int h2 = a * h1 + h0, k2 = a * k1 + k0;
        if (k2 > max_den) {
            // semiconvergent with the largest admissible coefficient
            Int t = (max_den - k0) / k1;
            Int hs = t * h1 + h0, ks = t * k1 + k0;
            Rat conv(h1, k1), semi(hs, ks);
            return abs(target - conv) <= abs(target - semi) ? conv : semi;
        }
        h0 = h1; k0 = k1; h1 = h2; k1 = k2;
        Rat frac = y - Rat(a);
        if (frac == 0) break;
        y = Rat(1) / frac;
    }
    return Rat(h1, k1);
}

// Exact square root when r is a perfect square of a rational.
inline bool rat_sqrt_exact(const Rat& r, Rat& out) {
    if (r < 0) return false;
    Int n = numerator(r), d = denominator(r);
    Int sn = sqrt(n), sd = sqrt(d);
    if (sn * sn != n || sd * sd != d) return false;
    out = Rat(sn, sd);
    return true;
}

}  // namespace freeconvex
