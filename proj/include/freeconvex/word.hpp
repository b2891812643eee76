#pragma once

// Words over g freely noncommuting symmetric variables. A word is a finite
// sequence of 1-based variable indices; the empty word is the unit of the
// monoid and the involution is letter reversal.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <vector>

namespace freeconvex {

struct FreeWord {
    std::vector<std::uint32_t> letters;

    FreeWord() = default;
    explicit FreeWord(std::vector<std::uint32_t> ls) : letters(std::move(ls)) {}

    static FreeWord empty() { return FreeWord{}; }
    static FreeWord single(std::uint32_t j) { return FreeWord{{j}}; }

    std::size_t size() const { return letters.size(); }
    bool is_empty() const { return letters.empty(); }

    FreeWord concat(const FreeWord& rhs) const {
        FreeWord out;
        out.letters.reserve(size() + rhs.size());
        out.letters.insert(out.letters.end(), letters.begin(), letters.end());
        out.letters.insert(out.letters.end(), rhs.letters.begin(), rhs.letters.end());
        return out;
    }

    FreeWord reversed() const {
        FreeWord out = *this;
        std::reverse(out.letters.begin(), out.letters.end());
        return out;
    }

    bool operator==(const FreeWord& rhs) const { return letters == rhs.letters; }

    // Length-lexicographic order; this is the canonical term order everywhere.
    std::strong_ordering operator<=>(const FreeWord& rhs) const {
        if (letters.size() != rhs.letters.size())
            return letters.size() <=> rhs.letters.size();
        for (std::size_t i = 0; i < letters.size(); ++i)
            if (letters[i] != rhs.letters[i]) return letters[i] <=> rhs.letters[i];
        return std::strong_ordering::equal;
    }
};

inline FreeWord operator*(const FreeWord& a, const FreeWord& b) { return a.concat(b); }

inline FreeWord word_star(const FreeWord& w) { return w.reversed(); }

}  // namespace freeconvex
