#include <catch2/catch_amalgamated.hpp>

#include "freeconvex/ldl.hpp"
#include "freeconvex/spectra.hpp"
#include "freeconvex/symtuple.hpp"
#include "support/gen.hpp"

using namespace freeconvex;

namespace {
Mat<Rat> M(std::initializer_list<std::initializer_list<int>> rows) {
    Mat<Rat> m(rows.size(), rows.begin()->size());
    std::size_t i = 0;
    for (auto& r : rows) {
        std::size_t j = 0;
        for (auto v : r) m(i, j++) = v;
        ++i;
    }
    return m;
}
}  // namespace

TEST_CASE("psd check on pinned matrices") {
    CHECK_FALSE(psd_check_exact(M({{0, 2}, {2, 0}})));
    CHECK(psd_check_exact(M({{1, 1}, {1, 1}})));
    CHECK(psd_check_exact(M({{0, 0}, {0, 1}})));  // zero pivot with zero row
    CHECK_FALSE(psd_check_exact(M({{0, 1}, {1, 1}})));
    CHECK_FALSE(psd_check_exact(M({{-1}})));
    CHECK(psd_check_exact(Mat<Rat>(0, 0)));
    CHECK(pd_check_exact(M({{2, 1}, {1, 2}})));
    CHECK_FALSE(pd_check_exact(M({{1, 1}, {1, 1}})));
}

TEST_CASE("factorization reconstructs exactly") {
    Rng rng(103);
    for (int i = 0; i < 40; ++i) {
        // random PSD: B^T B over rationals
        std::size_t n = 1 + static_cast<std::size_t>(rng.uniform_int(0, 4));
        SymTuple<Rat> b = random_rational_tuple(1, n, rng, 5);
        Mat<Rat> psd = b.mats[0] * b.mats[0];
        LdlResult r = ldlt_psd(psd);
        REQUIRE(r.psd);
        CHECK(ldlt_reconstruct(r) == psd);
        for (const auto& d : r.d) CHECK(d > 0);
    }
}

TEST_CASE("psd verdict agrees with float eigenvalues away from the margin") {
    Rng rng(107);
    for (int i = 0; i < 40; ++i) {
        std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(0, 3));
        SymTuple<Rat> s = random_rational_tuple(1, n, rng, 5);
        double lo = min_eig(to_double(s.mats[0]));
        if (std::abs(lo) < 1e-6) continue;
        CHECK(psd_check_exact(s.mats[0]) == (lo > 0));
    }
}

TEST_CASE("rank deficient psd") {
    // rank-1 projector scaled by 3
    Mat<Rat> p = M({{3, 3}, {3, 3}});
    LdlResult r = ldlt_psd(p);
    CHECK(r.psd);
    CHECK_FALSE(r.pd);
    CHECK(r.rank == 1);
    CHECK(ldlt_reconstruct(r) == p);
}
