#include <catch2/catch_amalgamated.hpp>

#include "freeconvex/eval.hpp"
#include "freeconvex/parse.hpp"
#include "support/gen.hpp"

using namespace freeconvex;
using fcx_test::random_poly;
using fcx_test::random_symmetric_poly;

namespace {

Mat<Rat> R2(std::initializer_list<std::initializer_list<int>> rows) {
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

TEST_CASE("eval on small exact tuples") {
    // X1 = [[0,1],[1,0]] squares to the identity.
    auto X = SymTuple<Rat>::from_mats({R2({{0, 1}, {1, 0}})});
    CHECK(eval(parse_poly("x1^2", 1), X) == Mat<Rat>::identity(2));

    // X1 = diag(1,-1), X2 = [[0,1],[1,0]] anticommute.
    auto Y = SymTuple<Rat>::from_mats({R2({{1, 0}, {0, -1}}), R2({{0, 1}, {1, 0}})});
    CHECK(eval(parse_poly("x1*x2 + x2*x1", 2), Y) == Mat<Rat>(2, 2));

    // Constant term contributes p(0) = c I.
    CHECK(eval(parse_poly("3 + x1", 1), X) == R2({{3, 1}, {1, 3}}));
}

TEST_CASE("symmetric polynomials take symmetric values") {
    Rng rng(31);
    for (int i = 0; i < 30; ++i) {
        FreePoly p = random_symmetric_poly(2, 4, 5, rng);
        SymTuple<Rat> x = random_rational_tuple(2, 3, rng);
        CHECK(eval(p, x).is_symmetric());
    }
}

TEST_CASE("evaluation is a *-homomorphism (exact)") {
    Rng rng(37);
    for (int i = 0; i < 60; ++i) {
        FreePoly p = random_poly(2, 3, 4, rng);
        FreePoly q = random_poly(2, 3, 4, rng);
        SymTuple<Rat> x = random_rational_tuple(2, 3, rng);
        CHECK(eval(p * q, x) == eval(p, x) * eval(q, x));
        CHECK(eval(p.star(), x) == eval(p, x).transpose());
        CHECK(eval(p + q, x) == eval(p, x) + eval(q, x));
    }
}

TEST_CASE("direct sums") {
    Rng rng(41);
    for (int i = 0; i < 30; ++i) {
        FreePoly p = random_poly(2, 3, 4, rng);
        SymTuple<Rat> x = random_rational_tuple(2, 2, rng);
        SymTuple<Rat> y = random_rational_tuple(2, 3, rng);
        CHECK(eval(p, direct_sum(x, y)) == direct_sum(eval(p, x), eval(p, y)));
        // absorbing a zero-size tuple
        CHECK(direct_sum(x, SymTuple<Rat>(2, 0)) == x);
    }
}

TEST_CASE("k-fold self-sum determinant law") {
    Rng rng(43);
    for (int i = 0; i < 10; ++i) {
        FreePoly q = random_poly(2, 3, 4, rng);
        SymTuple<Rat> x = random_rational_tuple(2, 2, rng);
        std::size_t k = 3;
        Rat d = det_exact(eval(q, x));
        Rat dk = det_exact(eval(q, self_direct_sum(x, k)));
        CHECK(d * d * d == dk);
    }
}

TEST_CASE("spectrum reports") {
    auto rep = spectrum(to_double(Mat<Rat>::identity(3)), 1e-12);
    CHECK(rep.min_eig == Catch::Approx(1.0));
    CHECK(rep.kernel_dim == 0);

    Mat<double> d01(2, 2);
    d01(1, 1) = 1.0;
    rep = spectrum(d01, 1e-12);
    CHECK(rep.kernel_dim == 1);
    CHECK(rep.min_eig == Catch::Approx(0.0).margin(1e-14));

    Mat<double> off(2, 2);
    off(0, 1) = off(1, 0) = 2.0;
    CHECK(min_eig(off) == Catch::Approx(-2.0));
}

TEST_CASE("spectral reconstruction at desk scale") {
    Rng rng(47);
    for (std::size_t n : {3u, 8u, 12u}) {
        SymTuple<double> x = random_gaussian_tuple(1, n, rng);
        auto solver = eigen_sym(x.mats[0]);
        Eigen::MatrixXd rec = solver.eigenvectors() * solver.eigenvalues().asDiagonal() *
                              solver.eigenvectors().transpose();
        CHECK((rec - to_eigen(x.mats[0])).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("random tuples are reproducible and symmetric") {
    Rng a(99), b(99);
    CHECK(random_gaussian_tuple(2, 3, a).mats == random_gaussian_tuple(2, 3, b).mats);
    Rng c(5);
    for (int i = 0; i < 100; ++i) {
        SymTuple<double> x = random_gaussian_tuple(2, 3, c);
        CHECK(x.mats.size() == 2);
        for (const auto& m : x.mats) CHECK(m.is_symmetric());
    }
}

TEST_CASE("randomized zero test") {
    CHECK(randomized_zero_test(FreePoly::zero(2)));

    FreePoly comm = parse_poly("x1*x2 - x2*x1", 2);
    CHECK(randomized_zero_test(comm, 8, 1));        // 1x1 matrices commute
    CHECK_FALSE(randomized_zero_test(comm, 8, 2));  // detected at n = 2

    auto wit = find_nonzero_witness(parse_poly("x1^2", 1));
    REQUIRE(wit.has_value());
    CHECK_FALSE(eval(parse_poly("x1^2", 1), *wit) == Mat<Rat>(wit->n, wit->n));
}

TEST_CASE("positive eigenvalue witness search") {
    auto w = find_positive_eig_witness(parse_poly("x1^2", 1), 2, 16, 1);
    REQUIRE(w.has_value());
    CHECK(w->lambda > 0);
    Eigen::MatrixXd val = to_eigen(eval(parse_poly("x1^2", 1), w->X));
    CHECK((val * w->v - w->lambda * w->v).norm() < 1e-8 * (1 + std::abs(w->lambda)));

    // -p a sum of squares means p(X) is never positive: no witness at any budget
    CHECK_FALSE(find_positive_eig_witness(parse_poly("-x1^2", 1), 3, 32, 1).has_value());
    CHECK_FALSE(find_positive_eig_witness(parse_poly("-x1*x2*x2*x1", 2), 3, 32, 1).has_value());
    CHECK_FALSE(
        find_positive_eig_witness(parse_poly("-(x1 + x2)^2 - x1^4", 2), 3, 32, 1).has_value());

    auto w2 = find_positive_eig_witness(parse_poly("x1*x2 + x2*x1", 2), 2, 32, 1);
    REQUIRE(w2.has_value());
    CHECK(w2->lambda > 0);

    CHECK_THROWS_AS(find_positive_eig_witness(parse_poly("x1*x2", 2), 2, 4, 1),
                    std::invalid_argument);
}

TEST_CASE("evaluator cache agrees with direct evaluation") {
    Rng rng(53);
    SymTuple<Rat> x = random_rational_tuple(2, 3, rng);
    Evaluator<Rat> ev(x);
    for (int i = 0; i < 20; ++i) {
        FreePoly p = random_poly(2, 4, 5, rng);
        CHECK(ev(p) == eval(p, x));
    }
}

TEST_CASE("dimension mismatches throw") {
    SymTuple<Rat> x(1, 2);
    CHECK_THROWS_AS(eval(parse_poly("x1*x2", 2), x), std::invalid_argument);
}
