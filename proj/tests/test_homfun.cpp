#include <doctest.h>

#include "oracles.hpp"

#include <spectradual/homfun.hpp>

using namespace spectradual;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }
Vec v3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }

}  // namespace

TEST_CASE("lp atoms at a fixed point") {
    Vec x = v3(1, -2, 3);
    CHECK(l1(3).eval(x) == doctest::Approx(6.0));
    CHECK(l2(3).eval(x) == doctest::Approx(3.7416573867739413));
    CHECK(lp_norm(3, kInf).eval(x) == doctest::Approx(3.0));
    CHECK(linfty_max(3).eval(x) == doctest::Approx(3.0));
    CHECK(lp_norm(3, 3.0).eval(x) == doctest::Approx(oracle::pnorm(x, 3.0)));
    Vec w = v3(1, 2, 0.5);
    CHECK(weighted_lp(w, 1.5).eval(x) == doctest::Approx(oracle::pnorm(Vec(w.cwiseProduct(x)), 1.5)));
}

TEST_CASE("conjugate exponents") {
    CHECK(conjugate_exponent(1.0) == kInf);
    CHECK(conjugate_exponent(kInf) == 1.0);
    CHECK(conjugate_exponent(2.0) == 2.0);
    CHECK(conjugate_exponent(3.0) == doctest::Approx(1.5));
}

TEST_CASE("dual of an lp norm is the conjugate norm") {
    Vec y = v3(0.3, -1.7, 2.2);
    CHECK(dual(l1(3)).eval(y) == doctest::Approx(2.2));
    CHECK(dual(lp_norm(3, kInf)).eval(y) == doctest::Approx(4.2));
    CHECK(dual(l2(3)).eval(y) == doctest::Approx(y.norm()));
    CHECK(dual(lp_norm(3, 3.0)).eval(y) == doctest::Approx(oracle::pnorm(y, 1.5)).epsilon(1e-9));
    Vec w = v3(1, 2, 4);
    CHECK(dual(weighted_lp(w, 4.0)).eval(y) == doctest::Approx(oracle::pnorm(Vec(y.cwiseQuotient(w)), 4.0 / 3.0)).epsilon(1e-9));
}

TEST_CASE("dual ignores the kernel directions") {
    HomFun f = weighted_lp(v3(1, 0, 2), 2.0);
    REQUIRE(f.kernel_basis().cols() == 1);
    // sup over x ⊥ e2 with x1² + 4x3² ≤ 1.
    CHECK(dual(f).eval(v3(3, 7, 4)) == doctest::Approx(std::sqrt(13.0)));
    CHECK(dual(f).eval(v3(3, -100, 4)) == doctest::Approx(std::sqrt(13.0)));
}

TEST_CASE("pullback kernel is the preimage of the kernel") {
    Mat A(1, 2);
    A << 1, -1;
    HomFun f = pullback(l1(1), A);
    REQUIRE(f.kernel_basis().cols() == 1);
    Vec k = f.kernel_basis().col(0);
    CHECK(std::abs(k(0) - k(1)) < 1e-12);
    CHECK(f.eval(v2(2, -1)) == doctest::Approx(3.0));
}

TEST_CASE("polytope descriptions of the square and the diamond") {
    Mat V(2, 2);
    V << 1, 1, 1, -1;
    // Hull of ±(1,1), ±(1,−1) is the square; its support function is ℓ1.
    CHECK(hull_gauge(V).eval(v2(0.5, -2)) == doctest::Approx(2.0));
    CHECK(support_function(V).eval(v2(0.5, -2)) == doctest::Approx(2.5));
    CHECK(polytope_gauge(V).eval(v2(0.5, -2)) == doctest::Approx(2.5));
}

TEST_CASE("pushforward is an infimal postcomposition") {
    Mat A(1, 2);
    A << 1, 1;
    Vec y(1);
    y << 3.0;
    CHECK(pushforward(l1(2), A).eval(y) == doctest::Approx(3.0));
    CHECK(pushforward(l2(2), A).eval(y) == doctest::Approx(3.0 / std::sqrt(2.0)));
}

TEST_CASE("composite norm evaluates outer on inner values") {
    HomFun c = composite_norm(l2(2), {l1(2), lp_norm(2, kInf)}, {LinearMap::identity(2), LinearMap::identity(2)});
    CHECK(c.eval(v2(1, -2)) == doctest::Approx(std::sqrt(13.0)));
}

TEST_CASE("scale and power") {
    Vec x = v2(3, 4);
    CHECK(scale(l2(2), 2.5).eval(x) == doctest::Approx(12.5));
    CHECK(power(l2(2), 2.0).eval(x) == doctest::Approx(25.0));
    CHECK(power(l2(2), 2.0).degree() == doctest::Approx(2.0));
    CHECK(dual(scale(l1(2), 4.0)).eval(x) == doctest::Approx(1.0));
}

TEST_CASE("legendre and polarity of euclidean functions") {
    Vec x = v2(3, 4);
    HomFun half_sq = scale(power(l2(2), 2.0), 0.5);
    CHECK(legendre(half_sq).eval(x) == doctest::Approx(12.5));
    CHECK(polarity(l2(2)).eval(x) == doctest::Approx(5.0));
    // sup_y (⟨x,y⟩ − 1)/‖y‖² = ‖x‖²/4.
    CHECK(polarity(power(l2(2), 2.0)).eval(v2(1, 2)) == doctest::Approx(1.25));
}

TEST_CASE("domain and dimension errors") {
    CHECK_THROWS_AS(lp_norm(3, 0.5), DomainError);
    CHECK_THROWS_AS(weighted_lp(v2(1, -1), 2.0), DomainError);
    CHECK_THROWS_AS(scale(l1(2), 0.0), DomainError);
    CHECK_THROWS_AS(power(l1(2), 0.5), DomainError);
    CHECK_THROWS_AS(legendre(l1(2)), DomainError);
    CHECK_THROWS_AS(pullback(l1(3), LinearMap::identity(2)), DimensionError);
    CHECK_THROWS_AS(l1(3).eval(v2(1, 1)), DimensionError);
}
