#include <doctest.h>

#include <spectradual/graphlap.hpp>
#include <spectradual/subdiff.hpp>

using namespace spectradual;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }
Vec v3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }

}  // namespace

TEST_CASE("l1 subdifferential is a box") {
    SubdiffSet S = subdiff_at(l1(3), v3(1, 0, -2));
    CHECK(contains(S, v3(1, 0.3, -1)));
    CHECK(contains(S, v3(1, -1, -1)));
    CHECK_FALSE(contains(S, v3(1, 1.2, -1)));
    CHECK_FALSE(contains(S, v3(0.5, 0, -1)));
}

TEST_CASE("smooth points have the gradient only") {
    SubdiffSet S = subdiff_at(l2(2), v2(3, 4));
    CHECK(contains(S, v2(0.6, 0.8)));
    CHECK_FALSE(contains(S, v2(0.8, 0.6)));
}

TEST_CASE("max norm at a tie is a segment") {
    SubdiffSet S = subdiff_at(lp_norm(2, kInf), v2(2, 2));
    CHECK(contains(S, v2(0.5, 0.5)));
    CHECK(contains(S, v2(1, 0)));
    CHECK_FALSE(contains(S, v2(0.6, 0.6)));
    CHECK_FALSE(contains(S, v2(-0.5, 1.5)));
}

TEST_CASE("single edge eigenpair") {
    auto P = laplacian_pair(path_graph(2), 1.0, 1.0);
    auto c = verify_eigenpair(P.f, P.g, 1.0, v2(1, 0));
    CHECK(c.feasible);
    CHECK(c.exact);
    CHECK_FALSE(verify_eigenpair(P.f, P.g, 0.5, v2(1, 0)).feasible);
    CHECK_FALSE(verify_eigenpair(P.f, P.g, 1.0, v2(1, 1)).feasible);
}

TEST_CASE("transfer on the single edge lands on a dual eigenpair") {
    auto P = laplacian_pair(path_graph(2), 1.0, 1.0);
    Vec u = transfer(P.f, P.g, 1.0, v2(1, 0));
    CHECK(verify_eigenpair(dual(P.g), dual(P.f), 1.0, u, 1e-7).feasible);
}

TEST_CASE("kernel obstruction on the path with three nodes") {
    // (2, e_2) is an eigenpair of (‖Kx‖₁, ‖x‖₁), yet 2 is not an eigenvalue of
    // the kernel-projected dual pair: every u with ∂𝒟g(u) ∩ 2∂𝒟f(u) ≠ ∅ would need
    // a point orthogonal to the constants in the eigenvector face, and none exists.
    auto P = laplacian_pair(path_graph(3), 1.0, 1.0);
    Vec x = v3(0, 1, 0);
    REQUIRE(verify_eigenpair(P.f, P.g, 2.0, x).feasible);
    Vec u = transfer(P.f, P.g, 2.0, x);
    CHECK(u.isApprox(v3(-0.5, 1, -0.5), 1e-9));
    CHECK_FALSE(verify_eigenpair(dual(P.g), dual(P.f), 2.0, u, 1e-7).feasible);
    // The eigenvalue 1 of the same pair does transfer.
    Vec x1 = v3(1, 0, 0);
    REQUIRE(verify_eigenpair(P.f, P.g, 1.0, x1).feasible);
    CHECK(verify_eigenpair(dual(P.g), dual(P.f), 1.0, transfer(P.f, P.g, 1.0, x1), 1e-7).feasible);
}

TEST_CASE("transfer rejects what it cannot cover") {
    auto P = laplacian_pair(path_graph(2), 1.0, 1.0);
    CHECK_THROWS_AS(transfer(P.f, P.g, 0.0, v2(1, 0)), DomainError);
    CHECK_THROWS_AS(transfer(P.f, P.g, 0.7, v2(1, 0)), DomainError);
    CHECK(spectrum_is_everything(P.f, P.f));
    CHECK_FALSE(spectrum_is_everything(P.f, P.g));
}

TEST_CASE("eigenvalue factors") {
    CHECK(scale_eigenvalue(2.0, 1.0, 1.0, 1.0, 1.0, 2.0, 2.0) == doctest::Approx(2.0));
    CHECK(scale_eigenvalue(2.0, 3.0, 1.0, 1.0, 1.0, 2.0, 1.0) == doctest::Approx(12.0));
    CHECK(polarity_factor(2.0, 2.0) == doctest::Approx(1.0));
    CHECK(polarity_factor(1.0, 1.0) == doctest::Approx(1.0));
    CHECK(polarity_factor(3.0, 2.0) == doctest::Approx(1.5 / 4.0));
    CHECK_THROWS_AS(scale_eigenvalue(0.0, 1.0, 1.0, 1.0, 1.0, 2.0, 2.0), DomainError);
}
