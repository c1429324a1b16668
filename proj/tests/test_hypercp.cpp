#include <doctest.h>

#include <spectradual/hypercp.hpp>

using namespace spectradual;

TEST_CASE("hypergraph validation") {
    CHECK_THROWS_AS(Hypergraph(0, {{{0}, 1.0}}), DomainError);
    CHECK_THROWS_AS(Hypergraph(3, {}), DomainError);
    CHECK_THROWS_AS(Hypergraph(3, {{{}, 1.0}}), DomainError);
    CHECK_THROWS_AS(Hypergraph(3, {{{0, 0}, 1.0}}), DomainError);
    CHECK_THROWS_AS(Hypergraph(3, {{{0, 3}, 1.0}}), DomainError);
    CHECK_THROWS_AS(Hypergraph(3, {{{0, 1}, 0.0}}), DomainError);
    Hypergraph H(3, {{{2, 0}, 1.0}});
    CHECK(H.edges()[0].nodes == std::vector<long>{0, 2});
}

TEST_CASE("objective is a weighted sum of restricted norms") {
    Hypergraph H(4, {{{0, 1, 2}, 2.0}, {{2, 3}, 1.0}});
    Vec x(4);
    x << 1, -2, 2, 0.5;
    CHECK(cp_objective(H, 2.0).eval(x) == doctest::Approx(2.0 * 3.0 + std::sqrt(4.25)));
    CHECK(cp_objective(H, 1.0).eval(x) == doctest::Approx(2.0 * 5.0 + 2.5));
    CHECK(cp_objective(H, kInf).eval(x) == doctest::Approx(2.0 * 2.0 + 2.0));
}

TEST_CASE("single edge") {
    Hypergraph H(2, {{{0, 1}, 1.0}});
    auto cs = cp_scores_with_duals(H, 2.0, 2.0);
    CHECK(cs.primal.lambda == doctest::Approx(1.0));
    CHECK(cs.contracted.lambda == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(cs.lifted.lambda == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("one hyperedge with q = 1 gives the square root of its size") {
    Hypergraph H(5, {{{0, 1, 2, 3, 4}, 1.0}});
    auto e = cp_scores(H, 2.0, 1.0);
    CHECK(e.lambda == doctest::Approx(std::sqrt(5.0)).epsilon(1e-10));
    CHECK(e.verified);
}

TEST_CASE("graph with q = 1 scores follow the degrees") {
    // f(x) = Σ_i d_i |x_i| is maximized on the Euclidean sphere at x ∝ d.
    Hypergraph H(4, {{{0, 1}, 1.0}, {{0, 2}, 1.0}, {{0, 3}, 2.0}, {{2, 3}, 1.0}});
    Vec d(4);
    d << 4, 1, 2, 3;
    auto e = cp_scores(H, 2.0, 1.0);
    CHECK(e.lambda == doctest::Approx(d.norm()).epsilon(1e-10));
    CHECK((e.x - d / d.norm()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("dual forms agree with the primal") {
    Hypergraph H(5, {{{0, 1, 2}, 1.0}, {{1, 3}, 2.0}, {{2, 3, 4}, 1.0}});
    for (double q : {1.0, 2.0, kInf}) {
        CAPTURE(q);
        auto cs = cp_scores_with_duals(H, 2.0, q);
        CHECK(cs.contracted.lambda == doctest::Approx(cs.primal.lambda).epsilon(1e-6));
        CHECK(cs.lifted.lambda == doctest::Approx(cs.primal.lambda).epsilon(1e-6));
    }
}

TEST_CASE("exponent errors") {
    Hypergraph H(2, {{{0, 1}, 1.0}});
    CHECK_THROWS_AS(cp_objective(H, 0.5), DomainError);
    CHECK_THROWS_AS(cp_scores(H, 1.0, 2.0), DomainError);
    CHECK_THROWS_AS(cp_lifted_dual(H, 1.0, 2.0), DomainError);
}
