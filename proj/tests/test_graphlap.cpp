#include <doctest.h>

#include "oracles.hpp"

#include <spectradual/graphlap.hpp>
#include <spectradual/subdiff.hpp>

using namespace spectradual;

TEST_CASE("graph validation") {
    CHECK_THROWS_AS(Graph(0, {}), DomainError);
    CHECK_THROWS_AS(Graph(2, {{0, 0, 1.0}}), DomainError);
    CHECK_THROWS_AS(Graph(2, {{0, 2, 1.0}}), DomainError);
    CHECK_THROWS_AS(Graph(2, {{0, 1, -1.0}}), DomainError);
    CHECK_THROWS_AS(Graph(3, {{0, 1, 1.0}, {1, 0, 2.0}}), DomainError);
    CHECK_THROWS_AS(laplacian_pair(path_graph(3), 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(laplacian_pair(Graph(2, {}), 1.0, 1.0), DomainError);
}

TEST_CASE("incidence rows carry the weight") {
    Graph G(3, {{0, 1, 2.0}, {1, 2, 0.5}});
    Mat K = incidence_matrix(G);
    CHECK(K(0, 0) == 2.0);
    CHECK(K(0, 1) == -2.0);
    CHECK(K(1, 2) == -0.5);
    CHECK((K.transpose() * K - oracle::laplacian(G)).norm() < 1e-14);
}

TEST_CASE("path with four nodes") {
    Graph P4 = path_graph(4);
    CHECK(diameter(P4) == 3);
    CHECK(maxcut(P4).value == 3.0);
    CHECK(mincut(P4).value == 1.0);
    auto h = cheeger(P4, 2);
    CHECK(h.value == doctest::Approx(0.5));
    REQUIRE(h.sets.size() == 2);
    CHECK(h.sets[0].size() == 2);
}

TEST_CASE("triangle and five-cycle cuts") {
    CHECK(maxcut(complete_graph(3)).value == 2.0);
    CHECK(mincut(complete_graph(3)).value == 2.0);
    CHECK(maxcut(cycle_graph(5)).value == 4.0);
    CHECK(mincut(cycle_graph(5)).value == 2.0);
    CHECK(diameter(cycle_graph(5)) == 2);
}

TEST_CASE("disconnected graphs") {
    Graph G(4, {{0, 1, 1.0}, {2, 3, 1.0}});
    CHECK_FALSE(connected(G));
    CHECK(components(G).size() == 2);
    CHECK(mincut(G).value == 0.0);
    CHECK(bfs_distances(G, 0)[2] == kUnreachable);
}

TEST_CASE("ball sizes and the inscribed ball bound") {
    Graph P5 = path_graph(5);
    CHECK(ball_size(P5, 1, 2) == 4.0);
    CHECK(ball_size(P5, 2, 1) == 1.0);
    auto b = inscribed_ball_bound(P5, 1);
    CHECK(b.value == doctest::Approx(0.25));
    REQUIRE(b.balls.size() == 1);
    CHECK(b.balls[0].radius == 2);
    CHECK_THROWS_AS(ball_size(P5, 9, 1), DimensionError);
}

TEST_CASE("the diameter candidate certifies on the max-max pair") {
    for (long n = 2; n <= 6; ++n) {
        Graph G = path_graph(n);
        auto c = infty_eigvec_candidate(G);
        CHECK(c.lambda == doctest::Approx(2.0 / static_cast<double>(n - 1)));
        auto P = laplacian_pair(G, kInf, kInf);
        CHECK(verify_eigenpair(P.f, P.g, c.lambda, c.x).feasible);
    }
}

TEST_CASE("size limits") {
    Graph big = path_graph(30);
    CHECK_THROWS_AS(cheeger(big, 2), SizeLimitError);
    CHECK_THROWS_AS(maxcut(big), SizeLimitError);
    CHECK_THROWS_AS(all_trees(10), SizeLimitError);
    CHECK_THROWS_AS(cheeger(path_graph(4), 1), DomainError);
}

TEST_CASE("tree enumeration counts") {
    const long counts[] = {1, 1, 1, 2, 3, 6, 11, 23, 47};
    for (long n = 1; n <= 9; ++n) CHECK(static_cast<long>(all_trees(n).size()) == counts[n - 1]);
}

TEST_CASE("oracles agree with independent enumeration") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 40; ++t) {
        long n = 2 + static_cast<long>(rng() % 6);
        Graph G = oracle::random_connected(rng, n, 0.4, t % 2 == 1);
        CAPTURE(t);
        CHECK(maxcut(G).value == doctest::Approx(oracle::maxcut(G)));
        CHECK(mincut(G).value == doctest::Approx(oracle::mincut(G)));
        CHECK(cut_value(G, maxcut(G).set) == doctest::Approx(oracle::maxcut(G)));
        CHECK(diameter(G) == oracle::diameter(G));
        auto D = all_distances(G);
        auto H = oracle::hops(G);
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) CHECK(D[i][j] == H[i][j]);
        if (n <= 6) CHECK(cheeger(G, 2).value == doctest::Approx(oracle::cheeger2(G)));
    }
}

TEST_CASE("multiway bound dominates maxcut") {
    // With k = n every node is its own block.
    std::mt19937_64 rng(11);
    for (int t = 0; t < 10; ++t) {
        long n = 3 + static_cast<long>(rng() % 4);
        Graph G = oracle::random_connected(rng, n, 0.5, false);
        auto m = multiway_maxcut_bound(G, static_cast<int>(n));
        CHECK(m.value == doctest::Approx(2.0 * oracle::maxcut(G)));
    }
}

TEST_CASE("five dual forms on the path") {
    auto P = laplacian_pair(path_graph(4), 1.0, 1.0);
    auto forms = dual_forms(P);
    REQUIRE(forms.size() == 4);
    CHECK(forms[0].f.dim() == 4);
    CHECK(forms[1].f.dim() == 3);
    CHECK(forms[2].f.dim() == 3);
}
