#include <doctest.h>

#include "oracles.hpp"

#include <spectradual/eigsolve.hpp>
#include <spectradual/graphlap.hpp>
#include <spectradual/selftest.hpp>

#include <Eigen/Eigenvalues>

using namespace spectradual;

namespace {

SolveConfig exhaustive(long n, bool maximize) {
    SolveConfig c;
    c.seed = 3;
    c.starts = maximize ? selftest::detail::sign_vectors(n) : selftest::detail::indicator_vectors(n);
    return c;
}

}  // namespace

TEST_CASE("single edge") {
    auto P = laplacian_pair(path_graph(2), 1.0, 1.0);
    auto mx = power_max(P.f, P.g);
    CHECK(mx.lambda == doctest::Approx(1.0));
    CHECK(mx.verified);
    auto mn = ratiodca_min(P.f, P.g);
    CHECK(mn.lambda == doctest::Approx(1.0));
    CHECK(mn.verified);
}

TEST_CASE("second eigenvalue of the path is its Cheeger constant") {
    auto P = laplacian_pair(path_graph(4), 1.0, 1.0);
    auto e = ratiodca_min(P.f, P.g, exhaustive(4, false));
    CHECK(e.lambda == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(e.verified);
}

TEST_CASE("triangle maxcut on the edge-one node-max pair") {
    // Indicator vectors of S give f/g = 2 cut(S); the triangle's maxcut is 2.
    auto P = laplacian_pair(complete_graph(3), 1.0, kInf);
    auto e = power_max(P.f, P.g, exhaustive(3, true));
    CHECK(e.lambda == doctest::Approx(4.0));
    CHECK(e.verified);
    CHECK(selftest::maxcut_calibration() == doctest::Approx(2.0));
}

TEST_CASE("single edge on the max-max pair") {
    auto P = laplacian_pair(path_graph(2), kInf, kInf);
    auto e = ratiodca_min(P.f, P.g, exhaustive(2, false));
    CHECK(e.lambda == doctest::Approx(2.0));
    CHECK(e.verified);
}

TEST_CASE("l1 against l2") {
    auto e = power_max(l1(5), l2(5));
    CHECK(e.lambda == doctest::Approx(std::sqrt(5.0)).epsilon(1e-10));
    CHECK(e.verified);
    auto m = ratiodca_min(l1(5), l2(5));
    CHECK(m.lambda == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rayleigh(l1(2), l2(2), (Vec(2) << 1, 1).finished()) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("euclidean pair follows the linear Laplacian") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 6; ++t) {
        long n = 3 + static_cast<long>(rng() % 4);
        Graph G = oracle::random_connected(rng, n, 0.4, true);
        Eigen::SelfAdjointEigenSolver<Mat> es(oracle::laplacian(G));
        auto P = laplacian_pair(G, 2.0, 2.0);
        CAPTURE(t);
        CHECK(power_max(P.f, P.g).lambda == doctest::Approx(std::sqrt(es.eigenvalues()(n - 1))).epsilon(1e-8));
        CHECK(ratiodca_min(P.f, P.g).lambda == doctest::Approx(std::sqrt(es.eigenvalues()(1))).epsilon(1e-6));
    }
}

TEST_CASE("planar spectrum of l1 against l2") {
    auto eig = grid_spectrum_2d(l1(2), l2(2));
    std::vector<double> lam;
    for (const auto& e : eig)
        if (e.verified) lam.push_back(e.lambda);
    std::sort(lam.begin(), lam.end());
    REQUIRE(lam.size() == 2);
    CHECK(lam[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(lam[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("same seed, same answer") {
    auto P = laplacian_pair(cycle_graph(5), 1.0, 2.0);
    SolveConfig c;
    c.seed = 99;
    auto a = power_max(P.f, P.g, c), b = power_max(P.f, P.g, c);
    CHECK(a.lambda == b.lambda);
    CHECK(a.x == b.x);
    c.threads = 1;
    auto s = power_max(P.f, P.g, c);
    CHECK(s.lambda == a.lambda);
    CHECK(s.x == a.x);
}

TEST_CASE("configuration errors") {
    SolveConfig c;
    c.tol = 0.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = SolveConfig{};
    c.max_iters = 0;
    CHECK_THROWS_AS(power_max(l1(2), l2(2), c), DomainError);
    CHECK_THROWS_AS(power_max(l1(2), l2(3)), DimensionError);
}
