#include <doctest.h>

#include "oracles.hpp"

#include <spectradual/eigsolve.hpp>
#include <spectradual/graphlap.hpp>
#include <spectradual/selftest.hpp>
#include <spectradual/subdiff.hpp>

#include <random>

using namespace spectradual;

namespace {

Vec gaussian(std::mt19937_64& rng, long n) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Vec v(n);
    for (long i = 0; i < n; ++i) v(i) = nd(rng);
    return v;
}

struct Family {
    std::vector<std::pair<std::string, HomFun>> fs;
    Family() {
        std::mt19937_64 rng(17);
        fs = selftest::detail::involution_family(rng);
    }
};

const Family& family() {
    static const Family F;
    return F;
}

}  // namespace

TEST_CASE("family is large enough to be meaningful") { CHECK(family().fs.size() >= 20); }

TEST_CASE("double dual is the identity") {
    std::mt19937_64 rng(1);
    for (const auto& [name, f] : family().fs) {
        HomFun dd = dual(dual(f));
        for (int t = 0; t < 5; ++t) {
            Vec x = gaussian(rng, f.dim());
            CAPTURE(name);
            CHECK(dd.eval(x) == doctest::Approx(f.eval(x)).epsilon(1e-8));
        }
    }
}

TEST_CASE("Euler identity and kernel invariance") {
    std::mt19937_64 rng(2);
    for (const auto& [name, f] : family().fs) {
        for (int t = 0; t < 5; ++t) {
            Vec x = gaussian(rng, f.dim());
            CAPTURE(name);
            double fx = f.eval(x);
            CHECK(f.subgradient(x).dot(x) == doctest::Approx(f.degree() * fx).epsilon(1e-7));
            CHECK(f.eval(2.5 * x) == doctest::Approx(std::pow(2.5, f.degree()) * fx).epsilon(1e-9));
            if (f.kernel_basis().cols() > 0) {
                Vec k = f.kernel_basis() * gaussian(rng, f.kernel_basis().cols());
                CHECK(f.eval(x + k) == doctest::Approx(fx).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("convexity and the dual pairing") {
    std::mt19937_64 rng(3);
    for (const auto& [name, f] : family().fs) {
        HomFun d = dual(f);
        for (int t = 0; t < 5; ++t) {
            Vec x = gaussian(rng, f.dim()), y = gaussian(rng, f.dim());
            CAPTURE(name);
            CHECK(f.eval(x + y) <= f.eval(x) + f.eval(y) + 1e-9);
            Vec yp = linalg::project_out(f.kernel_basis(), y);
            CHECK(x.dot(yp) <= f.eval(x) * d.eval(yp) + 1e-8 * (1.0 + x.norm() * yp.norm()));
        }
    }
}

TEST_CASE("subgradients lie in the described subdifferential") {
    std::mt19937_64 rng(4);
    for (const auto& [name, f] : family().fs) {
        Vec x = gaussian(rng, f.dim());
        if (!has_subdiff_description(f, x)) continue;
        CAPTURE(name);
        CHECK(contains(subdiff_at(f, x), f.subgradient(x), 1e-7));
    }
}

TEST_CASE("solver outputs are eigenpairs with the reported ratio") {
    std::mt19937_64 rng(5);
    const double norms[] = {1.0, 2.0, kInf};
    for (int t = 0; t < 12; ++t) {
        long n = 3 + static_cast<long>(rng() % 3);
        Graph G = oracle::random_connected(rng, n, 0.4, t % 2 == 0);
        const double a = norms[rng() % 3], b = norms[rng() % 3];
        auto P = laplacian_pair(G, a, b);
        auto e = power_max(P.f, P.g);
        CAPTURE(t);
        CAPTURE(a);
        CAPTURE(b);
        CHECK(rayleigh(P.f, P.g, e.x) == doctest::Approx(e.lambda).epsilon(1e-10));
        if (P.f.polyhedral() && P.g.polyhedral()) CHECK(e.verified);
        // No ratio exceeds the maximum.
        for (int s = 0; s < 20; ++s) CHECK(rayleigh(P.f, P.g, gaussian(rng, n)) <= e.lambda * (1 + 1e-9));
    }
}
