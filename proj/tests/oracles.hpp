#pragma once

// Reference computations for the tests. They use only the edge list and
// plain loops, never the library's own solvers.

#include <spectradual/graphlap.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using spectradual::Graph;

inline double cut(const Graph& G, std::uint64_t s) {
    double c = 0.0;
    for (const auto& e : G.edges())
        if (((s >> e.i) & 1U) != ((s >> e.j) & 1U)) c += e.w;
    return c;
}

inline double maxcut(const Graph& G) {
    double best = 0.0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << G.n()); ++s) best = std::max(best, cut(G, s));
    return best;
}

// Minimum over nontrivial bipartitions.
inline double mincut(const Graph& G) {
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t s = 1; s + 1 < (std::uint64_t{1} << G.n()); ++s) best = std::min(best, cut(G, s));
    return best;
}

// min over disjoint nonempty A, B of max(cut(A)/|A|, cut(B)/|B|).
inline double cheeger2(const Graph& G) {
    const long n = G.n();
    double best = std::numeric_limits<double>::infinity();
    long total = 1;
    for (long i = 0; i < n; ++i) total *= 3;
    for (long code = 0; code < total; ++code) {
        long c = code;
        std::uint64_t A = 0, B = 0;
        for (long i = 0; i < n; ++i, c /= 3) {
            if (c % 3 == 1) A |= std::uint64_t{1} << i;
            if (c % 3 == 2) B |= std::uint64_t{1} << i;
        }
        if (!A || !B) continue;
        double ra = cut(G, A) / std::popcount(A), rb = cut(G, B) / std::popcount(B);
        best = std::min(best, std::max(ra, rb));
    }
    return best;
}

// Hop distances by Floyd–Warshall; -1 when unreachable.
inline std::vector<std::vector<long>> hops(const Graph& G) {
    const long n = G.n();
    const long big = n + 1;
    std::vector<std::vector<long>> d(static_cast<std::size_t>(n), std::vector<long>(static_cast<std::size_t>(n), big));
    for (long i = 0; i < n; ++i) d[i][i] = 0;
    for (const auto& e : G.edges()) d[e.i][e.j] = d[e.j][e.i] = 1;
    for (long k = 0; k < n; ++k)
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    for (auto& row : d)
        for (auto& v : row)
            if (v == big) v = -1;
    return d;
}

inline long diameter(const Graph& G) {
    long best = 0;
    for (const auto& row : hops(G))
        for (long v : row) {
            if (v < 0) return -1;
            best = std::max(best, v);
        }
    return best;
}

// Weighted Laplacian Kᵀ K with K(e, i) = w_e, K(e, j) = −w_e.
inline spectradual::Mat laplacian(const Graph& G) {
    spectradual::Mat L = spectradual::Mat::Zero(G.n(), G.n());
    for (const auto& e : G.edges()) {
        double w2 = e.w * e.w;
        L(e.i, e.i) += w2;
        L(e.j, e.j) += w2;
        L(e.i, e.j) -= w2;
        L(e.j, e.i) -= w2;
    }
    return L;
}

inline double pnorm(const spectradual::Vec& v, double p) {
    if (std::isinf(p)) return v.cwiseAbs().maxCoeff();
    double s = 0.0;
    for (long i = 0; i < v.size(); ++i) s += std::pow(std::abs(v(i)), p);
    return std::pow(s, 1.0 / p);
}

// Connected graph on n nodes: random spanning tree plus extra edges.
inline Graph random_connected(std::mt19937_64& rng, long n, double extra, bool weighted) {
    std::vector<spectradual::Edge> E;
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<std::vector<bool>> has(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
    auto weight = [&] { return weighted ? static_cast<double>(1 + rng() % 4) / 2.0 : 1.0; };
    for (long v = 1; v < n; ++v) {
        long u = static_cast<long>(rng() % static_cast<std::uint64_t>(v));
        E.push_back({u, v, weight()});
        has[u][v] = true;
    }
    for (long i = 0; i < n; ++i)
        for (long j = i + 1; j < n; ++j)
            if (!has[i][j] && U(rng) < extra) E.push_back({i, j, weight()});
    return Graph(n, E);
}

}  // namespace oracle
