#pragma once

/**
 * @file graphlap.hpp
 * @brief Weighted graphs, the nonlinear Laplacian pairs (‖Kx‖_a, ‖x‖_b),
 * their dual forms and exhaustive combinatorial oracles.
 */

#include "errors.hpp"
#include "homfun.hpp"
#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace spectradual {

struct Edge {
    long i = 0, j = 0;  // 0-based, i < j
    double w = 1.0;
};

class Graph {
public:
    Graph() = default;
    Graph(long n, std::vector<Edge> edges) : n_(n) {
        if (n < 1) throw DomainError("Graph: need at least one node");
        std::set<std::pair<long, long>> seen;
        for (auto e : edges) {
            if (e.i == e.j) throw DomainError("Graph: self-loop at node " + std::to_string(e.i + 1));
            if (e.i > e.j) std::swap(e.i, e.j);
            if (e.i < 0 || e.j >= n) throw DomainError("Graph: node index out of range");
            if (!(e.w > 0.0) || !std::isfinite(e.w)) throw DomainError("Graph: weights must be positive and finite");
            if (!seen.insert({e.i, e.j}).second)
                throw DomainError("Graph: duplicate edge " + std::to_string(e.i + 1) + "-" + std::to_string(e.j + 1));
            edges_.push_back(e);
        }
    }

    long n() const { return n_; }
    long m() const { return static_cast<long>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }

    bool unit_weights() const {
        for (const auto& e : edges_)
            if (e.w != 1.0) return false;
        return true;
    }

    std::vector<std::vector<std::pair<long, double>>> adjacency() const {
        std::vector<std::vector<std::pair<long, double>>> adj(static_cast<std::size_t>(n_));
        for (const auto& e : edges_) {
            adj[static_cast<std::size_t>(e.i)].push_back({e.j, e.w});
            adj[static_cast<std::size_t>(e.j)].push_back({e.i, e.w});
        }
        return adj;
    }

private:
    long n_ = 0;
    std::vector<Edge> edges_;
};

inline Graph path_graph(long n) {
    std::vector<Edge> e;
    for (long i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, 1.0});
    return Graph(n, e);
}

inline Graph cycle_graph(long n) {
    std::vector<Edge> e;
    for (long i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, 1.0});
    if (n > 2) e.push_back({0, n - 1, 1.0});
    return Graph(n, e);
}

inline Graph complete_graph(long n) {
    std::vector<Edge> e;
    for (long i = 0; i < n; ++i)
        for (long j = i + 1; j < n; ++j) e.push_back({i, j, 1.0});
    return Graph(n, e);
}

/// Incidence matrix: row for edge (i, j, w) is +w at i and −w at j.
inline Mat incidence_matrix(const Graph& G) {
    Mat K = Mat::Zero(G.m(), G.n());
    for (long r = 0; r < G.m(); ++r) {
        const Edge& e = G.edges()[static_cast<std::size_t>(r)];
        K(r, e.i) = e.w;
        K(r, e.j) = -e.w;
    }
    return K;
}

inline LinearMap incidence(const Graph& G) { return LinearMap(incidence_matrix(G)); }

struct LaplacianPair {
    HomFun f;       // ‖K x‖_a
    HomFun g;       // ‖x‖_b
    HomFun edge;    // ‖·‖_a on ℝ^E
    LinearMap K;
    double a = 1.0, b = 1.0;
};

inline void check_norm_index(double a, const char* what) {
    if (!(a >= 1.0)) throw DomainError(std::string(what) + ": norm index must be in [1, ∞]");
}

inline LaplacianPair laplacian_pair(const Graph& G, double a, double b) {
    check_norm_index(a, "laplacian_pair a");
    check_norm_index(b, "laplacian_pair b");
    if (G.m() == 0) throw DomainError("laplacian_pair: graph has no edges");
    LaplacianPair P;
    P.a = a;
    P.b = b;
    P.K = incidence(G);
    P.edge = lp_norm(G.m(), a);
    P.f = pullback(P.edge, P.K);
    P.g = lp_norm(G.n(), b);
    return P;
}

struct FormPair {
    std::string name;
    HomFun f, g;
};

/// The four reformulations with the same nonzero eigenvalues as (f∘K, g).
inline std::vector<FormPair> dual_forms(const LaplacianPair& P) {
    LinearMap Kt = P.K.transpose();
    HomFun push_g = pushforward(P.g, P.K);
    return {
        {"(Dg, D(f o K))", dual(P.g), dual(P.f)},
        {"(Dg o K^T, Df)", pullback(dual(P.g), Kt), dual(P.edge)},
        {"(f, P_K g)", P.edge, push_g},
        {"(f o K, (P_K g) o K)", P.f, pullback(push_g, P.K)},
    };
}

// ------------------------------------------------------------- distances

inline constexpr long kUnreachable = std::numeric_limits<long>::max();

inline std::vector<long> bfs_distances(const Graph& G, long src) {
    auto adj = G.adjacency();
    std::vector<long> d(static_cast<std::size_t>(G.n()), kUnreachable);
    std::queue<long> q;
    d[static_cast<std::size_t>(src)] = 0;
    q.push(src);
    while (!q.empty()) {
        long u = q.front();
        q.pop();
        for (auto [v, w] : adj[static_cast<std::size_t>(u)]) {
            (void)w;
            if (d[static_cast<std::size_t>(v)] == kUnreachable) {
                d[static_cast<std::size_t>(v)] = d[static_cast<std::size_t>(u)] + 1;
                q.push(v);
            }
        }
    }
    return d;
}

inline std::vector<std::vector<long>> all_distances(const Graph& G) {
    std::vector<std::vector<long>> D;
    for (long v = 0; v < G.n(); ++v) D.push_back(bfs_distances(G, v));
    return D;
}

inline std::vector<std::vector<long>> components(const Graph& G) {
    std::vector<long> label(static_cast<std::size_t>(G.n()), -1);
    std::vector<std::vector<long>> comps;
    for (long v = 0; v < G.n(); ++v) {
        if (label[static_cast<std::size_t>(v)] >= 0) continue;
        auto d = bfs_distances(G, v);
        comps.emplace_back();
        for (long u = 0; u < G.n(); ++u)
            if (d[static_cast<std::size_t>(u)] != kUnreachable) {
                label[static_cast<std::size_t>(u)] = static_cast<long>(comps.size()) - 1;
                comps.back().push_back(u);
            }
    }
    return comps;
}

inline bool connected(const Graph& G) { return components(G).size() == 1; }

/// Hop diameter of every connected component.
inline std::vector<long> component_diameters(const Graph& G) {
    auto D = all_distances(G);
    std::vector<long> out;
    for (const auto& c : components(G)) {
        long dm = 0;
        for (long u : c)
            for (long v : c) dm = std::max(dm, D[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]);
        out.push_back(dm);
    }
    return out;
}

/// Hop diameter; for a disconnected graph the largest component diameter.
inline long diameter(const Graph& G) {
    auto ds = component_diameters(G);
    return *std::max_element(ds.begin(), ds.end());
}

/// size(B_r(v)) = Σ_{i ≤ r} (r − i)·|{u : dist(u, v) = i}|.
inline double ball_size(const Graph& G, long v, long r) {
    if (v < 0 || v >= G.n()) throw DimensionError("ball_size: node out of range");
    if (r < 0) throw DomainError("ball_size: radius must be ≥ 0");
    auto d = bfs_distances(G, v);
    double s = 0.0;
    for (long u = 0; u < G.n(); ++u) {
        long du = d[static_cast<std::size_t>(u)];
        if (du != kUnreachable && du <= r) s += static_cast<double>(r - du);
    }
    return s;
}

/// Ball profile x_i = max(r − dist(v, i), 0).
inline Vec ball_vector(const Graph& G, long v, long r) {
    auto d = bfs_distances(G, v);
    Vec x = Vec::Zero(G.n());
    for (long u = 0; u < G.n(); ++u) {
        long du = d[static_cast<std::size_t>(u)];
        if (du != kUnreachable && du < r) x(u) = static_cast<double>(r - du);
    }
    return x;
}

// ------------------------------------------------------------------ cuts

inline double cut_value(const Graph& G, std::uint64_t mask) {
    double s = 0.0;
    for (const auto& e : G.edges())
        if (((mask >> e.i) & 1U) != ((mask >> e.j) & 1U)) s += e.w;
    return s;
}

struct CutResult {
    double value = 0.0;
    std::uint64_t set = 0;  // witness S as a node bitmask
};

namespace detail {

inline void require_size(const Graph& G, long cap, const char* what) {
    if (G.n() > cap) throw SizeLimitError(std::string(what) + ": exhaustive oracle limited to n ≤ " + std::to_string(cap));
}

// Visits every nonempty proper subset in Gray-code order with its cut value.
template <class Fn>
void gray_cuts(const Graph& G, Fn fn) {
    const long n = G.n();
    auto adj = G.adjacency();
    std::uint64_t mask = 0;
    double cut = 0.0;
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t k = 1; k < total; ++k) {
        int v = __builtin_ctzll(k);
        bool in = (mask >> v) & 1U;
        for (auto [u, w] : adj[static_cast<std::size_t>(v)]) {
            bool uin = (mask >> u) & 1U;
            cut += (uin == in) ? w : -w;
        }
        mask ^= 1ULL << v;
        if (mask != total - 1) fn(mask, cut);
    }
}

inline std::vector<double>& cut_table(const Graph& G, std::vector<double>& t) {
    t.assign(1ULL << G.n(), 0.0);
    for (std::uint64_t s = 0; s < t.size(); ++s) t[s] = cut_value(G, s);
    return t;
}

}  // namespace detail

/// Minimum of vol(cut(S)) over nonempty proper S.
inline CutResult mincut(const Graph& G) {
    detail::require_size(G, 24, "mincut");
    CutResult best{kInf, 0};
    if (G.n() == 1) return {0.0, 0};
    detail::gray_cuts(G, [&](std::uint64_t m, double c) {
        if (c < best.value - 1e-12 || (std::abs(c - best.value) <= 1e-12 && m < best.set)) best = {c, m};
    });
    best.value = cut_value(G, best.set);
    return best;
}

inline CutResult maxcut(const Graph& G) {
    detail::require_size(G, 24, "maxcut");
    CutResult best{0.0, 0};
    detail::gray_cuts(G, [&](std::uint64_t m, double c) {
        if (c > best.value + 1e-12 || (std::abs(c - best.value) <= 1e-12 && m < best.set)) best = {c, m};
    });
    best.value = cut_value(G, best.set);
    return best;
}

struct CheegerResult {
    double value = kInf;
    std::vector<std::vector<long>> sets;  // witness V_1, …, V_k
};

inline std::vector<long> mask_nodes(std::uint64_t m, long n) {
    std::vector<long> v;
    for (long i = 0; i < n; ++i)
        if ((m >> i) & 1U) v.push_back(i);
    return v;
}

/// h_k = min over disjoint nonempty V_1..V_k of max_i vol(cut(V_i)) / |V_i|.
inline CheegerResult cheeger(const Graph& G, int k) {
    if (k < 2) throw DomainError("cheeger: k must be ≥ 2");
    detail::require_size(G, 16, "cheeger");
    const long n = G.n();
    CheegerResult res;
    if (k > n) return res;
    const std::uint64_t full = (1ULL << n) - 1;
    std::vector<double> cut;
    detail::cut_table(G, cut);
    std::vector<double> phi(cut.size(), kInf);
    for (std::uint64_t s = 1; s <= full; ++s) phi[s] = cut[s] / static_cast<double>(__builtin_popcountll(s));
    if (k == 2) {
        // best[C] = min φ(B) over nonempty B ⊆ C, with its argmin.
        std::vector<double> best(cut.size(), kInf);
        std::vector<std::uint64_t> arg(cut.size(), 0);
        for (std::uint64_t c = 1; c <= full; ++c) {
            best[c] = phi[c];
            arg[c] = c;
            for (long i = 0; i < n; ++i) {
                if (!((c >> i) & 1U)) continue;
                std::uint64_t d = c & ~(1ULL << i);
                if (d && (best[d] < best[c] - 1e-15 || (best[d] <= best[c] + 1e-15 && arg[d] < arg[c]))) {
                    best[c] = best[d];
                    arg[c] = arg[d];
                }
            }
        }
        std::uint64_t wa = 0, wb = 0;
        for (std::uint64_t a = 1; a < full; ++a) {
            std::uint64_t rest = full & ~a;
            double v = std::max(phi[a], best[rest]);
            if (v < res.value - 1e-15) {
                res.value = v;
                wa = a;
                wb = arg[rest];
            }
        }
        res.sets = {mask_nodes(wa, n), mask_nodes(wb, n)};
        return res;
    }
    // General k: the optimum is one of the φ values; test thresholds by subset packing.
    std::vector<double> vals(phi.begin() + 1, phi.end());
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    auto pack = [&](double tau, std::vector<std::uint64_t>* witness) {
        std::vector<int> cnt(cut.size(), 0);
        std::vector<std::uint64_t> choice(cut.size(), 0);
        for (std::uint64_t u = 1; u <= full; ++u) {
            int low = __builtin_ctzll(u);
            std::uint64_t without = u & ~(1ULL << low);
            cnt[u] = cnt[without];
            choice[u] = 0;
            std::uint64_t rest = without;
            for (std::uint64_t sub = rest;; sub = (sub - 1) & rest) {
                std::uint64_t s = sub | (1ULL << low);
                if (phi[s] <= tau + 1e-15 && 1 + cnt[u & ~s] > cnt[u]) {
                    cnt[u] = 1 + cnt[u & ~s];
                    choice[u] = s;
                }
                if (sub == 0) break;
            }
        }
        if (witness && cnt[full] >= k) {
            std::uint64_t u = full;
            while (u && static_cast<int>(witness->size()) < k) {
                if (choice[u]) {
                    witness->push_back(choice[u]);
                    u &= ~choice[u];
                } else {
                    u &= ~(1ULL << __builtin_ctzll(u));
                }
            }
        }
        return cnt[full] >= k;
    };
    std::size_t lo = 0, hi = vals.size() - 1;
    if (!pack(vals[hi], nullptr)) return res;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (pack(vals[mid], nullptr)) hi = mid;
        else lo = mid + 1;
    }
    std::vector<std::uint64_t> w;
    pack(vals[lo], &w);
    res.value = vals[lo];
    for (auto s : w) res.sets.push_back(mask_nodes(s, n));
    return res;
}

struct PartitionResult {
    double value = kInf;
    std::vector<std::vector<long>> blocks;
};

/// 2 · max_{S ⊆ blocks} Σ_{i∈S, j∉S} w_{V_i,V_j} for a labelled partition.
inline double quotient_maxcut(const Graph& G, const std::vector<int>& label, int k) {
    std::vector<double> W(static_cast<std::size_t>(k * k), 0.0);
    for (const auto& e : G.edges()) {
        int a = label[static_cast<std::size_t>(e.i)], b = label[static_cast<std::size_t>(e.j)];
        if (a == b) continue;
        W[static_cast<std::size_t>(a * k + b)] += e.w;
        W[static_cast<std::size_t>(b * k + a)] += e.w;
    }
    double best = 0.0;
    for (std::uint64_t S = 1; S + 1 < (1ULL << k); ++S) {
        double c = 0.0;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (((S >> i) & 1U) != ((S >> j) & 1U)) c += W[static_cast<std::size_t>(i * k + j)];
        best = std::max(best, c);
    }
    return 2.0 * best;
}

/// min over partitions into k nonempty blocks of the quotient maxcut.
inline PartitionResult multiway_maxcut_bound(const Graph& G, int k) {
    detail::require_size(G, 12, "multiway_maxcut_bound");
    const long n = G.n();
    if (k < 1 || k > n) throw DomainError("multiway_maxcut_bound: need 1 ≤ k ≤ n");
    PartitionResult res;
    std::vector<int> label(static_cast<std::size_t>(n), 0), bestl;
    // Restricted growth strings with exactly k blocks.
    std::function<void(long, int)> rec = [&](long i, int used) {
        if (used + (n - i) < k) return;
        if (i == n) {
            if (used != k) return;
            double v = quotient_maxcut(G, label, k);
            if (v < res.value - 1e-12) {
                res.value = v;
                bestl = label;
            }
            return;
        }
        for (int b = 0; b <= std::min(used, k - 1); ++b) {
            label[static_cast<std::size_t>(i)] = b;
            rec(i + 1, std::max(used, b + 1));
        }
    };
    rec(0, 0);
    res.blocks.assign(static_cast<std::size_t>(k), {});
    for (long i = 0; i < n; ++i) res.blocks[static_cast<std::size_t>(bestl[static_cast<std::size_t>(i)])].push_back(i);
    return res;
}

struct Ball {
    long center = 0;
    long radius = 0;
    double size = 0.0;
};

struct BallResult {
    double value = kInf;
    std::vector<Ball> balls;
};

/// min over k pairwise disjoint balls of max 1/size(B_i); radii capped by the component radius.
inline BallResult inscribed_ball_bound(const Graph& G, int k) {
    detail::require_size(G, 12, "inscribed_ball_bound");
    if (k < 1) throw DomainError("inscribed_ball_bound: k must be ≥ 1");
    const long n = G.n();
    BallResult res;
    if (k > n) return res;
    auto D = all_distances(G);
    auto comps = components(G);
    std::vector<long> rad(static_cast<std::size_t>(n), 0);
    for (const auto& c : comps) {
        long r = kUnreachable;
        for (long u : c) {
            long ecc = 0;
            for (long v : c) ecc = std::max(ecc, D[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]);
            r = std::min(r, ecc);
        }
        for (long u : c) rad[static_cast<std::size_t>(u)] = r;
    }
    std::vector<Ball> balls;
    for (long v = 0; v < n; ++v)
        for (long r = 0; r <= rad[static_cast<std::size_t>(v)]; ++r) balls.push_back({v, r, ball_size(G, v, r)});
    std::sort(balls.begin(), balls.end(), [](const Ball& a, const Ball& b) {
        if (a.size != b.size) return a.size > b.size;
        if (a.center != b.center) return a.center < b.center;
        return a.radius < b.radius;
    });
    auto disjoint = [&](const Ball& a, const Ball& b) {
        if (a.center == b.center) return false;
        long d = D[static_cast<std::size_t>(a.center)][static_cast<std::size_t>(b.center)];
        return d == kUnreachable || d >= a.radius + b.radius;
    };
    // Largest s such that k disjoint balls of size ≥ s exist.
    std::vector<Ball> chosen, best;
    double best_min = -1.0;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (static_cast<int>(chosen.size()) == k) {
            double mn = chosen.back().size;
            if (mn > best_min) {
                best_min = mn;
                best = chosen;
            }
            return;
        }
        for (std::size_t i = start; i < balls.size(); ++i) {
            if (balls[i].size <= best_min) break;
            bool ok = true;
            for (const auto& c : chosen)
                if (!disjoint(c, balls[i])) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(balls[i]);
            rec(i + 1);
            chosen.pop_back();
        }
    };
    rec(0);
    if (best_min < 0.0) {
        // Only zero-size balls remain: any k distinct centers.
        for (long v = 0; v < k; ++v) res.balls.push_back({v, 0, 0.0});
        return res;
    }
    res.balls = best;
    res.value = 1.0 / best_min;
    return res;
}

struct InftyCandidate {
    double lambda = 0.0;
    Vec x;
    long a = 0, b = 0;  // diameter endpoints
};

/// (2/diam, x) with x_v = dist(a, v) − diam/2 for diameter endpoints a, b.
inline InftyCandidate infty_eigvec_candidate(const Graph& G) {
    if (!connected(G)) throw DomainError("infty_eigvec_candidate: graph must be connected");
    if (G.n() < 2) throw DomainError("infty_eigvec_candidate: need at least two nodes");
    auto D = all_distances(G);
    InftyCandidate c;
    long diam = -1;
    for (long u = 0; u < G.n(); ++u)
        for (long v = u + 1; v < G.n(); ++v)
            if (D[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] > diam) {
                diam = D[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
                c.a = u;
                c.b = v;
            }
    c.lambda = 2.0 / static_cast<double>(diam);
    c.x = Vec(G.n());
    for (long v = 0; v < G.n(); ++v)
        c.x(v) = static_cast<double>(D[static_cast<std::size_t>(c.a)][static_cast<std::size_t>(v)]) - 0.5 * static_cast<double>(diam);
    return c;
}

// ------------------------------------------------------------ candidates

/// Combinatorial candidate eigenvectors: {−1,0,1}ⁿ up to sign for n ≤ 6,
/// otherwise 0/1 indicators, ±1 patterns, distance profiles and ball profiles.
inline std::vector<Vec> candidate_vectors(const Graph& G) {
    const long n = G.n();
    std::vector<Vec> out;
    if (n <= 6) {
        long total = 1;
        for (long i = 0; i < n; ++i) total *= 3;
        for (long code = 0; code < total; ++code) {
            Vec x(n);
            long c = code;
            for (long i = 0; i < n; ++i) {
                x(i) = static_cast<double>(c % 3) - 1.0;
                c /= 3;
            }
            // Keep one representative of ±x: first nonzero entry positive.
            long first = -1;
            for (long i = 0; i < n; ++i)
                if (x(i) != 0.0) {
                    first = i;
                    break;
                }
            if (first < 0 || x(first) < 0) continue;
            out.push_back(x);
        }
        return out;
    }
    if (n > 20) throw SizeLimitError("candidate_vectors: limited to n ≤ 20");
    for (std::uint64_t m = 1; m < (1ULL << n); ++m) {
        Vec x(n), s(n);
        for (long i = 0; i < n; ++i) {
            bool in = (m >> i) & 1U;
            x(i) = in ? 1.0 : 0.0;
            s(i) = in ? 1.0 : -1.0;
        }
        out.push_back(x);
        if (s(0) > 0) out.push_back(s);
    }
    auto D = all_distances(G);
    for (long a = 0; a < n; ++a) {
        long ecc = 0;
        for (long v = 0; v < n; ++v)
            if (D[static_cast<std::size_t>(a)][static_cast<std::size_t>(v)] != kUnreachable)
                ecc = std::max(ecc, D[static_cast<std::size_t>(a)][static_cast<std::size_t>(v)]);
        Vec x(n);
        for (long v = 0; v < n; ++v) {
            long d = D[static_cast<std::size_t>(a)][static_cast<std::size_t>(v)];
            x(v) = (d == kUnreachable ? static_cast<double>(ecc) : static_cast<double>(d)) - 0.5 * static_cast<double>(ecc);
        }
        out.push_back(x);
        for (long r = 1; r <= ecc; ++r) out.push_back(ball_vector(G, a, r));
    }
    return out;
}

// -------------------------------------------------------------- generators

/// Random connected graph: a random spanning tree plus extra edges with probability `density`.
/// Weights are drawn from {1/2, 1, 3/2, 2, 3} when `weighted`, exactly representable in binary.
template <class Rng>
Graph random_connected_graph(long n, Rng& rng, double density = 0.4, bool weighted = false) {
    static const double kWeights[] = {0.5, 1.0, 1.5, 2.0, 3.0};
    std::uniform_int_distribution<int> wpick(0, 4);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<long> order(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::set<std::pair<long, long>> have;
    std::vector<Edge> edges;
    auto add = [&](long a, long b) {
        if (a > b) std::swap(a, b);
        if (!have.insert({a, b}).second) return;
        edges.push_back({a, b, weighted ? kWeights[wpick(rng)] : 1.0});
    };
    for (long i = 1; i < n; ++i) {
        std::uniform_int_distribution<long> pick(0, i - 1);
        add(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick(rng))]);
    }
    for (long a = 0; a < n; ++a)
        for (long b = a + 1; b < n; ++b)
            if (u01(rng) < density) add(a, b);
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.i != y.i ? x.i < y.i : x.j < y.j; });
    return Graph(n, edges);
}

namespace detail {

// AHU encoding of a rooted tree.
inline std::string ahu(const std::vector<std::vector<long>>& adj, long v, long parent) {
    std::vector<std::string> kids;
    for (long u : adj[static_cast<std::size_t>(v)])
        if (u != parent) kids.push_back(ahu(adj, u, v));
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    for (auto& k : kids) s += k;
    return s + ")";
}

inline std::string tree_code(long n, const std::vector<Edge>& edges) {
    std::vector<std::vector<long>> adj(static_cast<std::size_t>(n));
    for (const auto& e : edges) {
        adj[static_cast<std::size_t>(e.i)].push_back(e.j);
        adj[static_cast<std::size_t>(e.j)].push_back(e.i);
    }
    // Centers by leaf stripping.
    std::vector<long> deg(static_cast<std::size_t>(n));
    std::vector<long> leaves;
    for (long v = 0; v < n; ++v) {
        deg[static_cast<std::size_t>(v)] = static_cast<long>(adj[static_cast<std::size_t>(v)].size());
        if (deg[static_cast<std::size_t>(v)] <= 1) leaves.push_back(v);
    }
    long remaining = n;
    while (remaining > 2) {
        std::vector<long> next;
        remaining -= static_cast<long>(leaves.size());
        for (long l : leaves)
            for (long u : adj[static_cast<std::size_t>(l)])
                if (--deg[static_cast<std::size_t>(u)] == 1) next.push_back(u);
        leaves = next;
    }
    std::string best;
    for (long c : leaves) {
        std::string s = ahu(adj, c, -1);
        if (best.empty() || s < best) best = s;
    }
    return best;
}

}  // namespace detail

/// All non-isomorphic trees on n nodes (Prüfer enumeration, deduplicated), n ≤ 9.
inline std::vector<Graph> all_trees(long n) {
    if (n < 1 || n > 9) throw SizeLimitError("all_trees: limited to 1 ≤ n ≤ 9");
    if (n == 1) return {Graph(1, {})};
    if (n == 2) return {Graph(2, {{0, 1, 1.0}})};
    std::map<std::string, Graph> uniq;
    std::vector<long> seq(static_cast<std::size_t>(n - 2), 0);
    while (true) {
        std::vector<long> deg(static_cast<std::size_t>(n), 1);
        for (long s : seq) ++deg[static_cast<std::size_t>(s)];
        std::vector<Edge> edges;
        for (long s : seq) {
            for (long v = 0; v < n; ++v)
                if (deg[static_cast<std::size_t>(v)] == 1) {
                    edges.push_back({std::min(v, s), std::max(v, s), 1.0});
                    --deg[static_cast<std::size_t>(v)];
                    --deg[static_cast<std::size_t>(s)];
                    break;
                }
        }
        long u = -1, w = -1;
        for (long v = 0; v < n; ++v)
            if (deg[static_cast<std::size_t>(v)] == 1) (u < 0 ? u : w) = v;
        edges.push_back({u, w, 1.0});
        std::string code = detail::tree_code(n, edges);
        if (!uniq.count(code)) {
            std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.i != y.i ? x.i < y.i : x.j < y.j; });
            uniq.emplace(code, Graph(n, edges));
        }
        long pos = n - 3;
        while (pos >= 0 && seq[static_cast<std::size_t>(pos)] == n - 1) seq[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
        ++seq[static_cast<std::size_t>(pos)];
    }
    std::vector<Graph> out;
    for (auto& [k, g] : uniq) out.push_back(g);
    return out;
}

}  // namespace spectradual
