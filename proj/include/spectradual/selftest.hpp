#pragma once

/**
 * @file selftest.hpp
 * @brief Property suites over random and exhaustive instances. Shared by the
 * `selftest` command and the acceptance binary.
 */

#include "convbody.hpp"
#include "eigsolve.hpp"
#include "graphlap.hpp"
#include "homfun.hpp"
#include "hypercp.hpp"
#include "subdiff.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace spectradual::selftest {

struct Check {
    std::string name;
    bool passed = false;
    double lhs = 0.0, rhs = 0.0, tol = 0.0;
};

struct SuiteResult {
    int id = 0;
    std::string name;
    std::vector<Check> checks;
    long cases = 0;
    long failures = 0;
    double seconds = 0.0;
    std::string note;  // first failure, if any

    bool passed() const { return failures == 0 && !checks.empty(); }
};

namespace detail {

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b))); }

class Recorder {
public:
    explicit Recorder(SuiteResult& r) : r_(r) {}
    // Records one case; keeps the worst-case summary check.
    void expect(bool ok, const std::string& what) {
        ++r_.cases;
        if (!ok) {
            ++r_.failures;
            if (r_.note.empty()) r_.note = what;
        }
    }
    void check(const std::string& name, bool passed, double lhs, double rhs, double tol) {
        r_.checks.push_back({name, passed, lhs, rhs, tol});
        if (!passed) {
            ++r_.failures;
            if (r_.note.empty()) r_.note = name;
        }
    }

private:
    SuiteResult& r_;
};

inline Vec gaussian(long n, std::mt19937_64& rng) {
    std::normal_distribution<double> N(0.0, 1.0);
    Vec v(n);
    for (long i = 0; i < n; ++i) v(i) = N(rng);
    return v;
}

inline Mat gaussian(long r, long c, std::mt19937_64& rng) {
    Mat M(r, c);
    for (long j = 0; j < c; ++j) M.col(j) = gaussian(r, rng);
    return M;
}

inline std::vector<Vec> sign_vectors(long n) {
    std::vector<Vec> out;
    for (std::uint64_t m = 0; m < (1ULL << (n - 1)); ++m) {
        Vec v(n);
        for (long i = 0; i < n; ++i) v(i) = ((m >> i) & 1U) ? -1.0 : 1.0;
        out.push_back(v);
    }
    return out;
}

inline std::vector<Vec> indicator_vectors(long n) {
    std::vector<Vec> out;
    for (std::uint64_t m = 1; m + 1 < (1ULL << n); ++m) {
        Vec v(n);
        for (long i = 0; i < n; ++i) v(i) = ((m >> i) & 1U) ? 1.0 : 0.0;
        out.push_back(v);
    }
    return out;
}

inline Graph random_graph(std::mt19937_64& rng, long nmin, long nmax, bool weighted) {
    std::uniform_int_distribution<long> nd(nmin, nmax);
    std::uniform_real_distribution<double> dens(0.15, 0.8);
    long n = nd(rng);
    return random_connected_graph(n, rng, dens(rng), weighted);
}

template <class Fn>
SuiteResult timed(int id, const std::string& name, Fn body) {
    SuiteResult r;
    r.id = id;
    r.name = name;
    auto t0 = std::chrono::steady_clock::now();
    Recorder rec(r);
    body(rec);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

/// Degree-1 test functions: atoms, pullbacks, pushforwards and composites.
inline std::vector<std::pair<std::string, HomFun>> involution_family(std::mt19937_64& rng) {
    std::vector<std::pair<std::string, HomFun>> F;
    Vec w(4);
    w << 1.0, 2.0, 0.5, 3.0;
    Vec w0(4);
    w0 << 1.0, 0.0, 2.0, 1.0;
    F.push_back({"l1", l1(4)});
    F.push_back({"l2", l2(4)});
    F.push_back({"linf", linfty_max(4)});
    F.push_back({"l3", lp_norm(3, 3.0)});
    F.push_back({"l1.5", lp_norm(3, 1.5)});
    F.push_back({"weighted l1", weighted_lp(w, 1.0)});
    F.push_back({"weighted linf", weighted_lp(w, kInf)});
    F.push_back({"weighted l1 with zero weight", weighted_lp(w0, 1.0)});
    F.push_back({"support function", support_function(gaussian(5, 3, rng))});
    F.push_back({"polytope gauge", polytope_gauge(gaussian(4, 3, rng))});
    F.push_back({"hull gauge", hull_gauge(gaussian(2, 3, rng))});
    F.push_back({"scaled l1", scale(l1(3), 2.5)});
    F.push_back({"root of squared l2", power(power(l2(3), 2.0), 0.5)});
    F.push_back({"l1 pullback (kernel)", pullback(l1(3), LinearMap(gaussian(3, 4, rng)))});
    F.push_back({"linf pullback", pullback(lp_norm(5, kInf), LinearMap(gaussian(5, 3, rng)))});
    F.push_back({"l2 pullback", pullback(l2(4), LinearMap(gaussian(4, 3, rng)))});
    F.push_back({"1-Laplacian numerator", laplacian_pair(cycle_graph(5), 1.0, 1.0).f});
    F.push_back({"inf-Laplacian numerator", laplacian_pair(path_graph(4), kInf, kInf).f});
    F.push_back({"l1 pushforward", pushforward(l1(4), LinearMap(gaussian(3, 4, rng)))});
    F.push_back({"linf pushforward (kernel)", pushforward(pullback(linfty_max(2), LinearMap(gaussian(2, 4, rng))),
                                                          LinearMap(gaussian(3, 4, rng)))});
    {
        std::vector<HomFun> inner = {l2(2), l2(2)};
        std::vector<LinearMap> maps = {LinearMap::select({0, 1}, 4), LinearMap::select({2, 3}, 4)};
        F.push_back({"l1 of l2 blocks", composite_norm(l1(2), inner, maps)});
    }
    {
        std::vector<HomFun> inner = {l1(2), linfty_max(3)};
        std::vector<LinearMap> maps = {LinearMap(gaussian(2, 3, rng)), LinearMap(gaussian(3, 3, rng))};
        F.push_back({"linf of polyhedral composite", composite_norm(linfty_max(2), inner, maps)});
    }
    {
        std::vector<HomFun> inner = {linfty_max(2), l1(2), l1(1)};
        std::vector<LinearMap> maps = {LinearMap::select({0, 1}, 3), LinearMap::select({1, 2}, 3), LinearMap::select({0}, 3)};
        F.push_back({"l2 of polyhedral blocks", composite_norm(l2(3), inner, maps)});
    }
    {
        Hypergraph H(4, {{{0, 1, 2}, 1.0}, {{2, 3}, 2.0}});
        F.push_back({"hypergraph objective q=inf", cp_objective(H, kInf)});
    }
    return F;
}

}  // namespace detail

// 1. 𝒟𝒟f = f, the outer dual taken from its definition.
inline SuiteResult involution(std::uint64_t seed) {
    return detail::timed(1, "involution", [&](detail::Recorder& rec) {
        std::mt19937_64 rng(seed);
        auto family = detail::involution_family(rng);
        double worst = 0.0;
        for (const auto& [name, f] : family) {
            HomFun dd = dual_numeric(dual(f));
            for (int s = 0; s < 100; ++s) {
                Vec x = detail::gaussian(f.dim(), rng);
                if (s % 10 == 0) x = x.array().sign().matrix();
                double a = f.eval(x), b = dd.eval(x);
                double err = std::abs(a - b) / std::max(1.0, std::abs(a));
                worst = std::max(worst, err);
                rec.expect(err <= 1e-8, name);
            }
        }
        rec.check("functions >= 20", family.size() >= 20, static_cast<double>(family.size()), 20.0, 0.0);
        rec.check("max |DDf - f| / max(1, f)", worst <= 1e-8, worst, 0.0, 1e-8);
    });
}

// 2. Certified primal eigenpairs transfer to certified dual eigenpairs.
inline SuiteResult transfer_suite(std::uint64_t seed) {
    return detail::timed(2, "spectral duality transfer", [&](detail::Recorder& rec) {
        std::mt19937_64 rng(seed + 2);
        const double norms[4][2] = {{1.0, 1.0}, {1.0, kInf}, {kInf, 1.0}, {kInf, kInf}};
        long certified = 0, failed = 0;
        for (int gi = 0; gi < 50; ++gi) {
            Graph G = detail::random_graph(rng, 2, 6, true);
            const auto& ab = norms[gi % 4];
            auto P = laplacian_pair(G, ab[0], ab[1]);
            HomFun Dg = dual(P.g), Df = dual(P.f);
            for (const Vec& x : candidate_vectors(G)) {
                double fv = P.f.eval(x), gv = P.g.eval(x);
                if (!(fv > 0.0) || !(gv > 0.0)) continue;
                double lam = fv / gv;
                if (!verify_eigenpair(P.f, P.g, lam, x).feasible) continue;
                ++certified;
                bool ok = false;
                try {
                    Vec u = transfer(P.f, P.g, lam, x);
                    ok = verify_eigenpair(Dg, Df, lam, u).feasible;
                } catch (const Error&) {
                    ok = false;
                }
                if (!ok) ++failed;
                rec.expect(ok, "transfer failed on graph " + std::to_string(gi));
            }
        }
        rec.check("certified candidates > 0", certified > 0, static_cast<double>(certified), 0.0, 0.0);
        rec.check("transfer failures", failed == 0, static_cast<double>(failed), 0.0, 0.0);
    });
}

// 3. λ_max of the primal pair and its four dual forms.
inline SuiteResult five_forms(std::uint64_t seed) {
    return detail::timed(3, "five-form agreement", [&](detail::Recorder& rec) {
        std::mt19937_64 rng(seed + 3);
        const double norms[5][2] = {{1.0, 1.0}, {1.0, kInf}, {kInf, 1.0}, {kInf, kInf}, {2.0, 2.0}};
        double worst = 0.0;
        for (int gi = 0; gi < 50; ++gi) {
            Graph G = detail::random_graph(rng, 2, 6, true);
            const auto& ab = norms[gi % 5];
            auto P = laplacian_pair(G, ab[0], ab[1]);
            SolveConfig cfg;
            cfg.seed = seed + static_cast<std::uint64_t>(gi);
            cfg.certify = false;
            double lo = kInf, hi = 0.0;
            std::vector<std::pair<HomFun, HomFun>> pairs = {{P.f, P.g}};
            for (const auto& fp : dual_forms(P)) pairs.push_back({fp.f, fp.g});
            for (const auto& [f, g] : pairs) {
                cfg.starts.clear();
                if (f.polyhedral() && g.polyhedral() && f.dim() <= 8) cfg.starts = detail::sign_vectors(f.dim());
                double l = power_max(f, g, cfg).lambda;
                lo = std::min(lo, l);
                hi = std::max(hi, l);
            }
            double spread = (hi - lo) / std::max(1.0, hi);
            worst = std::max(worst, spread);
            rec.expect(spread <= 1e-6, "graph " + std::to_string(gi));
        }
        rec.check("max relative spread", worst <= 1e-6, worst, 0.0, 1e-6);
    });
}

// 4. Certified λ2 of the 1-Laplacian equals h2.
inline SuiteResult cheeger_suite(std::uint64_t seed) {
    return detail::timed(4, "cheeger identity", [&](detail::Recorder& rec) {
        std::mt19937_64 rng(seed + 4);
        std::vector<Graph> graphs;
        for (int i = 0; i < 100; ++i) graphs.push_back(detail::random_graph(rng, 2, 7, i % 2 == 1));
        for (long n = 2; n <= 7; ++n)
            for (auto& t : all_trees(n)) graphs.push_back(t);
        double worst = 0.0;
        long unverified = 0;
        for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
            const Graph& G = graphs[gi];
            auto P = laplacian_pair(G, 1.0, 1.0);
            SolveConfig cfg;
            cfg.seed = seed + gi;
            cfg.restarts = 2;
            cfg.starts = detail::indicator_vectors(G.n());
            cfg.threads = 1;
            auto est = ratiodca_min(P.f, P.g, cfg);
            double h2 = cheeger(G, 2).value;
            double err = std::abs(est.lambda - h2);
            worst = std::max(worst, err);
            if (!est.verified) ++unverified;
            rec.expect(est.verified && err <= 1e-9, "graph " + std::to_string(gi));
        }
        rec.check("graphs checked", graphs.size() >= 124, static_cast<double>(graphs.size()), 124.0, 0.0);
        rec.check("uncertified lambda2", unverified == 0, static_cast<double>(unverified), 0.0, 0.0);
        rec.check("max |lambda2 - h2|", worst <= 1e-9, worst, 0.0, 1e-9);
    });
}

/// λ_max / maxcut on K3: pins the indicator convention of the (1,∞) pair.
inline double maxcut_calibration() {
    Graph K3 = complete_graph(3);
    auto P = laplacian_pair(K3, 1.0, kInf);
    SolveConfig cfg;
    cfg.starts = detail::sign_vectors(3);
    cfg.certify = false;
    return power_max(P.f, P.g, cfg).lambda / maxcut(K3).value;
}

// 5. (1,∞) extremes against enumerated maxcut and mincut.
inline SuiteResult cut_suite(std::uint64_t seed) {
    return detail::timed(5, "maxcut/mincut identity", [&](detail::Recorder& rec) {
        const double c = maxcut_calibration();
        rec.check("calibration factor lambda_max(K3)/maxcut(K3)", detail::close(c, std::round(c), 1e-9), c, std::round(c), 1e-9);
        std::mt19937_64 rng(seed + 5);
        double worst_max = 0.0, worst_min = 0.0;
        for (int gi = 0; gi < 50; ++gi) {
            Graph G = detail::random_graph(rng, 2, 8, gi % 2 == 1);
            auto P = laplacian_pair(G, 1.0, kInf);
            SolveConfig cfg;
            cfg.seed = seed + static_cast<std::uint64_t>(gi);
            cfg.restarts = 2;
            cfg.threads = 1;
            cfg.starts = detail::sign_vectors(G.n());
            auto top = power_max(P.f, P.g, cfg);
            cfg.starts = detail::indicator_vectors(G.n());
            auto low = ratiodca_min(P.f, P.g, cfg);
            double emax = std::abs(top.lambda - c * maxcut(G).value) / std::max(1.0, top.lambda);
            double emin = std::abs(low.lambda - c * mincut(G).value) / std::max(1.0, low.lambda);
            worst_max = std::max(worst_max, emax);
            worst_min = std::max(worst_min, emin);
            rec.expect(top.verified && emax <= 1e-9, "maxcut graph " + std::to_string(gi));
            rec.expect(low.verified && emin <= 1e-9, "mincut graph " + std::to_string(gi));
        }
        rec.check("max |lambda_max - c maxcut|", worst_max <= 1e-9, worst_max, 0.0, 1e-9);
        rec.check("max |lambda_min - c mincut|", worst_min <= 1e-9, worst_min, 0.0, 1e-9);
    });
}

// 6. (2/diam, dist(a,·) − diam/2) certifies on the (∞,∞) pair.
inline SuiteResult diameter_suite(std::uint64_t seed) {
    return detail::timed(6, "diameter identity", [&](detail::Recorder& rec) {
        std::mt19937_64 rng(seed + 6);
        std::vector<Graph> graphs;
        for (int i = 0; i < 100; ++i) graphs.push_back(detail::random_graph(rng, 2, 8, false));
        for (long n = 2; n <= 8; ++n) {
            graphs.push_back(path_graph(n));
            graphs.push_back(complete_graph(n));
            if (n >= 3) graphs.push_back(cycle_graph(n));
            for (auto& t : all_trees(n)) graphs.push_back(t);
        }
        long failed = 0;
        for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
            auto c = infty_eigvec_candidate(graphs[gi]);
            auto P = laplacian_pair(graphs[gi], kInf, kInf);
            bool ok = verify_eigenpair(P.f, P.g, c.lambda, c.x).feasible && detail::close(rayleigh(P.f, P.g, c.x), c.lambda, 1e-12);
            if (!ok) ++failed;
            rec.expect(ok, "graph " + std::to_string(gi));
        }
        rec.check("uncertified candidates", failed == 0, static_cast<double>(failed), 0.0, 0.0);
    });
}

namespace detail {

struct PlanarPair {
    std::string name;
    HomFun f, g;  // degree 1 on ℝ²
};

inline std::vector<PlanarPair> planar_pairs(std::mt19937_64& rng) {
    std::vector<PlanarPair> out;
    for (int i = 0; i < 10; ++i) {
        SymPolytope K = random_polygon(rng), L = random_polygon(rng);
        out.push_back({"polygon gauges " + std::to_string(i), gauge(K), gauge(L)});
    }
    const double ps[] = {1.0, 1.5, 2.0, 3.0, kInf};
    for (int i = 0; i < 10; ++i) {
        double a = ps[i % 5], b = ps[(i * 3 + 1) % 5];
        if (a == b) b = ps[(i + 2) % 5];
        out.push_back({"lp pullback " + std::to_string(i), pullback(lp_norm(2, a), LinearMap(gaussian(2, 2, rng))), lp_norm(2, b)});
    }
    return out;
}

// Every value of A within tol of some value of B and vice versa.
inline double set_distance(const std::vector<double>& A, const std::vector<double>& B) {
    if (A.empty() || B.empty()) return A.empty() && B.empty() ? 0.0 : kInf;
    double d = 0.0;
    for (double a : A) {
        double m = kInf;
        for (double b : B) m = std::min(m, std::abs(a - b) / std::max(1.0, std::abs(b)));
        d = std::max(d, m);
    }
    for (double b : B) {
        double m = kInf;
        for (double a : A) m = std::min(m, std::abs(a - b) / std::max(1.0, std::abs(b)));
        d = std::max(d, m);
    }
    return d;
}

inline std::vector<double> grid_values(const HomFun& f, const HomFun& g) {
    std::vector<double> v;
    for (const auto& e : grid_spectrum_2d(f, g)) v.push_back(e.lambda);
    return v;
}

}  // namespace detail

// 7. Legendre and polarity images of powered planar pairs.
inline SuiteResult transform_suite(std::uint64_t seed) {
    return detail::timed(7, "transform factors", [&](detail::Recorder& rec) {
        std::mt19937_64 rng(seed + 7);
        auto pairs = detail::planar_pairs(rng);
        const double powers[] = {2.0, 3.0, 1.5};
        double worst_l = 0.0, worst_a = 0.0;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const double p = powers[i % 3];
            const double ps = conjugate_exponent(p);
            HomFun F = power(pairs[i].f, p), G = power(pairs[i].g, p);
            std::vector<double> base = detail::grid_values(F, G);
            std::vector<double> leg_expected, pol_expected;
            for (double l : base) {
                leg_expected.push_back(std::pow(l, ps - 1.0));
                pol_expected.push_back(polarity_factor(p, p) * l);
            }
            double dl = detail::set_distance(detail::grid_values(legendre(G), legendre(F)), leg_expected);
            double da = detail::set_distance(detail::grid_values(polarity(G), polarity(F)), pol_expected);
            worst_l = std::max(worst_l, dl);
            worst_a = std::max(worst_a, da);
            rec.expect(dl <= 1e-6, "legendre " + pairs[i].name);
            rec.expect(da <= 1e-6, "polarity " + pairs[i].name);
        }
        rec.check("pairs >= 20", pairs.size() >= 20, static_cast<double>(pairs.size()), 20.0, 0.0);
        rec.check("legendre spectrum vs lambda^(p*-1)", worst_l <= 1e-6, worst_l, 0.0, 1e-6);
        rec.check("polarity spectrum vs alpha lambda", worst_a <= 1e-6, worst_a, 0.0, 1e-6);
    });
}

// 8. |𝒜(f^p)^{1/p} − 𝒟f| strictly decreases as p → 1⁺.
inline SuiteResult gamma_suite(std::uint64_t seed) {
    return detail::timed(8, "gamma limit", [&](detail::Recorder& rec) {
        std::mt19937_64 rng(seed + 8);
        std::vector<HomFun> norms = {l1(3), l2(3), linfty_max(3), lp_norm(3, 3.0), pullback(l1(4), LinearMap(detail::gaussian(4, 3, rng)))};
        const double ps[] = {1.5, 1.1, 1.01};
        long violations = 0;
        for (const auto& f : norms) {
            HomFun Df = dual(f);
            std::vector<HomFun> A;
            for (double p : ps) A.push_back(polarity(power(f, p)));
            for (int s = 0; s < 50; ++s) {
                Vec x = detail::gaussian(3, rng);
                double d = Df.eval(x);
                double prev = kInf;
                bool ok = d > 0.0;
                for (std::size_t k = 0; k < A.size(); ++k) {
                    double e = std::abs(std::pow(A[k].eval(x), 1.0 / ps[k]) - d);
                    ok = ok && e < prev;
                    prev = e;
                }
                if (!ok) ++violations;
                rec.expect(ok, "norm sample");
            }
        }
        rec.check("monotonicity violations", violations == 0, static_cast<double>(violations), 0.0, 0.0);
    });
}

// 9. d̂(K*, L*) = d̂(K, L) and the bipolar identity.
inline SuiteResult body_suite(std::uint64_t seed) {
    return detail::timed(9, "convex-body duality", [&](detail::Recorder& rec) {
        std::mt19937_64 rng(seed + 9);
        double worst_d = 0.0, worst_b = 0.0;
        for (int i = 0; i < 100; ++i) {
            SymPolytope K = random_polygon(rng), L = random_polygon(rng);
            double d = std::abs(hat_distance(polar(K), polar(L)) - hat_distance(K, L));
            worst_d = std::max(worst_d, d);
            rec.expect(d <= 1e-8, "pair " + std::to_string(i));
            for (const SymPolytope* P : {&K, &L}) {
                SymPolytope B = polar(polar(*P));
                double e = B.vertices().rows() == P->vertices().rows() ? (B.vertices() - P->vertices()).cwiseAbs().maxCoeff() : kInf;
                worst_b = std::max(worst_b, e);
                rec.expect(e <= 1e-9, "bipolar " + std::to_string(i));
            }
        }
        rec.check("max |d(K*,L*) - d(K,L)|", worst_d <= 1e-8, worst_d, 0.0, 1e-8);
        rec.check("max bipolar vertex error", worst_b <= 1e-9, worst_b, 0.0, 1e-9);
    });
}

// 10. Ball and multiway bounds dominate eigenvalues of their constructions.
inline SuiteResult bounds_suite(std::uint64_t seed) {
    return detail::timed(10, "ball and multiway bounds", [&](detail::Recorder& rec) {
        std::mt19937_64 rng(seed + 10);
        long violations = 0, certified = 0;
        auto note = [&](bool ok, const std::string& what) {
            if (!ok) ++violations;
            rec.expect(ok, what);
        };
        for (int gi = 0; gi < 30; ++gi) {
            Graph G = detail::random_graph(rng, 3, 8, false);
            const long n = G.n();
            const std::string tag = "graph " + std::to_string(gi);
            // (∞,1) pair and ball profiles.
            auto B = laplacian_pair(G, kInf, 1.0);
            auto D = all_distances(G);
            for (long v = 0; v < n; ++v) {
                long ecc = 0;
                for (long u = 0; u < n; ++u) ecc = std::max(ecc, D[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]);
                for (long r = 1; r <= ecc; ++r) {
                    Vec x = ball_vector(G, v, r);
                    double size = ball_size(G, v, r);
                    double lam = rayleigh(B.f, B.g, x);
                    if (verify_eigenpair(B.f, B.g, lam, x).feasible) {
                        ++certified;
                        note(lam <= 1.0 / size + 1e-12, tag + " ball");
                    }
                }
            }
            for (int k = 1; k <= std::min<long>(3, n); ++k) {
                auto bb = inscribed_ball_bound(G, k);
                if (std::isinf(bb.value)) continue;
                std::vector<Vec> prof;
                for (const auto& ball : bb.balls) prof.push_back(ball_vector(G, ball.center, ball.radius));
                for (int s = 0; s < 20; ++s) {
                    Vec x = Vec::Zero(n);
                    for (const auto& p : prof) x += detail::gaussian(1, rng)(0) * p;
                    if (B.g.eval(x) <= 0.0) continue;
                    note(rayleigh(B.f, B.g, x) <= bb.value + 1e-12, tag + " ball span");
                }
            }
            // (1,∞) pair and block indicators of the optimal partitions.
            auto C = laplacian_pair(G, 1.0, kInf);
            for (int k = 2; k <= std::min<long>(4, n); ++k) {
                auto mw = multiway_maxcut_bound(G, k);
                long codes = 1;
                for (int i = 0; i < k; ++i) codes *= 3;
                for (long code = 1; code < codes; ++code) {
                    Vec x = Vec::Zero(n);
                    long c = code;
                    for (const auto& blk : mw.blocks) {
                        double t = static_cast<double>(c % 3) - 1.0;
                        c /= 3;
                        for (long v : blk) x(v) = t;
                    }
                    double fv = C.f.eval(x), gv = C.g.eval(x);
                    if (!(gv > 0.0)) continue;
                    double lam = fv / gv;
                    note(lam <= mw.value + 1e-12, tag + " multiway span");
                    if (lam > 0.0 && verify_eigenpair(C.f, C.g, lam, x).feasible) ++certified;
                }
            }
        }
        rec.check("certified constructions > 0", certified > 0, static_cast<double>(certified), 0.0, 0.0);
        rec.check("bound violations", violations == 0, static_cast<double>(violations), 0.0, 0.0);
    });
}

inline std::vector<std::function<SuiteResult(std::uint64_t)>> all_suites() {
    return {involution, transfer_suite, five_forms, cheeger_suite, cut_suite,
            diameter_suite, transform_suite, gamma_suite, body_suite, bounds_suite};
}

/// FNV-1a over the suite outcomes, values rounded to 1e-9.
inline std::string digest(const std::vector<SuiteResult>& results) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& r : results) {
        std::ostringstream os;
        os << r.id << '|' << r.cases << '|' << r.failures;
        for (const auto& c : r.checks) {
            os << '|' << c.name << ':' << c.passed << ':';
            os << std::llround(c.lhs * 1e9) << ':' << std::llround(c.rhs * 1e9);
        }
        mix(os.str());
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

}  // namespace spectradual::selftest
