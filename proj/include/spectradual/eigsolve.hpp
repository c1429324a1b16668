#pragma once

/**
 * @file eigsolve.hpp
 * @brief Extremal eigenvalue solvers for homogeneous function pairs and a
 * planar brute-force spectrum oracle.
 */

#include "errors.hpp"
#include "homfun.hpp"
#include "linalg.hpp"
#include "subdiff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <thread>
#include <vector>

namespace spectradual {

struct SolveConfig {
    int max_iters = 500;
    double tol = 1e-14;  // relative ratio change
    std::uint64_t seed = 1;
    int restarts = 8;
    std::vector<Vec> starts;  // extra starting points
    bool certify = true;
    int threads = 0;  // 0: SPECTRADUAL_THREADS or hardware concurrency

    void validate() const {
        if (max_iters < 1) throw DomainError("SolveConfig: max_iters must be ≥ 1");
        if (!(tol > 0.0)) throw DomainError("SolveConfig: tol must be positive");
        if (restarts < 0) throw DomainError("SolveConfig: restarts must be ≥ 0");
    }
};

struct SpectrumEstimate {
    double lambda = 0.0;
    Vec x;
    std::vector<double> history;  // per-run ratio values of the winning run
    std::optional<EigenCertificate> certificate;
    bool verified = false;
    int runs = 0;
};

/// f(x) / g(x).
inline double rayleigh(const HomFun& f, const HomFun& g, const Vec& x) {
    double gv = g.eval(x), fv = f.eval(x);
    double scale = std::pow(std::max(1.0, x.cwiseAbs().maxCoeff()), g.degree());
    if (gv <= 1e-14 * scale) {
        if (fv <= 1e-14 * scale) throw RatioError("rayleigh: f(x) = g(x) = 0, ratio undefined");
        throw RatioError("rayleigh: g(x) = 0 < f(x), ratio infinite");
    }
    return fv / gv;
}

namespace detail {

inline int thread_count(const SolveConfig& cfg, std::size_t jobs) {
    long t = cfg.threads;
    if (t <= 0) {
        if (const char* env = std::getenv("SPECTRADUAL_THREADS")) t = std::atol(env);
        if (t <= 0) t = static_cast<long>(std::max(1u, std::thread::hardware_concurrency()));
    }
    return static_cast<int>(std::max<long>(1, std::min<long>(t, static_cast<long>(jobs))));
}

// Runs fn(i) for i < jobs; results land in slot i so the merge is schedule independent.
template <class R, class Fn>
std::vector<R> parallel_runs(std::size_t jobs, int threads, Fn fn) {
    std::vector<R> out(jobs);
    if (threads <= 1 || jobs <= 1) {
        for (std::size_t i = 0; i < jobs; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = static_cast<std::size_t>(w); i < jobs; i += static_cast<std::size_t>(threads)) out[i] = fn(i);
            } catch (...) {
                errs[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

struct Run {
    bool ok = false;
    double ratio = 0.0;
    Vec x;
    std::vector<double> history;
};

inline std::vector<Vec> default_starts(long n, const SolveConfig& cfg) {
    std::vector<Vec> s = cfg.starts;
    std::mt19937_64 rng(cfg.seed);
    std::bernoulli_distribution coin(0.5);
    for (int r = 0; r < cfg.restarts; ++r) {
        Vec v(n);
        for (long i = 0; i < n; ++i) v(i) = coin(rng) ? 1.0 : -1.0;
        s.push_back(v);
    }
    s.push_back(Vec::Ones(n));
    for (long i = 0; i < n; ++i) s.push_back(Vec::Unit(n, i));
    return s;
}

// Best ratio in the given direction, ties broken by the lexicographically smallest vector.
inline const Run* pick_best(const std::vector<Run>& runs, bool maximize) {
    const Run* best = nullptr;
    for (const auto& r : runs) {
        if (!r.ok) continue;
        if (!best) {
            best = &r;
            continue;
        }
        double tol = 1e-10 * std::max(1.0, std::abs(best->ratio));
        double diff = maximize ? r.ratio - best->ratio : best->ratio - r.ratio;
        if (diff > tol || (std::abs(diff) <= tol && linalg::lex_less(r.x, best->x))) best = &r;
    }
    return best;
}

inline void certify(SpectrumEstimate& est, const HomFun& f, const HomFun& g, const SolveConfig& cfg) {
    if (!cfg.certify) return;
    if (!has_subdiff_description(f, est.x) || !has_subdiff_description(g, est.x)) return;
    try {
        est.certificate = verify_eigenpair(f, g, est.lambda, est.x, 1e-7);
        est.verified = est.certificate->feasible;
    } catch (const Error&) {
        est.certificate.reset();
    }
}

inline HomFun canonical_base(const HomFun& f, double& c) {
    const Node& n = f.node();
    c = n.canon_c;
    return n.canon_base ? HomFun(n.canon_base) : f;
}

}  // namespace detail

/**
 * @brief Nonlinear power iteration for λ_max(f, g) = max f/g.
 *
 * Works on the degree-1 bases of f and g. The numerator is replaced by its
 * minimum over cosets of Ker g ⊖ (Ker f ∩ Ker g), so the ratio is finite
 * whenever λ_max is. Each step maps a subgradient s of the numerator to an
 * argmax of ⟨s, ·⟩ over {g ≤ 1}, which is a subgradient of 𝒟g at s.
 */
inline SpectrumEstimate power_max(const HomFun& f, const HomFun& g, const SolveConfig& cfg = {}) {
    cfg.validate();
    require_dim(g.dim(), f.dim(), "power_max");
    if (std::abs(f.degree() - g.degree()) > 1e-12) throw DomainError("power_max: degrees must agree");
    const long n = f.dim();
    double cf = 1.0, cg = 1.0;
    HomFun F = detail::canonical_base(f, cf), G = detail::canonical_base(g, cg);
    const double p = f.degree();
    const Mat& KG = G.kernel_basis();
    Mat Z = linalg::intersect(F.kernel_basis(), KG, n);
    Mat N = linalg::relative_complement(KG, Z, n);
    HomFun DG = dual(G);
    std::vector<Vec> starts = detail::default_starts(n, cfg);

    auto run = [&](std::size_t i) {
        detail::Run out;
        Vec u = linalg::project_out(KG, starts[i]);
        double gu = G.eval(u);
        if (!(gu > 1e-12 * std::max(1.0, u.norm()))) return out;
        u /= gu;
        AffineMin cm = affine_min(F, u, N);
        double r = cm.value;
        out.history.push_back(r);
        for (int k = 1; k < cfg.max_iters; ++k) {
            Vec s = linalg::project_out(KG, cm.subgradient);
            if (s.norm() <= 1e-300) break;
            Vec un = linalg::project_out(KG, DG.subgradient(s));
            double gn = G.eval(un);
            if (!(gn > 0.0)) break;
            un /= gn;
            AffineMin cn = affine_min(F, un, N);
            if (cn.value < r) break;
            out.history.push_back(cn.value);
            bool done = cn.value - r <= cfg.tol * std::max(1.0, r);
            r = cn.value;
            cm = cn;
            if (done) break;
        }
        out.ok = true;
        out.ratio = r;
        out.x = cm.point;
        return out;
    };
    auto runs = detail::parallel_runs<detail::Run>(starts.size(), detail::thread_count(cfg, starts.size()), run);
    const detail::Run* best = detail::pick_best(runs, true);
    if (!best) throw RatioError("power_max: no start outside Ker g");
    SpectrumEstimate est;
    est.runs = static_cast<int>(starts.size());
    est.x = best->x;
    est.lambda = cf / cg * std::pow(best->ratio, p);
    for (double h : best->history) est.history.push_back(cf / cg * std::pow(h, p));
    detail::certify(est, f, g, cfg);
    return est;
}

namespace detail {

inline bool unit_lp(const HomFun& g, double& p) {
    const Node& n = effective(g.node());
    if (n.op != Op::weighted_lp || n.canon_base) return false;
    if (!(n.weights.array() == 1.0).all()) return false;
    p = n.p;
    return p == 1.0 || p == 2.0 || std::isinf(p);
}

// Euclidean projection onto the unit ℓ1 ball.
inline Vec project_l1_ball(const Vec& v) {
    if (v.lpNorm<1>() <= 1.0) return v;
    std::vector<double> a(static_cast<std::size_t>(v.size()));
    for (long i = 0; i < v.size(); ++i) a[static_cast<std::size_t>(i)] = std::abs(v(i));
    std::sort(a.begin(), a.end(), std::greater<>());
    double cum = 0.0, theta = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        cum += a[k];
        double t = (cum - 1.0) / static_cast<double>(k + 1);
        if (k + 1 == a.size() || a[k + 1] <= t) {
            theta = t;
            break;
        }
    }
    Vec r(v.size());
    for (long i = 0; i < v.size(); ++i) r(i) = (v(i) > 0 ? 1.0 : -1.0) * std::max(0.0, std::abs(v(i)) - theta);
    return r;
}

inline Vec project_ball(const HomFun& g, const Vec& u) {
    double p = 0.0;
    if (unit_lp(g, p)) {
        if (p == 2.0) {
            double nu = u.norm();
            return nu > 1.0 ? Vec(u / nu) : u;
        }
        if (std::isinf(p)) return u.cwiseMax(-1.0).cwiseMin(1.0);
        return project_l1_ball(u);
    }
    double gv = g.eval(u);
    return gv > 1.0 ? Vec(u / gv) : u;
}

// argmin { f(u) − λ⟨s,u⟩ : g(u) ≤ 1 } as one LP over both LP forms.
inline std::optional<Vec> inner_lp(const HomFun& f, const HomFun& g, double lambda, const Vec& s) {
    const LpForm* Lf = effective(f.node()).lp.get();
    const LpForm* Lg = effective(g.node()).lp.get();
    if (!Lf || !Lg) return std::nullopt;
    const long n = f.dim();
    lp::Problem<double> P;
    for (long i = 0; i < n; ++i) P.add_var(true, -lambda * s(i));
    const int zf = P.num_vars();
    for (long j = 0; j < Lf->vars(); ++j) P.add_var(Lf->free[static_cast<std::size_t>(j)] != 0, Lf->c(j));
    const int zg = P.num_vars();
    for (long j = 0; j < Lg->vars(); ++j) P.add_var(Lg->free[static_cast<std::size_t>(j)] != 0, 0.0);
    auto block = [&](const LpForm& L, int z0) {
        for (long r = 0; r < L.rows(); ++r) {
            std::vector<std::pair<int, double>> row;
            for (long j = 0; j < L.vars(); ++j)
                if (L.E(r, j) != 0.0) row.emplace_back(z0 + static_cast<int>(j), L.E(r, j));
            for (long i = 0; i < n; ++i)
                if (L.F(r, i) != 0.0) row.emplace_back(static_cast<int>(i), -L.F(r, i));
            P.add_row(std::move(row), lp::Sense::eq, 0.0);
        }
    };
    block(*Lf, zf);
    block(*Lg, zg);
    std::vector<std::pair<int, double>> cap;
    for (long j = 0; j < Lg->vars(); ++j)
        if (Lg->c(j) != 0.0) cap.emplace_back(zg + static_cast<int>(j), Lg->c(j));
    P.add_row(std::move(cap), lp::Sense::le, 1.0);
    auto sol = P.solve();
    if (!sol.ok()) return std::nullopt;
    Vec u(n);
    for (long i = 0; i < n; ++i) u(i) = sol.x[static_cast<std::size_t>(i)];
    return u;
}

// Same problem through the conic forms, with a slack for g(u) ≤ 1.
inline std::optional<Vec> inner_cone(const HomFun& f, const HomFun& g, double lambda, const Vec& s) {
    const LpForm* Lf = f.conic_form();
    const LpForm* Lg = g.conic_form();
    if (!Lf || !Lg) return std::nullopt;
    const long n = f.dim(), kf = Lf->vars(), kg = Lg->vars(), nv = n + kf + kg + 1;
    cone::Problem P;
    P.c = Vec::Zero(nv);
    P.c.head(n) = -lambda * s;
    P.c.segment(n, kf) = Lf->c;
    P.A = Mat::Zero(Lf->rows() + Lg->rows() + 1, nv);
    P.A.block(0, 0, Lf->rows(), n) = -Lf->F;
    P.A.block(0, n, Lf->rows(), kf) = Lf->E;
    P.A.block(Lf->rows(), 0, Lg->rows(), n) = -Lg->F;
    P.A.block(Lf->rows(), n + kf, Lg->rows(), kg) = Lg->E;
    P.A.block(Lf->rows() + Lg->rows(), n + kf, 1, kg) = Lg->c.transpose();
    P.A(P.A.rows() - 1, nv - 1) = 1.0;
    P.b = Vec::Zero(P.A.rows());
    P.b(P.b.size() - 1) = 1.0;
    P.free.assign(static_cast<std::size_t>(n), 1);
    P.free.insert(P.free.end(), Lf->free.begin(), Lf->free.end());
    P.free.insert(P.free.end(), Lg->free.begin(), Lg->free.end());
    P.free.push_back(0);
    P.cones = shifted(Lf->cones, n);
    for (const auto& c : shifted(Lg->cones, n + kf)) P.cones.push_back(c);
    cone::Result r = cone::solve(P);
    // A stalled barrier iterate is still feasible; a negative value is still descent.
    if (!r.ok && !(r.z.size() == nv && r.value < 0.0)) return std::nullopt;
    return Vec(r.z.head(n));
}

// Projected subgradient with step c/√k, keeping the best iterate.
inline Vec inner_subgradient(const HomFun& f, const HomFun& g, double lambda, const Vec& s, const Vec& x0, int iters = 5000) {
    Vec u = x0, best = x0;
    auto obj = [&](const Vec& v) { return f.eval(v) - lambda * s.dot(v); };
    double bv = obj(u);
    const double c = 0.5 * std::max(1e-12, x0.norm());
    for (int k = 1; k <= iters; ++k) {
        Vec d = f.subgradient(u) - lambda * s;
        double nd = d.norm();
        if (nd <= 1e-15) break;
        u = project_ball(g, u - (c / std::sqrt(static_cast<double>(k))) * d / nd);
        double v = obj(u);
        if (v < bv) {
            bv = v;
            best = u;
        }
    }
    return best;
}

}  // namespace detail

/**
 * @brief RatioDCA for the smallest nonzero eigenvalue of a degree-1 pair.
 *
 * The denominator is replaced by its minimum over cosets of
 * Ker f ⊖ (Ker f ∩ Ker g), which removes the trivial zero eigenvalues.
 * Inner problems are solved as one exact LP when both functions are
 * polyhedral, as one conic program when both carry conic forms, and by
 * projected subgradient descent otherwise.
 */
inline SpectrumEstimate ratiodca_min(const HomFun& f, const HomFun& g, const SolveConfig& cfg = {}) {
    cfg.validate();
    require_dim(g.dim(), f.dim(), "ratiodca_min");
    if (!detail::is_one(f.degree()) || !detail::is_one(g.degree())) throw DomainError("ratiodca_min: degrees must be 1");
    const long n = f.dim();
    const Mat& KF = f.kernel_basis();
    Mat Z = linalg::intersect(KF, g.kernel_basis(), n);
    Mat N = linalg::relative_complement(KF, Z, n);
    std::vector<Vec> starts = cfg.starts;
    {
        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> nd(0.0, 1.0);
        for (int r = 0; r < cfg.restarts; ++r) {
            Vec v(n);
            for (long i = 0; i < n; ++i) v(i) = nd(rng);
            starts.push_back(v);
        }
    }
    if (starts.empty()) starts.push_back(Vec::Ones(n));

    auto normalize = [&](const Vec& v, AffineMin& cm, Vec& x) {
        cm = affine_min(g, v, N);
        if (!(cm.value > 1e-12 * std::max(1.0, v.norm()))) return false;
        x = cm.point / cm.value;
        return true;
    };
    auto run = [&](std::size_t i) {
        detail::Run out;
        Vec x;
        AffineMin cm;
        if (!normalize(linalg::project_out(KF, starts[i]), cm, x)) return out;
        double lam = f.eval(x);
        if (!(lam > 1e-13)) return out;
        out.history.push_back(lam);
        for (int k = 1; k < cfg.max_iters; ++k) {
            Vec s = cm.subgradient;
            auto lpu = detail::inner_lp(f, g, lam, s);
            if (!lpu) lpu = detail::inner_cone(f, g, lam, s);
            Vec u = lpu ? *lpu : detail::inner_subgradient(f, g, lam, s, x);
            if (f.eval(u) <= 1e-13 * std::max(1.0, u.norm())) {
                u = linalg::project_out(KF, u);
                if (u.norm() <= 1e-12) break;
            }
            Vec xn;
            AffineMin cn;
            if (!normalize(u, cn, xn)) break;
            double ln = f.eval(xn);
            if (!(ln > 1e-13) || ln > lam) break;
            out.history.push_back(ln);
            bool done = lam - ln <= cfg.tol * std::max(1.0, lam);
            lam = ln;
            x = xn;
            cm = cn;
            if (done) break;
        }
        out.ok = true;
        out.ratio = lam;
        out.x = x;
        return out;
    };
    auto runs = detail::parallel_runs<detail::Run>(starts.size(), detail::thread_count(cfg, starts.size()), run);
    const detail::Run* best = detail::pick_best(runs, false);
    if (!best) throw RatioError("ratiodca_min: every start lies in Ker f");
    SpectrumEstimate est;
    est.runs = static_cast<int>(starts.size());
    est.lambda = best->ratio;
    est.x = best->x;
    est.history = best->history;
    detail::certify(est, f, g, cfg);
    return est;
}

struct GridEigenpair {
    double lambda = 0.0;
    Vec x;
    bool verified = false;
    double residual = 0.0;
};

/**
 * @brief Brute-force planar spectrum: scans the level set g = 1.
 *
 * At x on the level set the only candidate eigenvalue is λ = p f(x)/(q g(x))
 * (Euler), and x is an eigenvector iff s_f − λ s_g vanishes across x. The
 * scan locates sign changes of that transverse component, refines them by
 * bisection, adds refined local extrema of the ratio, and verifies each
 * candidate. Returned λ values are deduplicated.
 */
inline std::vector<GridEigenpair> grid_spectrum_2d(const HomFun& f, const HomFun& g, int resolution = 3600) {
    require_dim(f.dim(), 2, "grid_spectrum_2d");
    require_dim(g.dim(), 2, "grid_spectrum_2d");
    if (resolution < 8) throw DomainError("grid_spectrum_2d: resolution must be ≥ 8");
    const double p = f.degree(), q = g.degree();
    const double two_pi = 2.0 * std::acos(-1.0);
    auto point = [&](double th) {
        Vec d(2);
        d << std::cos(th), std::sin(th);
        double gv = g.eval(d);
        if (!(gv > 0.0)) return Vec(Vec::Zero(2));
        return Vec(d / std::pow(gv, 1.0 / q));
    };
    auto lam_at = [&](const Vec& x) { return p * f.eval(x) / (q * g.eval(x)); };
    auto phi = [&](double th) {
        Vec x = point(th);
        if (x.norm() == 0.0) return 0.0;
        Vec perp(2);
        perp << -x(1), x(0);
        double lam = lam_at(x);
        return (f.subgradient(x) - lam * g.subgradient(x)).dot(perp);
    };
    auto ratio = [&](double th) {
        Vec x = point(th);
        return x.norm() == 0.0 ? 0.0 : f.eval(x);
    };
    std::vector<double> cand;
    std::vector<double> ph(static_cast<std::size_t>(resolution)), rv(static_cast<std::size_t>(resolution));
    const double h = two_pi / resolution;
    for (int j = 0; j < resolution; ++j) {
        ph[static_cast<std::size_t>(j)] = phi(j * h);
        rv[static_cast<std::size_t>(j)] = ratio(j * h);
    }
    for (int j = 0; j < resolution; ++j) {
        const auto uj = static_cast<std::size_t>(j), un = static_cast<std::size_t>((j + 1) % resolution);
        const auto up = static_cast<std::size_t>((j + resolution - 1) % resolution);
        double a = ph[uj], b = ph[un];
        if (std::abs(a) <= 1e-12) cand.push_back(j * h);
        if (a * b < 0.0) {
            double lo = j * h, hi = (j + 1) * h;
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (lo + hi);
                if (phi(mid) * a > 0.0) lo = mid;
                else hi = mid;
            }
            cand.push_back(lo);
            cand.push_back(hi);
        }
        double r0 = rv[up], r1 = rv[uj], r2 = rv[un];
        bool mx = r1 >= r0 && r1 >= r2 && (r1 > r0 || r1 > r2);
        bool mn = r1 <= r0 && r1 <= r2 && (r1 < r0 || r1 < r2);
        if (mx || mn) {
            double sgn = mx ? -1.0 : 1.0;
            cand.push_back(optim::golden_min([&](double t) { return sgn * ratio(t); }, (j - 1) * h, (j + 1) * h));
        }
    }
    std::vector<GridEigenpair> found;
    for (double th : cand) {
        Vec x = point(th);
        if (x.norm() == 0.0) continue;
        GridEigenpair e;
        e.x = x;
        e.lambda = lam_at(x);
        const bool df = has_subdiff_description(f, x), dg = has_subdiff_description(g, x);
        if (df || dg) {
            // A single subgradient stands in for a missing description; membership still certifies.
            SubdiffSet sf = df ? subdiff_at(f, x) : SubdiffSet::singleton(f.subgradient(x));
            SubdiffSet sg = dg ? subdiff_at(g, x) : SubdiffSet::singleton(g.subgradient(x));
            auto r = detail::residual(sf, sg, e.lambda, false, Arithmetic::automatic);
            e.residual = r.solved ? r.t : kInf;
            e.verified = r.solved && r.t <= 1e-7 * std::max(1.0, r.first.cwiseAbs().maxCoeff());
        } else {
            e.residual = std::abs(phi(th));
            e.verified = e.residual <= 1e-7 * std::max(1.0, e.lambda);
        }
        if (e.verified) found.push_back(e);
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
    std::vector<GridEigenpair> out;
    for (const auto& e : found) {
        if (!out.empty() && std::abs(e.lambda - out.back().lambda) <= 1e-6 * std::max(1.0, e.lambda)) continue;
        out.push_back(e);
    }
    return out;
}

}  // namespace spectradual
