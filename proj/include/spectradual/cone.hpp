#pragma once

/**
 * @file cone.hpp
 * @brief Dense barrier method for small conic programs
 *     min cᵀz  s.t.  A z = b,  z ∈ K
 * where K is a product of free lines, half lines and ℓp cones
 * {(t, u) : ‖u‖_p ≤ t}, 1 < p < ∞.
 *
 * ℓ2 cones use the usual −log(t² − ‖u‖²) barrier. Other ℓp cones are split
 * into three-dimensional power cones |u_i| ≤ r_i^{1/p} t^{1−1/p} with
 * Σ r_i = t.
 */

#include "linalg.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace spectradual::cone {

/// ‖z_u‖_p ≤ z_t.
struct PCone {
    double p = 2.0;
    long t = 0;
    std::vector<long> u;
};

struct Problem {
    Vec c;
    Mat A;
    Vec b;
    std::vector<char> free;  // variables outside every cone: free or ≥ 0
    std::vector<PCone> cones;
};

struct Result {
    bool ok = false;
    double value = 0.0;  // cᵀz at a feasible z
    double gap = 0.0;    // bound on value − optimum
    Vec z;
    Vec y;  // dual multipliers of A z = b: c − Aᵀy ∈ K*
    int newton = 0;
};

struct Options {
    double tol = 1e-12;  // relative duality gap
    int max_newton = 600;
};

namespace detail {

inline constexpr double kBig = 1e300;

// Newton steps run in extended precision: τ·c and ∇Φ cancel near the optimum.
using Real = long double;
using RVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using RMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

enum class Kind { nonneg, soc, power };

struct Block {
    Kind kind;
    std::vector<long> idx;  // nonneg: {z}; soc: {t, u...}; power: {r, t, u}
    Real alpha = 0.5;
    double nu = 1.0;
};

inline Real power_psi(Real x, Real y, Real z, Real a) {
    return std::pow(x, 2 * a) * std::pow(y, 2 - 2 * a) - z * z;
}

inline bool inside(const std::vector<Block>& blocks, const RVec& z) {
    for (const auto& B : blocks) {
        switch (B.kind) {
            case Kind::nonneg:
                if (!(z(B.idx[0]) > 0.0)) return false;
                break;
            case Kind::soc: {
                Real t = z(B.idx[0]);
                if (!(t > 0.0)) return false;
                Real s = 0.0;
                for (std::size_t j = 1; j < B.idx.size(); ++j) s += z(B.idx[j]) * z(B.idx[j]);
                if (!(t * t - s > 0.0)) return false;
                break;
            }
            case Kind::power: {
                Real x = z(B.idx[0]), y = z(B.idx[1]);
                if (!(x > 0.0) || !(y > 0.0)) return false;
                if (!(power_psi(x, y, z(B.idx[2]), B.alpha) > 0.0)) return false;
                break;
            }
        }
    }
    return true;
}

// Barrier value, gradient and Hessian accumulated into (g, H).
inline Real barrier(const std::vector<Block>& blocks, const RVec& z, RVec& g, RMat& H) {
    Real phi = 0.0;
    g.setZero();
    H.setZero();
    for (const auto& B : blocks) {
        switch (B.kind) {
            case Kind::nonneg: {
                long i = B.idx[0];
                Real v = z(i);
                phi -= std::log(v);
                g(i) -= 1.0 / v;
                H(i, i) += 1.0 / (v * v);
                break;
            }
            case Kind::soc: {
                const std::size_t k = B.idx.size();
                RVec w(static_cast<long>(k)), gp(static_cast<long>(k));
                for (std::size_t j = 0; j < k; ++j) w(static_cast<long>(j)) = z(B.idx[j]);
                Real psi = w(0) * w(0) - w.tail(static_cast<long>(k) - 1).squaredNorm();
                gp(0) = 2.0 * w(0);
                gp.tail(static_cast<long>(k) - 1) = -2.0 * w.tail(static_cast<long>(k) - 1);
                phi -= std::log(psi);
                for (std::size_t a = 0; a < k; ++a) {
                    const long ia = B.idx[a];
                    g(ia) -= gp(static_cast<long>(a)) / psi;
                    for (std::size_t c = 0; c < k; ++c)
                        H(ia, B.idx[c]) += gp(static_cast<long>(a)) * gp(static_cast<long>(c)) / (psi * psi);
                    H(ia, ia) += (a == 0 ? -2.0 : 2.0) / psi;
                }
                break;
            }
            case Kind::power: {
                const long ix = B.idx[0], iy = B.idx[1], iz = B.idx[2];
                const Real x = z(ix), y = z(iy), u = z(iz), al = B.alpha;
                const Real ea = 2.0 * al, eb = 2.0 - 2.0 * al;
                const Real P = std::pow(x, ea) * std::pow(y, eb);
                const Real psi = P - u * u;
                const Real gpv[3] = {ea * P / x, eb * P / y, -2.0 * u};
                const Real hp[3][3] = {{ea * (ea - 1.0) * P / (x * x), ea * eb * P / (x * y), 0.0},
                                         {ea * eb * P / (x * y), eb * (eb - 1.0) * P / (y * y), 0.0},
                                         {0.0, 0.0, -2.0}};
                const long id[3] = {ix, iy, iz};
                phi -= std::log(psi) + (1.0 - al) * std::log(x) + al * std::log(y);
                for (int a = 0; a < 3; ++a) {
                    g(id[a]) -= gpv[a] / psi;
                    for (int c = 0; c < 3; ++c) H(id[a], id[c]) += gpv[a] * gpv[c] / (psi * psi) - hp[a][c] / psi;
                }
                g(ix) -= (1.0 - al) / x;
                g(iy) -= al / y;
                H(ix, ix) += (1.0 - al) / (x * x);
                H(iy, iy) += al / (y * y);
                break;
            }
        }
    }
    return phi;
}

}  // namespace detail

inline Result solve(const Problem& P, const Options& opt = {}) {
    using detail::Block;
    using detail::Kind;
    const long k0 = P.c.size();
    const long m0 = P.A.rows();

    // Expand ℓp cones (p ≠ 2) into power cones with auxiliary r.
    std::vector<char> in_cone(static_cast<std::size_t>(k0), 0);
    long extra = 0, extra_rows = 0;
    for (const auto& C : P.cones) {
        in_cone[static_cast<std::size_t>(C.t)] = 1;
        for (long i : C.u) in_cone[static_cast<std::size_t>(i)] = 1;
        if (C.p != 2.0) {
            extra += static_cast<long>(C.u.size());
            ++extra_rows;
        }
    }
    const long K = k0 + extra;
    Mat A = Mat::Zero(m0 + extra_rows, K);
    A.topLeftCorner(m0, k0) = P.A;
    Vec b = Vec::Zero(m0 + extra_rows);
    b.head(m0) = P.b;
    Vec c = Vec::Zero(K);
    c.head(k0) = P.c;
    std::vector<Block> blocks;
    std::vector<char> freev(static_cast<std::size_t>(K), 1);
    for (long j = 0; j < k0; ++j) {
        if (in_cone[static_cast<std::size_t>(j)] || P.free[static_cast<std::size_t>(j)]) continue;
        blocks.push_back({Kind::nonneg, {j}, 0.5, 1.0});
        freev[static_cast<std::size_t>(j)] = 0;
    }
    long col = k0, row = m0;
    for (const auto& C : P.cones) {
        freev[static_cast<std::size_t>(C.t)] = 0;
        for (long i : C.u) freev[static_cast<std::size_t>(i)] = 0;
        if (C.p == 2.0) {
            Block B{Kind::soc, {C.t}, 0.5, 2.0};
            for (long i : C.u) B.idx.push_back(i);
            blocks.push_back(std::move(B));
            continue;
        }
        A(row, C.t) = -1.0;
        for (long i : C.u) {
            A(row, col) = 1.0;
            freev[static_cast<std::size_t>(col)] = 0;
            blocks.push_back({Kind::power, {col, C.t, i}, 1.0 / C.p, 3.0});
            ++col;
        }
        ++row;
    }
    double theta = 0.0;
    for (const auto& B : blocks) theta += B.nu;

    // Feasible set z_p + span(Z); rows of A are consistent by construction.
    using detail::Real;
    using detail::RMat;
    using detail::RVec;
    Result res;
    const Mat Apinv = linalg::pinv(A);
    const Vec zp = Apinv * b;
    const double s = std::max(1.0, b.cwiseAbs().maxCoeff());
    if ((A * zp - b).norm() > 1e-9 * s) return res;
    const Mat Z = linalg::null_space(A, K);
    const long q = Z.cols();
    const RVec zpr = zp.cast<Real>();
    const RVec cR = c.cast<Real>();

    Vec e = Vec::Zero(K);
    for (const auto& B : blocks) {
        e(B.idx[0]) = 1.0;
        if (B.kind == Kind::power) e(B.idx[1]) = 1.0;
    }

    // Damped Newton on τ·costᵀv + Φ(z0 + G v).
    RVec g(K);
    RMat H(K, K);
    auto center = [&](const RMat& G, const RVec& cost, RVec& v, Real tau, auto&& stop) {
        double last = detail::kBig;
        RVec gg(K);
        RMat HH(K, K);
        auto fval = [&](const RVec& vv) { return detail::barrier(blocks, RVec(zpr + G * vv), gg, HH) + tau * cost.dot(vv); };
        for (int it = 0; it < 200 && res.newton < opt.max_newton; ++it) {
            if (stop(v)) return;
            ++res.newton;
            detail::barrier(blocks, RVec(zpr + G * v), g, H);
            RVec gr = G.transpose() * g + tau * cost;
            RMat Hr = G.transpose() * H * G;
            const Real reg = Real(1e-17) * std::max(Real(1), Hr.diagonal().cwiseAbs().maxCoeff());
            Hr.diagonal().array() += reg;
            RVec dv = -Hr.ldlt().solve(gr);
            const double lam2 = static_cast<double>(-gr.dot(dv));
            // Converged, or stalled at the rounding floor.
            if (!(lam2 > 1e-14) || (lam2 < 1e-8 && lam2 > 0.5 * last)) return;
            last = lam2;
            // Inside the quadratic region (λ < 1/4) the full step is safe up to the domain.
            const bool armijo = lam2 >= 0.0625;
            const Real f0 = armijo ? fval(v) : Real(0);
            Real a = 1;
            while (a > 1e-12 && (!detail::inside(blocks, RVec(zpr + G * (v + a * dv))) ||
                                 (armijo && fval(RVec(v + a * dv)) > f0 - Real(0.01) * a * lam2)))
                a /= 2;
            if (a <= 1e-12) return;
            v += a * dv;
        }
    };

    RVec v = RVec::Zero(q);
    const RMat ZR = Z.cast<Real>();
    const Vec e_in = q ? Vec(Z * (Z.transpose() * e)) : Vec(Vec::Zero(K));
    if (!detail::inside(blocks, zpr) && (e - e_in).norm() <= 1e-9 * e.norm()) {
        // e is a feasible direction: walk along it.
        double sig = 1.0 + 2.0 * zp.cwiseAbs().maxCoeff();
        while (!detail::inside(blocks, RVec((zp + sig * e_in).cast<Real>()))) sig *= 2.0;
        sig *= 2.0;
        v = (sig * (Z.transpose() * e)).cast<Real>();
    } else if (!detail::inside(blocks, zpr)) {
        // Phase I: z_p + Z v + σ e interior with σ < 0.
        RMat G(K, q + 1);
        G << ZR, e.cast<Real>();
        double sig = 1.0 + 2.0 * zp.cwiseAbs().maxCoeff();
        while (!detail::inside(blocks, RVec((zp + sig * e).cast<Real>()))) sig *= 2.0;
        sig *= 2.0;  // keep clear of the boundary
        RVec vs = RVec::Zero(q + 1);
        vs(q) = sig;
        RVec cost = RVec::Zero(q + 1);
        cost(q) = 1;
        auto done = [&](const RVec& vv) { return vv(q) < 0; };
        for (Real tau = 1 / s; tau < 1e16 && !done(vs) && res.newton < opt.max_newton; tau *= 10) center(G, cost, vs, tau, done);
        if (!done(vs)) return res;
        v = vs.head(q);
    }

    // Phase II.
    const RVec cr = ZR.transpose() * cR;
    const double cscale = std::max(1.0, c.cwiseAbs().maxCoeff());
    Real tau = 1 / s;
    auto never = [](const RVec&) { return false; };
    // At the centre c + ∇Φ/τ = Aᵀy. The estimate carries an O(1/τ) bias and rounding that grows
    // like τ, so y is extrapolated from the adjacent pair of centres that differ least.
    // The gradient is first corrected by one Newton step, leaving a centring error of O(λ²).
    auto dual_at = [&](const RVec& vv) {
        detail::barrier(blocks, RVec(zpr + ZR * vv), g, H);
        RMat Hr = ZR.transpose() * H * ZR;
        Hr.diagonal().array() += Real(1e-17) * std::max(Real(1), Hr.diagonal().cwiseAbs().maxCoeff());
        RVec dv = -Hr.ldlt().solve(RVec(ZR.transpose() * g + tau * cr));
        RVec gc = g + H * (ZR * dv);
        return Vec(Apinv.transpose() * RVec(cR + gc / tau).cast<double>());
    };
    std::vector<Vec> ys;
    for (int outer = 0; outer < 80; ++outer) {
        center(ZR, cr, v, tau, never);
        ys.push_back(dual_at(v));
        double val = static_cast<double>(cR.dot(zpr + ZR * v));
        if (theta == 0.0 || theta / tau <= opt.tol * std::max(cscale, std::abs(val)) || res.newton >= opt.max_newton) break;
        tau *= 10;
    }
    Vec y = ys.back();
    if (ys.size() >= 2) {
        std::size_t best = ys.size() - 2;
        double dmin = detail::kBig;
        for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
            double d = (ys[i + 1] - ys[i]).cwiseAbs().maxCoeff();
            if (d <= dmin) {
                dmin = d;
                best = i;
            }
        }
        y = (10.0 * ys[best + 1] - ys[best]) / 9.0;
    }
    RVec z = zpr + ZR * v;
    res.z = z.head(k0).cast<double>();
    res.value = static_cast<double>(cR.head(k0).dot(z.head(k0)));
    res.gap = static_cast<double>(theta / tau);
    res.y = y.head(m0);
    res.ok = res.newton < opt.max_newton;
    return res;
}

}  // namespace spectradual::cone
