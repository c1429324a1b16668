#pragma once

/**
 * @file convbody.hpp
 * @brief Polytopes containing the origin in dimension 2 and 3: gauges,
 * support functions, polars, tangency spectra and the d̂ distance.
 */

#include "eigsolve.hpp"
#include "errors.hpp"
#include "homfun.hpp"
#include "linalg.hpp"
#include "lp.hpp"
#include "subdiff.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

namespace spectradual {

namespace detail {

inline constexpr double kGeomTol = 1e-9;

inline void require_geom_dim(long d, const char* what) {
    if (d != 2 && d != 3) throw DimensionError(std::string(what) + ": dimension must be 2 or 3");
}

// All y with ⟨y, v⟩ = 1 on d linearly independent points and ⟨y, v⟩ ≤ 1 on all of them.
inline Mat supporting_solutions(const Mat& P) {
    const long d = P.cols(), n = P.rows();
    std::vector<Vec> out;
    auto consider = [&](const std::vector<long>& idx) {
        Mat A(d, d);
        for (long k = 0; k < d; ++k) A.row(k) = P.row(idx[static_cast<std::size_t>(k)]);
        Eigen::FullPivLU<Mat> lu(A);
        if (lu.rank() < d) return;
        Vec y = lu.solve(Vec::Ones(d));
        double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
        if ((A * y - Vec::Ones(d)).cwiseAbs().maxCoeff() > 1e-10 * scale) return;
        for (long i = 0; i < n; ++i)
            if (P.row(i).dot(y) > 1.0 + kGeomTol) return;
        for (const auto& z : out)
            if ((z - y).cwiseAbs().maxCoeff() <= 1e-9 * scale) return;
        out.push_back(y);
    };
    std::vector<long> idx(static_cast<std::size_t>(d));
    if (d == 2) {
        for (long i = 0; i < n; ++i)
            for (long j = i + 1; j < n; ++j) consider({i, j});
    } else {
        for (long i = 0; i < n; ++i)
            for (long j = i + 1; j < n; ++j)
                for (long k = j + 1; k < n; ++k) consider({i, j, k});
    }
    Mat R(static_cast<long>(out.size()), d);
    for (std::size_t k = 0; k < out.size(); ++k) R.row(static_cast<long>(k)) = out[k].transpose();
    return R;
}

// max t with Σ λ_i v_i = 0, Σ λ_i = 1, λ_i ≥ t.
inline bool origin_interior(const Mat& P) {
    const long d = P.cols(), n = P.rows();
    if (n == 0 || linalg::rank(P) < d) return false;
    lp::Problem<double> L;
    int t = L.add_var(true, -1.0);
    std::vector<int> lam;
    for (long i = 0; i < n; ++i) lam.push_back(L.add_var(true));
    for (long i = 0; i < n; ++i) L.add_row({{lam[static_cast<std::size_t>(i)], 1.0}, {t, -1.0}}, lp::Sense::ge, 0.0);
    for (long c = 0; c < d; ++c) {
        std::vector<std::pair<int, double>> row;
        for (long i = 0; i < n; ++i) row.push_back({lam[static_cast<std::size_t>(i)], P(i, c)});
        L.add_row(row, lp::Sense::eq, 0.0);
    }
    std::vector<std::pair<int, double>> sum;
    for (int l : lam) sum.push_back({l, 1.0});
    L.add_row(sum, lp::Sense::eq, 1.0);
    L.add_row({{t, 1.0}}, lp::Sense::le, 1.0);
    auto s = L.solve();
    return s.ok() && -s.objective > 1e-10;
}

inline Mat sort_points(Mat V) {
    std::vector<Vec> pts;
    for (long i = 0; i < V.rows(); ++i) pts.push_back(V.row(i).transpose());
    if (V.cols() == 2) {
        std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
            double ta = std::atan2(a(1), a(0)), tb = std::atan2(b(1), b(0));
            if (ta != tb) return ta < tb;
            return a.norm() < b.norm();
        });
    } else {
        std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) { return linalg::lex_less(a, b); });
    }
    for (std::size_t k = 0; k < pts.size(); ++k) V.row(static_cast<long>(k)) = pts[k].transpose();
    return V;
}

}  // namespace detail

/// Polytope with the origin in its interior, with vertex and facet descriptions.
class SymPolytope {
public:
    SymPolytope() = default;

    /// Hull of the points (and their negatives when `symmetrize`).
    static SymPolytope from_points(const Mat& points, bool symmetrize = true) {
        detail::require_geom_dim(points.cols(), "SymPolytope");
        if (!points.allFinite()) throw DomainError("SymPolytope: non-finite coordinate");
        Mat P = points;
        if (symmetrize) {
            P.resize(2 * points.rows(), points.cols());
            P << points, -points;
        }
        if (!detail::origin_interior(P)) throw DomainError("SymPolytope: origin is not an interior point");
        SymPolytope S;
        S.dim_ = P.cols();
        S.facets_ = detail::sort_points(detail::supporting_solutions(P));
        // Vertices are the supporting solutions of the facet list; snap to input points.
        Mat V = detail::supporting_solutions(S.facets_);
        for (long i = 0; i < V.rows(); ++i)
            for (long j = 0; j < P.rows(); ++j)
                if ((P.row(j) - V.row(i)).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, V.row(i).cwiseAbs().maxCoeff())) {
                    V.row(i) = P.row(j);
                    break;
                }
        S.vertices_ = detail::sort_points(V);
        S.symmetric_ = true;
        for (long i = 0; i < S.vertices_.rows() && S.symmetric_; ++i) {
            bool found = false;
            for (long j = 0; j < S.vertices_.rows(); ++j)
                if ((S.vertices_.row(j) + S.vertices_.row(i)).cwiseAbs().maxCoeff() <= 1e-9) found = true;
            S.symmetric_ = found;
        }
        return S;
    }

    long dim() const { return dim_; }
    const Mat& vertices() const { return vertices_; }
    const Mat& facets() const { return facets_; }
    bool symmetric() const { return symmetric_; }

    /// ‖x‖_P = max(0, max_i ⟨a_i, x⟩).
    double gauge_value(const Vec& x) const {
        require_dim(x.size(), dim_, "gauge_value");
        return std::max(0.0, (facets_ * x).maxCoeff());
    }

    /// h_P(x) = max_v ⟨v, x⟩.
    double support_value(const Vec& x) const {
        require_dim(x.size(), dim_, "support_value");
        return (vertices_ * x).maxCoeff();
    }

private:
    long dim_ = 0;
    Mat vertices_, facets_;
    bool symmetric_ = false;
};

inline void require_symmetric(const SymPolytope& P, const char* what) {
    if (!P.symmetric()) throw DomainError(std::string(what) + ": polytope must be centrally symmetric");
}

inline void require_same_dim(const SymPolytope& K, const SymPolytope& L, const char* what) {
    if (K.dim() != L.dim()) throw DimensionError(std::string(what) + ": dimensions differ");
}

/// Minkowski functional ‖·‖_P as a HomFun.
inline HomFun gauge(const SymPolytope& P) {
    require_symmetric(P, "gauge");
    return polytope_gauge(P.facets());
}

/// Support function of P; equals the gauge of the polar.
inline HomFun support(const SymPolytope& P) {
    require_symmetric(P, "support");
    return support_function(P.vertices());
}

/// P* = {y : ⟨y, v⟩ ≤ 1 for all vertices v}.
inline SymPolytope polar(const SymPolytope& P) {
    detail::require_geom_dim(P.dim(), "polar");
    Mat Y = detail::supporting_solutions(P.vertices());
    if (Y.rows() <= P.dim()) throw DomainError("polar: degenerate facet intersections");
    return SymPolytope::from_points(Y, false);
}

/// Image A·P for an invertible A.
inline SymPolytope linear_image(const SymPolytope& P, const Mat& A) {
    require_dim(A.cols(), P.dim(), "linear_image");
    require_dim(A.rows(), P.dim(), "linear_image");
    if (linalg::rank(A) < P.dim()) throw DomainError("linear_image: map must be invertible");
    return SymPolytope::from_points(Mat(P.vertices() * A.transpose()), false);
}

/// cP.
inline SymPolytope dilate(const SymPolytope& P, double c) {
    if (!(c > 0.0)) throw DomainError("dilate: factor must be positive");
    return SymPolytope::from_points(Mat(c * P.vertices()), false);
}

/// max over L of ‖·‖_K, attained at a vertex of L.
inline double lambda_max(const SymPolytope& K, const SymPolytope& L) {
    require_same_dim(K, L, "lambda_max");
    double m = 0.0;
    for (long i = 0; i < L.vertices().rows(); ++i) m = std::max(m, K.gauge_value(L.vertices().row(i).transpose()));
    return m;
}

struct Extremes {
    double lambda_min = 0.0, lambda_max = 0.0;
};

/// Extremes of ST(K, L): min and max of ‖x‖_K / ‖x‖_L.
inline Extremes st_extremes(const SymPolytope& K, const SymPolytope& L) {
    return {1.0 / lambda_max(L, K), lambda_max(K, L)};
}

/// d̂(K, L) = max{λ_max(K, L), λ_max(L, K)}.
inline double hat_distance(const SymPolytope& K, const SymPolytope& L) {
    return std::max(lambda_max(K, L), lambda_max(L, K));
}

/// λ_max(AK, L) · λ_max(AᵀL*, K*), an upper bound on the Banach–Mazur distance.
inline double banach_mazur_upper(const SymPolytope& K, const SymPolytope& L, const Mat& A) {
    require_same_dim(K, L, "banach_mazur_upper");
    return lambda_max(linear_image(K, A), L) * lambda_max(linear_image(polar(L), Mat(A.transpose())), polar(K));
}

struct TangencyResult {
    EigenCertificate certificate;  // best candidate; feasible iff λ ∈ ST(K, L) was certified
    int candidates = 0;
    bool pool_complete = false;  // a negative answer is only sound relative to the pool
};

/// Semi-decision for λ ∈ ST(K, L): verifies ∂‖·‖_K(x) ∩ λ∂‖·‖_L(x) ≠ ∅ over a candidate pool.
inline TangencyResult tangency_verify(const SymPolytope& K, const SymPolytope& L, double lambda, double tol = 1e-9) {
    require_same_dim(K, L, "tangency_verify");
    if (!(lambda > 0.0)) throw DomainError("tangency_verify: λ must be positive");
    HomFun gK = gauge(K), gL = gauge(L);
    std::vector<Vec> pool;
    for (long i = 0; i < K.vertices().rows(); ++i) pool.push_back(K.vertices().row(i).transpose());
    for (long i = 0; i < L.vertices().rows(); ++i) pool.push_back(L.vertices().row(i).transpose());
    if (K.dim() == 2) {
        for (const auto& gp : grid_spectrum_2d(gK, gL))
            if (std::abs(gp.lambda - lambda) <= 1e-6 * std::max(1.0, lambda)) pool.push_back(gp.x);
    }
    TangencyResult res;
    res.candidates = static_cast<int>(pool.size());
    res.certificate.lambda = lambda;
    res.certificate.residual = kInf;
    // Report the lexicographically largest certified contact point.
    std::sort(pool.begin(), pool.end(), [](const Vec& a, const Vec& b) { return linalg::lex_less(b, a); });
    for (const auto& x : pool) {
        auto c = verify_eigenpair(gK, gL, lambda, x, tol);
        if (c.feasible) {
            res.certificate = c;
            return res;
        }
        if (c.residual < res.certificate.residual) res.certificate = c;
    }
    return res;
}

/// k ∈ [3, 8] points on a random ellipse with angular jitter, symmetrized.
template <class Rng>
SymPolytope random_polygon(Rng& rng) {
    std::uniform_int_distribution<int> kd(3, 8);
    std::uniform_real_distribution<double> axis(0.5, 2.0), u01(0.0, 1.0);
    const double pi = std::acos(-1.0);
    const int k = kd(rng);
    double a = axis(rng), b = axis(rng), rot = pi * u01(rng);
    Mat P(k, 2);
    for (int i = 0; i < k; ++i) {
        double th = pi * (i + 0.8 * u01(rng)) / k;
        double x = a * std::cos(th), y = b * std::sin(th);
        P(i, 0) = std::cos(rot) * x - std::sin(rot) * y;
        P(i, 1) = std::sin(rot) * x + std::cos(rot) * y;
    }
    return SymPolytope::from_points(P, true);
}

inline SymPolytope square() {
    Mat V(4, 2);
    V << 1, 1, 1, -1, -1, 1, -1, -1;
    return SymPolytope::from_points(V, false);
}

inline SymPolytope diamond() {
    Mat V(4, 2);
    V << 1, 0, -1, 0, 0, 1, 0, -1;
    return SymPolytope::from_points(V, false);
}

}  // namespace spectradual
