#pragma once

/**
 * @file subdiff.hpp
 * @brief Polytope descriptions of subdifferentials, eigenpair verification
 * and the primal to dual eigenvector transfer.
 *
 * Every SubdiffSet compiles to a projected polyhedron
 *     { G w + h : Aeq w = beq, Ain w ≤ bin, w_j ≥ 0 for flagged j }
 * and all queries (membership, intersection with a scaled set, cone
 * intersection) become one residual LP over the joint description.
 */

#include "errors.hpp"
#include "homfun.hpp"
#include "linalg.hpp"
#include "lp.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace spectradual {

using Rational = boost::multiprecision::mpq_rational;

/// { G w + h : Aeq w = beq, Ain w ≤ bin, w_j ≥ 0 for nonneg_j }.
struct ProjPoly {
    Mat G;
    Vec h;
    Mat Aeq;
    Vec beq;
    Mat Ain;
    Vec bin;
    std::vector<char> nonneg;
    long dim() const { return G.rows(); }
    long vars() const { return G.cols(); }
};

class SubdiffSet {
public:
    enum class Kind { singleton, box_sign, hull, affine_image, scaled, minkowski_sum, lp_face };

    static SubdiffSet singleton(Vec v) {
        SubdiffSet s(Kind::singleton, v.size());
        s.v_ = std::move(v);
        return s;
    }

    // Per-coordinate intervals [lo_i, hi_i].
    static SubdiffSet box_sign(Vec lo, Vec hi) {
        require_dim(hi.size(), lo.size(), "box_sign");
        SubdiffSet s(Kind::box_sign, lo.size());
        s.v_ = std::move(lo);
        s.hi_ = std::move(hi);
        return s;
    }

    // Convex hull of the rows of V.
    static SubdiffSet hull(Mat V) {
        if (V.rows() == 0) throw DomainError("hull: empty vertex list");
        SubdiffSet s(Kind::hull, V.cols());
        s.M_ = std::move(V);
        return s;
    }

    // M · inner.
    static SubdiffSet affine_image(Mat M, SubdiffSet inner) {
        require_dim(M.cols(), inner.dim(), "affine_image");
        SubdiffSet s(Kind::affine_image, M.rows());
        s.M_ = std::move(M);
        s.parts_.push_back(std::move(inner));
        return s;
    }

    static SubdiffSet scaled(double c, SubdiffSet inner) {
        SubdiffSet s(Kind::scaled, inner.dim());
        s.c_ = c;
        s.parts_.push_back(std::move(inner));
        return s;
    }

    static SubdiffSet minkowski_sum(std::vector<SubdiffSet> parts) {
        if (parts.empty()) throw DomainError("minkowski_sum: no summands");
        SubdiffSet s(Kind::minkowski_sum, parts[0].dim());
        for (const auto& p : parts) require_dim(p.dim(), s.dim(), "minkowski_sum");
        s.parts_ = std::move(parts);
        return s;
    }

    /// Optimal dual face of an LP form: { Fᵀν : Eᵀν ≤ c (= c on free columns), ⟨Fx, ν⟩ ≥ value − slack }.
    static SubdiffSet lp_face(const LpForm& L, const Vec& x, double value, double slack) {
        SubdiffSet s(Kind::lp_face, L.F.cols());
        s.M_ = L.F.transpose();
        s.E_ = L.E;
        s.hi_ = L.c;
        s.free_ = L.free;
        s.v_ = L.F * x;
        s.c_ = value - slack;
        return s;
    }

    Kind kind() const { return kind_; }
    long dim() const { return dim_; }
    bool structural() const {
        if (kind_ == Kind::lp_face) return false;
        for (const auto& p : parts_)
            if (!p.structural()) return false;
        return true;
    }
    const std::vector<SubdiffSet>& parts() const { return parts_; }
    const Vec& point() const { return v_; }
    const Mat& matrix() const { return M_; }

    ProjPoly compile() const {
        ProjPoly P;
        switch (kind_) {
            case Kind::singleton:
                P.G = Mat(dim_, 0);
                P.h = v_;
                break;
            case Kind::box_sign: {
                std::vector<long> var;
                P.h = v_;
                for (long i = 0; i < dim_; ++i)
                    if (hi_(i) > v_(i)) var.push_back(i);
                const long k = static_cast<long>(var.size());
                P.G = Mat::Zero(dim_, k);
                P.Ain = Mat::Zero(k, k);
                P.bin = Vec(k);
                for (long j = 0; j < k; ++j) {
                    const long i = var[static_cast<std::size_t>(j)];
                    P.G(i, j) = 1.0;
                    P.Ain(j, j) = 1.0;
                    P.bin(j) = hi_(i) - v_(i);
                }
                P.nonneg.assign(static_cast<std::size_t>(k), 1);
                break;
            }
            case Kind::hull: {
                const long k = M_.rows();
                P.G = M_.transpose();
                P.h = Vec::Zero(dim_);
                P.Aeq = Mat::Ones(1, k);
                P.beq = Vec::Ones(1);
                P.nonneg.assign(static_cast<std::size_t>(k), 1);
                break;
            }
            case Kind::affine_image: {
                P = parts_[0].compile();
                P.G = M_ * P.G;
                P.h = M_ * P.h;
                break;
            }
            case Kind::scaled: {
                P = parts_[0].compile();
                P.G *= c_;
                P.h *= c_;
                break;
            }
            case Kind::minkowski_sum: {
                std::vector<ProjPoly> ps;
                long nw = 0, ne = 0, ni = 0;
                for (const auto& s : parts_) {
                    ps.push_back(s.compile());
                    nw += ps.back().vars();
                    ne += ps.back().Aeq.rows();
                    ni += ps.back().Ain.rows();
                }
                P.G = Mat::Zero(dim_, nw);
                P.h = Vec::Zero(dim_);
                P.Aeq = Mat::Zero(ne, nw);
                P.beq = Vec::Zero(ne);
                P.Ain = Mat::Zero(ni, nw);
                P.bin = Vec::Zero(ni);
                long w0 = 0, e0 = 0, i0 = 0;
                for (const auto& q : ps) {
                    P.G.middleCols(w0, q.vars()) = q.G;
                    P.h += q.h;
                    if (q.Aeq.rows()) {
                        P.Aeq.block(e0, w0, q.Aeq.rows(), q.vars()) = q.Aeq;
                        P.beq.segment(e0, q.Aeq.rows()) = q.beq;
                    }
                    if (q.Ain.rows()) {
                        P.Ain.block(i0, w0, q.Ain.rows(), q.vars()) = q.Ain;
                        P.bin.segment(i0, q.Ain.rows()) = q.bin;
                    }
                    for (long j = 0; j < q.vars(); ++j)
                        P.nonneg.push_back(j < static_cast<long>(q.nonneg.size()) ? q.nonneg[static_cast<std::size_t>(j)] : 0);
                    w0 += q.vars();
                    e0 += q.Aeq.rows();
                    i0 += q.Ain.rows();
                }
                break;
            }
            case Kind::lp_face: {
                const long r = M_.cols(), k = E_.cols();
                long nfree = 0;
                for (char f : free_) nfree += f ? 1 : 0;
                P.G = M_;
                P.h = Vec::Zero(dim_);
                P.Aeq = Mat::Zero(nfree, r);
                P.beq = Vec::Zero(nfree);
                P.Ain = Mat::Zero(k - nfree + 1, r);
                P.bin = Vec::Zero(k - nfree + 1);
                long e = 0, i = 0;
                for (long j = 0; j < k; ++j) {
                    if (free_[static_cast<std::size_t>(j)]) {
                        P.Aeq.row(e) = E_.col(j).transpose();
                        P.beq(e++) = hi_(j);
                    } else {
                        P.Ain.row(i) = E_.col(j).transpose();
                        P.bin(i++) = hi_(j);
                    }
                }
                P.Ain.row(i) = -v_.transpose();
                P.bin(i) = -c_;
                break;
            }
        }
        if (P.Aeq.cols() != P.vars()) P.Aeq = Mat(0, P.vars());
        if (P.Ain.cols() != P.vars()) P.Ain = Mat(0, P.vars());
        if (P.beq.size() != P.Aeq.rows()) P.beq = Vec(0);
        if (P.bin.size() != P.Ain.rows()) P.bin = Vec(0);
        P.nonneg.resize(static_cast<std::size_t>(P.vars()), 0);
        return P;
    }

private:
    SubdiffSet(Kind k, long d) : kind_(k), dim_(d) {}
    Kind kind_;
    long dim_;
    Vec v_, hi_;
    Mat M_, E_;
    double c_ = 1.0;
    std::vector<char> free_;
    std::vector<SubdiffSet> parts_;
};

namespace detail {

inline double tie_tol(const Vec& v) { return 1e-9 * std::max(v.cwiseAbs().maxCoeff(), 1e-300); }

inline SubdiffSet subdiff_node(const Node& n, const Vec& x);

inline SubdiffSet subdiff_lp(const Node& n, const Vec& x) {
    const LpForm& L = *n.lp;
    double val = solve_lp_form(L, L.F * x).value;
    return SubdiffSet::lp_face(L, x, val, 1e-10 * (1.0 + std::abs(val)));
}

inline SubdiffSet subdiff_node(const Node& n, const Vec& x) {
    if (n.resolved) return subdiff_node(*n.resolved, x);
    if (n.canon_base) {
        const Node& b = *n.canon_base;
        if (n.canon_r == 1.0) return SubdiffSet::scaled(n.canon_c, subdiff_node(b, x));
        double bv = eval_node(b, x);
        if (bv == 0.0) {
            if (n.canon_r > 1.0) return SubdiffSet::singleton(Vec::Zero(x.size()));
            throw UnsupportedError("subdiff_at: power below 1 at a kernel point");
        }
        return SubdiffSet::scaled(n.canon_c * n.canon_r * std::pow(bv, n.canon_r - 1.0), subdiff_node(b, x));
    }
    const long dim = x.size();
    switch (n.op) {
        case Op::weighted_lp: {
            Vec v = n.weights.cwiseProduct(x);
            if (n.p == 1.0) {
                double tol = tie_tol(v);
                Vec lo(dim), hi(dim);
                for (long i = 0; i < dim; ++i) {
                    if (v(i) > tol) lo(i) = hi(i) = n.weights(i);
                    else if (v(i) < -tol) lo(i) = hi(i) = -n.weights(i);
                    else {
                        lo(i) = -n.weights(i);
                        hi(i) = n.weights(i);
                    }
                }
                return SubdiffSet::box_sign(lo, hi);
            }
            if (std::isinf(n.p)) {
                double m = v.cwiseAbs().maxCoeff();
                std::vector<Vec> verts;
                for (long i = 0; i < dim; ++i) {
                    if (n.weights(i) == 0.0) continue;
                    if (m > 0 && std::abs(v(i)) < m - tie_tol(v)) continue;
                    if (m == 0 || v(i) > 0) verts.push_back(n.weights(i) * Vec::Unit(dim, i));
                    if (m == 0 || v(i) < 0) verts.push_back(-n.weights(i) * Vec::Unit(dim, i));
                }
                if (verts.empty()) return SubdiffSet::singleton(Vec::Zero(dim));
                Mat V(static_cast<long>(verts.size()), dim);
                for (std::size_t k = 0; k < verts.size(); ++k) V.row(static_cast<long>(k)) = verts[k].transpose();
                return SubdiffSet::hull(V);
            }
            if (v.cwiseAbs().maxCoeff() == 0.0) throw UnsupportedError("subdiff_at: smooth norm at a kernel point has no finite description");
            return SubdiffSet::singleton(subgrad_node(n, x));
        }
        case Op::max_abs: {
            Vec a = n.points * x;
            double m = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
            std::vector<Vec> verts;
            for (long i = 0; i < a.size(); ++i) {
                if (m > 0 && std::abs(a(i)) < m - tie_tol(a)) continue;
                if (m == 0 || a(i) > 0) verts.push_back(n.points.row(i).transpose());
                if (m == 0 || a(i) < 0) verts.push_back(-n.points.row(i).transpose());
            }
            Mat V(static_cast<long>(verts.size()), dim);
            for (std::size_t k = 0; k < verts.size(); ++k) V.row(static_cast<long>(k)) = verts[k].transpose();
            return SubdiffSet::hull(V);
        }
        case Op::pullback: {
            Vec bx = n.maps[0].apply(x);
            return SubdiffSet::affine_image(n.maps[0].dense().transpose(), subdiff_node(n.args[0].node(), bx));
        }
        case Op::composite: {
            const long d = static_cast<long>(n.args.size()) - 1;
            Vec t(d);
            for (long i = 0; i < d; ++i)
                t(i) = eval_node(n.args[static_cast<std::size_t>(i + 1)].node(), n.maps[static_cast<std::size_t>(i)].apply(x));
            const Node& O = effective(n.args[0].node());
            bool smooth_outer = O.op == Op::weighted_lp && O.p > 1.0 && !std::isinf(O.p) && t.cwiseAbs().maxCoeff() > 0;
            if (smooth_outer) {
                Vec mu = subgrad_node(O, t).cwiseAbs();
                std::vector<SubdiffSet> parts;
                for (long i = 0; i < d; ++i) {
                    if (mu(i) == 0.0) continue;
                    const auto ui = static_cast<std::size_t>(i);
                    Vec ax = n.maps[ui].apply(x);
                    parts.push_back(SubdiffSet::scaled(
                        mu(i), SubdiffSet::affine_image(n.maps[ui].dense().transpose(), subdiff_node(n.args[ui + 1].node(), ax))));
                }
                return SubdiffSet::minkowski_sum(std::move(parts));
            }
            if (n.lp) return subdiff_lp(n, x);
            // Smooth inner functions at nonzero arguments: ∂ = [A_iᵀ∇g_i] · ∂O(t).
            Mat M(dim, d);
            for (long i = 0; i < d; ++i) {
                const auto ui = static_cast<std::size_t>(i);
                Vec ax = n.maps[ui].apply(x);
                SubdiffSet gi = subdiff_node(n.args[ui + 1].node(), ax);
                if (gi.kind() != SubdiffSet::Kind::singleton || t(i) <= 0.0)
                    throw UnsupportedError("subdiff_at: composite with nonsmooth inner parts has no finite description");
                M.col(i) = n.maps[ui].apply_t(gi.point());
            }
            return SubdiffSet::affine_image(M, subdiff_node(n.args[0].node(), t));
        }
        default:
            if (n.lp) return subdiff_lp(n, x);
            break;
    }
    throw UnsupportedError("subdiff_at: expression node has no finite description");
}

}  // namespace detail

/// Exact (up to tie tolerance) polytope description of ∂f(x).
inline SubdiffSet subdiff_at(const HomFun& f, const Vec& x) {
    require_dim(x.size(), f.dim(), "subdiff_at");
    return detail::subdiff_node(f.node(), x);
}

inline bool has_subdiff_description(const HomFun& f, const Vec& x) {
    try {
        subdiff_at(f, x);
        return true;
    } catch (const UnsupportedError&) {
        return false;
    }
}

enum class Arithmetic { automatic, exact, floating };

namespace detail {

template <class T>
struct ResidualOut {
    bool solved = false;
    double t = 0.0;
    Vec first, second;  // G1 w1 + h1·α and G2 w2 + h2
};

template <class T>
void add_poly_rows(lp::Problem<T>& P, const ProjPoly& Q, int w0, int alpha) {
    for (long i = 0; i < Q.Aeq.rows(); ++i) {
        std::vector<std::pair<int, T>> row;
        for (long j = 0; j < Q.vars(); ++j)
            if (Q.Aeq(i, j) != 0.0) row.emplace_back(w0 + static_cast<int>(j), T(Q.Aeq(i, j)));
        if (alpha >= 0) {
            if (Q.beq(i) != 0.0) row.emplace_back(alpha, T(-Q.beq(i)));
            P.add_row(std::move(row), lp::Sense::eq, T(0));
        } else {
            P.add_row(std::move(row), lp::Sense::eq, T(Q.beq(i)));
        }
    }
    for (long i = 0; i < Q.Ain.rows(); ++i) {
        std::vector<std::pair<int, T>> row;
        for (long j = 0; j < Q.vars(); ++j)
            if (Q.Ain(i, j) != 0.0) row.emplace_back(w0 + static_cast<int>(j), T(Q.Ain(i, j)));
        if (alpha >= 0) {
            if (Q.bin(i) != 0.0) row.emplace_back(alpha, T(-Q.bin(i)));
            P.add_row(std::move(row), lp::Sense::le, T(0));
        } else {
            P.add_row(std::move(row), lp::Sense::le, T(Q.bin(i)));
        }
    }
}

template <class T>
double to_double(const T& v) {
    if constexpr (std::is_same_v<T, double>) return v;
    else return v.template convert_to<double>();
}

// min ‖(G1 w1 + h1·α) − λ (G2 w2 + h2)‖∞ with α = 1 unless `cone`.
template <class T>
ResidualOut<T> residual_lp(const ProjPoly& A, const ProjPoly& B, double lambda, bool cone) {
    lp::Problem<T> P;
    const int nA = static_cast<int>(A.vars()), nB = static_cast<int>(B.vars());
    for (int j = 0; j < nA; ++j) P.add_var(A.nonneg[static_cast<std::size_t>(j)] == 0);
    int alpha = -1;
    if (cone) alpha = P.add_var(false);
    const int w2 = P.num_vars();
    for (int j = 0; j < nB; ++j) P.add_var(B.nonneg[static_cast<std::size_t>(j)] == 0);
    const int t = P.add_var(false, T(1));
    add_poly_rows<T>(P, A, 0, alpha);
    add_poly_rows<T>(P, B, w2, -1);
    const T lam(lambda);
    for (long i = 0; i < A.dim(); ++i) {
        std::vector<std::pair<int, T>> row;
        for (int j = 0; j < nA; ++j)
            if (A.G(i, j) != 0.0) row.emplace_back(j, T(A.G(i, j)));
        for (int j = 0; j < nB; ++j)
            if (B.G(i, j) != 0.0) row.emplace_back(w2 + j, T(-lam * T(B.G(i, j))));
        T rhs = lam * T(B.h(i));
        if (cone) {
            if (A.h(i) != 0.0) row.emplace_back(alpha, T(A.h(i)));
        } else {
            rhs -= T(A.h(i));
        }
        auto lo = row;
        row.emplace_back(t, T(-1));
        lo.emplace_back(t, T(1));
        P.add_row(std::move(row), lp::Sense::le, rhs);
        P.add_row(std::move(lo), lp::Sense::ge, rhs);
    }
    auto sol = P.solve();
    ResidualOut<T> out;
    if (!sol.ok()) return out;
    out.solved = true;
    out.t = to_double(sol.objective);
    out.first = Vec(A.dim());
    out.second = Vec(A.dim());
    for (long i = 0; i < A.dim(); ++i) {
        T u = cone ? T(A.h(i)) * sol.x[static_cast<std::size_t>(alpha)] : T(A.h(i));
        for (int j = 0; j < nA; ++j) u += T(A.G(i, j)) * sol.x[static_cast<std::size_t>(j)];
        T v = T(B.h(i));
        for (int j = 0; j < nB; ++j) v += T(B.G(i, j)) * sol.x[static_cast<std::size_t>(w2 + j)];
        out.first(i) = to_double(u);
        out.second(i) = to_double(v);
    }
    return out;
}

inline bool use_exact(Arithmetic mode, const SubdiffSet& a, const SubdiffSet& b) {
    if (mode == Arithmetic::exact) return true;
    if (mode == Arithmetic::floating) return false;
    if (!a.structural() || !b.structural()) return false;
    ProjPoly pa = a.compile(), pb = b.compile();
    return pa.vars() + pb.vars() <= 120;
}

inline ResidualOut<double> residual(const SubdiffSet& a, const SubdiffSet& b, double lambda, bool cone, Arithmetic mode,
                                    bool* exact_used = nullptr) {
    ProjPoly pa = a.compile(), pb = b.compile();
    bool ex = use_exact(mode, a, b);
    if (exact_used) *exact_used = ex;
    if (ex) {
        auto r = residual_lp<Rational>(pa, pb, lambda, cone);
        ResidualOut<double> o;
        o.solved = r.solved;
        o.t = r.t;
        o.first = r.first;
        o.second = r.second;
        return o;
    }
    return residual_lp<double>(pa, pb, lambda, cone);
}

}  // namespace detail

/// v ∈ S up to ∞-norm distance tol.
inline bool contains(const SubdiffSet& S, const Vec& v, double tol = 1e-9, Arithmetic mode = Arithmetic::automatic) {
    require_dim(v.size(), S.dim(), "contains");
    auto r = detail::residual(S, SubdiffSet::singleton(v), 1.0, false, mode);
    return r.solved && r.t <= tol;
}

/// Range of ⟨v, x⟩ over v ∈ S, by two LPs.
inline std::pair<double, double> support_range(const SubdiffSet& S, const Vec& x) {
    ProjPoly P = S.compile();
    auto run = [&](double sgn) {
        lp::Problem<double> L;
        for (long j = 0; j < P.vars(); ++j) L.add_var(P.nonneg[static_cast<std::size_t>(j)] == 0, sgn * P.G.col(j).dot(x));
        detail::add_poly_rows<double>(L, P, 0, -1);
        auto s = L.solve();
        if (!s.ok()) throw Error("support_range: LP failed");
        return sgn * s.objective + P.h.dot(x);
    };
    return {run(1.0), run(-1.0)};
}

struct EigenCertificate {
    double lambda = 0.0;
    Vec x;
    bool feasible = false;
    Vec witness;
    double residual = 0.0;
    bool exact = false;  // decided in rational arithmetic
};

/// Decides ∂f(x) ∩ λ∂g(x) ≠ ∅.
inline EigenCertificate verify_eigenpair(const HomFun& f, const HomFun& g, double lambda, const Vec& x, double tol = 1e-9,
                                         Arithmetic mode = Arithmetic::automatic) {
    require_dim(g.dim(), f.dim(), "verify_eigenpair");
    require_dim(x.size(), f.dim(), "verify_eigenpair");
    SubdiffSet sf = subdiff_at(f, x), sg = subdiff_at(g, x);
    EigenCertificate c;
    c.lambda = lambda;
    c.x = x;
    auto r = detail::residual(sf, sg, lambda, false, mode, &c.exact);
    if (!r.solved) {
        c.residual = kInf;
        return c;
    }
    c.residual = r.t;
    c.witness = r.first;
    c.feasible = r.t <= tol * std::max(1.0, r.first.cwiseAbs().maxCoeff());
    return c;
}

/// Ker f ∩ Ker g ≠ {0}: every real number is an eigenvalue.
inline bool spectrum_is_everything(const HomFun& f, const HomFun& g) {
    return linalg::intersect(f.kernel_basis(), g.kernel_basis(), f.dim()).cols() > 0;
}

namespace detail {

// argmax ⟨d, u⟩ over u ∈ ∂g(x) with λu ∈ ∂f(x).
inline std::optional<Vec> face_argmax(const ProjPoly& pf, const ProjPoly& pg, double lambda, const Vec& d) {
    lp::Problem<double> P;
    const int nf = static_cast<int>(pf.vars()), ng = static_cast<int>(pg.vars());
    for (int j = 0; j < nf; ++j) P.add_var(pf.nonneg[static_cast<std::size_t>(j)] == 0);
    for (int j = 0; j < ng; ++j) P.add_var(pg.nonneg[static_cast<std::size_t>(j)] == 0);
    add_poly_rows<double>(P, pf, 0, -1);
    add_poly_rows<double>(P, pg, nf, -1);
    Vec cost = -(pg.G.transpose() * d);
    for (int j = 0; j < ng; ++j) P.set_cost(nf + j, cost(j));
    for (long i = 0; i < pg.dim(); ++i) {
        std::vector<std::pair<int, double>> row;
        for (int j = 0; j < nf; ++j)
            if (pf.G(i, j) != 0.0) row.emplace_back(j, pf.G(i, j));
        for (int j = 0; j < ng; ++j)
            if (pg.G(i, j) != 0.0) row.emplace_back(nf + j, -lambda * pg.G(i, j));
        P.add_row(std::move(row), lp::Sense::eq, lambda * pg.h(i) - pf.h(i));
    }
    auto sol = P.solve();
    if (!sol.ok()) return std::nullopt;
    Vec wg(ng);
    for (int j = 0; j < ng; ++j) wg(j) = sol.x[static_cast<std::size_t>(nf + j)];
    return Vec(pg.G * wg + pg.h);
}

// argmax ⟨u, w⟩ over f(w) ≤ λ, g(w) ≤ 1, w ⊥ Ker f + Ker g.
inline std::optional<Vec> ball_argmax(const LpForm& Lf, const LpForm& Lg, const Mat& ker, double lambda, const Vec& u) {
    lp::Problem<double> P;
    const long n = u.size();
    for (long i = 0; i < n; ++i) P.add_var(true, -u(i));
    auto add_form = [&](const LpForm& L, double bound) {
        const int z0 = P.num_vars();
        for (long j = 0; j < L.vars(); ++j) P.add_var(L.free[static_cast<std::size_t>(j)] != 0);
        for (long r = 0; r < L.rows(); ++r) {
            std::vector<std::pair<int, double>> row;
            for (long j = 0; j < L.vars(); ++j)
                if (L.E(r, j) != 0.0) row.emplace_back(z0 + static_cast<int>(j), L.E(r, j));
            for (long i = 0; i < n; ++i)
                if (L.F(r, i) != 0.0) row.emplace_back(static_cast<int>(i), -L.F(r, i));
            P.add_row(std::move(row), lp::Sense::eq, 0.0);
        }
        std::vector<std::pair<int, double>> obj;
        for (long j = 0; j < L.vars(); ++j)
            if (L.c(j) != 0.0) obj.emplace_back(z0 + static_cast<int>(j), L.c(j));
        P.add_row(std::move(obj), lp::Sense::le, bound);
    };
    add_form(Lf, lambda);
    add_form(Lg, 1.0);
    for (long k = 0; k < ker.cols(); ++k) {
        std::vector<std::pair<int, double>> row;
        for (long i = 0; i < n; ++i)
            if (ker(i, k) != 0.0) row.emplace_back(static_cast<int>(i), ker(i, k));
        P.add_row(std::move(row), lp::Sense::eq, 0.0);
    }
    auto sol = P.solve();
    if (!sol.ok()) return std::nullopt;
    Vec w(n);
    for (long i = 0; i < n; ++i) w(i) = sol.x[static_cast<std::size_t>(i)];
    return w;
}

}  // namespace detail

/// u ∈ cone(∂f(x)) ∩ ∂g(x), normalized so that λu ∈ ∂f(x).
/// When f and g are polyhedral the face is searched for a u with ∂𝒟g(u) ∩ λ∂𝒟f(u) ≠ ∅,
/// which fails to exist when no admissible u is compatible with Ker f.
inline Vec transfer(const HomFun& f, const HomFun& g, double lambda, const Vec& x, double tol = 1e-9,
                    Arithmetic mode = Arithmetic::automatic) {
    if (lambda == 0.0) throw DomainError("transfer: zero eigenvalue is not covered by the duality");
    if (!detail::is_one(f.degree()) || !detail::is_one(g.degree())) throw DomainError("transfer: degrees must be 1");
    if (spectrum_is_everything(f, g)) throw DomainError("transfer: Ker f ∩ Ker g ≠ {0}, spectrum is all of R");
    auto cert = verify_eigenpair(f, g, lambda, x, tol, mode);
    if (!cert.feasible) throw DomainError("transfer: input is not a verified eigenpair");
    SubdiffSet sf = subdiff_at(f, x), sg = subdiff_at(g, x);
    auto r = detail::residual(sf, sg, 1.0, true, mode);
    if (!r.solved || r.t > tol * std::max(1.0, r.second.cwiseAbs().maxCoeff()))
        throw DomainError("transfer: cone(∂f) ∩ ∂g is empty");
    const Vec& u0 = r.second;
    const LpForm* Lf = f.lp_form();
    const LpForm* Lg = g.lp_form();
    if (!Lf || !Lg || !(lambda > 0.0) || (f.positive_definite() && g.positive_definite())) return u0;

    // ⟨u, w⟩ ≤ 𝒟g(u) g(w) ≤ 1 on the feasible sets, with equality exactly at dual eigenpairs.
    ProjPoly pf = sf.compile(), pg = sg.compile();
    Mat ker(f.dim(), f.kernel_basis().cols() + g.kernel_basis().cols());
    ker << f.kernel_basis(), g.kernel_basis();
    const double hit = 1.0 - 1e-10;
    auto climb = [&](Vec u) -> std::optional<Vec> {
        double last = -kInf;
        for (int it = 0; it < 40; ++it) {
            auto w = detail::ball_argmax(*Lf, *Lg, ker, lambda, u);
            if (!w) return std::nullopt;
            double phi = u.dot(*w);
            if (phi >= hit) return u;
            if (phi <= last + 1e-12) return std::nullopt;
            last = phi;
            auto nu = detail::face_argmax(pf, pg, lambda, *w);
            if (!nu) return std::nullopt;
            u = *nu;
        }
        return std::nullopt;
    };
    if (auto u = climb(u0)) return *u;
    const long n = x.size();
    std::vector<Vec> seeds{x, linalg::project_out(f.kernel_basis(), x)};
    for (long i = 0; i < n; ++i) {
        seeds.push_back(Vec::Unit(n, i));
        seeds.push_back(-Vec::Unit(n, i));
    }
    for (const Vec& d : seeds) {
        auto s = detail::face_argmax(pf, pg, lambda, d);
        if (!s) continue;
        if (auto u = climb(*s)) return *u;
    }
    return u0;
}

/// (a p f^{p−1} / (b q g^{q−1})) λ for the pair (a f^p, b g^q).
inline double scale_eigenvalue(double lambda, double f_val, double g_val, double a, double b, double p, double q) {
    if (lambda == 0.0 || !(f_val > 0.0) || !(g_val > 0.0)) throw DomainError("scale_eigenvalue: λ, f(x), g(x) must be nonzero");
    return a * p * std::pow(f_val, p - 1.0) / (b * q * std::pow(g_val, q - 1.0)) * lambda;
}

/// (p/q)^{p−2} (q−1)^{q−1} / (p−1)^{p−1}, with 0^0 = 1.
inline double polarity_factor(double p, double q) {
    auto pw = [](double b, double e) { return (b == 0.0 && e == 0.0) ? 1.0 : std::pow(b, e); };
    return std::pow(p / q, p - 2.0) * pw(q - 1.0, q - 1.0) / pw(p - 1.0, p - 1.0);
}

}  // namespace spectradual
