#pragma once

/**
 * @file homfun.hpp
 * @brief Nonnegative positively homogeneous convex functions with linear kernels.
 *
 * A HomFun is an immutable shared expression tree. Atoms are weighted ℓp
 * norms, max-abs functions (support functions of symmetric point sets and
 * gauges of symmetric polytopes given by facet normals), hull gauges and
 * composite norms. Combinators are pullback, pushforward, the dual 𝒟, the
 * Legendre and polarity transforms, powers and positive scalings.
 *
 * Every degree-1 polyhedral node also carries an LP form
 *     f(x) = min { cᵀz : E z = F x, z_j ≥ 0 unless free_j }
 * which drives exact evaluation of hull gauges, pushforwards and definition
 * based duals, and the subdifferential machinery downstream.
 */

#include "cone.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "lp.hpp"
#include "optim.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace spectradual {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Conjugate exponent: 1 ↔ ∞, otherwise p/(p−1).
inline double conjugate_exponent(double p) {
    if (p == 1.0) return kInf;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

/// Linear map ℝ^cols → ℝ^rows. Dense, or a coordinate selection y_i = x_{idx_i}.
class LinearMap {
public:
    LinearMap() = default;
    LinearMap(Mat m) : dense_(std::move(m)), rows_(dense_.rows()), cols_(dense_.cols()) {  // NOLINT: implicit by design
        if (!dense_.allFinite()) throw DomainError("LinearMap: non-finite entry");
    }

    static LinearMap identity(long n) { return LinearMap(Mat::Identity(n, n)); }

    static LinearMap select(std::vector<long> idx, long cols) {
        LinearMap m;
        m.selection_ = true;
        m.rows_ = static_cast<long>(idx.size());
        m.cols_ = cols;
        for (long i : idx)
            if (i < 0 || i >= cols) throw DimensionError("LinearMap::select: index out of range");
        m.idx_ = std::move(idx);
        return m;
    }

    long rows() const { return rows_; }
    long cols() const { return cols_; }
    bool is_selection() const { return selection_; }
    const std::vector<long>& indices() const { return idx_; }

    Vec apply(const Vec& x) const {
        require_dim(x.size(), cols_, "LinearMap::apply");
        if (!selection_) return dense_ * x;
        Vec y(rows_);
        for (long i = 0; i < rows_; ++i) y(i) = x(idx_[static_cast<std::size_t>(i)]);
        return y;
    }

    Vec apply_t(const Vec& y) const {
        require_dim(y.size(), rows_, "LinearMap::apply_t");
        if (!selection_) return dense_.transpose() * y;
        Vec x = Vec::Zero(cols_);
        for (long i = 0; i < rows_; ++i) x(idx_[static_cast<std::size_t>(i)]) += y(i);
        return x;
    }

    // F · A for a matrix F with rows() columns.
    Mat left_compose(const Mat& F) const {
        require_dim(F.cols(), rows_, "LinearMap::left_compose");
        if (!selection_) return F * dense_;
        Mat R = Mat::Zero(F.rows(), cols_);
        for (long i = 0; i < rows_; ++i) R.col(idx_[static_cast<std::size_t>(i)]) += F.col(i);
        return R;
    }

    Mat dense() const {
        if (!selection_) return dense_;
        Mat R = Mat::Zero(rows_, cols_);
        for (long i = 0; i < rows_; ++i) R(i, idx_[static_cast<std::size_t>(i)]) = 1.0;
        return R;
    }

    LinearMap transpose() const { return LinearMap(Mat(dense().transpose())); }

    Mat kernel_basis() const { return linalg::null_space(dense(), cols_); }
    Mat range_basis() const { return linalg::orth(dense()); }

private:
    Mat dense_;
    bool selection_ = false;
    std::vector<long> idx_;
    long rows_ = 0, cols_ = 0;
};

/// f(x) = min { cᵀz : E z = F x, z_j ≥ 0 unless free_j, z ∈ cones }.
/// Variables named by a cone are marked free; no cones means an LP.
struct LpForm {
    Vec c;
    Mat E;
    Mat F;
    std::vector<char> free;
    std::vector<cone::PCone> cones;
    long vars() const { return c.size(); }
    long rows() const { return E.rows(); }
};

enum class Op {
    weighted_lp,
    max_abs,        // max_i |⟨v_i, x⟩|  (support_function / polytope_gauge / linfty_max)
    hull_gauge,     // gauge of conv(±v_i) on span(v_i)
    composite,      // ‖(g_1(A_1 x), …, g_d(A_d x))‖
    composite_dual,
    pullback,
    pushforward,
    dual,
    legendre,
    polarity,
    power,
    scale,
};

struct Node;

class HomFun {
public:
    HomFun() = default;
    explicit HomFun(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

    bool valid() const { return static_cast<bool>(n_); }
    const Node& node() const { return *n_; }
    const std::shared_ptr<const Node>& ptr() const { return n_; }

    long dim() const;
    double degree() const;
    Op op() const;

    double eval(const Vec& x) const;
    double operator()(const Vec& x) const { return eval(x); }
    Vec subgradient(const Vec& x) const;
    const Mat& kernel_basis() const;
    bool positive_definite() const { return kernel_basis().cols() == 0; }
    const LpForm* lp_form() const;
    const LpForm* conic_form() const;
    bool polyhedral() const { return lp_form() != nullptr; }

private:
    std::shared_ptr<const Node> n_;
};

struct Node {
    Op op = Op::weighted_lp;
    std::string tag;  // serialization name
    long dim = 0;
    double degree = 1.0;

    std::vector<HomFun> args;     // composite: args[0] outer, args[1..] inner
    std::vector<LinearMap> maps;  // composite maps, or the single B / A
    Vec weights;                  // weighted_lp
    double p = 1.0;               // weighted_lp exponent
    Mat points;                   // max_abs / hull_gauge rows
    double r = 1.0;               // power exponent or scale factor
    bool numeric = false;         // dual evaluated from its definition
    bool direct = false;          // pushforward by direct minimization
    HomFun other;                 // composite_dual: the primal composite

    // Derived at construction.
    Mat kernel;
    std::shared_ptr<const LpForm> lp;      // polyhedral form
    std::shared_ptr<const LpForm> cf;      // conic form, equals lp when polyhedral
    std::shared_ptr<const Node> resolved;  // evaluation delegates here when set
    double canon_c = 1.0, canon_r = 1.0;   // f = canon_c · base^canon_r
    std::shared_ptr<const Node> canon_base;  // null: the node is its own base
    Mat aux;                               // cached pinv / projector
    Mat aux2;                              // cached null-space basis
};

inline long HomFun::dim() const { return n_->dim; }
inline double HomFun::degree() const { return n_->degree; }
inline Op HomFun::op() const { return n_->op; }
inline const Mat& HomFun::kernel_basis() const { return n_->kernel; }
inline const LpForm* HomFun::lp_form() const { return n_->lp.get(); }
inline const LpForm* HomFun::conic_form() const { return n_->cf.get(); }

/// Result of minimizing a degree-1 function over an affine set y0 + span(N).
struct AffineMin {
    double value = 0.0;
    Vec point;
    Vec subgradient;  // element of ∂h(point), orthogonal to span(N)
    bool exact = true;
};

namespace detail {

inline bool is_one(double v) { return std::abs(v - 1.0) <= 1e-12; }

inline double lp_value(const Vec& v, double p) {
    if (v.size() == 0) return 0.0;
    if (p == 1.0) return v.lpNorm<1>();
    if (std::isinf(p)) return v.lpNorm<Eigen::Infinity>();
    if (p == 2.0) return v.norm();
    double m = v.cwiseAbs().maxCoeff();
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (long i = 0; i < v.size(); ++i) s += std::pow(std::abs(v(i)) / m, p);
    return m * std::pow(s, 1.0 / p);
}

// One subgradient of ‖v‖_p; lexicographically smallest vertex at ties.
inline Vec lp_subgrad(const Vec& v, double p) {
    const long n = v.size();
    Vec g = Vec::Zero(n);
    if (n == 0) return g;
    if (p == 1.0) {
        for (long i = 0; i < n; ++i) g(i) = v(i) > 0 ? 1.0 : -1.0;
        return g;
    }
    double m = v.cwiseAbs().maxCoeff();
    if (m == 0.0) return g;
    if (std::isinf(p)) {
        long pick = -1;
        bool neg = false;
        for (long i = 0; i < n; ++i) {
            if (std::abs(v(i)) < m * (1.0 - 1e-12)) continue;
            if (v(i) < 0) {
                pick = i;
                neg = true;
                break;
            }
            pick = i;  // the last positive active index is lexicographically smallest
        }
        g(pick) = neg ? -1.0 : 1.0;
        return g;
    }
    double nv = lp_value(v, p);
    for (long i = 0; i < n; ++i) {
        double a = std::abs(v(i)) / nv;
        if (a == 0.0) continue;
        g(i) = (v(i) > 0 ? 1.0 : -1.0) * std::pow(a, p - 1.0);
    }
    return g;
}

inline Vec max_abs_subgrad(const Mat& V, const Vec& x) {
    Vec a = V * x;
    Vec g = Vec::Zero(x.size());
    if (a.size() == 0) return g;
    double m = a.cwiseAbs().maxCoeff();
    if (m == 0.0) return g;
    bool have = false;
    for (long i = 0; i < a.size(); ++i) {
        if (std::abs(a(i)) < m * (1.0 - 1e-12)) continue;
        Vec cand = (a(i) > 0 ? 1.0 : -1.0) * V.row(i).transpose();
        if (!have || linalg::lex_less(cand, g)) {
            g = cand;
            have = true;
        }
    }
    return g;
}

// LP form of max_i |⟨v_i, x⟩|: variables (t, s⁺, s⁻), rows t − s⁺_i = ⟨v_i,x⟩, t − s⁻_i = −⟨v_i,x⟩.
inline std::shared_ptr<const LpForm> max_abs_lp(const Mat& V) {
    const long s = V.rows(), n = V.cols();
    auto L = std::make_shared<LpForm>();
    L->c = Vec::Zero(1 + 2 * s);
    L->c(0) = 1.0;
    L->E = Mat::Zero(2 * s, 1 + 2 * s);
    L->F = Mat::Zero(2 * s, n);
    for (long i = 0; i < s; ++i) {
        L->E(i, 0) = 1.0;
        L->E(i, 1 + i) = -1.0;
        L->E(s + i, 0) = 1.0;
        L->E(s + i, 1 + s + i) = -1.0;
        L->F.row(i) = V.row(i);
        L->F.row(s + i) = -V.row(i);
    }
    L->free.assign(static_cast<std::size_t>(1 + 2 * s), 0);
    return L;
}

struct LpSolve {
    double value = 0.0;
    Vec z, t, y;
};

// min cᵀz + 0ᵀt  s.t.  E z + X t = b, t free.
inline LpSolve solve_lp_form(const LpForm& L, const Vec& b, const Mat& X = Mat()) {
    lp::Problem<double> P;
    const long k = L.vars();
    const long nt = X.cols();
    for (long j = 0; j < k; ++j) P.add_var(L.free[static_cast<std::size_t>(j)] != 0, L.c(j));
    for (long j = 0; j < nt; ++j) P.add_var(true, 0.0);
    for (long i = 0; i < L.rows(); ++i) {
        std::vector<std::pair<int, double>> row;
        for (long j = 0; j < k; ++j)
            if (L.E(i, j) != 0.0) row.emplace_back(static_cast<int>(j), L.E(i, j));
        for (long j = 0; j < nt; ++j)
            if (X(i, j) != 0.0 && std::abs(X(i, j)) > 1e-15) row.emplace_back(static_cast<int>(k + j), X(i, j));
        P.add_row(std::move(row), lp::Sense::eq, std::abs(b(i)) < 1e-15 ? 0.0 : b(i));
    }
    auto sol = P.solve();
    if (!sol.ok()) throw Error("LP-form evaluation failed (status " + std::to_string(static_cast<int>(sol.status)) + ")");
    LpSolve r;
    r.value = std::max(0.0, sol.objective);
    r.z = Vec(k);
    for (long j = 0; j < k; ++j) r.z(j) = sol.x[static_cast<std::size_t>(j)];
    r.t = Vec(nt);
    for (long j = 0; j < nt; ++j) r.t(j) = sol.x[static_cast<std::size_t>(k + j)];
    r.y = linalg::from_std(sol.y);
    return r;
}

// Conic counterpart of solve_lp_form.
inline LpSolve solve_cone_form(const LpForm& L, const Vec& b, const Mat& X = Mat()) {
    const long k = L.vars(), nt = X.cols();
    cone::Problem P;
    P.c = Vec::Zero(k + nt);
    P.c.head(k) = L.c;
    P.A.resize(L.rows(), k + nt);
    P.A.leftCols(k) = L.E;
    if (nt) P.A.rightCols(nt) = X;
    P.b = b;
    P.free = L.free;
    P.free.resize(static_cast<std::size_t>(k + nt), 1);
    P.cones = L.cones;
    cone::Result r = cone::solve(P);
    if (!r.ok) throw Error("conic evaluation failed to converge");
    LpSolve out;
    out.value = std::max(0.0, r.value);
    out.z = r.z.head(k);
    out.t = r.z.tail(nt);
    out.y = r.y;
    return out;
}

inline LpSolve solve_form(const LpForm& L, const Vec& b, const Mat& X = Mat()) {
    return L.cones.empty() ? solve_lp_form(L, b, X) : solve_cone_form(L, b, X);
}

inline double eval_node(const Node& n, const Vec& x);
inline Vec subgrad_node(const Node& n, const Vec& x);
inline AffineMin affine_min_node(const Node& h, const Vec& y0, const Mat& N);

inline double lp_eval(const LpForm& L, const Vec& x) { return solve_form(L, L.F * x).value; }
inline Vec lp_subgrad_form(const LpForm& L, const Vec& x) { return L.F.transpose() * solve_form(L, L.F * x).y; }

inline double eval_node(const Node& n, const Vec& x) {
    if (n.resolved) return eval_node(*n.resolved, x);
    if (n.canon_base) {
        double b = eval_node(*n.canon_base, x);
        return n.canon_c * (n.canon_r == 1.0 ? b : std::pow(b, n.canon_r));
    }
    switch (n.op) {
        case Op::weighted_lp: return lp_value(n.weights.cwiseProduct(x), n.p);
        case Op::max_abs: return n.points.rows() ? (n.points * x).cwiseAbs().maxCoeff() : 0.0;
        case Op::hull_gauge: return lp_eval(*n.lp, x);
        case Op::composite: {
            const long d = static_cast<long>(n.args.size()) - 1;
            Vec t(d);
            for (long i = 0; i < d; ++i)
                t(i) = eval_node(n.args[static_cast<std::size_t>(i + 1)].node(), n.maps[static_cast<std::size_t>(i)].apply(x));
            return eval_node(n.args[0].node(), t);
        }
        case Op::pullback: return eval_node(n.args[0].node(), n.maps[0].apply(x));
        case Op::pushforward: return affine_min_node(n.args[0].node(), n.aux * x, n.aux2).value;
        case Op::dual: {
            if (n.cf) return lp_eval(*n.cf, x);
            const Node& h = n.args[0].node();
            Vec px = linalg::project_out(h.kernel, x);
            double nx = px.norm();
            if (nx == 0.0) return 0.0;
            Mat perp = linalg::relative_complement(linalg::complement(h.kernel, n.dim), Mat(px / nx), n.dim);
            AffineMin m = affine_min_node(h, px / (nx * nx), perp);
            return m.value > 0 ? 1.0 / m.value : kInf;
        }
        default: break;
    }
    throw Error("eval: unresolved node");
}

inline Vec subgrad_node(const Node& n, const Vec& x) {
    if (n.resolved) return subgrad_node(*n.resolved, x);
    if (n.canon_base) {
        Vec s = subgrad_node(*n.canon_base, x);
        if (n.canon_r == 1.0) return n.canon_c * s;
        double b = eval_node(*n.canon_base, x);
        if (b == 0.0) return n.canon_r > 1.0 ? Vec(Vec::Zero(x.size())) : Vec(n.canon_c * s);
        return n.canon_c * n.canon_r * std::pow(b, n.canon_r - 1.0) * s;
    }
    switch (n.op) {
        case Op::weighted_lp: return n.weights.cwiseProduct(lp_subgrad(n.weights.cwiseProduct(x), n.p));
        case Op::max_abs: return max_abs_subgrad(n.points, x);
        case Op::hull_gauge: return lp_subgrad_form(*n.lp, x);
        case Op::composite: {
            const long d = static_cast<long>(n.args.size()) - 1;
            Vec t(d);
            std::vector<Vec> ax(static_cast<std::size_t>(d));
            for (long i = 0; i < d; ++i) {
                ax[static_cast<std::size_t>(i)] = n.maps[static_cast<std::size_t>(i)].apply(x);
                t(i) = eval_node(n.args[static_cast<std::size_t>(i + 1)].node(), ax[static_cast<std::size_t>(i)]);
            }
            Vec mu = subgrad_node(n.args[0].node(), t).cwiseAbs();
            Vec s = Vec::Zero(x.size());
            for (long i = 0; i < d; ++i) {
                if (mu(i) == 0.0) continue;
                const auto ui = static_cast<std::size_t>(i);
                s += mu(i) * n.maps[ui].apply_t(subgrad_node(n.args[ui + 1].node(), ax[ui]));
            }
            return s;
        }
        case Op::pullback: return n.maps[0].apply_t(subgrad_node(n.args[0].node(), n.maps[0].apply(x)));
        case Op::pushforward: {
            if (n.cf) return lp_subgrad_form(*n.cf, x);
            AffineMin m = affine_min_node(n.args[0].node(), n.aux * x, n.aux2);
            return n.aux.transpose() * m.subgradient;
        }
        case Op::dual: {
            if (n.cf) return lp_subgrad_form(*n.cf, x);
            const Node& h = n.args[0].node();
            Vec px = linalg::project_out(h.kernel, x);
            double nx = px.norm();
            if (nx == 0.0) return Vec::Zero(x.size());
            Mat perp = linalg::relative_complement(linalg::complement(h.kernel, n.dim), Mat(px / nx), n.dim);
            AffineMin m = affine_min_node(h, px / (nx * nx), perp);
            return linalg::project_out(h.kernel, m.point / m.value);
        }
        default: break;
    }
    throw Error("subgradient: unresolved node");
}

inline const Node& effective(const Node& n) { return n.resolved ? effective(*n.resolved) : n; }

inline AffineMin affine_min_node(const Node& hn, const Vec& y0, const Mat& Nraw) {
    const Node& h = effective(hn);
    AffineMin out;
    Mat N = Nraw.cols() ? linalg::orth(Nraw) : Nraw;
    if (N.cols() == 0) {
        out.point = y0;
        out.value = eval_node(h, y0);
        out.subgradient = subgrad_node(h, y0);
        return out;
    }
    if (h.lp) {
        const LpForm& L = *h.lp;
        LpSolve s = solve_lp_form(L, L.F * y0, -(L.F * N));
        out.value = s.value;
        out.point = y0 + N * s.t;
        out.subgradient = linalg::project_out(N, L.F.transpose() * s.y);
        return out;
    }
    if (h.op == Op::weighted_lp && h.p == 2.0 && !h.canon_base) {
        Mat DN = h.weights.asDiagonal() * N;
        Vec Dy = h.weights.cwiseProduct(y0);
        Vec t = -linalg::pinv(DN) * Dy;
        out.point = y0 + N * t;
        out.value = eval_node(h, out.point);
        out.subgradient = linalg::project_out(N, subgrad_node(h, out.point));
        return out;
    }
    if (h.cf) {
        const LpForm& L = *h.cf;
        LpSolve s = solve_cone_form(L, L.F * y0, -(L.F * N));
        out.value = s.value;
        out.point = y0 + N * s.t;
        out.subgradient = linalg::project_out(N, L.F.transpose() * s.y);
        out.exact = false;
        return out;
    }
    optim::Objective fg = [&](const Vec& t, Vec* g) {
        Vec y = y0 + N * t;
        if (g) *g = N.transpose() * subgrad_node(h, y);
        return eval_node(h, y);
    };
    auto res = optim::bfgs(fg, Vec::Zero(N.cols()));
    out.point = y0 + N * res.t;
    out.value = res.value;
    out.subgradient = linalg::project_out(N, subgrad_node(h, out.point));
    out.exact = false;
    return out;
}

inline std::shared_ptr<Node> blank(Op op, const char* tag, long dim, double degree) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->tag = tag;
    n->dim = dim;
    n->degree = degree;
    return n;
}

// Ker(h ∘ B) = null(P⊥_h B).
inline Mat pullback_kernel(const Node& h, const Mat& B) {
    Mat M = h.kernel.cols() ? Mat(linalg::co_projector(h.kernel, h.dim) * B) : B;
    return linalg::null_space(M, B.cols());
}

inline void set_form(Node& n, std::shared_ptr<const LpForm> L) {
    n.cf = L;
    n.lp = L && L->cones.empty() ? L : nullptr;
}

inline std::vector<cone::PCone> shifted(const std::vector<cone::PCone>& cs, long off) {
    std::vector<cone::PCone> out = cs;
    for (auto& C : out) {
        C.t += off;
        for (long& i : C.u) i += off;
    }
    return out;
}

inline HomFun finish(std::shared_ptr<Node> n) { return HomFun(std::shared_ptr<const Node>(std::move(n))); }

// Copies canonical data and LP form from the resolved node.
inline void adopt_resolved(Node& n, const HomFun& r) {
    n.resolved = r.ptr();
    const Node& e = r.node();
    n.lp = e.lp;
    n.cf = e.cf;
    if (e.canon_base) {
        n.canon_c = e.canon_c;
        n.canon_r = e.canon_r;
        n.canon_base = e.canon_base;
    } else {
        n.canon_base = r.ptr();
    }
}

}  // namespace detail

// ---------------------------------------------------------------- atoms

inline HomFun weighted_lp(const Vec& w, double p) {
    if (!(p >= 1.0)) throw DomainError("weighted_lp: p must be ≥ 1");
    if (w.size() == 0) throw DimensionError("weighted_lp: empty weight vector");
    for (long i = 0; i < w.size(); ++i)
        if (!(w(i) >= 0.0) || !std::isfinite(w(i))) throw DomainError("weighted_lp: weights must be finite and nonnegative");
    const long n = w.size();
    auto nd = detail::blank(Op::weighted_lp, "weighted_lp", n, 1.0);
    nd->weights = w;
    nd->p = p;
    std::vector<long> zero;
    for (long i = 0; i < n; ++i)
        if (w(i) == 0.0) zero.push_back(i);
    nd->kernel = Mat::Zero(n, static_cast<long>(zero.size()));
    for (std::size_t j = 0; j < zero.size(); ++j) nd->kernel(zero[j], static_cast<long>(j)) = 1.0;
    if (p == 1.0) {
        auto L = std::make_shared<LpForm>();
        L->c = Vec::Ones(2 * n);
        L->E.resize(n, 2 * n);
        L->E << Mat::Identity(n, n), -Mat::Identity(n, n);
        L->F = w.asDiagonal();
        L->free.assign(static_cast<std::size_t>(2 * n), 0);
        detail::set_form(*nd, L);
    } else if (std::isinf(p)) {
        detail::set_form(*nd, detail::max_abs_lp(Mat(w.asDiagonal())));
    } else {
        // (t, u): u = W x, ‖u‖_p ≤ t.
        auto L = std::make_shared<LpForm>();
        L->c = Vec::Zero(n + 1);
        L->c(0) = 1.0;
        L->E = Mat::Zero(n, n + 1);
        L->E.rightCols(n) = Mat::Identity(n, n);
        L->F = w.asDiagonal();
        L->free.assign(static_cast<std::size_t>(n + 1), 1);
        cone::PCone C{p, 0, {}};
        for (long i = 0; i < n; ++i) C.u.push_back(i + 1);
        L->cones = {C};
        detail::set_form(*nd, L);
    }
    return detail::finish(nd);
}

inline HomFun lp_norm(long n, double p) { return weighted_lp(Vec::Ones(n), p); }
inline HomFun l1(long n) { return lp_norm(n, 1.0); }
inline HomFun l2(long n) { return lp_norm(n, 2.0); }

inline HomFun linfty_max(long n) {
    HomFun f = lp_norm(n, kInf);
    auto nd = std::make_shared<Node>(f.node());
    nd->tag = "linfty_max";
    return detail::finish(nd);
}

inline HomFun max_abs(const Mat& V, const char* tag) {
    if (V.cols() == 0) throw DimensionError("max_abs: zero ambient dimension");
    if (!V.allFinite()) throw DomainError("max_abs: non-finite entry");
    auto nd = detail::blank(Op::max_abs, tag, V.cols(), 1.0);
    nd->points = V;
    nd->kernel = linalg::null_space(V, V.cols());
    detail::set_form(*nd, detail::max_abs_lp(V));
    return detail::finish(nd);
}

/// h_P(x) = max_{v ∈ ±P} ⟨v, x⟩, points as rows.
inline HomFun support_function(const Mat& points) { return max_abs(points, "support_function"); }

/// Gauge of {x : |⟨a_i, x⟩| ≤ 1}, facet normals a_i as rows.
inline HomFun polytope_gauge(const Mat& facets) { return max_abs(facets, "polytope_gauge"); }

/// inf { Σ|α_i| : Σ α_i v_i = P x } with P the projector onto span(v_i).
inline HomFun hull_gauge(const Mat& V) {
    if (V.cols() == 0) throw DimensionError("hull_gauge: zero ambient dimension");
    const long s = V.rows(), n = V.cols();
    auto nd = detail::blank(Op::hull_gauge, "hull_gauge", n, 1.0);
    nd->points = V;
    nd->kernel = linalg::null_space(V, n);
    auto L = std::make_shared<LpForm>();
    L->c = Vec::Ones(2 * s);
    L->E.resize(n, 2 * s);
    L->E << V.transpose(), -V.transpose();
    L->F = linalg::co_projector(nd->kernel, n);
    L->free.assign(static_cast<std::size_t>(2 * s), 0);
    detail::set_form(*nd, L);
    return detail::finish(nd);
}

// --------------------------------------------------------- combinators

/// c · f (values are multiplied, never arguments).
inline HomFun scale(const HomFun& f, double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("scale: factor must be positive and finite");
    const Node& a = f.node();
    auto nd = detail::blank(Op::scale, "scale", a.dim, a.degree);
    nd->args = {f};
    nd->r = c;
    nd->kernel = a.kernel;
    nd->canon_c = c * a.canon_c;
    nd->canon_r = a.canon_r;
    nd->canon_base = a.canon_base ? a.canon_base : f.ptr();
    if (a.cf && detail::is_one(a.degree)) {
        auto L = std::make_shared<LpForm>(*a.cf);
        L->c *= c;
        detail::set_form(*nd, L);
    }
    return detail::finish(nd);
}

/// f^r, requires r ≥ 1/degree(f).
inline HomFun power(const HomFun& f, double r) {
    const Node& a = f.node();
    if (!(r > 0.0) || r * a.degree < 1.0 - 1e-12) throw DomainError("power: exponent must satisfy r ≥ 1/p");
    auto nd = detail::blank(Op::power, "power", a.dim, a.degree * r);
    nd->args = {f};
    nd->r = r;
    nd->kernel = a.kernel;
    nd->canon_c = std::pow(a.canon_c, r);
    nd->canon_r = a.canon_r * r;
    if (detail::is_one(nd->canon_r)) nd->canon_r = 1.0;
    nd->canon_base = a.canon_base ? a.canon_base : f.ptr();
    if (detail::is_one(nd->degree)) {
        nd->degree = 1.0;
        const LpForm* base_lp = nd->canon_base->cf.get();
        if (base_lp) {
            auto L = std::make_shared<LpForm>(*base_lp);
            L->c *= nd->canon_c;
            detail::set_form(*nd, L);
        }
    }
    return detail::finish(nd);
}

/// x ↦ f(Bx).
inline HomFun pullback(const HomFun& f, const LinearMap& B) {
    const Node& a = f.node();
    require_dim(B.rows(), a.dim, "pullback: rows(B) must equal dim(f)");
    auto nd = detail::blank(Op::pullback, "pullback", B.cols(), a.degree);
    nd->args = {f};
    nd->maps = {B};
    Mat Bd = B.dense();
    nd->kernel = detail::pullback_kernel(a, Bd);
    if (a.canon_base) {
        HomFun base = pullback(HomFun(a.canon_base), B);
        nd->canon_c = a.canon_c;
        nd->canon_r = a.canon_r;
        nd->canon_base = base.ptr();
        if (detail::is_one(a.degree) && base.node().cf) {
            auto L = std::make_shared<LpForm>(*base.node().cf);
            L->c *= a.canon_c;
            detail::set_form(*nd, L);
        }
    } else if (a.cf) {
        auto L = std::make_shared<LpForm>(*a.cf);
        L->F = B.left_compose(a.cf->F);
        detail::set_form(*nd, L);
    }
    return detail::finish(nd);
}

namespace detail {

// 𝒫_A h by direct minimization of h over the fibre {Ay = P_A x}.
inline std::shared_ptr<Node> pushforward_direct_node(const HomFun& h, const LinearMap& A) {
    const Node& a = h.node();
    if (!is_one(a.degree)) throw DomainError("pushforward: degree must be 1");
    require_dim(A.cols(), a.dim, "pushforward: cols(A) must equal dim(f)");
    const long m = A.rows();
    auto nd = blank(Op::pushforward, "pushforward", m, 1.0);
    nd->args = {h};
    nd->maps = {A};
    nd->direct = true;
    Mat Ad = A.dense();
    Mat AQ = a.kernel.cols() ? Mat(Ad * a.kernel) : Mat(m, 0);
    Mat NT = linalg::null_space(Ad.transpose(), m);
    Mat both(m, AQ.cols() + NT.cols());
    both << AQ, NT;
    nd->kernel = linalg::orth(both);
    nd->aux = linalg::pinv(Ad);
    nd->aux2 = linalg::null_space(Ad, a.dim);
    if (a.cf || (a.resolved && effective(a).cf)) {
        const LpForm& H = a.cf ? *a.cf : *effective(a).cf;
        const long k = H.vars(), rh = H.rows(), nh = a.dim;
        auto L = std::make_shared<LpForm>();
        L->c = Vec::Zero(k + nh);
        L->c.head(k) = H.c;
        L->E = Mat::Zero(rh + m, k + nh);
        L->E.topLeftCorner(rh, k) = H.E;
        L->E.topRightCorner(rh, nh) = -H.F;
        L->E.bottomRightCorner(m, nh) = Ad;
        L->F = Mat::Zero(rh + m, m);
        L->F.bottomRows(m) = linalg::co_projector(NT, m);
        L->free.assign(static_cast<std::size_t>(k + nh), 1);
        for (long j = 0; j < k; ++j) L->free[static_cast<std::size_t>(j)] = H.free[static_cast<std::size_t>(j)];
        L->cones = H.cones;
        set_form(*nd, L);
    }
    return nd;
}

}  // namespace detail

inline HomFun pushforward_direct(const HomFun& h, const LinearMap& A) {
    return detail::finish(detail::pushforward_direct_node(h, A));
}

/// 𝒟 computed from its definition (LP dual for polyhedral h, hyperplane minimization otherwise).
inline HomFun dual_numeric(const HomFun& h) {
    const Node& a = h.node();
    if (!detail::is_one(a.degree)) throw DomainError("dual: degree must be 1");
    const long n = a.dim;
    auto nd = detail::blank(Op::dual, "dual", n, 1.0);
    nd->args = {h};
    nd->numeric = true;
    nd->kernel = a.kernel;
    const Node& e = detail::effective(a);
    if (e.cf) {
        const LpForm& H = *e.cf;
        const long k = H.vars(), rh = H.rows();
        std::vector<char> in_cone(static_cast<std::size_t>(k), 0);
        for (const auto& C : H.cones) {
            in_cone[static_cast<std::size_t>(C.t)] = 1;
            for (long i : C.u) in_cone[static_cast<std::size_t>(i)] = 1;
        }
        long J = 0;
        for (long j = 0; j < k; ++j)
            if (!H.free[static_cast<std::size_t>(j)] || in_cone[static_cast<std::size_t>(j)]) ++J;
        // Variables: μ ≥ 0, ν free (rh), σ (J) in the dual cone: c μ − Eᵀν = σ.
        auto L = std::make_shared<LpForm>();
        const long nvar = 1 + rh + J;
        L->c = Vec::Zero(nvar);
        L->c(0) = 1.0;
        L->E = Mat::Zero(n + k, nvar);
        L->E.block(0, 1, n, rh) = H.F.transpose();
        long sj = 0;
        std::vector<long> sigma(static_cast<std::size_t>(k), -1);
        for (long j = 0; j < k; ++j) {
            L->E(n + j, 0) = H.c(j);
            L->E.block(n + j, 1, 1, rh) = -H.E.col(j).transpose();
            if (!H.free[static_cast<std::size_t>(j)] || in_cone[static_cast<std::size_t>(j)]) {
                sigma[static_cast<std::size_t>(j)] = 1 + rh + sj;
                L->E(n + j, 1 + rh + sj++) = -1.0;
            }
        }
        L->F = Mat::Zero(n + k, n);
        L->F.topRows(n) = linalg::co_projector(a.kernel, n);
        L->free.assign(static_cast<std::size_t>(nvar), 0);
        for (long j = 0; j < rh; ++j) L->free[static_cast<std::size_t>(1 + j)] = 1;
        for (const auto& C : H.cones) {
            cone::PCone D{conjugate_exponent(C.p), sigma[static_cast<std::size_t>(C.t)], {}};
            L->free[static_cast<std::size_t>(D.t)] = 1;
            for (long i : C.u) {
                D.u.push_back(sigma[static_cast<std::size_t>(i)]);
                L->free[static_cast<std::size_t>(D.u.back())] = 1;
            }
            L->cones.push_back(std::move(D));
        }
        detail::set_form(*nd, L);
    }
    return detail::finish(nd);
}

inline HomFun dual(const HomFun& f);

/// 𝒫_A f; symbolic 𝒟ℳ_A𝒟 f when Ker f ⊆ Ker A, direct minimization otherwise.
inline HomFun pushforward(const HomFun& f, const LinearMap& A) {
    auto nd = detail::pushforward_direct_node(f, A);
    const Node& a = f.node();
    Mat KA = A.kernel_basis();
    if (linalg::contains_subspace(KA, a.kernel, a.dim)) {
        nd->direct = false;
        HomFun r = dual_numeric(pullback(dual(f), A.transpose()));
        nd->resolved = r.ptr();
        detail::set_form(*nd, r.node().cf);
    }
    return detail::finish(nd);
}

namespace detail {

inline bool absolute_norm(const HomFun& O) {
    std::mt19937_64 rng(0x5eedULL);
    std::normal_distribution<double> N(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    const long d = O.dim();
    for (int s = 0; s < 1000; ++s) {
        Vec t(d), u(d);
        for (long i = 0; i < d; ++i) {
            t(i) = N(rng);
            u(i) = coin(rng) ? -t(i) : t(i);
        }
        double a = O.eval(t), b = O.eval(u);
        if (std::abs(a - b) > 1e-9 * (1.0 + std::abs(a))) return false;
    }
    return true;
}

inline HomFun composite_impl(const HomFun& outer, const std::vector<HomFun>& inner, const std::vector<LinearMap>& maps,
                             bool check) {
    const long d = static_cast<long>(inner.size());
    if (d == 0) throw DimensionError("composite_norm: no inner functions");
    if (maps.size() != inner.size()) throw DimensionError("composite_norm: one map per inner function");
    require_dim(outer.dim(), d, "composite_norm: outer dimension");
    if (!is_one(outer.degree())) throw DomainError("composite_norm: outer must be 1-homogeneous");
    const long n = maps[0].cols();
    for (long i = 0; i < d; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        if (!is_one(inner[ui].degree())) throw DomainError("composite_norm: inner functions must be 1-homogeneous");
        require_dim(maps[ui].rows(), inner[ui].dim(), "composite_norm: map rows");
        require_dim(maps[ui].cols(), n, "composite_norm: map cols");
    }
    if (check && (!outer.positive_definite() || !absolute_norm(outer)))
        throw DomainError("composite_norm: outer norm is not monotonic");
    auto nd = blank(Op::composite, "composite_norm", n, 1.0);
    nd->args.push_back(outer);
    for (const auto& g : inner) nd->args.push_back(g);
    nd->maps = maps;
    // Kernel: ∩ Ker(g_i ∘ A_i).
    long rows = 0;
    for (const auto& A : maps) rows += A.rows();
    Mat stacked(rows, n);
    long r0 = 0;
    for (long i = 0; i < d; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        Mat Ad = maps[ui].dense();
        const Mat& K = inner[ui].kernel_basis();
        stacked.middleRows(r0, Ad.rows()) = K.cols() ? Mat(linalg::co_projector(K, Ad.rows()) * Ad) : Ad;
        r0 += Ad.rows();
    }
    nd->kernel = linalg::null_space(stacked, n);
    // LP form when every part is polyhedral.
    bool formed = outer.conic_form() != nullptr;
    for (const auto& g : inner) formed = formed && g.conic_form();
    if (formed) {
        const LpForm& O = *outer.conic_form();
        long nvar = d + O.vars(), nrow = O.rows() + d;
        for (const auto& g : inner) {
            nvar += g.conic_form()->vars() + 1;
            nrow += g.conic_form()->rows();
        }
        auto L = std::make_shared<LpForm>();
        L->c = Vec::Zero(nvar);
        L->E = Mat::Zero(nrow, nvar);
        L->F = Mat::Zero(nrow, n);
        L->free.assign(static_cast<std::size_t>(nvar), 0);
        // Layout: s (d) | z_O | per block i: z_i, σ_i.
        const long zo = d;
        L->E.block(0, 0, O.rows(), d) = -O.F;
        L->E.block(0, zo, O.rows(), O.vars()) = O.E;
        L->c.segment(zo, O.vars()) = O.c;
        for (long j = 0; j < O.vars(); ++j) L->free[static_cast<std::size_t>(zo + j)] = O.free[static_cast<std::size_t>(j)];
        L->cones = shifted(O.cones, zo);
        long col = zo + O.vars(), row = O.rows();
        const long link0 = nrow - d;
        for (long i = 0; i < d; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const LpForm& G = *inner[ui].conic_form();
            for (const auto& C : shifted(G.cones, col)) L->cones.push_back(C);
            L->E.block(row, col, G.rows(), G.vars()) = G.E;
            L->F.middleRows(row, G.rows()) = maps[ui].left_compose(G.F);
            for (long j = 0; j < G.vars(); ++j) {
                L->free[static_cast<std::size_t>(col + j)] = G.free[static_cast<std::size_t>(j)];
                L->E(link0 + i, col + j) = G.c(j);
            }
            L->E(link0 + i, col + G.vars()) = 1.0;
            L->E(link0 + i, i) = -1.0;
            row += G.rows();
            col += G.vars() + 1;
        }
        detail::set_form(*nd, L);
    }
    return finish(nd);
}

}  // namespace detail

/// ‖(g_1(A_1x), …, g_d(A_dx))‖ with a monotonic (absolute) outer norm.
inline HomFun composite_norm(const HomFun& outer, const std::vector<HomFun>& inner, const std::vector<LinearMap>& maps) {
    return detail::composite_impl(outer, inner, maps, true);
}

namespace detail {

// 𝒟 of a composite with positive definite inner functions: min over decompositions Σ A_iᵀ x_i = x.
inline HomFun composite_dual_of(const HomFun& comp) {
    const Node& c = comp.node();
    const long d = static_cast<long>(c.args.size()) - 1;
    std::vector<HomFun> duals;
    std::vector<LinearMap> sel;
    long total = 0;
    for (long i = 0; i < d; ++i) total += c.maps[static_cast<std::size_t>(i)].rows();
    Mat M(c.dim, total);
    long off = 0;
    for (long i = 0; i < d; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const HomFun& g = c.args[ui + 1];
        if (!g.positive_definite()) throw DomainError("composite_dual: inner functions must be positive definite");
        duals.push_back(dual(g));
        const long mi = c.maps[ui].rows();
        std::vector<long> idx(static_cast<std::size_t>(mi));
        for (long j = 0; j < mi; ++j) idx[static_cast<std::size_t>(j)] = off + j;
        sel.push_back(LinearMap::select(idx, total));
        M.middleCols(off, mi) = c.maps[ui].dense().transpose();
        off += mi;
    }
    HomFun lifted = composite_impl(dual(c.args[0]), duals, sel, false);
    auto nd = blank(Op::composite_dual, "composite_dual", c.dim, 1.0);
    nd->args = c.args;
    nd->maps = c.maps;
    nd->other = comp;
    nd->kernel = c.kernel;
    adopt_resolved(*nd, pushforward_direct(lifted, LinearMap(M)));
    nd->canon_base.reset();
    return finish(nd);
}

// Symbolic dual rule; invalid result means no closed form applies.
inline HomFun dual_rule(const HomFun& f) {
    const Node& n = f.node();
    switch (n.op) {
        case Op::weighted_lp: {
            Vec w(n.weights.size());
            for (long i = 0; i < w.size(); ++i) w(i) = n.weights(i) > 0 ? 1.0 / n.weights(i) : 0.0;
            return weighted_lp(w, conjugate_exponent(n.p));
        }
        case Op::max_abs: return hull_gauge(n.points);
        case Op::hull_gauge: return max_abs(n.points, "support_function");
        case Op::composite: {
            for (std::size_t i = 1; i < n.args.size(); ++i)
                if (!n.args[i].positive_definite()) return {};
            return composite_dual_of(f);
        }
        case Op::pullback: {
            const Node& h = n.args[0].node();
            if (!is_one(h.degree)) break;
            Mat B = n.maps[0].dense();
            if (h.kernel.cols()) B = linalg::co_projector(h.kernel, h.dim) * B;
            return pushforward_direct(dual(n.args[0]), LinearMap(Mat(B.transpose())));
        }
        case Op::pushforward: {
            Mat At = n.maps[0].dense().transpose();
            if (n.kernel.cols()) At = At * linalg::co_projector(n.kernel, n.dim);
            return pullback(dual(n.args[0]), LinearMap(At));
        }
        default: break;
    }
    if (n.canon_base) {
        // degree 1 forces canon_r = 1: f = c·b.
        return scale(dual(HomFun(n.canon_base)), 1.0 / n.canon_c);
    }
    if (n.resolved) return dual(HomFun(n.resolved));
    return {};
}

}  // namespace detail

/// 𝒟f(x) = sup{⟨y,x⟩ : f(y) ≤ 1, y ⊥ Ker f}.
inline HomFun dual(const HomFun& f) {
    const Node& n = f.node();
    if (!detail::is_one(n.degree)) throw DomainError("dual: degree must be 1");
    if (n.op == Op::dual) return n.args[0];
    if (n.op == Op::composite_dual) return n.other;
    HomFun r = detail::dual_rule(f);
    if (!r.valid()) return dual_numeric(f);
    auto nd = detail::blank(Op::dual, "dual", n.dim, 1.0);
    nd->args = {f};
    nd->kernel = n.kernel;
    detail::adopt_resolved(*nd, r);
    if (!r.node().canon_base) nd->canon_base.reset();
    return detail::finish(nd);
}

/// 𝒟 of a composite norm; rejects inner functions with a kernel.
inline HomFun composite_dual(const HomFun& outer, const std::vector<HomFun>& inner, const std::vector<LinearMap>& maps) {
    for (const auto& g : inner)
        if (!g.positive_definite()) throw DomainError("composite_dual: inner functions must be positive definite");
    return dual(composite_norm(outer, inner, maps));
}

/// ℒf(x) = sup_{y ⊥ Ker f} ⟨x,y⟩ − f(y), degree p > 1.
inline HomFun legendre(const HomFun& f) {
    const Node& n = f.node();
    const double p = n.degree;
    if (!(p > 1.0 + 1e-12)) throw DomainError("legendre: degree must exceed 1");
    const double ps = conjugate_exponent(p);
    const double c = n.canon_c;
    HomFun base = n.canon_base ? HomFun(n.canon_base) : f;
    double k = (p - 1.0) / std::pow(p, ps) * std::pow(c, -1.0 / (p - 1.0));
    auto nd = detail::blank(Op::legendre, "legendre", n.dim, ps);
    nd->args = {f};
    nd->kernel = n.kernel;
    detail::adopt_resolved(*nd, scale(power(dual(base), ps), k));
    return detail::finish(nd);
}

/// 𝒜f(x) = sup_{y ⊥ Ker f} (⟨x,y⟩ − 1)/f(y), same degree p ≥ 1.
inline HomFun polarity(const HomFun& f) {
    const Node& n = f.node();
    const double p = n.degree;
    if (!(p >= 1.0 - 1e-12)) throw DomainError("polarity: degree must be at least 1");
    const double c = n.canon_c;
    HomFun base = n.canon_base ? HomFun(n.canon_base) : f;
    double pm1 = p - 1.0;
    double k = (pm1 <= 0.0 ? 1.0 : std::pow(pm1, pm1)) / std::pow(p, p) / c;
    auto nd = detail::blank(Op::polarity, "polarity", n.dim, p);
    nd->args = {f};
    nd->kernel = n.kernel;
    detail::adopt_resolved(*nd, scale(power(dual(base), p), k));
    return detail::finish(nd);
}

// ------------------------------------------------------------ evaluation

inline double HomFun::eval(const Vec& x) const {
    require_dim(x.size(), n_->dim, "eval");
    return detail::eval_node(*n_, x);
}

inline Vec HomFun::subgradient(const Vec& x) const {
    require_dim(x.size(), n_->dim, "subgradient_any");
    return detail::subgrad_node(*n_, x);
}

inline double eval(const HomFun& f, const Vec& x) { return f.eval(x); }
inline Vec subgradient_any(const HomFun& f, const Vec& x) { return f.subgradient(x); }
inline const Mat& kernel_basis(const HomFun& f) { return f.kernel_basis(); }

/// min_{t} h(y0 + N t) for a degree-1 h.
inline AffineMin affine_min(const HomFun& h, const Vec& y0, const Mat& N) {
    require_dim(y0.size(), h.dim(), "affine_min");
    if (N.cols()) require_dim(N.rows(), h.dim(), "affine_min");
    return detail::affine_min_node(h.node(), y0, N);
}

/// True when evaluation runs entirely through closed forms or exact LPs.
inline bool exact_evaluation(const HomFun& f) {
    const Node& n = detail::effective(f.node());
    if (n.lp) return true;
    const Node& b = n.canon_base ? detail::effective(*n.canon_base) : n;
    if (b.lp) return true;
    switch (b.op) {
        case Op::weighted_lp:
        case Op::max_abs: return true;
        case Op::pullback: return exact_evaluation(b.args[0]);
        case Op::composite: {
            for (const auto& a : b.args)
                if (!exact_evaluation(a)) return false;
            return true;
        }
        case Op::pushforward: return b.args[0].node().op == Op::weighted_lp && b.args[0].node().p == 2.0;
        default: return false;
    }
}

}  // namespace spectradual
