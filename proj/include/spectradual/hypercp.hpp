#pragma once

/**
 * @file hypercp.hpp
 * @brief Core-periphery objective Σ_e w_e ‖x|_e‖_q on a hypergraph, its
 * power-method maximizer and the decomposition dual.
 */

#include "eigsolve.hpp"
#include "errors.hpp"
#include "homfun.hpp"
#include "subdiff.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace spectradual {

struct Hyperedge {
    std::vector<long> nodes;  // sorted, 0-based, no repeats
    double w = 1.0;
};

class Hypergraph {
public:
    Hypergraph() = default;
    Hypergraph(long n, std::vector<Hyperedge> edges) : n_(n) {
        if (n < 1) throw DomainError("Hypergraph: need at least one node");
        for (auto e : edges) {
            if (e.nodes.empty()) throw DomainError("Hypergraph: empty hyperedge");
            std::sort(e.nodes.begin(), e.nodes.end());
            if (std::adjacent_find(e.nodes.begin(), e.nodes.end()) != e.nodes.end())
                throw DomainError("Hypergraph: repeated node in hyperedge");
            if (e.nodes.front() < 0 || e.nodes.back() >= n) throw DomainError("Hypergraph: node index out of range");
            if (!(e.w > 0.0) || !std::isfinite(e.w)) throw DomainError("Hypergraph: weights must be positive and finite");
            edges_.push_back(std::move(e));
        }
        if (edges_.empty()) throw DomainError("Hypergraph: no hyperedges");
    }

    long n() const { return n_; }
    long m() const { return static_cast<long>(edges_.size()); }
    const std::vector<Hyperedge>& edges() const { return edges_; }

    bool covers_all() const {
        std::vector<char> seen(static_cast<std::size_t>(n_), 0);
        for (const auto& e : edges_)
            for (long v : e.nodes) seen[static_cast<std::size_t>(v)] = 1;
        return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    }

    /// Relabel nodes: node v becomes perm[v].
    Hypergraph permuted(const std::vector<long>& perm) const {
        require_dim(static_cast<long>(perm.size()), n_, "Hypergraph::permuted");
        std::vector<Hyperedge> e2;
        for (const auto& e : edges_) {
            Hyperedge h{{}, e.w};
            for (long v : e.nodes) h.nodes.push_back(perm[static_cast<std::size_t>(v)]);
            e2.push_back(std::move(h));
        }
        return Hypergraph(n_, e2);
    }

private:
    long n_ = 0;
    std::vector<Hyperedge> edges_;
};

namespace detail {

inline Vec hyper_weights(const Hypergraph& H) {
    Vec w(H.m());
    for (long e = 0; e < H.m(); ++e) w(e) = H.edges()[static_cast<std::size_t>(e)].w;
    return w;
}

inline void check_q(double q) {
    if (!(q >= 1.0)) throw DomainError("hypercp: q must be in [1, ∞]");
}

}  // namespace detail

/// f(x) = Σ_e w_e ‖x|_e‖_q.
inline HomFun cp_objective(const Hypergraph& H, double q) {
    detail::check_q(q);
    std::vector<HomFun> inner;
    std::vector<LinearMap> maps;
    for (const auto& e : H.edges()) {
        inner.push_back(lp_norm(static_cast<long>(e.nodes.size()), q));
        maps.push_back(LinearMap::select(e.nodes, H.n()));
    }
    return composite_norm(weighted_lp(detail::hyper_weights(H), 1.0), inner, maps);
}

/// 𝒟f(x) = min over Σ_e y_e = x, supp y_e ⊆ e, of max_e ‖y_e‖_{q*}/w_e.
inline HomFun cp_dual(const Hypergraph& H, double q) { return dual(cp_objective(H, q)); }

/// Dual problem on the lifted space ℝ^{Σ|e|}: (‖Σ A_eᵀ y_e‖_{p*}, max_e ‖y_e‖_{q*}/w_e).
struct LiftedDual {
    HomFun f, g;
    Mat M;  // contraction y ↦ Σ A_eᵀ y_e
};

inline LiftedDual cp_lifted_dual(const Hypergraph& H, double p, double q) {
    detail::check_q(q);
    if (!(p > 1.0)) throw DomainError("cp_lifted_dual: p must exceed 1");
    long total = 0;
    for (const auto& e : H.edges()) total += static_cast<long>(e.nodes.size());
    LiftedDual D;
    D.M = Mat::Zero(H.n(), total);
    std::vector<HomFun> inner;
    std::vector<LinearMap> sel;
    long off = 0;
    const double qs = conjugate_exponent(q);
    for (const auto& e : H.edges()) {
        std::vector<long> idx;
        for (std::size_t j = 0; j < e.nodes.size(); ++j) {
            D.M(e.nodes[j], off + static_cast<long>(j)) = 1.0;
            idx.push_back(off + static_cast<long>(j));
        }
        inner.push_back(lp_norm(static_cast<long>(idx.size()), qs));
        sel.push_back(LinearMap::select(idx, total));
        off += static_cast<long>(e.nodes.size());
    }
    Vec winv = detail::hyper_weights(H).cwiseInverse();
    D.g = composite_norm(weighted_lp(winv, kInf), inner, sel);
    D.f = pullback(lp_norm(H.n(), conjugate_exponent(p)), LinearMap(D.M));
    return D;
}

struct CoreScores {
    SpectrumEstimate primal;      // power method on (f, ℓp); x holds |scores|
    SpectrumEstimate contracted;  // power method on (ℓp*, 𝒟f)
    SpectrumEstimate lifted;      // power method on the lifted dual pair
    Vec lifted_contracted;        // M · (lifted eigenvector)
};

/// Core scores: maximizer of f(x)/‖x‖_p, taken entrywise nonnegative.
inline SpectrumEstimate cp_scores(const Hypergraph& H, double p, double q, const SolveConfig& cfg = {}) {
    if (!(p > 1.0)) throw DomainError("cp_scores: p must exceed 1");
    HomFun f = cp_objective(H, q);
    HomFun g = lp_norm(H.n(), p);
    SpectrumEstimate est = power_max(f, g, cfg);
    // f and g only see |x_i|, so |x| attains the same ratio.
    Vec a = est.x.cwiseAbs();
    double gn = g.eval(a);
    if (gn > 0) a /= gn;
    est.x = a;
    est.verified = false;
    est.certificate.reset();
    detail::certify(est, f, g, cfg);
    return est;
}

/// Primal scores plus both forms of the dual eigenproblem.
inline CoreScores cp_scores_with_duals(const Hypergraph& H, double p, double q, const SolveConfig& cfg = {}) {
    CoreScores out;
    out.primal = cp_scores(H, p, q, cfg);
    const double ps = conjugate_exponent(p);
    out.contracted = power_max(lp_norm(H.n(), ps), cp_dual(H, q), cfg);
    LiftedDual D = cp_lifted_dual(H, p, q);
    out.lifted = power_max(D.f, D.g, cfg);
    out.lifted_contracted = D.M * out.lifted.x;
    return out;
}

}  // namespace spectradual
