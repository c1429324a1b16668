#pragma once

/**
 * @file lp.hpp
 * @brief Small dense two-phase simplex.
 *
 * Templated on the scalar so the same code runs in double (tolerance based)
 * and in exact rationals (zero tolerance, Bland's rule throughout).
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace spectradual::lp {

enum class Sense { le, eq, ge };
enum class Status { optimal, infeasible, unbounded, iteration_limit };

template <class T>
struct Tolerance {
    static T zero() { return T(0); }
    static T feasibility() { return T(0); }
    static constexpr bool exact = true;
};

template <>
struct Tolerance<double> {
    static double zero() { return 1e-11; }
    static double feasibility() { return 1e-9; }
    static constexpr bool exact = false;
};

template <class T>
T abs_value(const T& v) { return v < T(0) ? T(-v) : v; }

template <class T>
struct Solution {
    Status status = Status::infeasible;
    T objective = T(0);
    std::vector<T> x;  // one entry per problem variable
    std::vector<T> y;  // row duals: d objective / d rhs
    bool ok() const { return status == Status::optimal; }
};

template <class T>
class Problem {
public:
    // Adds a variable (nonnegative unless free) and returns its index.
    int add_var(bool free = false, T cost = T(0)) {
        free_.push_back(free);
        cost_.push_back(cost);
        return static_cast<int>(free_.size()) - 1;
    }

    int add_vars(int count, bool free = false) {
        int first = num_vars();
        for (int i = 0; i < count; ++i) add_var(free);
        return first;
    }

    void set_cost(int j, T c) { cost_[static_cast<std::size_t>(j)] = c; }

    void add_row(std::vector<std::pair<int, T>> coeffs, Sense s, T rhs) {
        rows_.push_back(std::move(coeffs));
        sense_.push_back(s);
        rhs_.push_back(rhs);
    }

    int num_vars() const { return static_cast<int>(free_.size()); }
    int num_rows() const { return static_cast<int>(rows_.size()); }

    Solution<T> solve(long max_pivots = 200000) const;

private:
    std::vector<bool> free_;
    std::vector<T> cost_;
    std::vector<std::vector<std::pair<int, T>>> rows_;
    std::vector<Sense> sense_;
    std::vector<T> rhs_;
};

namespace detail {

template <class T>
class Tableau {
public:
    Tableau(int m, int ncols) : m_(m), n_(ncols), a_(static_cast<std::size_t>(m + 1) * (ncols + 1), T(0)) {}

    T& at(int i, int j) { return a_[static_cast<std::size_t>(i) * (n_ + 1) + j]; }
    const T& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * (n_ + 1) + j]; }
    T& rhs(int i) { return at(i, n_); }
    T& obj(int j) { return at(m_, j); }

    void pivot(int p, int e) {
        T inv = T(1) / at(p, e);
        for (int j = 0; j <= n_; ++j) at(p, j) *= inv;
        at(p, e) = T(1);
        for (int i = 0; i <= m_; ++i) {
            if (i == p) continue;
            T f = at(i, e);
            if (f == T(0)) continue;
            for (int j = 0; j <= n_; ++j) {
                if (at(p, j) == T(0)) continue;
                at(i, j) -= f * at(p, j);
                if constexpr (!Tolerance<T>::exact) {
                    if (std::abs(at(i, j)) < 1e-14) at(i, j) = 0.0;
                }
            }
            at(i, e) = T(0);
        }
    }

    int m_, n_;
    std::vector<T> a_;
};

// Runs simplex iterations on the objective row; `allowed` masks entering columns.
template <class T>
Status iterate(Tableau<T>& t, std::vector<int>& basis, const std::vector<bool>& allowed, long& budget) {
    const T eps = Tolerance<T>::zero();
    long degenerate_run = 0;
    while (true) {
        if (budget-- <= 0) return Status::iteration_limit;
        bool bland = Tolerance<T>::exact || degenerate_run > 30;
        int e = -1;
        T best = -eps;
        for (int j = 0; j < t.n_; ++j) {
            if (!allowed[static_cast<std::size_t>(j)]) continue;
            T d = t.obj(j);
            if (d < -eps) {
                if (bland) {
                    e = j;
                    break;
                }
                if (d < best) {
                    best = d;
                    e = j;
                }
            }
        }
        if (e < 0) return Status::optimal;
        int p = -1;
        T ratio = T(0);
        for (int i = 0; i < t.m_; ++i) {
            T a = t.at(i, e);
            if (a > eps) {
                T r = t.rhs(i) / a;
                if (p < 0 || r < ratio || (r == ratio && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(p)])) {
                    p = i;
                    ratio = r;
                }
            }
        }
        if (p < 0) return Status::unbounded;
        if (ratio <= eps) ++degenerate_run;
        else degenerate_run = 0;
        t.pivot(p, e);
        basis[static_cast<std::size_t>(p)] = e;
    }
}

}  // namespace detail

template <class T>
Solution<T> Problem<T>::solve(long max_pivots) const {
    const int m = num_rows();
    const int nv = num_vars();
    // Column layout: structural (free vars split), slacks, artificials.
    std::vector<int> pos(static_cast<std::size_t>(nv)), neg(static_cast<std::size_t>(nv), -1);
    int ncols = 0;
    for (int j = 0; j < nv; ++j) {
        pos[static_cast<std::size_t>(j)] = ncols++;
        if (free_[static_cast<std::size_t>(j)]) neg[static_cast<std::size_t>(j)] = ncols++;
    }
    std::vector<int> slack(static_cast<std::size_t>(m), -1);
    for (int i = 0; i < m; ++i)
        if (sense_[static_cast<std::size_t>(i)] != Sense::eq) slack[static_cast<std::size_t>(i)] = ncols++;
    const int art0 = ncols;
    ncols += m;

    detail::Tableau<T> t(m, ncols);
    std::vector<T> sign(static_cast<std::size_t>(m), T(1));
    for (int i = 0; i < m; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        if (rhs_[ui] < T(0)) sign[ui] = T(-1);
        for (const auto& [j, v] : rows_[ui]) {
            const auto uj = static_cast<std::size_t>(j);
            t.at(i, pos[uj]) += sign[ui] * v;
            if (neg[uj] >= 0) t.at(i, neg[uj]) -= sign[ui] * v;
        }
        if (slack[ui] >= 0) t.at(i, slack[ui]) = sign[ui] * (sense_[ui] == Sense::le ? T(1) : T(-1));
        t.at(i, art0 + i) = T(1);
        t.rhs(i) = sign[ui] * rhs_[ui];
    }
    std::vector<int> basis(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = art0 + i;

    // Phase 1: minimize the sum of artificials.
    T rhs_scale = T(1);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < art0; ++j) t.obj(j) -= t.at(i, j);
        t.rhs(m) -= t.rhs(i);
        if (abs_value(t.rhs(i)) > rhs_scale) rhs_scale = abs_value(t.rhs(i));
    }
    std::vector<bool> allowed(static_cast<std::size_t>(ncols), true);
    long budget = max_pivots;
    Solution<T> sol;
    Status st = detail::iterate(t, basis, allowed, budget);
    if (st == Status::iteration_limit) {
        sol.status = st;
        return sol;
    }
    if (-t.rhs(m) > Tolerance<T>::feasibility() * rhs_scale) {
        sol.status = Status::infeasible;
        return sol;
    }
    // Drive artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
        if (basis[static_cast<std::size_t>(i)] < art0) continue;
        int e = -1;
        T best = Tolerance<T>::zero();
        for (int j = 0; j < art0; ++j) {
            T a = abs_value(t.at(i, j));
            if (a > best) {
                best = a;
                e = j;
                if constexpr (Tolerance<T>::exact) break;
            }
        }
        if (e >= 0) {
            t.pivot(i, e);
            basis[static_cast<std::size_t>(i)] = e;
        }
    }
    // Phase 2.
    std::vector<T> cc(static_cast<std::size_t>(ncols), T(0));
    for (int j = 0; j < nv; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        cc[static_cast<std::size_t>(pos[uj])] = cost_[uj];
        if (neg[uj] >= 0) cc[static_cast<std::size_t>(neg[uj])] = -cost_[uj];
    }
    for (int j = 0; j <= ncols; ++j) t.obj(j) = j < ncols ? cc[static_cast<std::size_t>(j)] : T(0);
    for (int i = 0; i < m; ++i) {
        T cb = cc[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])];
        if (cb == T(0)) continue;
        for (int j = 0; j <= ncols; ++j) t.obj(j) -= cb * t.at(i, j);
    }
    for (int j = art0; j < ncols; ++j) allowed[static_cast<std::size_t>(j)] = false;
    st = detail::iterate(t, basis, allowed, budget);
    sol.status = st;
    if (st != Status::optimal) return sol;

    std::vector<T> colval(static_cast<std::size_t>(ncols), T(0));
    for (int i = 0; i < m; ++i) colval[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] = t.rhs(i);
    sol.x.assign(static_cast<std::size_t>(nv), T(0));
    T objective = T(0);
    for (int j = 0; j < nv; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        T v = colval[static_cast<std::size_t>(pos[uj])];
        if (neg[uj] >= 0) v -= colval[static_cast<std::size_t>(neg[uj])];
        sol.x[uj] = v;
        objective += cost_[uj] * v;
    }
    sol.objective = objective;
    sol.y.assign(static_cast<std::size_t>(m), T(0));
    for (int i = 0; i < m; ++i) sol.y[static_cast<std::size_t>(i)] = -sign[static_cast<std::size_t>(i)] * t.obj(art0 + i);
    return sol;
}

}  // namespace spectradual::lp
