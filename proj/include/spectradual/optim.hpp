#pragma once

#include "linalg.hpp"

#include <cmath>
#include <functional>

namespace spectradual::optim {

// Objective returning the value and writing a (sub)gradient into *grad.
using Objective = std::function<double(const Vec&, Vec*)>;

struct MinResult {
    Vec t;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

/**
 * @brief BFGS with Armijo backtracking.
 *
 * Meant for the smooth convex programs behind the non-polyhedral fallbacks
 * (ℓp duals, pushforwards). On nonsmooth objectives it still decreases the
 * value but `converged` is only set when the gradient test passes.
 */
inline MinResult bfgs(const Objective& fg, Vec t0, int max_iter = 2000, double gtol = 1e-13) {
    const long k = t0.size();
    MinResult res;
    res.t = std::move(t0);
    if (k == 0) {
        res.value = fg(res.t, nullptr);
        res.converged = true;
        return res;
    }
    Vec g(k), gn(k);
    double f = fg(res.t, &g);
    Mat H = Mat::Identity(k, k);
    int stall = 0;
    for (int it = 0; it < max_iter; ++it) {
        res.iterations = it + 1;
        if (g.norm() <= gtol * (1.0 + std::abs(f))) {
            res.converged = true;
            break;
        }
        Vec d = -H * g;
        if (g.dot(d) >= 0) {
            H.setIdentity();
            d = -g;
        }
        double alpha = 1.0;
        Vec tn = res.t + alpha * d;
        double fn = fg(tn, &gn);
        int halvings = 0;
        while (!(fn <= f + 1e-4 * alpha * g.dot(d)) && halvings < 80) {
            alpha *= 0.5;
            tn = res.t + alpha * d;
            fn = fg(tn, &gn);
            ++halvings;
        }
        if (!(fn <= f)) break;
        Vec s = tn - res.t;
        Vec y = gn - g;
        double sy = s.dot(y);
        if (sy > 1e-300 && sy > 1e-14 * s.norm() * y.norm()) {
            double rho = 1.0 / sy;
            Mat I = Mat::Identity(k, k);
            H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) + rho * s * s.transpose();
        } else {
            H.setIdentity();
        }
        if (f - fn <= 1e-16 * std::abs(f)) {
            if (++stall >= 4) {
                res.t = tn;
                f = fn;
                g = gn;
                break;
            }
        } else {
            stall = 0;
        }
        res.t = tn;
        f = fn;
        g = gn;
    }
    res.value = f;
    if (g.norm() <= gtol * (1.0 + std::abs(f))) res.converged = true;
    return res;
}

// Golden-section search for a minimum of a unimodal function on [a, b].
inline double golden_min(const std::function<double(double)>& phi, double a, double b, int iters = 200) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = phi(c), fd = phi(d);
    for (int i = 0; i < iters && std::abs(b - a) > 1e-15 * (1.0 + std::abs(a)); ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = phi(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace spectradual::optim
