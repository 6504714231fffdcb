/// @file roots.hpp
/// @brief Scalar bracketing and safeguarded root finding.
#pragma once

#include "abw/errors.hpp"

#include <cmath>
#include <string>
#include <algorithm>
#include <utility>

namespace abw {

/// Result of a bracketed root search.
struct RootResult {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Sign-change bracket [lo, hi] with the function values at its ends.
struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double flo = 0.0;
    double fhi = 0.0;
    int evaluations = 0;
};

/// Illinois regula falsi with a bisection fallback.
///
/// Requires f(a)·f(b) ≤ 0. Stops when |f| ≤ ftol or the bracket is narrower
/// than xtol·max(|x|, 1e-300). The bracket shrinks by at least half every
/// three steps.
template <class F>
RootResult bracketed_root(F&& f, double a, double b, double fa, double fb, double xtol,
                          double ftol, int max_iter)
{
    RootResult r;
    if (fa == 0.0) {
        r.x = a;
        r.converged = true;
        return r;
    }
    if (fb == 0.0) {
        r.x = b;
        r.converged = true;
        return r;
    }
    if ((fa > 0.0) == (fb > 0.0)) {
        throw ConvergenceError("bracketed_root: no sign change on the bracket");
    }
    int side = 0;
    double width_before = std::abs(b - a);
    int since_halving = 0;
    for (int it = 1; it <= max_iter; ++it) {
        double x = b - fb * (b - a) / (fb - fa);
        const bool force_bisect = since_halving >= 2;
        if (force_bisect || !std::isfinite(x) || x <= std::min(a, b) || x >= std::max(a, b)) {
            x = 0.5 * (a + b);
        }
        const double fx = f(x);
        r.x = x;
        r.fx = fx;
        r.iterations = it;
        if (std::abs(fx) <= ftol || fx == 0.0) {
            r.converged = true;
            return r;
        }
        if ((fx > 0.0) == (fb > 0.0)) {
            b = x;
            fb = fx;
            if (side == -1) {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = x;
            fa = fx;
            if (side == 1) {
                fb *= 0.5;
            }
            side = 1;
        }
        const double width = std::abs(b - a);
        if (width <= 0.5 * width_before) {
            width_before = width;
            since_halving = 0;
        } else {
            ++since_halving;
        }
        if (width <= xtol * std::max(std::abs(x), 1e-300)) {
            r.converged = true;
            return r;
        }
    }
    return r;
}

/// Finds a sign change of a monotone f on (0, ∞) by geometric expansion.
///
/// Starts at x = start and multiplies (or divides) by factor, moving in the
/// direction in which f approaches zero given its monotonicity. Throws
/// ConvergenceError after max_iter expansions.
template <class F>
Bracket expand_bracket(F&& f, double start, double factor, bool increasing, int max_iter,
                       const char* what)
{
    Bracket br;
    double prev = start;
    double fprev = f(prev);
    br.evaluations = 1;
    if (fprev == 0.0) {
        br.lo = br.hi = prev;
        return br;
    }
    const bool go_up = (fprev < 0.0) == increasing;
    for (int it = 0; it < max_iter; ++it) {
        const double next = go_up ? prev * factor : prev / factor;
        const double fnext = f(next);
        ++br.evaluations;
        if ((fnext > 0.0) != (fprev > 0.0) || fnext == 0.0) {
            br.lo = std::min(prev, next);
            br.hi = std::max(prev, next);
            br.flo = (br.lo == prev) ? fprev : fnext;
            br.fhi = (br.hi == prev) ? fprev : fnext;
            return br;
        }
        prev = next;
        fprev = fnext;
    }
    throw ConvergenceError(std::string(what) + ": bracket expansion failed");
}

}  // namespace abw
