#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "windice/dice.hpp"
#include "windice/feasibility.hpp"

namespace windice {

// n i.i.d. candidates over a shared type set with a symmetric interim rule.
struct SymmetricInstance {
    int n = 2;
    std::vector<double> f;
    std::vector<double> x;
};

// Decrement Symmetric Dice: conditions on no candidate rolling the new top
// face. A top face with probability q on t*'s die wins for a specific
// candidate with probability (1 - (1-q)^n) / n.
inline std::pair<std::vector<double>, std::vector<double>> decrement_symmetric(
    int n, const std::vector<double>& f, const std::vector<double>& x, int t_star, double q) {
    if (q < 0 || q > f[t_star] || q >= 1)
        throw std::domain_error("decrement_symmetric: q must lie in [0, f(t*)] with q < 1");
    std::vector<double> fp(f.size()), xp(x.size());
    const double keep = 1 - q;
    if (q == f[t_star] || std::abs(f[t_star] - q) < 1e-11 * keep) {
        // exact arithmetic would cancel the prior to zero; keep it there
        fp[t_star] = 0;
        xp[t_star] = 0;
    } else {
        fp[t_star] = (f[t_star] - q) / keep;
        xp[t_star] = (f[t_star] * x[t_star] - (1 - std::pow(keep, n)) / n) /
                     ((f[t_star] - q) * std::pow(keep, n - 1));
        if (xp[t_star] < 0 && xp[t_star] > -1e-9) xp[t_star] = 0;
    }
    for (size_t t = 0; t < f.size(); ++t) {
        if (static_cast<int>(t) == t_star) continue;
        fp[t] = f[t] / keep;
        xp[t] = x[t] / std::pow(keep, n - 1);
    }
    return {fp, xp};
}

namespace detail {

// Level-set prefixes of the types other than t*, ordered by non-increasing
// x. The order is q-invariant: all other entries rescale by the same factor.
inline std::vector<TypeSet> symmetric_level_sets(const std::vector<double>& x, int t_star) {
    std::vector<int> order;
    for (size_t t = 0; t < x.size(); ++t)
        if (static_cast<int>(t) != t_star) order.push_back(static_cast<int>(t));
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (x[a] != x[b]) return x[a] > x[b];
        return a < b;
    });
    std::vector<TypeSet> sets;
    TypeSet acc = 0;
    for (size_t k = 0; k < order.size(); ++k) {
        acc |= TypeSet(1) << order[k];
        if (k + 1 == order.size() || x[order[k + 1]] != x[order[k]]) sets.push_back(acc);
    }
    return sets;
}

// Slack of the symmetric Border constraint for S after Decrement Symmetric
// with parameter q, scaled by (1-q)^n: (1-q)^n - (1-q-F)^n - nW, where F and
// W are the f- and f*x-mass of S. Decreasing in q on [0, f(t*)].
inline double symmetric_shifted_slack(int n, double F, double W, double q) {
    return std::pow(1 - q, n) - std::pow(1 - q - F, n) - n * W;
}

}  // namespace detail

// Largest q in [0, f(t*)] keeping the decremented rule feasible. Sets
// containing t* keep their slack sign automatically; each level set S
// avoiding t* contributes a threshold found by bisection (the slack is
// monotone in q but no longer linear). x'(t*) >= 0 adds the closed-form
// bound q <= 1 - (1 - n f(t*) x(t*))^(1/n).
inline double max_decrement_q_symmetric(int n, const std::vector<double>& f,
                                        const std::vector<double>& x, int t_star,
                                        double q_tol = 1e-15) {
    double best = f[t_star];
    {
        double radicand = 1 - n * f[t_star] * x[t_star];
        if (radicand < 0) radicand = 0;
        double q_pos = 1 - std::pow(radicand, 1.0 / n);
        best = std::min(best, q_pos);
    }
    for (TypeSet s : detail::symmetric_level_sets(x, t_star)) {
        double F = 0, W = 0;
        for (size_t t = 0; t < f.size(); ++t)
            if ((s >> t) & 1) {
                F += f[t];
                W += f[t] * x[t];
            }
        if (detail::symmetric_shifted_slack(n, F, W, best) >= 0) continue;
        double lo = 0, hi = best;
        for (int it = 0; it < 80 && hi - lo > q_tol * std::max(1.0, hi); ++it) {
            double mid = 0.5 * (lo + hi);
            if (detail::symmetric_shifted_slack(n, F, W, mid) >= 0)
                lo = mid;
            else
                hi = mid;
        }
        best = lo;
    }
    return std::max(best, 0.0);
}

struct SymmetricConstructStats {
    long recursive_calls = 0;
};

// Construct Symmetric Dice: one die per shared type, identical across
// candidates. |T+| <= 1 is the closed-form base case; otherwise recurse on
// the symmetric decrement of the (unique) barrier set's smallest type.
inline std::vector<Die<double>> construct_symmetric_dice(int n, const std::vector<double>& f,
                                                         const std::vector<double>& x,
                                                         SymmetricConstructStats* stats = nullptr) {
    if (n < 2) throw std::domain_error("construct_symmetric_dice requires n >= 2");
    if (f.size() != x.size()) throw std::domain_error("prior and rule must share the type set");
    auto verdict = check_feasibility_symmetric(n, f, x);
    if (!verdict.feasible) {
        std::ostringstream msg;
        msg << "symmetric interim rule is infeasible; violating set mask=" << verdict.witness->set
            << " slack=" << verdict.witness->slack;
        throw std::domain_error(msg.str());
    }

    const int num_types = static_cast<int>(f.size());
    const long budget = static_cast<long>(num_types) * num_types + 2;
    long calls = 0;

    std::function<std::vector<Die<double>>(const std::vector<double>&, const std::vector<double>&)>
        build = [&](const std::vector<double>& fr, const std::vector<double>& xr) {
            if (++calls > budget)
                throw std::runtime_error("construct_symmetric_dice failed to make progress");
            std::vector<Die<double>> dice(fr.size(), Die<double>::single(kLosingFace));
            // activity below the tolerance is numerical dust
            std::vector<int> active;
            for (size_t t = 0; t < fr.size(); ++t)
                if (fr[t] * xr[t] > 1e-9) active.push_back(static_cast<int>(t));

            if (active.size() <= 1) {
                for (int t : active) {
                    double radicand = 1 - n * fr[t] * xr[t];
                    if (radicand < 0) {
                        // tight symmetric constraint; tangent instances can
                        // carry amplified rounding drift, clamped here
                        if (radicand < -1e-6)
                            throw std::runtime_error("symmetric base case: radicand below zero");
                        radicand = 0;
                    }
                    double p = (1 - std::pow(radicand, 1.0 / n)) / fr[t];
                    dice[t] = Die<double>::two_sided(1.0, std::min(p, 1.0));
                }
                return dice;
            }

            // a tight singleton barrier vanishes exactly at q* = f(t*); the
            // gate is relative so small priors do not get misclassified
            for (int t : active) {
                if (slack_symmetric(n, fr, xr, TypeSet(1) << t) > 1e-9 * n * fr[t]) continue;
                auto [fp, xp] = decrement_symmetric(n, fr, xr, t, fr[t]);
                auto inner = build(fp, xp);
                double max_face = kLosingFace;
                for (const auto& d : inner) max_face = std::max(max_face, d.max_value());
                inner[t] = Die<double>::stacked(inner[t], std::max(max_face, 0.0) + 1.0, 1.0);
                return inner;
            }

            TypeSet barrier = find_barrier_set_iid(n, fr, xr);
            // as in the asymmetric constructor: tightness is detected up to
            // eps, so scan past the detected barrier if its first member
            // yields no usable decrement
            int t_star = -1;
            double q_star = 0;
            for (int pass = 0; pass < 2 && t_star < 0; ++pass) {
                for (int t : active) {
                    bool in_barrier = (barrier >> t) & 1;
                    if ((pass == 0) != in_barrier) continue;
                    double q = max_decrement_q_symmetric(n, fr, xr, t);
                    if (q > 1e-12) {
                        t_star = t;
                        q_star = q;
                        break;
                    }
                }
            }
            if (t_star < 0) {
                t_star = __builtin_ctz(barrier);
                q_star = max_decrement_q_symmetric(n, fr, xr, t_star);
            }
            auto [fp, xp] = decrement_symmetric(n, fr, xr, t_star, q_star);
            auto inner = build(fp, xp);

            double max_face = kLosingFace;
            for (const auto& d : inner) max_face = std::max(max_face, d.max_value());
            double top = std::max(max_face, 0.0) + 1.0;
            double p_top = std::min(std::max(q_star / fr[t_star], 0.0), 1.0);
            inner[t_star] = Die<double>::stacked(inner[t_star], top, p_top);
            return inner;
        };

    auto dice = build(f, x);
    if (stats) stats->recursive_calls = calls - 1;
    return dice;
}

// The shared prior may carry total mass below 1 (a lone type can carry
// f(t) = 1/2, say); the expansion pads a null type that never
// wins so each candidate holds a full distribution.
inline Environment<double> symmetric_environment(int n, std::vector<double> f,
                                                 std::vector<std::string> names = {}) {
    double total = 0;
    for (double v : f) total += v;
    if (total > 1 + 1e-12) throw std::domain_error("shared prior mass exceeds 1");
    if (total < 1 - 1e-12) {
        f.push_back(1 - total);
        if (!names.empty()) names.push_back("_absent");
    }
    return make_iid_environment(n, f, names);
}

// Expands shared dice into the full i.i.d. environment's dice system,
// padding a losing die when the environment carries the null type.
inline DiceSystem<double> replicate_symmetric_dice(int n, std::vector<Die<double>> shared,
                                                   const Environment<double>& env) {
    if (env.types_of(0) == static_cast<int>(shared.size()) + 1)
        shared.push_back(Die<double>::single(kLosingFace));
    if (env.types_of(0) != static_cast<int>(shared.size()))
        throw std::domain_error("dice list does not match the shared type set");
    DiceSystem<double> dice;
    for (int i = 0; i < n; ++i)
        for (const auto& d : shared) dice.die.push_back(d);
    return dice;
}

}  // namespace windice
