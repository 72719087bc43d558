#pragma once

#include <cassert>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "windice/dice.hpp"
#include "windice/feasibility.hpp"
#include "windice/types.hpp"

namespace windice {

template <class S>
struct DecrementResult {
    Environment<S> env;   // renormalized prior, same matroid
    InterimRule<S> x;
    S q = scalar_traits<S>::zero();
};

// Conditions (f, x) on the newly added top face of t* not winning.
template <class S>
DecrementResult<S> decrement(const Environment<S>& env, const InterimRule<S>& x, int t_star, S q) {
    const S zero = scalar_traits<S>::zero();
    const S one = scalar_traits<S>::one();
    const S f_star = env.f(t_star);
    if (q < zero || q > f_star * x(t_star) || !(f_star * x(t_star) < one))
        throw std::domain_error("decrement: q must lie in [0, f(t*) x(t*)] with f(t*) x(t*) < 1");

    const int i_star = env.candidate_of(t_star);
    std::vector<std::vector<S>> prior;
    InterimRule<S> xp;
    xp.x.assign(env.num_types(), zero);
    for (int i = 0; i < env.num_candidates(); ++i) prior.push_back(env.prior_of(i));

    if (q == f_star) {
        // Can only fire when x(t*) = 1; with x(t*) < 1 it would indicate an
        // upstream bug in the q* computation.
        assert(!(x(t_star) < one - scalar_traits<S>::from_double(1e-9)) &&
               "decrement: q = f(t*) with x(t*) < 1");
        prior[i_star][t_star - env.offset(i_star)] = zero;
        xp(t_star) = zero;
    } else {
        S f_new = (f_star - q) / (one - q);
        S x_new = (f_star * x(t_star) - q) / (f_star - q);
        if constexpr (!scalar_traits<S>::exact) {
            // q near f(t*) x(t*) with x near 1 leaves prior dust that exact
            // arithmetic would cancel to zero; zero it and renormalize the
            // candidate so later thresholds never divide by the dust
            if (abs(f_new) < scalar_traits<S>::from_double(1e-11)) {
                f_new = zero;
                x_new = zero;
            }
            if (x_new < zero && x_new > -scalar_traits<S>::from_double(1e-9)) x_new = zero;
            if (x_new > one && x_new < one + scalar_traits<S>::from_double(1e-9)) x_new = one;
        }
        prior[i_star][t_star - env.offset(i_star)] = f_new;
        xp(t_star) = x_new;
    }
    for (int g = 0; g < env.num_types(); ++g) {
        if (g == t_star) continue;
        if (env.candidate_of(g) == i_star) {
            prior[i_star][g - env.offset(i_star)] = env.f(g) / (one - q);
            xp(g) = x(g);
        } else {
            xp(g) = x(g) / (one - q);
        }
    }
    if constexpr (!scalar_traits<S>::exact) {
        S row = zero;
        for (const S& v : prior[i_star]) row += v;
        if (row > zero)
            for (S& v : prior[i_star]) v /= row;
    }
    return DecrementResult<S>{Environment<S>(std::move(prior), env.matroid()), std::move(xp), q};
}

// Largest q for which Decrement(f, x, t*, q) stays feasible:
// min( f(t*) x(t*), min over sets S avoiding t* of
//      sigma(S) / f(S minus candidate i*'s part) ).
// Sets containing t* keep their slack sign under the decrement, and the
// remaining constraints bind first on per-candidate prefix products; the
// within-candidate x-order is invariant under the decrement's rescaling, so
// one prefix family covers every q.
template <class S>
S max_decrement_q(const Environment<S>& env, const InterimRule<S>& x, int t_star) {
    const S zero = scalar_traits<S>::zero();
    const int i_star = env.candidate_of(t_star);

    std::vector<std::vector<TypeSet>> prefixes;
    for (int i = 0; i < env.num_candidates(); ++i)
        prefixes.push_back(detail::candidate_prefixes(env, x, i, t_star));

    S best = env.f(t_star) * x(t_star);
    detail::for_each_prefix_product<S>(prefixes, [&](TypeSet s) {
        if (s == 0) return;
        // denominator: probability that the non-i* part of S shows up
        S denom = zero;
        {
            S miss = scalar_traits<S>::one();
            for (int i = 0; i < env.num_candidates(); ++i) {
                if (i == i_star) continue;
                S in_s = zero;
                for (int l = 0; l < env.types_of(i); ++l)
                    if ((s >> (env.offset(i) + l)) & 1) in_s += env.prior_of(i)[l];
                miss *= scalar_traits<S>::one() - in_s;
            }
            denom = scalar_traits<S>::one() - miss;
        }
        if (!(denom > zero)) return;  // h(S) = +infinity
        S h = slack_single_winner(env, x, s) / denom;
        if (h < best) best = h;
    });
    if (best < zero) best = zero;
    return best;
}

struct ConstructStats {
    long recursive_calls = 0;  // calls beyond the first
};

// Construct Dice: recursive single-winner constructor. Feasibility is
// checked up front; the recursion depth is bounded by (number of types)^2.
template <class S>
DiceSystem<S> construct_dice(const Environment<S>& env, const InterimRule<S>& x,
                             ConstructStats* stats = nullptr) {
    if (!env.single_winner())
        throw std::domain_error("construct_dice requires a single-winner environment");
    auto verdict = check_feasibility_single_winner(env, x);
    if (!verdict.feasible) {
        std::ostringstream msg;
        msg << "interim rule is infeasible; violating set mask=" << verdict.witness->set
            << " slack=" << as_double(verdict.witness->slack);
        throw std::domain_error(msg.str());
    }

    const int theta = env.num_types();
    const long budget = static_cast<long>(theta) * theta + 2;
    long calls = 0;

    std::function<DiceSystem<S>(const Environment<S>&, const InterimRule<S>&)> build =
        [&](const Environment<S>& e, const InterimRule<S>& xr) -> DiceSystem<S> {
        const S zero = scalar_traits<S>::zero();
        const S one = scalar_traits<S>::one();
        const S eps = scalar_traits<S>::feas_eps();
        if (++calls > budget) {
            std::ostringstream msg;
            msg << "construct_dice failed to make progress within " << budget << " calls;";
            for (int g = 0; g < e.num_types(); ++g)
                msg << " f*x[" << g << "]=" << as_double(e.f(g) * xr(g));
            throw std::runtime_error(msg.str());
        }

        DiceSystem<S> dice;
        dice.die.assign(e.num_types(), Die<S>::single(kLosingFace));

        // activity below the tolerance is numerical dust; those types keep a
        // losing die at an error no larger than eps
        TypeSet active = 0;
        for (int g = 0; g < e.num_types(); ++g)
            if (e.f(g) * xr(g) > eps) active |= TypeSet(1) << g;
        if (active == 0) return dice;

        for (int g = 0; g < e.num_types(); ++g) {
            if (((active >> g) & 1) && abs(e.f(g) * xr(g) - one) <= eps) {
                dice.die[g] = Die<S>::single(1.0);
                return dice;
            }
        }

        // A tight singleton barrier (x(t*) = 1) takes q* = f(t*) and the
        // type vanishes exactly; going through the numeric search instead
        // would land a hair short and leave prior dust behind.
        for (int g = 0; g < e.num_types(); ++g) {
            if (!((active >> g) & 1)) continue;
            if (xr(g) >= one - eps) {
                InterimRule<S> clamped = xr;
                clamped(g) = one;  // tight singleton: x(t*) = 1 up to eps
                auto dec = decrement(e, clamped, g, e.f(g));
                DiceSystem<S> inner = build(dec.env, dec.x);
                double max_face = kLosingFace;
                for (const auto& d : inner.die) max_face = std::max(max_face, d.max_value());
                inner.die[g] = Die<S>::stacked(inner.die[g], std::max(max_face, 0.0) + 1.0,
                                               scalar_traits<S>::one());
                return inner;
            }
        }

        TypeSet barrier = find_barrier_set(e, xr);
        // A barrier member always admits a strictly positive decrement. With
        // tightness detected up to eps, the detected barrier can be off by a
        // near-tight set; scanning the remaining active types recovers the
        // type whose decrement makes progress.
        int t_star = -1;
        S q_star = zero;
        const S progress_eps = scalar_traits<S>::from_double(1e-12);
        for (int pass = 0; pass < 2 && t_star < 0; ++pass) {
            TypeSet pool = pass == 0 ? barrier : (active & ~barrier);
            for (int g = 0; g < e.num_types() && t_star < 0; ++g) {
                if (!((pool >> g) & 1)) continue;
                S cap = e.f(g) * xr(g);
                S q = max_decrement_q(e, xr, g);
                if (q > cap) q = cap;
                if (scalar_traits<S>::exact || q > progress_eps) {
                    t_star = g;
                    q_star = q;
                }
            }
        }
        if (t_star < 0) {
            // no type makes progress; fall through with the barrier's first
            // member so the call-budget diagnostic reports the slacks
            t_star = __builtin_ctz(barrier);
            q_star = max_decrement_q(e, xr, t_star);
            S cap = e.f(t_star) * xr(t_star);
            if (q_star > cap) q_star = cap;
        }

        auto dec = decrement(e, xr, t_star, q_star);
        DiceSystem<S> inner = build(dec.env, dec.x);

        double max_face = kLosingFace;
        for (const auto& d : inner.die) max_face = std::max(max_face, d.max_value());
        double top = std::max(max_face, 0.0) + 1.0;

        S p_top = q_star / e.f(t_star);
        if constexpr (!scalar_traits<S>::exact) {
            p_top = std::min(std::max(p_top, 0.0), 1.0);
        }
        inner.die[t_star] = Die<S>::stacked(inner.die[t_star], top, p_top);
        return inner;
    };

    DiceSystem<S> dice = build(env, x);
    if (stats) stats->recursive_calls = calls - 1;
    return dice;
}

}  // namespace windice
