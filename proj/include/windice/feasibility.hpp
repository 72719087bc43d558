#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "windice/types.hpp"

namespace windice {

template <class S>
struct SlackReport {
    TypeSet set = 0;
    S slack = scalar_traits<S>::zero();
    bool tight = false;
};

template <class S>
struct FeasibilityVerdict {
    bool feasible = true;
    std::optional<SlackReport<S>> witness;  // present iff infeasible
};

// sigma(S) = f(S) - sum_{t in S} f(t) x(t) for single-winner environments.
template <class S>
S slack_single_winner(const Environment<S>& env, const InterimRule<S>& x, TypeSet s) {
    S lhs = scalar_traits<S>::zero();
    for (int g = 0; g < env.num_types(); ++g)
        if ((s >> g) & 1) lhs += env.f(g) * x(g);
    return env.show_up_probability(s) - lhs;
}

// Symmetric slack for n i.i.d. candidates over a shared type set:
// 1 - (1 - f(S))^n - n * sum_{t in S} f(t) x(t).
template <class S>
S slack_symmetric(int n, const std::vector<S>& f, const std::vector<S>& x, TypeSet s) {
    S mass = scalar_traits<S>::zero();
    S win = scalar_traits<S>::zero();
    for (size_t t = 0; t < f.size(); ++t)
        if ((s >> t) & 1) {
            mass += f[t];
            win += f[t] * x[t];
        }
    return scalar_traits<S>::one() - pow_int(scalar_traits<S>::one() - mass, n) -
           scalar_traits<S>::from_double(n) * win;
}

// Generalized slack sigma(S) = R(S) - sum f x, for matroid environments.
template <class S>
S slack_matroid(const Environment<S>& env, const InterimRule<S>& x, TypeSet s,
                const std::vector<int>& rank_table) {
    S lhs = scalar_traits<S>::zero();
    for (int g = 0; g < env.num_types(); ++g)
        if ((s >> g) & 1) lhs += env.f(g) * x(g);
    return expected_rank(env, s, rank_table) - lhs;
}

namespace detail {

// The distinct level sets {t : x(t) >= v} restricted to `domain`, one per
// distinct positive x-value.
template <class S>
std::vector<TypeSet> level_sets(const std::vector<S>& xvals, TypeSet domain) {
    std::vector<S> values;
    for (size_t g = 0; g < xvals.size(); ++g)
        if (((domain >> g) & 1) && xvals[g] > scalar_traits<S>::zero()) values.push_back(xvals[g]);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::vector<TypeSet> sets;
    for (const S& v : values) {
        TypeSet s = 0;
        for (size_t g = 0; g < xvals.size(); ++g)
            if (((domain >> g) & 1) && xvals[g] >= v) s |= TypeSet(1) << g;
        sets.push_back(s);
    }
    return sets;
}

// Descending prefixes of one candidate's types by x, never splitting a group
// of equal x-values; the empty prefix is included. The slack minimizer always
// takes this shape within each candidate: with the other candidates fixed,
// the marginal of adding t is f(t) times (threshold - x(t)) for a threshold
// that is constant across the candidate's types.
template <class S>
std::vector<TypeSet> candidate_prefixes(const Environment<S>& env, const InterimRule<S>& x,
                                        int candidate, int exclude = -1) {
    std::vector<int> order;
    for (int l = 0; l < env.types_of(candidate); ++l) {
        int g = env.offset(candidate) + l;
        if (g != exclude) order.push_back(g);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (x(a) != x(b)) return x(b) < x(a);
        return a < b;
    });
    std::vector<TypeSet> prefixes{0};
    TypeSet acc = 0;
    for (size_t k = 0; k < order.size(); ++k) {
        acc |= TypeSet(1) << order[k];
        if (k + 1 == order.size() || x(order[k + 1]) != x(order[k])) prefixes.push_back(acc);
    }
    return prefixes;
}

// Applies fn to every union of per-candidate prefixes. This family contains
// every minimizer of the slack function, and more generally every set whose
// Border constraint can bind first along a feasibility boundary. A global
// threshold shared by all candidates is not enough: the binding thresholds
// are candidate-specific.
template <class S, class Fn>
void for_each_prefix_product(const std::vector<std::vector<TypeSet>>& prefixes, Fn&& fn) {
    double combinations = 1;
    for (const auto& p : prefixes) combinations *= static_cast<double>(p.size());
    if (combinations > double(1 << 24))
        throw std::domain_error("instance too large for the prefix-product feasibility search");
    std::vector<size_t> odometer(prefixes.size(), 0);
    while (true) {
        TypeSet s = 0;
        for (size_t i = 0; i < prefixes.size(); ++i) s |= prefixes[i][odometer[i]];
        fn(s);
        size_t i = 0;
        while (i < prefixes.size() && ++odometer[i] == prefixes[i].size()) odometer[i++] = 0;
        if (i == prefixes.size()) break;
    }
}

}  // namespace detail

// Border feasibility for single-winner environments, checked on the family
// of per-candidate prefix products.
template <class S>
FeasibilityVerdict<S> check_feasibility_single_winner(const Environment<S>& env,
                                                      const InterimRule<S>& x) {
    if (!env.single_winner()) throw std::domain_error("single-winner check requires a 1-uniform matroid");
    x.validate(env);
    const S eps = scalar_traits<S>::feas_eps();
    std::vector<std::vector<TypeSet>> prefixes;
    for (int i = 0; i < env.num_candidates(); ++i)
        prefixes.push_back(detail::candidate_prefixes(env, x, i));
    FeasibilityVerdict<S> verdict;
    S worst = scalar_traits<S>::zero();
    TypeSet worst_set = 0;
    detail::for_each_prefix_product<S>(prefixes, [&](TypeSet s) {
        if (s == 0) return;
        S sl = slack_single_winner(env, x, s);
        if (sl < worst) {
            worst = sl;
            worst_set = s;
        }
    });
    if (worst < -eps) {
        verdict.feasible = false;
        verdict.witness = SlackReport<S>{worst_set, worst, false};
    }
    return verdict;
}

template <class S>
FeasibilityVerdict<S> check_feasibility_symmetric(int n, const std::vector<S>& f,
                                                  const std::vector<S>& x) {
    if (n < 1) throw std::domain_error("need at least one candidate");
    if (f.size() != x.size()) throw std::domain_error("prior and rule must share the type set");
    const S eps = scalar_traits<S>::feas_eps();
    FeasibilityVerdict<S> verdict;
    S worst = scalar_traits<S>::zero();
    TypeSet worst_set = 0;
    TypeSet domain = (TypeSet(1) << f.size()) - 1;
    for (TypeSet s : detail::level_sets(x, domain)) {
        S sl = slack_symmetric(n, f, x, s);
        if (sl < worst) {
            worst = sl;
            worst_set = s;
        }
    }
    if (worst < -eps) {
        verdict.feasible = false;
        verdict.witness = SlackReport<S>{worst_set, worst, false};
    }
    return verdict;
}

// Generalized Border check: brute force over all type subsets.
template <class S>
FeasibilityVerdict<S> check_feasibility_matroid(const Environment<S>& env, const InterimRule<S>& x) {
    if (env.num_types() > 16)
        throw std::domain_error(
            "matroid feasibility check is exhaustive and capped at 16 types; "
            "use the single-winner check for larger 1-uniform instances");
    if (!env.matroid().is_matroid())
        throw std::domain_error("generalized Border check requires a matroid");
    x.validate(env);
    const S eps = scalar_traits<S>::feas_eps();
    auto rank_table = build_rank_table(env.matroid());
    FeasibilityVerdict<S> verdict;
    S worst = scalar_traits<S>::zero();
    TypeSet worst_set = 0;
    for (TypeSet s = 1; s <= env.all_types(); ++s) {
        S sl = slack_matroid(env, x, s, rank_table);
        if (sl < worst) {
            worst = sl;
            worst_set = s;
        }
    }
    if (worst < -eps) {
        verdict.feasible = false;
        verdict.witness = SlackReport<S>{worst_set, worst, false};
    }
    return verdict;
}

// Non-empty minimizer of a set function given by oracle, via the reduction
// g_t(S) = g(S + t): minimize each g_t over subsets of U - t, keep the best t.
// The inner minimization is exhaustive.
template <class S>
std::pair<TypeSet, S> min_nonempty_submodular(TypeSet ground,
                                              const std::function<S(TypeSet)>& g) {
    if (ground == 0) throw std::domain_error("non-empty minimizer needs a non-empty ground set");
    if (popcount_types(ground) > 24) throw std::domain_error("ground set too large for exhaustive search");
    bool have = false;
    TypeSet best_set = 0;
    S best = scalar_traits<S>::zero();
    for (int t = 0; t < 32; ++t) {
        if (!((ground >> t) & 1)) continue;
        TypeSet bit = TypeSet(1) << t;
        TypeSet rest = ground & ~bit;
        // enumerate S subset of rest; evaluate g(S + t)
        TypeSet sub = 0;
        while (true) {
            S val = g(sub | bit);
            if (!have || val < best) {
                have = true;
                best = val;
                best_set = sub | bit;
            }
            if (sub == rest) break;
            sub = (sub - rest) & rest;  // next submask in increasing order
        }
    }
    return {best_set, best};
}

namespace detail {

// Find Barrier Set, shared by the asymmetric and i.i.d. variants: the slack
// oracle and the active set vary, the removal loop does not.
template <class S>
TypeSet find_barrier_set_impl(TypeSet active, const std::function<S(TypeSet)>& slack) {
    if (active == 0) throw std::domain_error("no active types: barrier set undefined");
    const S eps = scalar_traits<S>::feas_eps();
    auto min_over = [&](TypeSet ground) { return min_nonempty_submodular<S>(ground, slack).second; };
    if (abs(min_over(active)) > eps) return active;
    TypeSet current = active;
    bool removed = true;
    while (removed) {
        removed = false;
        for (int t = 0; t < 32 && !removed; ++t) {
            TypeSet bit = TypeSet(1) << t;
            if (!(current & bit)) continue;
            TypeSet rest = current & ~bit;
            if (rest == 0) continue;
            if (abs(min_over(rest)) <= eps) {
                current = rest;
                removed = true;
            }
        }
    }
    return current;
}

}  // namespace detail

// Algorithm: Find Barrier Set. Returns a minimal non-empty tight subset of
// the active types, or the whole active set if nothing is tight. Removal
// candidates are scanned in ascending type order. Activity in double mode is
// f(t) x(t) > eps, matching the constructors.
template <class S>
TypeSet find_barrier_set(const Environment<S>& env, const InterimRule<S>& x) {
    TypeSet active = 0;
    for (int g = 0; g < env.num_types(); ++g)
        if (env.f(g) * x(g) > scalar_traits<S>::feas_eps()) active |= TypeSet(1) << g;
    std::function<S(TypeSet)> slack = [&](TypeSet s) { return slack_single_winner(env, x, s); };
    return detail::find_barrier_set_impl<S>(active, slack);
}

template <class S>
TypeSet find_barrier_set_iid(int n, const std::vector<S>& f, const std::vector<S>& x) {
    TypeSet active = 0;
    for (size_t t = 0; t < f.size(); ++t)
        if (f[t] * x[t] > scalar_traits<S>::feas_eps()) active |= TypeSet(1) << t;
    std::function<S(TypeSet)> slack = [&](TypeSet s) { return slack_symmetric(n, f, x, s); };
    return detail::find_barrier_set_impl<S>(active, slack);
}

}  // namespace windice
