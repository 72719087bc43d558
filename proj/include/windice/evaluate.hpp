#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "windice/dice.hpp"
#include "windice/poisson_binomial.hpp"
#include "windice/types.hpp"

namespace windice {

namespace detail {

// Winning probability of every candidate under greedy selection with uniform
// tie breaking, by averaging over the permutations of each tied group.
template <class S>
std::vector<S> tie_averaged_win_probs(const Matroid& m, const std::vector<double>& scores,
                                      int max_tie_group = 6) {
    const int n = static_cast<int>(scores.size());
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] > scores[b]; });

    std::vector<std::vector<int>> groups;
    for (int lo = 0; lo < n;) {
        int hi = lo + 1;
        while (hi < n && scores[order[hi]] == scores[order[lo]]) ++hi;
        if (scores[order[lo]] > 0) {
            groups.emplace_back(order.begin() + lo, order.begin() + hi);
            if (hi - lo > max_tie_group)
                throw std::domain_error("tied group too large for exact tie averaging");
        }
        lo = hi;
    }

    std::vector<S> probs(n, scalar_traits<S>::zero());
    std::function<void(size_t, CandidateSet, S)> recurse = [&](size_t gi, CandidateSet winners,
                                                               S weight) {
        if (gi == groups.size()) {
            for (int c = 0; c < n; ++c)
                if ((winners >> c) & 1) probs[c] += weight;
            return;
        }
        std::vector<int> perm = groups[gi];
        std::sort(perm.begin(), perm.end());
        long count = 1;
        for (size_t k = 2; k <= perm.size(); ++k) count *= static_cast<long>(k);
        S share = weight / scalar_traits<S>::from_double(static_cast<double>(count));
        do {
            CandidateSet w = winners;
            for (int c : perm) {
                CandidateSet next = w | (CandidateSet(1) << c);
                if (m.independent(next)) w = next;
            }
            recurse(gi + 1, w, share);
        } while (std::next_permutation(perm.begin(), perm.end()));
    };
    recurse(0, 0, scalar_traits<S>::one());
    return probs;
}

}  // namespace detail

// Brute-force dice evaluation: x(t) = Pr[t wins | t realized], by summing
// over all type profiles and face profiles. This is the reference oracle for
// every other evaluator.
template <class S>
InterimRule<S> interim_exact_enumeration(const Environment<S>& env, const DiceSystem<S>& dice,
                                         long term_cap = 10'000'000) {
    dice.validate(env);
    const int n = env.num_candidates();
    InterimRule<S> out;
    out.x.assign(env.num_types(), scalar_traits<S>::zero());

    for (int forced = 0; forced < env.num_types(); ++forced) {
        const int fc = env.candidate_of(forced);
        // capacity estimate: product over candidates of (type, face) choices
        double terms = static_cast<double>(dice.at(forced).num_faces());
        for (int c = 0; c < n; ++c) {
            if (c == fc) continue;
            double cnt = 0;
            for (int l = 0; l < env.types_of(c); ++l)
                cnt += dice.at(env.offset(c) + l).num_faces();
            terms *= cnt;
        }
        if (terms > static_cast<double>(term_cap))
            throw std::domain_error("exact enumeration too large; use simulation");

        std::vector<double> scores(n, kLosingFace);
        S acc = scalar_traits<S>::zero();
        std::function<void(int, S)> recurse = [&](int c, S weight) {
            if (c == n) {
                acc += weight * detail::tie_averaged_win_probs<S>(env.matroid(), scores)[fc];
                return;
            }
            auto roll_faces = [&](int type, S w) {
                for (const auto& face : dice.at(type).faces()) {
                    scores[c] = face.value;
                    recurse(c + 1, w * face.prob);
                }
            };
            if (c == fc) {
                roll_faces(forced, weight);
            } else {
                for (int l = 0; l < env.types_of(c); ++l) {
                    const S& ft = env.prior_of(c)[l];
                    if (!(ft > scalar_traits<S>::zero())) continue;
                    roll_faces(env.offset(c) + l, weight * ft);
                }
            }
        };
        recurse(0, scalar_traits<S>::one());
        out.x[forced] = acc;
    }
    return out;
}

// Polynomial-time dice evaluation for single-winner environments: score
// pmfs/cdfs per candidate, and a Poisson-binomial correction for ties.
template <class S>
InterimRule<S> interim_single_winner(const Environment<S>& env, const DiceSystem<S>& dice) {
    if (!env.single_winner())
        throw std::domain_error("interim_single_winner requires a 1-uniform matroid");
    dice.validate(env);
    const int n = env.num_candidates();

    // score pmf of candidate i: Pr[v_i = u] = sum_t f_i(t) Pr[D_t = u]
    std::vector<std::vector<std::pair<double, S>>> pmf(n);
    for (int i = 0; i < n; ++i) {
        std::map<double, S> acc;
        for (int l = 0; l < env.types_of(i); ++l) {
            const S& ft = env.prior_of(i)[l];
            for (const auto& face : dice.at(env.offset(i) + l).faces()) {
                auto it = acc.try_emplace(face.value, scalar_traits<S>::zero()).first;
                it->second += ft * face.prob;
            }
        }
        pmf[i].assign(acc.begin(), acc.end());
    }
    auto prob_eq = [&](int i, double u) {
        auto it = std::lower_bound(pmf[i].begin(), pmf[i].end(), u,
                                   [](const auto& a, double b) { return a.first < b; });
        if (it != pmf[i].end() && it->first == u) return it->second;
        return scalar_traits<S>::zero();
    };
    auto prob_le = [&](int i, double u) {
        S total = scalar_traits<S>::zero();
        for (const auto& [v, p] : pmf[i]) {
            if (v > u) break;
            total += p;
        }
        return total;
    };

    InterimRule<S> out;
    out.x.assign(env.num_types(), scalar_traits<S>::zero());
    for (int g = 0; g < env.num_types(); ++g) {
        const int i = env.candidate_of(g);
        S x = scalar_traits<S>::zero();
        for (const auto& face : dice.at(g).faces()) {
            const double u = face.value;
            if (!(u > 0)) continue;
            S prod = scalar_traits<S>::one();
            std::vector<S> params;
            bool dead = false;
            for (int j = 0; j < n && !dead; ++j) {
                if (j == i) continue;
                S le = prob_le(j, u);
                if (!(le > scalar_traits<S>::zero())) {
                    if (prob_eq(j, u) > scalar_traits<S>::zero())
                        throw std::logic_error("inconsistent die: point mass with zero cdf");
                    dead = true;
                    break;
                }
                prod *= le;
                S eq = prob_eq(j, u);
                if (eq > scalar_traits<S>::zero()) params.push_back(eq / le);
            }
            if (dead) continue;
            std::vector<S> tie_pmf = poisson_binomial_pmf(params);
            S factor = scalar_traits<S>::zero();
            for (size_t k = 0; k < tie_pmf.size(); ++k)
                factor += tie_pmf[k] / scalar_traits<S>::from_double(static_cast<double>(k + 1));
            x += face.prob * prod * factor;
        }
        out.x[g] = x;
    }
    return out;
}

struct MonteCarloResult {
    InterimRule<double> x;
    std::vector<double> stderr_;  // one per type
    long samples = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// Unbiased simulation estimate of the interim rule. Every type gets its own
// dedicated sub-run (its candidate's type is forced), so each x(t) estimate
// uses `samples` effective draws. Per-type rng streams make the result
// reproducible for a given (seed, samples) regardless of evaluation order.
inline MonteCarloResult interim_monte_carlo(const Environment<double>& env,
                                            const DiceSystem<double>& dice, long samples,
                                            std::uint64_t seed) {
    if (samples < 1) throw std::domain_error("need at least one sample");
    dice.validate(env);
    const int n = env.num_candidates();
    MonteCarloResult result;
    result.samples = samples;
    result.x.x.assign(env.num_types(), 0.0);
    result.stderr_.assign(env.num_types(), 0.0);

    for (int forced = 0; forced < env.num_types(); ++forced) {
        const int fc = env.candidate_of(forced);
        std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(0x5eedULL + forced)));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        auto draw_face = [&](int type) {
            double u = uni(rng);
            double cum = 0;
            const auto& faces = dice.at(type).faces();
            for (const auto& f : faces) {
                cum += as_double(f.prob);
                if (u < cum) return f.value;
            }
            return faces.back().value;
        };
        long wins = 0;
        std::vector<double> scores(n);
        for (long s = 0; s < samples; ++s) {
            for (int c = 0; c < n; ++c) {
                int type;
                if (c == fc) {
                    type = forced;
                } else {
                    double u = uni(rng);
                    double cum = 0;
                    int l = 0;
                    for (; l < env.types_of(c) - 1; ++l) {
                        cum += env.prior_of(c)[l];
                        if (u < cum) break;
                    }
                    type = env.offset(c) + l;
                }
                scores[c] = draw_face(type);
            }
            auto outcome = greedy_select(env.matroid(), scores, rng);
            wins += (outcome.winners >> fc) & 1;
        }
        double p = static_cast<double>(wins) / static_cast<double>(samples);
        result.x.x[forced] = p;
        result.stderr_[forced] = std::sqrt(std::max(p * (1 - p), 0.0) / static_cast<double>(samples));
    }
    return result;
}

}  // namespace windice
