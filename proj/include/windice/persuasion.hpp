#pragma once

#include <string>
#include <vector>

#include "windice/scalar.hpp"

namespace windice {

// One action type: realization probability plus sender/receiver payoffs.
// A receiver payoff of "-infinity" is a flag, never a large negative number;
// recommending the action while such a type is realized is categorically
// non-persuasive.
struct ActionType {
    Rational prob;
    Rational sender;
    Rational receiver;
    bool receiver_neg_inf = false;
};

struct PersuasionInstance {
    std::vector<std::vector<ActionType>> actions;

    int num_actions() const { return static_cast<int>(actions.size()); }
    long num_profiles() const {
        long p = 1;
        for (const auto& a : actions) p *= static_cast<long>(a.size());
        return p;
    }
    // lexicographic profile order, action 0 most significant
    std::vector<int> profile_at(long index) const;
    long profile_index(const std::vector<int>& profile) const;
    Rational profile_weight(const std::vector<int>& profile) const;
};

// Direct scheme: a distribution over recommendations per type profile.
// rec[p] has num_actions()+1 entries; the last is "no recommendation".
struct Scheme {
    std::vector<std::vector<Rational>> rec;
};

// X[i][i'][t]: probability that i is recommended conditioned on action i'
// having type t.
struct SecondOrderRule {
    std::vector<std::vector<std::vector<Rational>>> x;
};

SecondOrderRule second_order_from_scheme(const PersuasionInstance& inst, const Scheme& scheme);

// First-order interim rule of the scheme: Pr[rec = i | type_i = t].
std::vector<std::vector<Rational>> first_order_from_scheme(const PersuasionInstance& inst,
                                                           const Scheme& scheme);

struct PersuasionViolation {
    int recommended = 0;
    int alternative = 0;
};

struct PersuasiveVerdict {
    bool persuasive = true;
    std::vector<PersuasionViolation> violations;
};

// Obedience check with exact posteriors: each recommendation issued with
// positive probability must give the receiver at least the posterior
// expected utility of every alternative.
PersuasiveVerdict check_persuasive(const PersuasionInstance& inst, const Scheme& scheme);

// The unique symmetric second-order rule with first-order component y:
// the off-diagonal entries are z = (1 - y) / (n - 1).
std::pair<std::vector<Rational>, std::vector<Rational>> symmetric_second_order(
    int n, const std::vector<Rational>& y);

// Mechanized walk through the no-dice argument for the benchmark persuasion
// instance: exact LP bounds, forced-event checks, die-dominance propagation,
// and the final order contradiction.
struct Table1Trace {
    std::vector<std::string> steps;
    bool contradiction = false;
    Rational pr_a;     // forced overall probability of recommending A
    Rational pr_b;     // forced overall probability of recommending B
    Rational x_aa1;    // Pr[recommend A | A has type 1]
    bool all_checks_passed = false;
};

PersuasionInstance table1_instance();
Scheme table1_optimal_scheme();
Table1Trace verify_table1_no_dice();

}  // namespace windice
