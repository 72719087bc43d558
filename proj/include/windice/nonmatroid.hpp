#pragma once

#include <array>
#include <stdexcept>

#include "windice/dice.hpp"
#include "windice/types.hpp"

namespace windice {

// The non-matroid benchmark environment: four single-type candidates whose
// feasible winner sets are {0,1}, {3,4} and their subsets. The family fails
// the exchange axiom, so it is built without matroid validation.
inline Environment<double> nonmatroid_example_environment() {
    std::vector<std::vector<double>> prior(4, std::vector<double>{1.0});
    Matroid family = Matroid::explicit_family(4, {{0, 1}, {2, 3}}, /*require_matroid=*/false);
    return Environment<double>(std::move(prior), std::move(family));
}

// Two-sided dice implementing a feasible interim rule x in the non-matroid
// environment. In each pair the larger-x candidate gets the higher face and
// its positive-face probability is pinned first; an interim rule here is
// feasible iff max(x0, x1) + max(x2, x3) <= 1. Degenerate 0/0 ratios are 0:
// the underlying ex-post probabilities vanish.
inline DiceSystem<double> nonmatroid_example_dice(const std::array<double, 4>& x) {
    constexpr double tol = 1e-12;
    for (double v : x)
        if (!(v >= -tol && v <= 1 + tol))
            throw std::domain_error("nonmatroid example: interim probabilities must lie in [0, 1]");
    const int hi1 = x[0] >= x[1] ? 0 : 1, lo1 = 1 - hi1;
    const int hi2 = x[2] >= x[3] ? 2 : 3, lo2 = 5 - hi2;
    const double a = x[hi1], b = x[hi2], c = x[lo1], d = x[lo2];
    if (a + b > 1 + tol)
        throw std::domain_error("nonmatroid example: infeasible interim rule (pair maxima exceed 1)");

    auto ratio = [](double num, double den) {
        if (num <= 0) return 0.0;
        if (den <= 0) throw std::domain_error("nonmatroid example: infeasible interim rule");
        return std::min(num / den, 1.0);
    };
    double p_hi1 = std::min(a, 1.0);
    double p_hi2 = ratio(b, 1 - a);
    double p_lo1 = ratio(c, 1 - b);
    double p_lo2;
    if (d <= 0)
        p_lo2 = 0.0;
    else if (b >= 1 - tol)
        p_lo2 = std::min(d, 1.0);
    else
        p_lo2 = ratio(d * (1 - b), b * (1 - b) + (1 - a - b) * (1 - c - b));

    DiceSystem<double> dice;
    dice.die.assign(4, Die<double>::single(kLosingFace));
    dice.die[hi1] = Die<double>::two_sided(100.0, p_hi1);
    dice.die[hi2] = Die<double>::two_sided(10.0, p_hi2);
    dice.die[lo1] = Die<double>::two_sided(2.0, p_lo1);
    dice.die[lo2] = Die<double>::two_sided(1.0, p_lo2);
    return dice;
}

}  // namespace windice
