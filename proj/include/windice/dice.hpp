#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "windice/types.hpp"

namespace windice {

// A die face that never wins; stands in for "minus infinity". Only strictly
// positive scores can enter the winner set.
inline constexpr double kLosingFace = -1.0;

template <class S>
struct Face {
    double value = kLosingFace;
    S prob = scalar_traits<S>::zero();
};

// Finite score distribution. Faces are canonicalized on construction:
// sorted by value, equal values merged, zero-probability faces dropped.
template <class S>
class Die {
public:
    Die() : Die(std::vector<Face<S>>{{kLosingFace, scalar_traits<S>::one()}}) {}

    explicit Die(std::vector<Face<S>> faces) : faces_(std::move(faces)) {
        S total = scalar_traits<S>::zero();
        for (const auto& f : faces_) {
            if (!std::isfinite(f.value)) throw std::domain_error("die face values must be finite");
            if (f.prob < scalar_traits<S>::zero()) throw std::domain_error("negative face probability");
            total += f.prob;
        }
        if (abs(total - scalar_traits<S>::one()) > scalar_traits<S>::from_double(
                scalar_traits<S>::exact ? 0.0 : 1e-12))
            throw std::domain_error("face probabilities must sum to 1");
        std::sort(faces_.begin(), faces_.end(),
                  [](const Face<S>& a, const Face<S>& b) { return a.value < b.value; });
        std::vector<Face<S>> merged;
        for (const auto& f : faces_) {
            if (!(f.prob > scalar_traits<S>::zero())) continue;
            if (!merged.empty() && merged.back().value == f.value)
                merged.back().prob += f.prob;
            else
                merged.push_back(f);
        }
        if (merged.empty()) merged.push_back({kLosingFace, scalar_traits<S>::one()});
        faces_ = std::move(merged);
    }

    static Die single(double value) {
        return Die(std::vector<Face<S>>{{value, scalar_traits<S>::one()}});
    }
    static Die two_sided(double high, S p_high, double low = kLosingFace) {
        return Die(std::vector<Face<S>>{{high, p_high}, {low, scalar_traits<S>::one() - p_high}});
    }
    // Rolls `top` with probability p_top, otherwise rolls `base`.
    static Die stacked(const Die& base, double top, S p_top) {
        std::vector<Face<S>> faces;
        for (const auto& f : base.faces_) faces.push_back({f.value, f.prob * (scalar_traits<S>::one() - p_top)});
        faces.push_back({top, p_top});
        return Die(std::move(faces));
    }

    const std::vector<Face<S>>& faces() const { return faces_; }
    int num_faces() const { return static_cast<int>(faces_.size()); }
    double max_value() const { return faces_.back().value; }

    bool always_loses() const {
        for (const auto& f : faces_)
            if (f.value > 0) return false;
        return true;
    }

private:
    std::vector<Face<S>> faces_;
};

// One die per type, indexed like the environment's global types.
template <class S>
struct DiceSystem {
    std::vector<Die<S>> die;

    const Die<S>& at(int g) const { return die[g]; }
    int size() const { return static_cast<int>(die.size()); }

    void validate(const Environment<S>& env) const {
        if (size() != env.num_types())
            throw std::domain_error("dice system domain must equal the environment's type set");
    }
};

struct SelectionOutcome {
    CandidateSet winners = 0;
    std::vector<double> scores;
};

// Greedy winner selection: candidates in decreasing score order, ties
// permuted uniformly at random, added while the score is strictly positive
// and the set stays independent.
template <class Rng>
SelectionOutcome greedy_select(const Matroid& m, const std::vector<double>& scores, Rng& rng) {
    if (static_cast<int>(scores.size()) != m.ground_size())
        throw std::domain_error("one score per candidate required");
    std::vector<int> order(scores.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] > scores[b]; });
    for (size_t lo = 0; lo < order.size();) {
        size_t hi = lo + 1;
        while (hi < order.size() && scores[order[hi]] == scores[order[lo]]) ++hi;
        std::shuffle(order.begin() + lo, order.begin() + hi, rng);
        lo = hi;
    }
    SelectionOutcome out;
    out.scores = scores;
    for (int c : order) {
        if (!(scores[c] > 0)) break;
        CandidateSet next = out.winners | (CandidateSet(1) << c);
        if (m.independent(next)) out.winners = next;
    }
    return out;
}

// Deterministic variant used by the exact evaluators: `order` fixes the
// processing sequence among tied scores.
inline CandidateSet greedy_select_ordered(const Matroid& m, const std::vector<double>& scores,
                                          const std::vector<int>& order) {
    CandidateSet winners = 0;
    for (int c : order) {
        if (!(scores[c] > 0)) continue;
        CandidateSet next = winners | (CandidateSet(1) << c);
        if (m.independent(next)) winners = next;
    }
    return winners;
}

}  // namespace windice
