#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "windice/matroid.hpp"
#include "windice/scalar.hpp"

namespace windice {

// Global type-set mask. Candidates' type sets are disjoint, so a single
// bitmask over the flattened type indices identifies any set of types.
using TypeSet = std::uint32_t;

inline int popcount_types(TypeSet s) { return __builtin_popcount(s); }

struct TypeId {
    int candidate = 0;
    int local_type = 0;
    friend auto operator<=>(const TypeId&, const TypeId&) = default;
};

// Winner-selection environment: independent per-candidate priors over
// disjoint type sets plus a feasibility structure over candidates.
template <class S>
class Environment {
public:
    Environment(std::vector<std::vector<S>> prior, Matroid matroid,
                std::vector<std::vector<std::string>> type_names = {})
        : prior_(std::move(prior)), matroid_(std::move(matroid)), names_(std::move(type_names)) {
        const int n = static_cast<int>(prior_.size());
        if (matroid_.ground_size() != n)
            throw std::domain_error("matroid ground set size must equal the number of candidates");
        offsets_.resize(n + 1, 0);
        for (int i = 0; i < n; ++i) {
            if (prior_[i].empty()) throw std::domain_error("candidate with empty type set");
            offsets_[i + 1] = offsets_[i] + static_cast<int>(prior_[i].size());
        }
        if (offsets_[n] > 31) throw std::domain_error("at most 31 types total are supported");
        if (names_.empty()) {
            names_.resize(n);
            for (int i = 0; i < n; ++i)
                for (size_t l = 0; l < prior_[i].size(); ++l)
                    names_[i].push_back(std::to_string(l));
        }
        validate_prior();
    }

    int num_candidates() const { return static_cast<int>(prior_.size()); }
    int num_types() const { return offsets_.back(); }
    const Matroid& matroid() const { return matroid_; }
    bool single_winner() const {
        return matroid_.kind() == Matroid::Kind::Uniform && matroid_.uniform_k() == 1;
    }

    int global_index(TypeId t) const { return offsets_[t.candidate] + t.local_type; }
    TypeId type_at(int g) const {
        int c = candidate_of(g);
        return TypeId{c, g - offsets_[c]};
    }
    int candidate_of(int g) const {
        for (int i = 0; i < num_candidates(); ++i)
            if (g < offsets_[i + 1]) return i;
        throw std::domain_error("type index out of range");
    }
    int types_of(int candidate) const { return offsets_[candidate + 1] - offsets_[candidate]; }
    int offset(int candidate) const { return offsets_[candidate]; }
    TypeSet candidate_mask(int candidate) const {
        TypeSet lo = (TypeSet(1) << offsets_[candidate]) - 1;
        TypeSet hi = (TypeSet(1) << offsets_[candidate + 1]) - 1;
        return hi & ~lo;
    }
    TypeSet all_types() const { return (TypeSet(1) << num_types()) - 1; }

    const S& f(int g) const {
        int c = candidate_of(g);
        return prior_[c][g - offsets_[c]];
    }
    const std::vector<S>& prior_of(int candidate) const { return prior_[candidate]; }
    const std::string& type_name(int g) const {
        int c = candidate_of(g);
        return names_[c][g - offsets_[c]];
    }
    std::string type_key(int g) const {
        return std::to_string(candidate_of(g)) + ":" + type_name(g);
    }

    // Probability that at least one type in S shows up; equals R(S) in
    // single-winner environments.
    S show_up_probability(TypeSet s) const {
        S miss = scalar_traits<S>::one();
        for (int i = 0; i < num_candidates(); ++i) {
            S in_s = scalar_traits<S>::zero();
            for (int l = 0; l < types_of(i); ++l)
                if ((s >> (offsets_[i] + l)) & 1) in_s += prior_[i][l];
            miss *= scalar_traits<S>::one() - in_s;
        }
        return scalar_traits<S>::one() - miss;
    }

private:
    void validate_prior() const {
        for (const auto& fi : prior_) {
            S sum = scalar_traits<S>::zero();
            for (const S& p : fi) {
                if (p < scalar_traits<S>::zero()) throw std::domain_error("negative prior probability");
                sum += p;
            }
            S err = sum - scalar_traits<S>::one();
            if (abs(err) > scalar_traits<S>::from_double(scalar_traits<S>::exact ? 0.0 : 1e-12))
                throw std::domain_error("prior does not sum to 1");
        }
    }

    std::vector<std::vector<S>> prior_;
    Matroid matroid_;
    std::vector<std::vector<std::string>> names_;
    std::vector<int> offsets_;
};

// Per-type winning probability, indexed by global type.
template <class S>
struct InterimRule {
    std::vector<S> x;

    const S& operator()(int g) const { return x[g]; }
    S& operator()(int g) { return x[g]; }
    int size() const { return static_cast<int>(x.size()); }

    void validate(const Environment<S>& env) const {
        if (size() != env.num_types())
            throw std::domain_error("interim rule domain must equal the environment's type set");
        for (const S& v : x)
            if (v < scalar_traits<S>::zero() || v > scalar_traits<S>::one())
                throw std::domain_error("interim probabilities must lie in [0, 1]");
    }
};

inline std::vector<int> build_rank_table(const Matroid& m) {
    if (m.ground_size() > 20) throw std::domain_error("rank table: at most 20 candidates");
    std::vector<int> table(size_t(1) << m.ground_size());
    for (CandidateSet c = 0; c < table.size(); ++c) table[c] = m.rank(c);
    return table;
}

// R(S): the expected rank of the candidate set that shows up with a type in
// S. Exhaustive over candidate subsets.
template <class S>
S expected_rank(const Environment<S>& env, TypeSet s, const std::vector<int>& rank_table) {
    const int n = env.num_candidates();
    std::vector<S> present(n);
    for (int i = 0; i < n; ++i) {
        S p = scalar_traits<S>::zero();
        for (int l = 0; l < env.types_of(i); ++l)
            if ((s >> (env.offset(i) + l)) & 1) p += env.prior_of(i)[l];
        present[i] = p;
    }
    S total = scalar_traits<S>::zero();
    for (CandidateSet c = 0; c < (CandidateSet(1) << n); ++c) {
        if (rank_table[c] == 0) continue;
        S w = scalar_traits<S>::one();
        for (int i = 0; i < n; ++i)
            w *= ((c >> i) & 1) ? present[i] : scalar_traits<S>::one() - present[i];
        total += w * scalar_traits<S>::from_double(rank_table[c]);
    }
    return total;
}

template <class S>
S expected_rank(const Environment<S>& env, TypeSet s) {
    return expected_rank(env, s, build_rank_table(env.matroid()));
}

// n i.i.d. candidates sharing one type set; the single-winner environment is
// the disjoint-type expansion.
template <class S>
Environment<S> make_iid_environment(int n, const std::vector<S>& f,
                                    const std::vector<std::string>& names = {}) {
    if (n < 1) throw std::domain_error("need at least one candidate");
    std::vector<std::vector<S>> prior(n, f);
    std::vector<std::vector<std::string>> nm;
    if (!names.empty()) nm.assign(n, names);
    return Environment<S>(std::move(prior), Matroid::uniform(n, 1), std::move(nm));
}

}  // namespace windice
