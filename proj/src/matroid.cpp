#include "windice/matroid.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace windice {

namespace {

void check_ground(int n) {
    if (n < 0 || n > 31) throw std::domain_error("ground set size must be in [0, 31]");
}

}  // namespace

Matroid Matroid::uniform(int ground_size, int k) {
    check_ground(ground_size);
    if (k < 0) throw std::domain_error("uniform matroid needs k >= 0");
    Matroid m;
    m.kind_ = Kind::Uniform;
    m.n_ = ground_size;
    m.k_ = k;
    return m;
}

Matroid Matroid::partition(int ground_size, std::vector<std::vector<int>> blocks,
                           std::vector<int> caps) {
    check_ground(ground_size);
    if (blocks.size() != caps.size())
        throw std::domain_error("partition matroid: one capacity per block");
    Matroid m;
    m.kind_ = Kind::Partition;
    m.n_ = ground_size;
    m.block_of_.assign(ground_size, -1);
    for (size_t b = 0; b < blocks.size(); ++b) {
        if (caps[b] < 0) throw std::domain_error("partition matroid: negative capacity");
        for (int e : blocks[b]) {
            if (e < 0 || e >= ground_size) throw std::domain_error("partition matroid: element out of range");
            if (m.block_of_[e] != -1) throw std::domain_error("partition matroid: blocks must be disjoint");
            m.block_of_[e] = static_cast<int>(b);
        }
    }
    for (int e = 0; e < ground_size; ++e)
        if (m.block_of_[e] == -1) throw std::domain_error("partition matroid: blocks must cover the ground set");
    m.blocks_ = std::move(blocks);
    m.caps_ = std::move(caps);
    return m;
}

Matroid Matroid::explicit_family(int ground_size, const std::vector<std::vector<int>>& independent,
                                 bool require_matroid) {
    check_ground(ground_size);
    Matroid m;
    m.kind_ = Kind::Explicit;
    m.n_ = ground_size;

    std::vector<char> in_family(size_t(1) << ground_size, 0);
    in_family[0] = 1;
    for (const auto& set : independent) {
        CandidateSet mask = 0;
        for (int e : set) {
            if (e < 0 || e >= ground_size) throw std::domain_error("explicit family: element out of range");
            mask |= CandidateSet(1) << e;
        }
        in_family[mask] = 1;
    }
    // Downward closure: a subset of an independent set is independent.
    for (CandidateSet s = in_family.size() - 1; s > 0; --s) {
        if (!in_family[s]) continue;
        for (int e = 0; e < ground_size; ++e)
            if (s & (CandidateSet(1) << e)) in_family[s ^ (CandidateSet(1) << e)] = 1;
    }
    for (CandidateSet s = 0; s < in_family.size(); ++s)
        if (in_family[s]) m.family_.push_back(s);

    // Exchange axiom: for independent A, B with |A| > |B|, some a in A \ B
    // keeps B + a independent. Validation is quadratic in the family size,
    // so it is skipped past 20 elements.
    m.is_matroid_ = true;
    if (ground_size > 20)
        std::cerr << "warning: explicit family too large to validate the exchange axiom\n";
    if (ground_size <= 20) {
        for (CandidateSet a : m.family_) {
            for (CandidateSet b : m.family_) {
                if (popcount(a) <= popcount(b)) continue;
                bool found = false;
                CandidateSet diff = a & ~b;
                for (int e = 0; e < ground_size && !found; ++e)
                    if ((diff >> e) & 1) found = in_family[b | (CandidateSet(1) << e)];
                if (!found) { m.is_matroid_ = false; break; }
            }
            if (!m.is_matroid_) break;
        }
    }
    if (require_matroid && !m.is_matroid_)
        throw std::domain_error("explicit family violates the matroid exchange axiom");
    return m;
}

void Matroid::check_subset(CandidateSet s) const {
    if (s & ~full_set()) throw std::domain_error("candidate index out of range");
}

bool Matroid::independent(CandidateSet s) const {
    check_subset(s);
    switch (kind_) {
        case Kind::Uniform:
            return popcount(s) <= k_;
        case Kind::Partition: {
            for (size_t b = 0; b < blocks_.size(); ++b) {
                int cnt = 0;
                for (int e : blocks_[b]) cnt += (s >> e) & 1;
                if (cnt > caps_[b]) return false;
            }
            return true;
        }
        case Kind::Explicit:
            return std::binary_search(family_.begin(), family_.end(), s);
    }
    return false;
}

int Matroid::rank(CandidateSet s) const {
    check_subset(s);
    switch (kind_) {
        case Kind::Uniform:
            return std::min(k_, popcount(s));
        case Kind::Partition: {
            int r = 0;
            for (size_t b = 0; b < blocks_.size(); ++b) {
                int cnt = 0;
                for (int e : blocks_[b]) cnt += (s >> e) & 1;
                r += std::min(cnt, caps_[b]);
            }
            return r;
        }
        case Kind::Explicit: {
            int best = 0;
            for (CandidateSet f : family_)
                if ((f & ~s) == 0) best = std::max(best, popcount(f));
            return best;
        }
    }
    return 0;
}

std::vector<std::vector<int>> Matroid::components() const {
    if (!is_matroid_) throw std::domain_error("components() requires a matroid");
    if (kind_ == Kind::Explicit && n_ > 20)
        throw std::domain_error("components(): explicit matroid too large for circuit search");

    std::vector<int> parent(n_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) { while (parent[x] != x) x = parent[x] = parent[parent[x]]; return x; };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

    // A circuit is a minimal dependent set; all its elements lie in one
    // component. Uniform and Partition circuits have closed forms.
    switch (kind_) {
        case Kind::Uniform:
            if (k_ < n_ && n_ >= 1) {
                // any (k+1)-subset is a circuit; k=0 makes every singleton a
                // loop, which is its own component
                if (k_ >= 1)
                    for (int e = 1; e < n_; ++e) unite(0, e);
            }
            break;
        case Kind::Partition:
            for (size_t b = 0; b < blocks_.size(); ++b) {
                const auto& blk = blocks_[b];
                if (caps_[b] >= 1 && static_cast<int>(blk.size()) > caps_[b])
                    for (size_t j = 1; j < blk.size(); ++j) unite(blk[0], blk[j]);
            }
            break;
        case Kind::Explicit: {
            for (CandidateSet s = 1; s < (CandidateSet(1) << n_); ++s) {
                if (independent(s)) continue;
                bool minimal = true;
                for (int e = 0; e < n_ && minimal; ++e)
                    if ((s >> e) & 1) minimal = independent(s ^ (CandidateSet(1) << e));
                if (!minimal) continue;
                int first = __builtin_ctz(s);
                for (int e = first + 1; e < n_; ++e)
                    if ((s >> e) & 1) unite(first, e);
            }
            break;
        }
    }

    std::vector<std::vector<int>> out;
    std::vector<int> root_slot(n_, -1);
    for (int e = 0; e < n_; ++e) {
        int r = find(e);
        if (root_slot[r] == -1) {
            root_slot[r] = static_cast<int>(out.size());
            out.emplace_back();
        }
        out[root_slot[r]].push_back(e);
    }
    return out;
}

}  // namespace windice
