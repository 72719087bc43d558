#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace windice {

using CandidateSet = std::uint32_t;  // bitmask over candidate indices

inline int popcount(CandidateSet s) { return __builtin_popcount(s); }

// Feasibility structure over candidates. Uniform and Partition kinds are
// always matroids; the Explicit kind stores a downward-closed set family and
// may fail the exchange axiom (is_matroid() reports the verdict). Operations
// that rely on matroid theory must check is_matroid(); rank and independence
// queries work for any downward-closed family.
class Matroid {
public:
    enum class Kind { Uniform, Partition, Explicit };

    static Matroid uniform(int ground_size, int k);
    static Matroid partition(int ground_size, std::vector<std::vector<int>> blocks,
                             std::vector<int> caps);
    // `independent` lists independent sets as candidate-index lists; the
    // downward closure is taken automatically. With require_matroid the
    // exchange axiom is validated (|E| <= 20) and violations throw.
    static Matroid explicit_family(int ground_size, const std::vector<std::vector<int>>& independent,
                                   bool require_matroid = true);

    Kind kind() const { return kind_; }
    int ground_size() const { return n_; }
    bool is_matroid() const { return is_matroid_; }

    int rank(CandidateSet s) const;
    int rank() const { return rank(full_set()); }
    bool independent(CandidateSet s) const;
    CandidateSet full_set() const { return n_ >= 32 ? ~CandidateSet(0) : ((CandidateSet(1) << n_) - 1); }

    // Whitney components: a and b share a block iff some circuit contains
    // both. Requires a genuine matroid; |E| <= 20 for the Explicit kind.
    std::vector<std::vector<int>> components() const;

    // Accessors used by serialization.
    int uniform_k() const { return k_; }
    const std::vector<std::vector<int>>& partition_blocks() const { return blocks_; }
    const std::vector<int>& partition_caps() const { return caps_; }
    const std::vector<CandidateSet>& explicit_sets() const { return family_; }

private:
    Matroid() = default;
    void check_subset(CandidateSet s) const;

    Kind kind_ = Kind::Uniform;
    int n_ = 0;
    bool is_matroid_ = true;
    int k_ = 0;                           // Uniform
    std::vector<std::vector<int>> blocks_;  // Partition
    std::vector<int> caps_;
    std::vector<int> block_of_;
    std::vector<CandidateSet> family_;    // Explicit, downward closed, sorted
};

}  // namespace windice
