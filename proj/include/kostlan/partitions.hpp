#pragma once

// Set partitions and the combinatorics behind the moment expansion: pair
// partitions, refinement order, induced partitions, adapted subsets,
// clustering partitions of point configurations, double partitions into
// pairs and the bijection that maps them onto (pair partition, subset of
// its pairs).

#include <cstdint>
#include <vector>

namespace kostlan {

/// A partition of a finite ordered ground set. Elements inside a block are
/// ascending and blocks are ordered by their minimum, so equality is
/// structural.
class Partition {
public:
    Partition() = default;
    /// Validates that the blocks are nonempty, disjoint and cover ground.
    Partition(std::vector<int> ground, std::vector<std::vector<int>> blocks);
    /// Ground set = union of the blocks.
    static Partition from_blocks(std::vector<std::vector<int>> blocks);
    /// All singletons, I_0(ground).
    static Partition singletons(const std::vector<int>& ground);
    /// One block, the maximum of the refinement order.
    static Partition whole(const std::vector<int>& ground);

    const std::vector<int>& ground() const { return ground_; }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    /// Number of blocks.
    int size() const { return static_cast<int>(blocks_.size()); }
    /// Index of the block containing element x.
    int block_of(int x) const;

    friend bool operator==(const Partition&, const Partition&) = default;
    friend auto operator<=>(const Partition&, const Partition&) = default;

private:
    std::vector<int> ground_;
    std::vector<std::vector<int>> blocks_;
};

/// {1, .., n}.
std::vector<int> range_set(int n);

/// All partitions of {1..n}, 1 <= n <= 10, in canonical order.
std::vector<Partition> enumerate_partitions(int n);

/// All partitions of an arbitrary ground set of at most 10 elements.
std::vector<Partition> enumerate_partitions(const std::vector<int>& ground);

/// Perfect matchings of {1..p}, 1 <= p <= 12; empty for odd p.
std::vector<Partition> enumerate_pair_partitions(int p);

/// mu_p = (p - 1)!! for even p, 0 for odd p.
std::int64_t gaussian_moment(int p);

/// True iff every block of j lies inside a block of i.
bool refines(const Partition& j, const Partition& i);

/// I_B = { block & B : nonempty }.
Partition induced_partition(const Partition& i, const std::vector<int>& subset);

/// All A containing every block of size >= 2 (2^#singletons sets, ascending).
std::vector<std::vector<int>> adapted_subsets(const Partition& i);

/// Connected components of the graph on indices 1..n linking points at RP^1
/// distance <= threshold.
Partition clustering_partition(const std::vector<double>& thetas, double threshold);

/// (I, J): I a partition of {1..p} into singletons and pairs, J a partition of
/// the blocks of I. The inner ground set {1..|I|} numbers the blocks of I in
/// canonical order.
struct DoublePairPartition {
    Partition outer;
    Partition inner;
    /// S: the union of the singleton blocks of I.
    std::vector<int> singleton_union;

    friend bool operator==(const DoublePairPartition&, const DoublePairPartition&) = default;
};

/// Checks the defining conditions of C_p.
bool is_double_pair_partition(const DoublePairPartition& dp);

/// All of C_p for even p <= 8; empty for odd p.
std::vector<DoublePairPartition> enumerate_double_pair_partitions(int p);

/// (Pi, Sigma) with Pi a pair partition of {1..p} and Sigma a subset of its
/// blocks (ascending).
struct PairSelection {
    Partition pairs;
    std::vector<std::vector<int>> selected;

    friend bool operator==(const PairSelection&, const PairSelection&) = default;
};

/// Phi(I, J) = ((I \ I_S) + J_S, J_S), with J_S read as pairs of elements.
PairSelection phi_bijection(const DoublePairPartition& dp);

/// The inverse of phi_bijection.
DoublePairPartition psi_inverse(const PairSelection& sel);

/// sum over perfect matchings of {1..p} of prod m[i][j]; m symmetric p x p.
double wick_leading_term(int p, const std::vector<std::vector<double>>& m);

/// Counts the k-tuples of Z by the partition of {1..k} they induce (equal
/// entries share a block) and checks that each partition I receives exactly
/// |Z| (|Z| - 1) .. (|Z| - |I| + 1) tuples and that they add up to |Z|^k.
/// Z distinct, |Z| <= 8, 1 <= k <= 4.
bool tuple_decomposition_check(const std::vector<double>& z, int k);

}  // namespace kostlan
