#include "kostlan/partitions.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "kostlan/core.hpp"

namespace kostlan {

namespace {

constexpr int kMaxPartitionSize = 10;
constexpr int kMaxPairSize = 12;
constexpr int kMaxDoublePairSize = 8;

void canonicalize(std::vector<std::vector<int>>& blocks) {
    for (auto& b : blocks) {
        std::sort(b.begin(), b.end());
    }
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
}

bool is_subset(const std::vector<int>& small, const std::vector<int>& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

void match_rest(std::vector<int>& rest, std::vector<std::vector<int>>& current,
                std::vector<std::vector<std::vector<int>>>& out) {
    if (rest.empty()) {
        out.push_back(current);
        return;
    }
    const int first = rest.front();
    for (std::size_t j = 1; j < rest.size(); ++j) {
        const int partner = rest[j];
        std::vector<int> next;
        next.reserve(rest.size() - 2);
        for (std::size_t k = 1; k < rest.size(); ++k) {
            if (k != j) {
                next.push_back(rest[k]);
            }
        }
        current.push_back({first, partner});
        match_rest(next, current, out);
        current.pop_back();
    }
}

// Perfect matchings of an ascending element list, in canonical block order.
std::vector<std::vector<std::vector<int>>> matchings(std::vector<int> elems) {
    std::vector<std::vector<std::vector<int>>> out;
    if (elems.size() % 2 != 0) {
        return out;
    }
    std::vector<std::vector<int>> current;
    match_rest(elems, current, out);
    return out;
}

struct UnionFind {
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::vector<std::size_t> parent;
};

}  // namespace

Partition::Partition(std::vector<int> ground, std::vector<std::vector<int>> blocks) {
    std::sort(ground.begin(), ground.end());
    if (std::adjacent_find(ground.begin(), ground.end()) != ground.end()) {
        throw std::invalid_argument("partition: repeated ground element");
    }
    std::vector<int> seen;
    for (const auto& b : blocks) {
        if (b.empty()) {
            throw std::invalid_argument("partition: empty block");
        }
        seen.insert(seen.end(), b.begin(), b.end());
    }
    std::sort(seen.begin(), seen.end());
    if (seen != ground) {
        throw std::invalid_argument("partition: blocks must be disjoint and cover the ground set");
    }
    canonicalize(blocks);
    ground_ = std::move(ground);
    blocks_ = std::move(blocks);
}

Partition Partition::from_blocks(std::vector<std::vector<int>> blocks) {
    std::vector<int> ground;
    for (const auto& b : blocks) {
        ground.insert(ground.end(), b.begin(), b.end());
    }
    std::sort(ground.begin(), ground.end());
    ground.erase(std::unique(ground.begin(), ground.end()), ground.end());
    return Partition(std::move(ground), std::move(blocks));
}

Partition Partition::singletons(const std::vector<int>& ground) {
    std::vector<std::vector<int>> blocks;
    for (int x : ground) {
        blocks.push_back({x});
    }
    return Partition(ground, std::move(blocks));
}

Partition Partition::whole(const std::vector<int>& ground) {
    if (ground.empty()) {
        return Partition();
    }
    return Partition(ground, {ground});
}

int Partition::block_of(int x) const {
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        if (std::binary_search(blocks_[b].begin(), blocks_[b].end(), x)) {
            return static_cast<int>(b);
        }
    }
    throw std::invalid_argument("partition: element not in ground set");
}

std::vector<int> range_set(int n) {
    std::vector<int> out(static_cast<std::size_t>(std::max(n, 0)));
    std::iota(out.begin(), out.end(), 1);
    return out;
}

std::vector<Partition> enumerate_partitions(const std::vector<int>& ground_in) {
    std::vector<int> ground = ground_in;
    std::sort(ground.begin(), ground.end());
    const int n = static_cast<int>(ground.size());
    if (n < 1 || n > kMaxPartitionSize) {
        throw std::invalid_argument("enumerate_partitions: size must be in 1..10");
    }
    // Restricted growth strings: label[0] = 0, label[i] <= 1 + max(label[<i]).
    std::vector<int> label(static_cast<std::size_t>(n), 0);
    std::vector<int> high(static_cast<std::size_t>(n), 0);
    std::vector<Partition> out;
    while (true) {
        const int nblocks = high[n - 1] + 1;
        std::vector<std::vector<int>> blocks(static_cast<std::size_t>(nblocks));
        for (int i = 0; i < n; ++i) {
            blocks[label[i]].push_back(ground[i]);
        }
        out.emplace_back(ground, std::move(blocks));
        int i = n - 1;
        while (i > 0 && label[i] > high[i - 1]) {
            --i;
        }
        if (i == 0) {
            break;
        }
        ++label[i];
        high[i] = std::max(high[i - 1], label[i]);
        for (int j = i + 1; j < n; ++j) {
            label[j] = 0;
            high[j] = high[i];
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Partition> enumerate_partitions(int n) {
    if (n < 1 || n > kMaxPartitionSize) {
        throw std::invalid_argument("enumerate_partitions: n must be in 1..10");
    }
    return enumerate_partitions(range_set(n));
}

std::vector<Partition> enumerate_pair_partitions(int p) {
    if (p < 1 || p > kMaxPairSize) {
        throw std::invalid_argument("enumerate_pair_partitions: p must be in 1..12");
    }
    std::vector<Partition> out;
    const std::vector<int> ground = range_set(p);
    for (auto& blocks : matchings(ground)) {
        out.emplace_back(ground, std::move(blocks));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t gaussian_moment(int p) {
    if (p < 0) {
        throw std::invalid_argument("gaussian_moment: p must be nonnegative");
    }
    if (p % 2 != 0) {
        return 0;
    }
    std::int64_t out = 1;
    for (int k = p - 1; k > 1; k -= 2) {
        out *= k;
    }
    return out;
}

bool refines(const Partition& j, const Partition& i) {
    if (j.ground() != i.ground()) {
        throw std::invalid_argument("refines: partitions of different ground sets");
    }
    for (const auto& b : j.blocks()) {
        if (!is_subset(b, i.blocks()[i.block_of(b.front())])) {
            return false;
        }
    }
    return true;
}

Partition induced_partition(const Partition& i, const std::vector<int>& subset) {
    if (subset.empty()) {
        throw std::invalid_argument("induced_partition: empty subset");
    }
    std::vector<int> b = subset;
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    if (!is_subset(b, i.ground())) {
        throw std::invalid_argument("induced_partition: subset outside the ground set");
    }
    std::vector<std::vector<int>> blocks;
    for (const auto& block : i.blocks()) {
        std::vector<int> cut;
        std::set_intersection(block.begin(), block.end(), b.begin(), b.end(),
                              std::back_inserter(cut));
        if (!cut.empty()) {
            blocks.push_back(std::move(cut));
        }
    }
    return Partition(std::move(b), std::move(blocks));
}

std::vector<std::vector<int>> adapted_subsets(const Partition& i) {
    std::vector<int> fixed;
    std::vector<int> free;
    for (const auto& block : i.blocks()) {
        if (block.size() == 1) {
            free.push_back(block.front());
        } else {
            fixed.insert(fixed.end(), block.begin(), block.end());
        }
    }
    std::vector<std::vector<int>> out;
    const std::size_t count = std::size_t{1} << free.size();
    out.reserve(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
        std::vector<int> a = fixed;
        for (std::size_t k = 0; k < free.size(); ++k) {
            if (mask & (std::size_t{1} << k)) {
                a.push_back(free[k]);
            }
        }
        std::sort(a.begin(), a.end());
        out.push_back(std::move(a));
    }
    std::sort(out.begin(), out.end());
    return out;
}

Partition clustering_partition(const std::vector<double>& thetas, double threshold) {
    if (!(threshold > 0.0)) {
        throw std::invalid_argument("clustering_partition: threshold must be positive");
    }
    const std::size_t n = thetas.size();
    UnionFind uf(n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (geodesic_distance(thetas[a], thetas[b]) <= threshold) {
                uf.unite(a, b);
            }
        }
    }
    std::map<std::size_t, std::vector<int>> groups;
    for (std::size_t a = 0; a < n; ++a) {
        groups[uf.find(a)].push_back(static_cast<int>(a) + 1);
    }
    std::vector<std::vector<int>> blocks;
    for (auto& [root, members] : groups) {
        blocks.push_back(std::move(members));
    }
    return Partition(range_set(static_cast<int>(n)), std::move(blocks));
}

bool is_double_pair_partition(const DoublePairPartition& dp) {
    const auto& outer = dp.outer.blocks();
    std::vector<int> singles;
    for (const auto& block : outer) {
        if (block.size() > 2) {
            return false;
        }
        if (block.size() == 1) {
            singles.push_back(block.front());
        }
    }
    std::sort(singles.begin(), singles.end());
    if (singles != dp.singleton_union) {
        return false;
    }
    if (dp.inner.ground() != range_set(dp.outer.size())) {
        return false;
    }
    for (const auto& jb : dp.inner.blocks()) {
        if (jb.size() == 1) {
            if (outer[jb.front() - 1].size() != 2) {
                return false;
            }
        } else if (jb.size() == 2) {
            if (outer[jb[0] - 1].size() != 1 || outer[jb[1] - 1].size() != 1) {
                return false;
            }
        } else {
            return false;
        }
    }
    return true;
}

std::vector<DoublePairPartition> enumerate_double_pair_partitions(int p) {
    if (p < 1 || p > kMaxDoublePairSize) {
        throw std::invalid_argument("enumerate_double_pair_partitions: p must be in 1..8");
    }
    std::vector<DoublePairPartition> out;
    if (p % 2 != 0) {
        return out;
    }
    const std::vector<int> ground = range_set(p);
    for (std::uint32_t mask = 0; mask < (1u << p); ++mask) {
        std::vector<int> s;
        std::vector<int> rest;
        for (int x = 1; x <= p; ++x) {
            ((mask >> (x - 1)) & 1u ? s : rest).push_back(x);
        }
        if (s.size() % 2 != 0) {
            continue;
        }
        for (const auto& pairs : matchings(rest)) {
            std::vector<std::vector<int>> blocks = pairs;
            for (int x : s) {
                blocks.push_back({x});
            }
            const Partition outer(ground, blocks);
            std::vector<int> single_idx;
            std::vector<std::vector<int>> fixed;
            for (int b = 0; b < outer.size(); ++b) {
                if (outer.blocks()[b].size() == 1) {
                    single_idx.push_back(b + 1);
                } else {
                    fixed.push_back({b + 1});
                }
            }
            for (const auto& jpairs : matchings(single_idx)) {
                std::vector<std::vector<int>> jblocks = fixed;
                jblocks.insert(jblocks.end(), jpairs.begin(), jpairs.end());
                out.push_back({outer, Partition(range_set(outer.size()), std::move(jblocks)), s});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return x.outer != y.outer ? x.outer < y.outer : x.inner < y.inner;
    });
    return out;
}

PairSelection phi_bijection(const DoublePairPartition& dp) {
    if (!is_double_pair_partition(dp)) {
        throw std::invalid_argument("phi_bijection: not a double partition into pairs");
    }
    const auto& outer = dp.outer.blocks();
    std::vector<std::vector<int>> pairs;
    std::vector<std::vector<int>> selected;
    for (const auto& block : outer) {
        if (block.size() == 2) {
            pairs.push_back(block);
        }
    }
    for (const auto& jb : dp.inner.blocks()) {
        if (jb.size() == 2) {
            std::vector<int> lifted{outer[jb[0] - 1].front(), outer[jb[1] - 1].front()};
            std::sort(lifted.begin(), lifted.end());
            pairs.push_back(lifted);
            selected.push_back(lifted);
        }
    }
    std::sort(selected.begin(), selected.end());
    return {Partition(dp.outer.ground(), std::move(pairs)), std::move(selected)};
}

DoublePairPartition psi_inverse(const PairSelection& sel) {
    std::vector<std::vector<int>> blocks;
    std::vector<int> s;
    for (const auto& pair : sel.pairs.blocks()) {
        if (pair.size() != 2) {
            throw std::invalid_argument("psi_inverse: not a pair partition");
        }
        if (std::find(sel.selected.begin(), sel.selected.end(), pair) != sel.selected.end()) {
            blocks.push_back({pair[0]});
            blocks.push_back({pair[1]});
            s.push_back(pair[0]);
            s.push_back(pair[1]);
        } else {
            blocks.push_back(pair);
        }
    }
    for (const auto& chosen : sel.selected) {
        if (std::find(sel.pairs.blocks().begin(), sel.pairs.blocks().end(), chosen) ==
            sel.pairs.blocks().end()) {
            throw std::invalid_argument("psi_inverse: selected pair is not a block");
        }
    }
    std::sort(s.begin(), s.end());
    Partition outer(sel.pairs.ground(), std::move(blocks));
    std::vector<std::vector<int>> jblocks;
    for (int b = 0; b < outer.size(); ++b) {
        if (outer.blocks()[b].size() == 2) {
            jblocks.push_back({b + 1});
        }
    }
    for (const auto& chosen : sel.selected) {
        jblocks.push_back({outer.block_of(chosen[0]) + 1, outer.block_of(chosen[1]) + 1});
    }
    Partition inner(range_set(outer.size()), std::move(jblocks));
    return {std::move(outer), std::move(inner), std::move(s)};
}

double wick_leading_term(int p, const std::vector<std::vector<double>>& m) {
    if (p < 1 || p > kMaxPairSize) {
        throw std::invalid_argument("wick_leading_term: p must be in 1..12");
    }
    if (m.size() != static_cast<std::size_t>(p)) {
        throw std::invalid_argument("wick_leading_term: matrix must be p x p");
    }
    for (int i = 0; i < p; ++i) {
        if (m[i].size() != static_cast<std::size_t>(p)) {
            throw std::invalid_argument("wick_leading_term: matrix must be p x p");
        }
        for (int j = 0; j < i; ++j) {
            if (m[i][j] != m[j][i]) {
                throw std::invalid_argument("wick_leading_term: matrix must be symmetric");
            }
        }
    }
    double total = 0.0;
    for (const auto& blocks : matchings(range_set(p))) {
        double term = 1.0;
        for (const auto& pair : blocks) {
            term *= m[pair[0] - 1][pair[1] - 1];
        }
        total += term;
    }
    return total;
}

bool tuple_decomposition_check(const std::vector<double>& z, int k) {
    if (k < 1 || k > 4) {
        throw std::invalid_argument("tuple_decomposition_check: k must be in 1..4");
    }
    if (z.size() > 8) {
        throw std::invalid_argument("tuple_decomposition_check: at most 8 points");
    }
    std::vector<double> sorted = z;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("tuple_decomposition_check: points must be distinct");
    }
    const std::size_t n = z.size();
    std::map<Partition, std::int64_t> tally;
    std::int64_t total = 0;
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    const std::vector<int> ground = range_set(k);
    while (n > 0) {
        std::vector<std::vector<int>> blocks;
        std::vector<bool> used(static_cast<std::size_t>(k), false);
        for (int a = 0; a < k; ++a) {
            if (used[a]) {
                continue;
            }
            std::vector<int> block{a + 1};
            for (int b = a + 1; b < k; ++b) {
                if (!used[b] && z[idx[a]] == z[idx[b]]) {
                    used[b] = true;
                    block.push_back(b + 1);
                }
            }
            blocks.push_back(std::move(block));
        }
        ++tally[Partition(ground, std::move(blocks))];
        ++total;
        int pos = 0;
        while (pos < k && ++idx[pos] == n) {
            idx[pos++] = 0;
        }
        if (pos == k) {
            break;
        }
    }
    std::int64_t power = 1;
    for (int a = 0; a < k; ++a) {
        power *= static_cast<std::int64_t>(n);
    }
    std::int64_t sum = 0;
    for (const auto& part : enumerate_partitions(k)) {
        std::int64_t falling = 1;
        for (int j = 0; j < part.size(); ++j) {
            falling *= static_cast<std::int64_t>(n) - j;
        }
        falling = std::max<std::int64_t>(falling, 0);
        const auto it = tally.find(part);
        const std::int64_t seen = it == tally.end() ? 0 : it->second;
        if (seen != falling) {
            return false;
        }
        sum += falling;
    }
    return sum == power && total == power;
}

}  // namespace kostlan
