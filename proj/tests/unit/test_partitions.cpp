#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "kostlan/core.hpp"
#include "kostlan/partitions.hpp"
#include "oracles.hpp"

using namespace kostlan;

namespace {

oracle::Blocks blocks_of(const Partition& p) { return oracle::canonical(p.blocks()); }

// Union of all points reachable through links of length <= t.
oracle::Blocks closure_oracle(const std::vector<double>& pts, double t) {
    const int n = static_cast<int>(pts.size());
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n));
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            reach[a][b] = a == b || geodesic_distance(pts[a], pts[b]) <= t;
        }
    }
    for (int k = 0; k < n; ++k) {
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                if (reach[a][k] && reach[k][b]) {
                    reach[a][b] = true;
                }
            }
        }
    }
    std::set<std::vector<int>> comps;
    for (int a = 0; a < n; ++a) {
        std::vector<int> c;
        for (int b = 0; b < n; ++b) {
            if (reach[a][b]) {
                c.push_back(b + 1);
            }
        }
        comps.insert(c);
    }
    return oracle::canonical({comps.begin(), comps.end()});
}

// Definition of C_p checked directly on block lists.
bool double_pair_oracle(const oracle::Blocks& outer, const oracle::Blocks& inner) {
    for (const auto& b : outer) {
        if (b.size() > 2) {
            return false;
        }
    }
    for (const auto& jb : inner) {
        if (jb.size() == 1) {
            if (outer[jb[0] - 1].size() != 2) return false;
        } else if (jb.size() == 2) {
            if (outer[jb[0] - 1].size() != 1 || outer[jb[1] - 1].size() != 1) return false;
        } else {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("Partition construction and canonical form") {
    const Partition p({1, 2, 3, 4}, {{4, 2}, {3, 1}});
    CHECK(p.blocks() == std::vector<std::vector<int>>{{1, 3}, {2, 4}});
    CHECK(p.size() == 2);
    CHECK(p.block_of(4) == 1);
    CHECK(p == Partition::from_blocks({{2, 4}, {1, 3}}));
    CHECK_THROWS(Partition({1, 2, 3}, {{1, 2}}));
    CHECK_THROWS(Partition({1, 2}, {{1, 2}, {2}}));
    CHECK_THROWS(Partition({1, 2}, {{1, 2}, {}}));
    CHECK(Partition::singletons({1, 2, 3}).size() == 3);
    CHECK(Partition::whole({1, 2, 3}).size() == 1);
}

TEST_CASE("enumerate_partitions against Bell numbers and brute force") {
    CHECK(enumerate_partitions(1).size() == 1);
    CHECK(enumerate_partitions(3).size() == 5);
    CHECK(enumerate_partitions(4).size() == 15);
    const auto bell = oracle::bell_triangle(10);
    for (int n = 1; n <= 10; ++n) {
        CHECK(static_cast<std::int64_t>(enumerate_partitions(n).size()) == bell[n]);
    }
    for (int n = 1; n <= 7; ++n) {
        std::set<oracle::Blocks> got;
        for (const auto& p : enumerate_partitions(n)) {
            got.insert(blocks_of(p));
        }
        CHECK(got == oracle::brute_set_partitions(n));
    }
    CHECK_THROWS(enumerate_partitions(0));
    CHECK_THROWS(enumerate_partitions(11));
}

TEST_CASE("pair partitions") {
    CHECK(enumerate_pair_partitions(2).size() == 1);
    CHECK(enumerate_pair_partitions(4).size() == 3);
    CHECK(enumerate_pair_partitions(5).empty());
    for (int p = 1; p <= 12; ++p) {
        const auto pp = enumerate_pair_partitions(p);
        CHECK(static_cast<std::int64_t>(pp.size()) == oracle::count_matchings(p));
        CHECK(gaussian_moment(p) == oracle::count_matchings(p));
        for (const auto& m : pp) {
            for (const auto& b : m.blocks()) {
                CHECK(b.size() == 2);
            }
        }
    }
    // Brute-force filter of all set partitions of {1..6}.
    std::size_t pairs = 0;
    for (const auto& b : oracle::brute_set_partitions(6)) {
        pairs += std::all_of(b.begin(), b.end(), [](const auto& x) { return x.size() == 2; });
    }
    CHECK(pairs == enumerate_pair_partitions(6).size());
}

TEST_CASE("refinement order") {
    const auto g = range_set(4);
    CHECK(refines(Partition::singletons(g), Partition::whole(g)));
    CHECK_FALSE(refines(Partition::from_blocks({{1, 2}, {3, 4}}),
                        Partition::from_blocks({{1, 3}, {2, 4}})));
    CHECK(refines(Partition::from_blocks({{1}, {2}, {3, 4}}),
                  Partition::from_blocks({{1, 2}, {3, 4}})));
    CHECK_THROWS(refines(Partition::singletons(range_set(3)), Partition::whole(g)));
}

TEST_CASE("induced partitions") {
    const Partition i = Partition::from_blocks({{1, 2}, {3}});
    CHECK(induced_partition(i, {1, 2}) == Partition::from_blocks({{1, 2}}));
    CHECK(induced_partition(i, {1, 3}) == Partition::from_blocks({{1}, {3}}));
    CHECK_THROWS(induced_partition(i, {}));
    CHECK_THROWS(induced_partition(i, {4}));
}

TEST_CASE("adapted subsets") {
    for (int p = 1; p <= 5; ++p) {
        CHECK(adapted_subsets(Partition::singletons(range_set(p))).size() == (1u << p));
    }
    const auto whole = adapted_subsets(Partition::whole(range_set(2)));
    REQUIRE(whole.size() == 1);
    CHECK(whole[0] == std::vector<int>{1, 2});
}

TEST_CASE("adapted-subset bijection, exhaustive for ground sets up to 5") {
    for (int n = 1; n <= 5; ++n) {
        const auto ground = range_set(n);
        std::set<std::pair<std::vector<int>, oracle::Blocks>> forward;
        std::size_t domain = 0;
        for (const auto& b : oracle::brute_set_partitions(n)) {
            const Partition part = Partition(ground, b);
            for (const auto& a : adapted_subsets(part)) {
                ++domain;
                const oracle::Blocks ia = a.empty() ? oracle::Blocks{} : blocks_of(induced_partition(part, a));
                forward.insert({a, ia});
                // Inverse: add the singletons of the complement.
                oracle::Blocks back = ia;
                for (int x : ground) {
                    if (!std::binary_search(a.begin(), a.end(), x)) {
                        back.push_back({x});
                    }
                }
                CHECK(oracle::canonical(back) == b);
            }
        }
        // Codomain {(A, J) : A subset, J partition of A}, counted by brute force.
        std::size_t codomain = 0;
        const auto bell = oracle::bell_triangle(n);
        for (int k = 0; k <= n; ++k) {
            std::size_t choose = 1;
            for (int j = 0; j < k; ++j) {
                choose = choose * (n - j) / (j + 1);
            }
            codomain += choose * bell[k];
        }
        CHECK(forward.size() == domain);
        CHECK(domain == codomain);
    }
}

TEST_CASE("clustering partitions") {
    CHECK(clustering_partition({0.1, 1.0}, 0.5) == Partition::singletons(range_set(2)));
    CHECK(clustering_partition({0.0, 0.01, 0.02, 1.5}, 0.015) ==
          Partition::from_blocks({{1, 2, 3}, {4}}));
    // Six points whose components are {1,2,4}, {3,6}, {5}.
    const std::vector<double> fig{0.10, 0.14, 1.00, 0.18, 2.00, 1.03};
    CHECK(clustering_partition(fig, 0.05) == Partition::from_blocks({{1, 2, 4}, {3, 6}, {5}}));
    // Wrap-around: 0.01 and pi - 0.01 are 0.02 apart on RP^1.
    CHECK(clustering_partition({0.01, kPi - 0.01}, 0.03).size() == 1);
    CHECK_THROWS(clustering_partition({0.1}, 0.0));
}

TEST_CASE("clustering matches the brute-force closure on 1000 random sets") {
    std::mt19937_64 gen(1000);
    std::uniform_int_distribution<int> size(1, 12);
    std::uniform_real_distribution<double> angle(0.0, kPi);
    std::uniform_real_distribution<double> thr(0.01, 0.6);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> pts(static_cast<std::size_t>(size(gen)));
        for (auto& x : pts) {
            x = angle(gen);
        }
        const double t = thr(gen);
        REQUIRE(blocks_of(clustering_partition(pts, t)) == closure_oracle(pts, t));
    }
}

TEST_CASE("clustering is permutation equivariant and monotone in the threshold") {
    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> angle(0.0, kPi);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> pts(8);
        for (auto& x : pts) {
            x = angle(gen);
        }
        std::vector<int> perm(8);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), gen);
        std::vector<double> shuffled(8);
        for (int i = 0; i < 8; ++i) {
            shuffled[i] = pts[perm[i]];
        }
        const Partition a = clustering_partition(pts, 0.2);
        const Partition b = clustering_partition(shuffled, 0.2);
        // Relabel b back: element i+1 of shuffled is element perm[i]+1 of pts.
        std::vector<std::vector<int>> relabeled;
        for (const auto& blk : b.blocks()) {
            std::vector<int> r;
            for (int x : blk) {
                r.push_back(perm[x - 1] + 1);
            }
            relabeled.push_back(r);
        }
        CHECK(a == Partition(range_set(8), relabeled));
        CHECK(refines(clustering_partition(pts, 0.1), a));
        CHECK(refines(a, clustering_partition(pts, 0.4)));
    }
}

TEST_CASE("clustering volume scales like t^(n - |I|) for n = 3") {
    // Fraction of [0, pi)^3 whose clustering partition is a given I, against
    // the threshold t; halving t divides it by about 2^(n - |I|).
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> angle(0.0, kPi);
    const int n = 2000000;
    std::vector<double> ts{0.02, 0.01, 0.005};
    std::vector<std::map<int, double>> frac(ts.size());
    for (int i = 0; i < n; ++i) {
        const std::vector<double> pts{angle(gen), angle(gen), angle(gen)};
        for (std::size_t k = 0; k < ts.size(); ++k) {
            frac[k][clustering_partition(pts, ts[k]).size()] += 1.0 / n;
        }
    }
    for (int blocks : {1, 2}) {
        for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
            const double ratio = frac[k][blocks] / frac[k + 1][blocks];
            const double expect = std::pow(2.0, 3 - blocks);
            CHECK(ratio > expect / 3);
            CHECK(ratio < expect * 3);
        }
    }
}

TEST_CASE("double partitions into pairs") {
    CHECK(enumerate_double_pair_partitions(2).size() == 2);
    CHECK(enumerate_double_pair_partitions(4).size() == 12);
    CHECK(enumerate_double_pair_partitions(3).empty());
    for (int p : {2, 4, 6, 8}) {
        const auto cp = enumerate_double_pair_partitions(p);
        CHECK(static_cast<std::int64_t>(cp.size()) == oracle::count_matchings(p) << (p / 2));
        for (const auto& dp : cp) {
            CHECK(is_double_pair_partition(dp));
            CHECK(dp.inner.size() == p / 2);
            for (const auto& jb : dp.inner.blocks()) {
                if (jb.size() == 1) {
                    CHECK(dp.outer.blocks()[jb[0] - 1].size() != 1);
                }
            }
        }
    }
    // Brute-force filter over all (I, J) for p = 4 and p = 6.
    for (int p : {4, 6}) {
        std::set<std::pair<oracle::Blocks, oracle::Blocks>> expect;
        for (const auto& outer : oracle::brute_set_partitions(p)) {
            for (const auto& inner : oracle::brute_set_partitions(static_cast<int>(outer.size()))) {
                if (double_pair_oracle(outer, inner)) {
                    expect.insert({outer, inner});
                }
            }
        }
        std::set<std::pair<oracle::Blocks, oracle::Blocks>> got;
        for (const auto& dp : enumerate_double_pair_partitions(p)) {
            got.insert({blocks_of(dp.outer), blocks_of(dp.inner)});
        }
        CHECK(got == expect);
    }
    CHECK_THROWS(enumerate_double_pair_partitions(10));
}

TEST_CASE("Phi and Psi") {
    const auto c2 = enumerate_double_pair_partitions(2);
    for (const auto& dp : c2) {
        const PairSelection sel = phi_bijection(dp);
        CHECK(sel.pairs == Partition::from_blocks({{1, 2}}));
        if (dp.singleton_union.empty()) {
            CHECK(sel.selected.empty());
        } else {
            CHECK(sel.selected == std::vector<std::vector<int>>{{1, 2}});
        }
    }
    for (int p : {2, 4, 6}) {
        std::set<std::pair<Partition, std::vector<std::vector<int>>>> images;
        for (const auto& dp : enumerate_double_pair_partitions(p)) {
            const PairSelection sel = phi_bijection(dp);
            CHECK(psi_inverse(sel) == dp);
            images.insert({sel.pairs, sel.selected});
        }
        std::size_t target = 0;
        for (const auto& pi : enumerate_pair_partitions(p)) {
            target += std::size_t{1} << pi.size();
        }
        CHECK(images.size() == target);
    }
}

TEST_CASE("Wick leading term") {
    const std::vector<std::vector<double>> ones(4, std::vector<double>(4, 1.0));
    CHECK(wick_leading_term(4, ones) == 3.0);
    const std::vector<std::vector<double>> three(3, std::vector<double>(3, 2.0));
    CHECK(wick_leading_term(3, three) == 0.0);
    auto m = ones;
    m[0][1] = m[1][0] = 2.0;
    m[2][3] = m[3][2] = 2.0;
    CHECK(wick_leading_term(4, m) == 6.0);
    auto bad = ones;
    bad[0][1] = 5.0;
    CHECK_THROWS(wick_leading_term(4, bad));
}

TEST_CASE("tuple decomposition") {
    CHECK(tuple_decomposition_check({0.5, 1.5, 2.5}, 2));
    CHECK(tuple_decomposition_check({7.0}, 3));
    std::mt19937_64 gen(100);
    std::uniform_int_distribution<int> size(2, 8);
    std::uniform_int_distribution<int> kd(2, 4);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> z(static_cast<std::size_t>(size(gen)));
        for (auto& x : z) {
            x = g(gen);
        }
        CHECK(tuple_decomposition_check(z, kd(gen)));
    }
    CHECK_THROWS(tuple_decomposition_check({1.0, 1.0}, 2));
    CHECK_THROWS(tuple_decomposition_check({1.0}, 5));
}
