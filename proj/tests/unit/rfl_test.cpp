#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixdeconv/rfl.hpp"
#include "mixdeconv/rng.hpp"
#include "oracles.hpp"

using namespace mixdeconv;

namespace {

EditCosts test_costs() {
    EditCosts c;
    c.cost_insert = 2.9;
    c.cost_delete = 3.1;
    c.cost_snp = 1.8;
    c.cost_forward_stutter = 1.4;
    c.cost_back_stutter = 1.0;
    return c;
}

std::string repeat_allele(const std::string& left, const std::string& motif, int copies,
                          const std::string& right) {
    std::string s = left;
    for (int i = 0; i < copies; ++i) s += motif;
    return s + right;
}

std::string random_dna(CounterRng& rng, std::size_t min_len, std::size_t max_len) {
    static const char bases[] = {'A', 'C', 'G', 'T'};
    const std::size_t len = min_len + rng.uniform_below(max_len - min_len + 1);
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s.push_back(bases[rng.uniform_below(4)]);
    return s;
}

}  // namespace

TEST_CASE("rfl identity") {
    const auto costs = test_costs();
    const std::string allele = repeat_allele("AC", "AACG", 6, "TCCG");
    const auto r = rfl_distance(allele, allele, "AACG", costs);
    CHECK(r.distance == 0.0);
    CHECK(r.table.all_zero());
    CHECK(r.table.parent_len == allele.size());
}

TEST_CASE("rfl back stutter of a repeat allele costs exactly 1") {
    const auto costs = test_costs();
    const std::string parent = repeat_allele("AC", "AACG", 6, "TCCG");
    const std::string child = repeat_allele("AC", "AACG", 5, "TCCG");
    const auto r = rfl_distance(parent, child, "AACG", costs);
    CHECK(r.distance == doctest::Approx(1.0));
    CHECK(r.table.n_back == 1);
    CHECK(r.table.total_edits() == 1);
}

TEST_CASE("rfl single trailing insertion") {
    const auto costs = test_costs();
    const std::string parent = repeat_allele("AC", "AACG", 6, "TCCG");
    const std::string child = parent + "G";
    const auto r = rfl_distance(parent, child, "AACG", costs);
    CHECK(r.distance == doctest::Approx(costs.cost_insert));
    CHECK(r.table.n_ins == 1);
    CHECK(r.table.total_edits() == 1);
    // the oracle agrees that a single insertion is minimal
    const double oracle = testsup::script_min_cost(parent, child, "AACG", costs, 2);
    CHECK(r.distance == doctest::Approx(oracle));
}

TEST_CASE("rfl forward stutter needs an adjacent copy") {
    const auto costs = test_costs();
    const std::string parent = repeat_allele("AC", "AACG", 3, "TC");
    const std::string child = repeat_allele("AC", "AACG", 4, "TC");
    const auto r = rfl_distance(parent, child, "AACG", costs);
    CHECK(r.distance == doctest::Approx(costs.cost_forward_stutter));
    CHECK(r.table.n_fwd == 1);

    // inserting the motif into a motif-free string must pay per character
    const auto isolated = rfl_distance("TTTT", "TTAACGTT", "AACG", costs);
    CHECK(isolated.table.n_fwd == 0);
    CHECK(isolated.distance > costs.cost_forward_stutter);
}

TEST_CASE("rfl distance equals the script oracle on exhaustive <=3-edit cases") {
    const auto costs = test_costs();
    const std::vector<std::pair<std::string, std::string>> parents = {
        {"ACACAC", "AC"}, {"AACGAACG", "AACG"}, {"TAGATAGA", "TAGA"},
        {"GATTACA", "TAC"}, {"TTTT", "AC"},
    };

    std::size_t checked = 0;
    for (const auto& [parent, m] : parents) {
        const auto children = testsup::enumerate_children(parent, m, costs, 2);
        for (const auto& [child, gen_cost] : children) {
            if (child.empty() || child.size() > 14) continue;
            const auto r = rfl_distance(parent, child, m, costs);
            const int budget = std::max<int>(4, static_cast<int>(r.table.total_edits()));
            if (budget > 6) continue;
            const double oracle = testsup::script_min_cost(parent, child, m, costs, budget);
            CHECK(r.distance == doctest::Approx(oracle).epsilon(1e-12));
            ++checked;
        }
    }
    CHECK(checked > 2000);
}

TEST_CASE("rfl axioms and bounds on random strings") {
    const auto costs = test_costs();
    CounterRng rng(20240817);
    const std::string motif = "TCTA";
    const double max_char_cost =
        std::max({costs.cost_insert, costs.cost_delete, costs.cost_snp});

    for (int trial = 0; trial < 3000; ++trial) {
        const std::string x = random_dna(rng, 1, 20);
        const std::string y = random_dna(rng, 1, 20);
        const std::string z = random_dna(rng, 1, 20);
        const double dxy = rfl_distance(x, y, motif, costs).distance;
        const double dyz = rfl_distance(y, z, motif, costs).distance;
        const double dxz = rfl_distance(x, z, motif, costs).distance;
        if (x == y)
            CHECK(dxy == 0.0);
        else
            CHECK(dxy > 0.0);
        CHECK(dxz <= dxy + dyz + 1e-9);
        CHECK(dxy <= static_cast<double>(levenshtein(x, y)) * max_char_cost + 1e-9);
    }
}

TEST_CASE("rfl cost monotonicity") {
    const auto base = test_costs();
    CounterRng rng(77);
    const std::string motif = "AACG";
    for (int trial = 0; trial < 300; ++trial) {
        const std::string x = random_dna(rng, 4, 16);
        const std::string y = random_dna(rng, 4, 16);
        const double d0 = rfl_distance(x, y, motif, base).distance;
        EditCosts bumped = base;
        switch (trial % 5) {
            case 0: bumped.cost_insert *= 1.5; break;
            case 1: bumped.cost_delete *= 1.5; break;
            case 2: bumped.cost_snp *= 1.5; break;
            case 3: bumped.cost_forward_stutter *= 1.5; break;
            default: bumped.cost_back_stutter *= 1.5; break;
        }
        CHECK(rfl_distance(x, y, motif, bumped).distance >= d0 - 1e-12);
    }
}

TEST_CASE("ntable closed forms") {
    EditTable t;
    t.parent_len = 10;
    t.kappa = 1;
    CHECK(ntable(t) == 1);  // empty products

    t.n_snp = 1;
    CHECK(ntable(t) == 30);  // C(10,1) * 3

    t = EditTable{};
    t.parent_len = 10;
    t.kappa = 1;
    t.n_back = 1;
    CHECK(ntable(t) == 1);  // C(1,1)

    t = EditTable{};
    t.parent_len = 10;
    t.kappa = 2;
    t.n_back = 1;
    CHECK(ntable(t) == 2);  // C(2,1)

    t = EditTable{};
    t.parent_len = 12;
    t.kappa = 1;
    t.n_ins = 1;
    t.n_snp = 1;
    // C(12,2) * 3 * 4
    CHECK(ntable(t) == 66u * 12u);
}

TEST_CASE("ntable overflow is an error, not a wrap") {
    EditTable t;
    t.parent_len = 4000000000u;
    t.kappa = 1;
    t.n_ins = 8;
    CHECK_THROWS_AS(ntable(t), std::overflow_error);
}

TEST_CASE("continuity counts deduplicate identical tables") {
    EditTable snp;
    snp.parent_len = 10;
    snp.kappa = 1;
    snp.n_snp = 1;

    EditTable ins;
    ins.parent_len = 10;
    ins.kappa = 1;
    ins.n_ins = 1;

    SUBCASE("single artifact") {
        const auto buckets = continuity_counts({{1.8, snp}});
        REQUIRE(buckets.size() == 1);
        CHECK(buckets[0].count == ntable(snp));
    }
    SUBCASE("identical tables counted once") {
        const auto buckets = continuity_counts({{1.8, snp}, {1.8, snp}});
        REQUIRE(buckets.size() == 1);
        CHECK(buckets[0].count == ntable(snp));
    }
    SUBCASE("distinct tables at one distance add up") {
        const auto buckets = continuity_counts({{1.8, snp}, {1.8, ins}});
        REQUIRE(buckets.size() == 1);
        CHECK(buckets[0].count == ntable(snp) + ntable(ins));
    }
    SUBCASE("distances split buckets") {
        const auto buckets = continuity_counts({{1.8, snp}, {2.9, ins}});
        REQUIRE(buckets.size() == 2);
        CHECK(buckets[0].distance == doctest::Approx(1.8));
        CHECK(buckets[1].count == ntable(ins));
    }
}
