#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mixdeconv {

/// Per-edit costs in RFL distance units. `normalized()` rescales so the
/// back-stutter cost is exactly 1, the convention used everywhere else.
struct EditCosts {
    double cost_insert = 1.0;
    double cost_delete = 1.0;
    double cost_snp = 1.0;
    double cost_forward_stutter = 1.0;
    double cost_back_stutter = 1.0;

    bool valid() const {
        return cost_insert > 0 && cost_delete > 0 && cost_snp > 0 &&
               cost_forward_stutter > 0 && cost_back_stutter > 0;
    }
    EditCosts normalized() const {
        EditCosts c = *this;
        const double s = cost_back_stutter;
        c.cost_insert /= s;
        c.cost_delete /= s;
        c.cost_snp /= s;
        c.cost_forward_stutter /= s;
        c.cost_back_stutter = 1.0;
        return c;
    }
};

/// Edit-type counts of one minimizing script, plus the parent length and
/// motif multiplicity needed by the artifact-space counting.
struct EditTable {
    std::uint32_t n_ins = 0;
    std::uint32_t n_del = 0;
    std::uint32_t n_snp = 0;
    std::uint32_t n_fwd = 0;
    std::uint32_t n_back = 0;
    std::uint32_t parent_len = 0;
    std::uint32_t kappa = 1;

    std::uint32_t total_edits() const { return n_ins + n_del + n_snp + n_fwd + n_back; }
    bool all_zero() const { return total_edits() == 0; }

    // Cost recomputed in a fixed term order so equal tables produce
    // bit-identical distances regardless of the DP path taken.
    double cost_under(const EditCosts& c) const {
        return n_ins * c.cost_insert + n_del * c.cost_delete + n_snp * c.cost_snp +
               n_fwd * c.cost_forward_stutter + n_back * c.cost_back_stutter;
    }

    bool operator==(const EditTable& o) const {
        return n_ins == o.n_ins && n_del == o.n_del && n_snp == o.n_snp && n_fwd == o.n_fwd &&
               n_back == o.n_back;
    }
};

struct RflResult {
    double distance = 0.0;
    EditTable table;
};

/// Restricted Forensic Levenshtein distance from `parent` to `child`.
///
/// Allowed edits: single-character insert/delete/substitute, deletion of one
/// whole copy of `motif` where the parent substring equals the motif (back
/// stutter), and insertion of one whole copy of `motif` adjacent to an
/// existing copy (forward stutter). Computed by dynamic programming over
/// (parent prefix, child prefix); ties broken by fewer total edits, then the
/// lexicographically smallest (back, fwd, del, ins, snp) table, so the
/// returned table is deterministic.
RflResult rfl_distance(const std::string& parent, const std::string& child,
                       const std::string& motif, const EditCosts& costs, std::uint32_t kappa = 1);

/// Plain unit-cost Levenshtein distance (used for bounds and sanity checks).
std::size_t levenshtein(const std::string& a, const std::string& b);

/// Number of distinct positioned edit combinations realizing this table:
/// choose(LP, I+d+S) * 3^S * 4^I * choose(kappa+F-1, F) * choose(kappa+B-1, B).
/// Throws std::overflow_error instead of wrapping.
std::uint64_t ntable(const EditTable& t);

struct ArtifactObservation {
    double distance = 0.0;
    EditTable table;
};

struct ContinuityBucket {
    double distance = 0.0;
    std::uint64_t count = 1;
};

/// Continuity-correction counts for artifacts of one parent allele: for each
/// attained distance, the sum of ntable over the distinct edit tables realized
/// at that distance (duplicate tables counted once, never below 1). Distances
/// within a relative 1e-9 are treated as equal.
std::vector<ContinuityBucket> continuity_counts(std::vector<ArtifactObservation> observations);

}  // namespace mixdeconv
