#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixdeconv/dna.hpp"
#include "mixdeconv/rfl.hpp"

namespace mixdeconv {

/// Distances, edit tables and continuity counts for every
/// (catalog allele, observed sequence) pair at one locus. Row-major
/// with allele as the row.
struct DistanceMatrixLocus {
    std::string locus_name;
    std::size_t num_alleles = 0;
    std::size_t num_sequences = 0;
    std::vector<double> distance;
    std::vector<EditTable> table;
    std::vector<std::uint64_t> count;

    std::size_t idx(std::size_t allele, std::size_t seq) const {
        return allele * num_sequences + seq;
    }
};

struct DistanceMatrix {
    std::vector<DistanceMatrixLocus> loci;
};

/// Deterministic full distance/count matrix for a case; pairs are
/// independent so the work parallelizes freely.
DistanceMatrix precompute_distances(const CaseData& c, const EditCosts& costs, int threads = 1);

/// TSV persistence: locus, allele index, sequence index, distance
/// (round-trip exact), then the edit table as "I,d,S,F,B".
void save_distance_matrix(const DistanceMatrix& m, const std::string& path);

/// Loads a cache written by save_distance_matrix, validating it against
/// the case (locus names and shapes) and rebuilding continuity counts.
DistanceMatrix load_distance_matrix(const std::string& path, const CaseData& c);

}  // namespace mixdeconv
