#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mixdeconv {

bool is_dna(const std::string& seq);

/// An STR marker: name, primary repeat motif and the number of distinct
/// motifs observed to stutter at this marker (feeds the artifact counting).
struct Locus {
    std::string name;
    std::string primary_motif;
    int num_motifs_kappa = 1;

    bool valid() const {
        return !name.empty() && !primary_motif.empty() && is_dna(primary_motif) &&
               num_motifs_kappa >= 1;
    }
};

/// One observed unique sequence and how many times it was read.
struct ReadRow {
    std::string sequence;
    std::int64_t doc = 0;  // depth of coverage
};

/// All unique sequences observed at one locus.
struct LocusReadTable {
    Locus locus;
    std::vector<ReadRow> rows;

    std::int64_t total_doc() const {
        std::int64_t t = 0;
        for (const auto& r : rows) t += r.doc;
        return t;
    }
};

/// Candidate parent alleles at one locus, in a fixed order. Indices into
/// `alleles` are the allele ids used by genotypes and distance matrices.
struct AlleleCatalog {
    Locus locus;
    std::vector<std::string> alleles;

    std::size_t size() const { return alleles.size(); }
    std::optional<std::size_t> index_of(const std::string& seq) const;
};

/// Unordered pair of catalog indices; a == b means homozygous.
struct Genotype {
    std::size_t a = 0;
    std::size_t b = 0;

    Genotype() = default;
    Genotype(std::size_t x, std::size_t y) : a(x < y ? x : y), b(x < y ? y : x) {}
    bool homozygous() const { return a == b; }
    bool operator==(const Genotype& o) const { return a == o.a && b == o.b; }
};

struct LocusData {
    LocusReadTable reads;
    AlleleCatalog catalog;
};

/// A full case: per-locus read tables and catalogs, the assumed number of
/// contributors, fixed known-contributor profiles, and the POI profile.
/// Immutable after construction; safe to share across threads read-only.
struct CaseData {
    std::vector<LocusData> loci;
    int num_contributors_k = 2;
    // label -> genotype per locus (indexed like `loci`)
    std::vector<std::pair<std::string, std::vector<Genotype>>> known_profiles;
    std::vector<Genotype> poi_profile;  // one per locus

    std::size_t num_loci() const { return loci.size(); }
    int num_known() const { return static_cast<int>(known_profiles.size()); }
    int num_unknown() const { return num_contributors_k - num_known(); }
};

struct Diagnostic {
    std::string locus;
    long row = -1;  // -1 when not row specific
    std::string message;
};

/// Returns an empty list iff all type invariants hold.
std::vector<Diagnostic> validate_case(const CaseData& c);

}  // namespace mixdeconv
