#include "mixdeconv/dna.hpp"

#include <algorithm>
#include <set>

namespace mixdeconv {

bool is_dna(const std::string& seq) {
    return std::all_of(seq.begin(), seq.end(), [](char c) {
        return c == 'A' || c == 'C' || c == 'G' || c == 'T';
    });
}

std::optional<std::size_t> AlleleCatalog::index_of(const std::string& seq) const {
    for (std::size_t i = 0; i < alleles.size(); ++i)
        if (alleles[i] == seq) return i;
    return std::nullopt;
}

namespace {

void check_genotype(const std::vector<Genotype>& profile, const CaseData& c,
                    const std::string& who, std::vector<Diagnostic>& out) {
    if (profile.size() != c.loci.size()) {
        out.push_back({"", -1, who + ": profile covers " + std::to_string(profile.size()) +
                                    " loci, case has " + std::to_string(c.loci.size())});
        return;
    }
    for (std::size_t l = 0; l < profile.size(); ++l) {
        const auto J = c.loci[l].catalog.size();
        if (profile[l].a >= J || profile[l].b >= J)
            out.push_back({c.loci[l].catalog.locus.name, -1,
                           who + ": genotype index out of range (J=" + std::to_string(J) + ")"});
    }
}

}  // namespace

std::vector<Diagnostic> validate_case(const CaseData& c) {
    std::vector<Diagnostic> out;
    for (const auto& ld : c.loci) {
        const std::string& name = ld.reads.locus.name;
        if (!ld.reads.locus.valid())
            out.push_back({name, -1, "invalid locus (empty/non-ACGT motif or kappa < 1)"});
        if (ld.reads.rows.empty()) out.push_back({name, -1, "empty read table"});
        std::set<std::string> seen;
        for (std::size_t r = 0; r < ld.reads.rows.size(); ++r) {
            const auto& row = ld.reads.rows[r];
            if (row.doc < 1)
                out.push_back({name, static_cast<long>(r), "doc < 1"});
            if (!is_dna(row.sequence) || row.sequence.empty())
                out.push_back({name, static_cast<long>(r), "sequence not a nonempty ACGT string"});
            if (!seen.insert(row.sequence).second)
                out.push_back({name, static_cast<long>(r), "duplicate sequence row"});
        }
        if (ld.catalog.alleles.empty()) out.push_back({name, -1, "empty allele catalog"});
        std::set<std::string> cat(ld.catalog.alleles.begin(), ld.catalog.alleles.end());
        if (cat.size() != ld.catalog.alleles.size())
            out.push_back({name, -1, "duplicate catalog allele"});
        if (ld.catalog.locus.name != name)
            out.push_back({name, -1, "catalog/read table locus mismatch"});
    }
    if (c.num_contributors_k < 1 + c.num_known())
        out.push_back({"", -1, "num_contributors_k must be at least 1 + number of known profiles"});
    for (const auto& [label, prof] : c.known_profiles) check_genotype(prof, c, label, out);
    check_genotype(c.poi_profile, c, "poi", out);
    return out;
}

}  // namespace mixdeconv
