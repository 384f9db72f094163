#include "mixdeconv/ecdf.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace mixdeconv {

namespace {

// Index of the designated parent row (unique maximal doc).
std::size_t parent_row(const LocusReadTable& table, const EcdfOptions& opts) {
    if (table.rows.empty()) throw std::invalid_argument("training locus with empty read table");
    std::size_t best = 0;
    bool tie = false;
    for (std::size_t r = 1; r < table.rows.size(); ++r) {
        if (table.rows[r].doc > table.rows[best].doc) {
            best = r;
            tie = false;
        } else if (table.rows[r].doc == table.rows[best].doc) {
            tie = true;
            if (opts.tie_break_lexicographic && table.rows[r].sequence < table.rows[best].sequence)
                best = r;
        }
    }
    if (tie && !opts.tie_break_lexicographic) {
        // re-check: only a tie at the maximum is ambiguous
        int at_max = 0;
        for (const auto& r : table.rows)
            if (r.doc == table.rows[best].doc) ++at_max;
        if (at_max > 1)
            throw std::runtime_error("ambiguous parent at locus " + table.locus.name +
                                     ": tied maximal doc (use the lexicographic tie-break)");
    }
    return best;
}

}  // namespace

AveragedEcdf build_averaged_ecdf(std::span<const LocusReadTable> training, const EditCosts& costs,
                                 const EcdfOptions& opts) {
    if (training.empty()) throw std::invalid_argument("build_averaged_ecdf: empty training set");

    // Per-locus jump maps: attained distance -> cdf value at that distance.
    // Distances are canonical per-table cost sums, so equal edit tables give
    // bitwise-equal support points across loci.
    std::vector<std::map<double, double>> jumps;
    jumps.reserve(training.size());

    for (const auto& table : training) {
        const std::size_t pr = parent_row(table, opts);
        const std::string& parent = table.rows[pr].sequence;
        std::map<double, std::int64_t> doc_at;
        std::int64_t total = 0;
        for (const auto& row : table.rows) {
            const auto res = rfl_distance(parent, row.sequence, table.locus.primary_motif, costs,
                                          table.locus.num_motifs_kappa);
            doc_at[res.distance] += row.doc;
            total += row.doc;
        }
        std::map<double, double> cdf;
        std::int64_t cum = 0;
        for (const auto& [d, doc] : doc_at) {
            cum += doc;
            cdf[d] = static_cast<double>(cum) / static_cast<double>(total);
        }
        jumps.push_back(std::move(cdf));
    }

    std::map<double, std::pair<double, int>> sums;  // t -> (sum of F_i(t), |B_t|)
    for (const auto& cdf : jumps)
        for (const auto& [t, v] : cdf) {
            auto& s = sums[t];
            s.first += v;
            s.second += 1;
        }

    AveragedEcdf out;
    out.support_x.reserve(sums.size());
    out.values_y.reserve(sums.size());
    for (const auto& [t, sv] : sums) {
        out.support_x.push_back(t);
        out.values_y.push_back(sv.first / sv.second);
    }
    return out;
}

}  // namespace mixdeconv
