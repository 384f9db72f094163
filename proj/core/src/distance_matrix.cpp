#include "mixdeconv/distance_matrix.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mixdeconv/thread_pool.hpp"

namespace mixdeconv {

namespace {

void fill_counts(DistanceMatrixLocus& out) {
    // continuity counts per parent allele over the observed sequences
    for (std::size_t j = 0; j < out.num_alleles; ++j) {
        std::vector<ArtifactObservation> obs(out.num_sequences);
        for (std::size_t m = 0; m < out.num_sequences; ++m)
            obs[m] = {out.distance[out.idx(j, m)], out.table[out.idx(j, m)]};
        const auto buckets = continuity_counts(obs);
        for (std::size_t m = 0; m < out.num_sequences; ++m) {
            const double d = out.distance[out.idx(j, m)];
            std::uint64_t c = 1;
            for (const auto& b : buckets)
                if (std::abs(d - b.distance) <= 1e-9 * std::max(1.0, std::abs(d))) {
                    c = b.count;
                    break;
                }
            out.count[out.idx(j, m)] = c;
        }
    }
}

}  // namespace

DistanceMatrix precompute_distances(const CaseData& c, const EditCosts& costs, int threads) {
    if (!costs.valid()) throw std::invalid_argument("precompute_distances: invalid costs");
    DistanceMatrix m;
    m.loci.resize(c.loci.size());

    struct Job {
        std::size_t locus, allele;
    };
    std::vector<Job> jobs;
    for (std::size_t l = 0; l < c.loci.size(); ++l) {
        auto& out = m.loci[l];
        out.locus_name = c.loci[l].reads.locus.name;
        out.num_alleles = c.loci[l].catalog.size();
        out.num_sequences = c.loci[l].reads.rows.size();
        out.distance.resize(out.num_alleles * out.num_sequences);
        out.table.resize(out.num_alleles * out.num_sequences);
        out.count.resize(out.num_alleles * out.num_sequences);
        for (std::size_t j = 0; j < out.num_alleles; ++j) jobs.push_back({l, j});
    }

    parallel_for(jobs.size(), threads, [&](std::size_t ji) {
        const auto [l, j] = jobs[ji];
        const auto& ld = c.loci[l];
        auto& out = m.loci[l];
        const std::string& allele = ld.catalog.alleles[j];
        for (std::size_t s = 0; s < out.num_sequences; ++s) {
            const auto r = rfl_distance(allele, ld.reads.rows[s].sequence,
                                        ld.reads.locus.primary_motif, costs,
                                        ld.reads.locus.num_motifs_kappa);
            out.distance[out.idx(j, s)] = r.distance;
            out.table[out.idx(j, s)] = r.table;
        }
    });

    for (auto& out : m.loci) fill_counts(out);
    return m;
}

void save_distance_matrix(const DistanceMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write distance cache: " + path);
    char buf[64];
    for (const auto& locus : m.loci) {
        for (std::size_t j = 0; j < locus.num_alleles; ++j) {
            for (std::size_t s = 0; s < locus.num_sequences; ++s) {
                const auto& t = locus.table[locus.idx(j, s)];
                std::snprintf(buf, sizeof(buf), "%.17g", locus.distance[locus.idx(j, s)]);
                out << locus.locus_name << '\t' << j << '\t' << s << '\t' << buf << '\t'
                    << t.n_ins << ',' << t.n_del << ',' << t.n_snp << ',' << t.n_fwd << ','
                    << t.n_back << '\n';
            }
        }
    }
    if (!out) throw std::runtime_error("write failed for distance cache: " + path);
}

DistanceMatrix load_distance_matrix(const std::string& path, const CaseData& c) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read distance cache: " + path);

    DistanceMatrix m;
    m.loci.resize(c.loci.size());
    for (std::size_t l = 0; l < c.loci.size(); ++l) {
        auto& out = m.loci[l];
        out.locus_name = c.loci[l].reads.locus.name;
        out.num_alleles = c.loci[l].catalog.size();
        out.num_sequences = c.loci[l].reads.rows.size();
        out.distance.assign(out.num_alleles * out.num_sequences,
                            std::numeric_limits<double>::quiet_NaN());
        out.table.resize(out.num_alleles * out.num_sequences);
        out.count.assign(out.num_alleles * out.num_sequences, 0);
    }

    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string name, dist_str, table_str;
        std::size_t j, s;
        if (!(ss >> name >> j >> s >> dist_str >> table_str))
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": malformed distance cache row");
        std::size_t l = m.loci.size();
        for (std::size_t i = 0; i < m.loci.size(); ++i)
            if (m.loci[i].locus_name == name) {
                l = i;
                break;
            }
        if (l == m.loci.size())
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": locus '" + name + "' not in case");
        auto& out = m.loci[l];
        if (j >= out.num_alleles || s >= out.num_sequences)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": index out of range for locus " + name);
        EditTable t;
        if (std::sscanf(table_str.c_str(), "%" SCNu32 ",%" SCNu32 ",%" SCNu32 ",%" SCNu32
                                           ",%" SCNu32,
                        &t.n_ins, &t.n_del, &t.n_snp, &t.n_fwd, &t.n_back) != 5)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad edit table");
        t.parent_len = static_cast<std::uint32_t>(c.loci[l].catalog.alleles[j].size());
        t.kappa = static_cast<std::uint32_t>(c.loci[l].reads.locus.num_motifs_kappa);
        out.distance[out.idx(j, s)] = std::strtod(dist_str.c_str(), nullptr);
        out.table[out.idx(j, s)] = t;
    }

    for (auto& out : m.loci) {
        for (double d : out.distance)
            if (std::isnan(d))
                throw std::runtime_error("distance cache " + path + " incomplete for locus " +
                                         out.locus_name);
        fill_counts(out);
    }
    return m;
}

}  // namespace mixdeconv
