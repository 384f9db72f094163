#include "mixdeconv/mixsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <stdexcept>

#include "mixdeconv/pareto.hpp"
#include "mixdeconv/rfl.hpp"
#include "mixdeconv/rng.hpp"

namespace mixdeconv {

namespace {

const char kBases[] = {'A', 'C', 'G', 'T'};

std::vector<std::size_t> motif_occurrences(const std::string& s, const std::string& motif) {
    std::vector<std::size_t> out;
    if (s.size() < motif.size()) return out;
    for (std::size_t i = 0; i + motif.size() <= s.size(); ++i)
        if (s.compare(i, motif.size(), motif) == 0) out.push_back(i);
    return out;
}

struct SimTable {
    std::uint32_t n_ins = 0, n_del = 0, n_snp = 0, n_fwd = 0, n_back = 0;

    EditTable as_edit_table(std::uint32_t parent_len, std::uint32_t kappa) const {
        EditTable t;
        t.n_ins = n_ins;
        t.n_del = n_del;
        t.n_snp = n_snp;
        t.n_fwd = n_fwd;
        t.n_back = n_back;
        t.parent_len = parent_len;
        t.kappa = kappa;
        return t;
    }
};

// Scripts of at most two edits; insert+delete and fwd+back mixtures are
// excluded (their net effect collapses towards shorter scripts).
std::vector<SimTable> candidate_tables() {
    std::vector<SimTable> out;
    const int kinds = 5;  // I D S F B
    auto bump = [](SimTable& t, int kind) {
        switch (kind) {
            case 0: ++t.n_ins; break;
            case 1: ++t.n_del; break;
            case 2: ++t.n_snp; break;
            case 3: ++t.n_fwd; break;
            default: ++t.n_back; break;
        }
    };
    for (int a = 0; a < kinds; ++a) {
        SimTable t;
        bump(t, a);
        out.push_back(t);
    }
    for (int a = 0; a < kinds; ++a) {
        for (int b = a; b < kinds; ++b) {
            if ((a == 0 && b == 1) || (a == 3 && b == 4)) continue;
            SimTable t;
            bump(t, a);
            bump(t, b);
            out.push_back(t);
        }
    }
    return out;
}

bool statically_feasible(const SimTable& t, const std::string& parent, const std::string& motif) {
    if (t.n_del >= parent.size()) return false;
    const auto occ = motif_occurrences(parent, motif);
    if ((t.n_fwd > 0 || t.n_back > 0) && occ.empty()) return false;
    if (t.n_back >= 2) {
        bool ok = false;
        for (std::size_t o : occ) {
            std::string s = parent;
            s.erase(o, motif.size());
            if (!motif_occurrences(s, motif).empty()) {
                ok = true;
                break;
            }
        }
        if (!ok) return false;
    }
    if (t.n_back == 1 && t.n_del > 0 && parent.size() <= motif.size()) return false;
    return true;
}

bool apply_op(std::string& s, int kind, const std::string& motif, CounterRng& rng) {
    switch (kind) {
        case 0: {  // insert
            const std::size_t pos = rng.uniform_below(s.size() + 1);
            s.insert(s.begin() + pos, kBases[rng.uniform_below(4)]);
            return true;
        }
        case 1: {  // delete
            if (s.empty()) return false;
            s.erase(rng.uniform_below(s.size()), 1);
            return !s.empty();
        }
        case 2: {  // snp
            if (s.empty()) return false;
            const std::size_t pos = rng.uniform_below(s.size());
            char c;
            do {
                c = kBases[rng.uniform_below(4)];
            } while (c == s[pos]);
            s[pos] = c;
            return true;
        }
        case 3: {  // forward stutter: duplicate one existing copy
            const auto occ = motif_occurrences(s, motif);
            if (occ.empty()) return false;
            const std::size_t o = occ[rng.uniform_below(occ.size())];
            s.insert(o, motif);
            return true;
        }
        default: {  // back stutter
            const auto occ = motif_occurrences(s, motif);
            if (occ.empty()) return false;
            s.erase(occ[rng.uniform_below(occ.size())], motif.size());
            return !s.empty();
        }
    }
}

std::string apply_table(const SimTable& t, const std::string& parent, const std::string& motif,
                        CounterRng& rng) {
    std::vector<int> ops;
    for (std::uint32_t i = 0; i < t.n_ins; ++i) ops.push_back(0);
    for (std::uint32_t i = 0; i < t.n_del; ++i) ops.push_back(1);
    for (std::uint32_t i = 0; i < t.n_snp; ++i) ops.push_back(2);
    for (std::uint32_t i = 0; i < t.n_fwd; ++i) ops.push_back(3);
    for (std::uint32_t i = 0; i < t.n_back; ++i) ops.push_back(4);

    for (int attempt = 0; attempt < 50; ++attempt) {
        // Fisher-Yates order of application
        for (std::size_t i = ops.size(); i > 1; --i)
            std::swap(ops[i - 1], ops[rng.uniform_below(i)]);
        std::string s = parent;
        bool ok = true;
        for (int op : ops)
            if (!apply_op(s, op, motif, rng)) {
                ok = false;
                break;
            }
        if (ok && s != parent) return s;
    }
    return parent;  // degenerate fallback, counts as distance zero
}

// Per-parent machinery: the distance lattice, the cell distribution and
// the table choices (weighted by positioned-edit counts) per cell.
struct ParentArtifactModel {
    std::string parent;
    std::vector<double> lattice;             // positive attainable distances
    std::vector<double> cell_mass;           // index 0 = zero atom
    std::vector<std::vector<SimTable>> cell_tables;
    std::vector<std::vector<double>> cell_weights;

    ParentArtifactModel(const std::string& parent_seq, const Locus& locus,
                        const CalibrationBundle& calib)
        : parent(parent_seq) {
        const auto cands = candidate_tables();
        std::vector<std::pair<double, SimTable>> feasible;
        for (const auto& t : cands) {
            if (!statically_feasible(t, parent, locus.primary_motif)) continue;
            const double cost =
                t.as_edit_table(static_cast<std::uint32_t>(parent.size()),
                                static_cast<std::uint32_t>(locus.num_motifs_kappa))
                    .cost_under(calib.costs);
            feasible.emplace_back(cost, t);
        }
        std::sort(feasible.begin(), feasible.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        for (const auto& [cost, t] : feasible) {
            if (lattice.empty() || cost - lattice.back() > 1e-9 * std::max(1.0, cost)) {
                lattice.push_back(cost);
                cell_tables.emplace_back();
                cell_weights.emplace_back();
            }
            cell_tables.back().push_back(t);
            cell_weights.back().push_back(static_cast<double>(
                ntable(t.as_edit_table(static_cast<std::uint32_t>(parent.size()),
                                       static_cast<std::uint32_t>(locus.num_motifs_kappa)))));
        }
        cell_mass = snapped_cell_masses(lattice, calib.pareto);
    }

    std::string sample_read(const Locus& locus, CounterRng& rng) const {
        const std::size_t cell = rng.categorical(cell_mass);
        if (cell == 0) return parent;
        const auto& tables = cell_tables[cell - 1];
        const auto& weights = cell_weights[cell - 1];
        const SimTable& t = tables[weights.size() > 1 ? rng.categorical(weights) : 0];
        return apply_table(t, parent, locus.primary_motif, rng);
    }
};

std::string random_flank(CounterRng& rng, std::size_t min_len, std::size_t max_len) {
    const std::size_t len = min_len + rng.uniform_below(max_len - min_len + 1);
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s.push_back(kBases[rng.uniform_below(4)]);
    return s;
}

}  // namespace

std::vector<double> attainable_distances(const std::string& parent, const Locus& locus,
                                         const EditCosts& costs) {
    std::vector<double> out;
    for (const auto& t : candidate_tables()) {
        if (!statically_feasible(t, parent, locus.primary_motif)) continue;
        out.push_back(t.as_edit_table(static_cast<std::uint32_t>(parent.size()),
                                      static_cast<std::uint32_t>(locus.num_motifs_kappa))
                          .cost_under(costs));
    }
    std::sort(out.begin(), out.end());
    std::vector<double> uniq;
    for (double d : out)
        if (uniq.empty() || d - uniq.back() > 1e-9 * std::max(1.0, d)) uniq.push_back(d);
    return uniq;
}

std::vector<double> snapped_cell_masses(std::span<const double> lattice,
                                        const ParetoParams& params) {
    if (lattice.empty()) return {1.0};
    const std::size_t n = lattice.size();
    std::vector<double> upper(n);
    for (std::size_t i = 0; i + 1 < n; ++i) upper[i] = 0.5 * (lattice[i] + lattice[i + 1]);
    upper[n - 1] = n >= 2 ? lattice[n - 1] + (lattice[n - 1] - upper[n - 2])
                          : 1.5 * lattice[n - 1];

    auto cont_cdf = [&](double d) {
        return 1.0 - std::pow(1.0 + params.rate_lambda * d, -params.shape);
    };
    const double total = cont_cdf(upper[n - 1]);
    std::vector<double> mass(n + 1);
    mass[0] = params.zero_mass_rho;
    double lo = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mass[i + 1] = (1.0 - params.zero_mass_rho) * (cont_cdf(upper[i]) - cont_cdf(lo)) / total;
        lo = upper[i];
    }
    return mass;
}

std::vector<LocusSimModel> make_sim_loci(std::size_t count, std::uint64_t seed) {
    static const std::vector<std::pair<std::string, int>> kMotifPool = {
        {"TCTA", 1}, {"AACG", 1}, {"AGAT", 2}, {"TAGC", 1}, {"GATA", 1},
        {"ATCT", 2}, {"CTTT", 1}, {"TGCC", 1},
    };
    std::vector<LocusSimModel> out(count);
    for (std::size_t l = 0; l < count; ++l) {
        CounterRng rng(seed, 1'000'000 + l);
        auto& model = out[l];
        const auto& [motif, kappa] = kMotifPool[l % kMotifPool.size()];
        char name[32];
        std::snprintf(name, sizeof(name), "LOC%02zu", l + 1);
        model.locus.name = name;
        model.locus.primary_motif = motif;
        model.locus.num_motifs_kappa = kappa;
        const std::string flank5 = random_flank(rng, 3, 5);
        const std::string flank3 = random_flank(rng, 3, 5);
        const int repeat_lo = 7 + static_cast<int>(rng.uniform_below(2));
        for (int r = 0; r < 6; ++r) {
            std::string allele = flank5;
            for (int i = 0; i < repeat_lo + r; ++i) allele += motif;
            allele += flank3;
            model.allele_universe.push_back(std::move(allele));
        }
    }
    return out;
}

SourceProfile gen_profile(std::span<const LocusSimModel> loci, const CalibrationBundle& calib,
                          std::uint64_t seed, double depth_mean, double depth_sd) {
    SourceProfile profile;
    profile.loci.resize(loci.size());
    for (std::size_t l = 0; l < loci.size(); ++l) {
        CounterRng rng(seed, 2'000'000 + l);
        auto& sim = profile.loci[l];
        sim.locus = loci[l].locus;
        const auto& universe = loci[l].allele_universe;
        sim.genotype.first = universe[rng.uniform_below(universe.size())];
        sim.genotype.second = universe[rng.uniform_below(universe.size())];

        const ParentArtifactModel model_a(sim.genotype.first, sim.locus, calib);
        std::optional<ParentArtifactModel> model_b;
        if (sim.genotype.second != sim.genotype.first)
            model_b.emplace(sim.genotype.second, sim.locus, calib);

        const long depth =
            std::max<long>(1, std::lround(depth_mean + depth_sd * rng.normal()));
        std::map<std::string, std::int64_t> doc;
        for (long i = 0; i < depth; ++i) {
            const bool first = !model_b || rng.uniform01() < 0.5;
            const auto& m = first ? model_a : *model_b;
            doc[m.sample_read(sim.locus, rng)] += 1;
        }
        sim.reads.reserve(doc.size());
        for (const auto& [seq, n] : doc) sim.reads.push_back({seq, n});
        std::stable_sort(sim.reads.begin(), sim.reads.end(),
                         [](const ReadRow& a, const ReadRow& b) { return a.doc > b.doc; });
    }
    return profile;
}

std::vector<LocusReadTable> synth_mixture(std::span<const SourceProfile> profiles,
                                          const MixSpec& spec) {
    if (profiles.empty()) throw std::invalid_argument("synth_mixture: no profiles");
    if (static_cast<int>(profiles.size()) != spec.k ||
        spec.p_mix.size() != profiles.size())
        throw std::invalid_argument("synth_mixture: k, profiles and p_mix must agree");
    double sum = 0.0;
    for (double v : spec.p_mix) {
        if (!(v >= 0.0)) throw std::invalid_argument("synth_mixture: negative proportion");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("synth_mixture: proportions must sum to 1");

    const std::size_t num_loci = profiles[0].loci.size();
    for (const auto& p : profiles) {
        if (p.loci.size() != num_loci)
            throw std::invalid_argument("synth_mixture: profiles cover different loci");
        for (std::size_t l = 0; l < num_loci; ++l)
            if (p.loci[l].locus.name != profiles[0].loci[l].locus.name)
                throw std::invalid_argument("synth_mixture: locus order mismatch between profiles");
    }

    std::vector<LocusReadTable> out(num_loci);
    for (std::size_t l = 0; l < num_loci; ++l) {
        CounterRng rng(spec.seed, 3'000'000 + l);
        const long depth =
            std::max<long>(1, std::lround(spec.depth_mean + spec.depth_sd * rng.normal()));

        // multinomial split of the depth across contributors
        std::vector<long> share(profiles.size(), 0);
        for (long i = 0; i < depth; ++i) ++share[rng.categorical(spec.p_mix)];

        std::map<std::string, std::int64_t> doc;
        for (std::size_t i = 0; i < profiles.size(); ++i) {
            const auto& reads = profiles[i].loci[l].reads;
            std::vector<double> weights(reads.size());
            for (std::size_t r = 0; r < reads.size(); ++r)
                weights[r] = static_cast<double>(reads[r].doc);
            for (long n = 0; n < share[i]; ++n)
                doc[reads[rng.categorical(weights)].sequence] += 1;
        }

        out[l].locus = profiles[0].loci[l].locus;
        out[l].rows.reserve(doc.size());
        for (const auto& [seq, n] : doc) out[l].rows.push_back({seq, n});
        std::stable_sort(out[l].rows.begin(), out[l].rows.end(),
                         [](const ReadRow& a, const ReadRow& b) { return a.doc > b.doc; });
    }
    return out;
}

}  // namespace mixdeconv
