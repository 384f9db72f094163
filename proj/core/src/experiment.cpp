#include "mixdeconv/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "mixdeconv/thread_pool.hpp"

namespace mixdeconv {

Preset preset_by_name(const std::string& name) {
    if (name == "scenario-2mix-victim") return {name, 1100, 100, 25.0};
    if (name == "scenario-2mix") return {name, 590, 90, 25.0};
    if (name == "scenario-3mix-victim") return {name, 350, 50, 70.0};
    throw std::invalid_argument("unknown preset: " + name);
}

RunOutcome run_case(const CaseData& cd, const CalibrationBundle& calib,
                    const DistanceMatrix& distances, const ChainConfig& config) {
    RunOutcome out;
    out.trace = run_chain(cd, calib, distances, config);
    out.report = bf_estimate(out.trace, cd, build_hypothesis_spaces(cd));
    return out;
}

namespace {

ProfileSeqs profile_to_seqs(const SourceProfile& p) {
    ProfileSeqs out;
    for (const auto& sl : p.loci) out[sl.locus.name] = sl.genotype;
    return out;
}

}  // namespace

SyntheticCase make_synthetic_case(const SyntheticSpec& spec, const CalibrationBundle& calib) {
    if (static_cast<int>(spec.p_mix.size()) != spec.k)
        throw std::invalid_argument("make_synthetic_case: p_mix must have k entries");

    const auto loci = make_sim_loci(spec.num_loci, spec.seed);

    std::vector<SourceProfile> contributors;
    contributors.reserve(spec.k);
    for (int i = 0; i < spec.k; ++i)
        contributors.push_back(
            gen_profile(loci, calib, spec.seed * 1000 + i + 1, spec.depth_mean, spec.depth_sd));

    MixSpec mix;
    mix.k = spec.k;
    mix.p_mix = spec.p_mix;
    mix.depth_mean = spec.depth_mean;
    mix.depth_sd = spec.depth_sd;
    mix.seed = spec.seed;
    auto mixture = synth_mixture(contributors, mix);

    SyntheticCase out;
    for (const auto& c : contributors) out.true_profiles.push_back(profile_to_seqs(c));

    if (spec.poi_present) {
        out.poi_seqs = out.true_profiles[0];
    } else {
        // a ghost profile from the same universe that contributed nothing
        const auto ghost = gen_profile(loci, calib, spec.seed * 1000 + spec.k + 7,
                                       spec.depth_mean, spec.depth_sd);
        out.poi_seqs = profile_to_seqs(ghost);
    }

    std::vector<std::pair<std::string, ProfileSeqs>> knowns;
    if (spec.victim_fixed)
        knowns.emplace_back("victim", out.true_profiles[spec.k - 1]);

    out.mixture = mixture;
    auto loaded =
        load_case(std::move(mixture), spec.catalog_threshold, knowns, out.poi_seqs, spec.k);
    out.case_data = std::move(loaded.case_data);
    out.warnings = std::move(loaded.warnings);
    return out;
}

std::vector<GridCell> run_grid(const GridSpec& spec, const CalibrationBundle& calib) {
    std::vector<GridCell> cells;
    for (double prop : spec.proportions)
        for (std::uint64_t seed : spec.seeds)
            for (bool present : spec.poi_present) {
                GridCell c;
                c.proportion = prop;
                c.seed = seed;
                c.poi_present = present;
                cells.push_back(c);
            }

    parallel_for(cells.size(), spec.threads, [&](std::size_t i) {
        GridCell& cell = cells[i];
        try {
            SyntheticSpec sc;
            sc.num_loci = spec.num_loci;
            sc.k = spec.k;
            sc.poi_present = cell.poi_present;
            sc.victim_fixed = spec.victim_fixed;
            sc.catalog_threshold = spec.catalog_threshold;
            sc.seed = cell.seed;
            sc.p_mix.assign(spec.k, 0.0);
            sc.p_mix[0] = cell.proportion;
            if (spec.k == 2) {
                sc.p_mix[1] = 1.0 - cell.proportion;
            } else {
                // remaining mass split with a mild tilt towards later slots
                const double rest = 1.0 - cell.proportion;
                double weight_sum = 0.0;
                for (int j = 1; j < spec.k; ++j) weight_sum += j;
                for (int j = 1; j < spec.k; ++j) sc.p_mix[j] = rest * j / weight_sum;
            }

            const SyntheticCase synth = make_synthetic_case(sc, calib);
            const DistanceMatrix dm = precompute_distances(synth.case_data, calib.costs);

            ChainConfig cfg;
            cfg.steps = spec.preset.steps;
            cfg.burn_in = spec.preset.burn_in;
            cfg.seed = cell.seed * 7919 + 13;
            ProposalConfig prop_cfg = ProposalConfig::defaults_for(spec.k);
            prop_cfg.alpha_p = spec.preset.alpha_p;
            cfg.proposal = prop_cfg;
            const RunOutcome outcome = run_case(synth.case_data, calib, dm, cfg);
            cell.report = outcome.report;
            for (const auto& w : synth.warnings) cell.report.warnings.push_back(w);
        } catch (const std::exception& e) {
            cell.failed = true;
            cell.error = e.what();
        }
    });
    return cells;
}

void save_grid_summary_tsv(std::span<const GridCell> cells, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write grid summary: " + path);
    out << "proportion\tseed\tpoi_present\tlog10_bf\tlog10_upper_bound\tacceptance_p\t"
           "acceptance_c\tstatus\n";
    char buf[64];
    for (const auto& c : cells) {
        out << c.proportion << '\t' << c.seed << '\t' << (c.poi_present ? 1 : 0) << '\t';
        if (c.failed) {
            out << "nan\tnan\tnan\tnan\tfailed: " << c.error << '\n';
            continue;
        }
        std::snprintf(buf, sizeof(buf), "%.6g", c.report.log10_bf);
        out << buf << '\t';
        std::snprintf(buf, sizeof(buf), "%.6g", c.report.log10_upper_bound);
        out << buf << '\t';
        std::snprintf(buf, sizeof(buf), "%.4f", c.report.acceptance_p);
        out << buf << '\t';
        std::snprintf(buf, sizeof(buf), "%.4f", c.report.acceptance_c);
        out << buf << "\tok\n";
    }
}

CalibrationBundle reference_bundle() {
    CalibrationBundle b;
    b.pareto = {2.668, 0.513, 0.683};
    b.edit_probs.p_fwd = 0.0020;
    b.edit_probs.p_back = 0.0040;
    b.edit_probs.p_ins = 0.0012;
    b.edit_probs.p_del = 0.0014;
    b.edit_probs.p_snp = 0.0030;
    b.costs = probs_to_costs(b.edit_probs, b.pareto);
    b.corpus_hash = "reference";
    return b;
}

}  // namespace mixdeconv
