#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixdeconv/bayes_factor.hpp"
#include "mixdeconv/calibration.hpp"
#include "mixdeconv/case_io.hpp"
#include "mixdeconv/mixsim.hpp"
#include "mixdeconv/sampler.hpp"

namespace mixdeconv {

/// Chain presets mirroring the three study scenarios.
struct Preset {
    std::string name;
    int steps = 1100;
    int burn_in = 100;
    double alpha_p = 25.0;
};

/// Known names: scenario-2mix-victim (1100/100, alpha 25), scenario-2mix
/// (590/90, alpha 25), scenario-3mix-victim (350/50, alpha 70).
Preset preset_by_name(const std::string& name);

/// Bundled result of one full inference run.
struct RunOutcome {
    BayesFactorReport report;
    ChainTrace trace;
};

/// Runs the chain and the estimator on a loaded case.
RunOutcome run_case(const CaseData& cd, const CalibrationBundle& calib,
                    const DistanceMatrix& distances, const ChainConfig& config);

/// One synthetic scenario cell: mixture proportions with the POI at
/// coordinate 0, optionally the last contributor fixed as a known victim.
struct SyntheticCase {
    CaseData case_data;
    std::vector<std::string> warnings;
    std::vector<ProfileSeqs> true_profiles;  // per contributor
    ProfileSeqs poi_seqs;
    std::vector<LocusReadTable> mixture;     // the raw reads
};

struct SyntheticSpec {
    std::size_t num_loci = 5;
    int k = 2;
    std::vector<double> p_mix;  // POI (or tested slot) first
    bool poi_present = true;
    bool victim_fixed = false;  // last contributor known in both models
    double catalog_threshold = 0.0025;
    double depth_mean = 2500.0;
    double depth_sd = 200.0;
    std::uint64_t seed = 1;
};

/// Builds profiles, synthesizes the mixture and assembles the case; with
/// poi_present = false the tested profile is a fresh draw that did not
/// contribute.
SyntheticCase make_synthetic_case(const SyntheticSpec& spec, const CalibrationBundle& calib);

struct GridSpec {
    std::vector<double> proportions;  // POI proportion values
    std::vector<std::uint64_t> seeds;
    std::vector<bool> poi_present = {true, false};
    int k = 2;
    std::size_t num_loci = 5;
    bool victim_fixed = false;
    Preset preset = preset_by_name("scenario-2mix");
    double catalog_threshold = 0.0025;
    int threads = 1;
};

struct GridCell {
    double proportion = 0.0;
    std::uint64_t seed = 0;
    bool poi_present = true;
    bool failed = false;
    std::string error;
    BayesFactorReport report;
};

/// Full factorial run over proportions x seeds x poi flags; failures are
/// recorded per cell and the batch continues.
std::vector<GridCell> run_grid(const GridSpec& spec, const CalibrationBundle& calib);

/// Plot-ready TSV: one row per cell with proportion, seed, presence flag,
/// log10 BF, the upper bound and the acceptance rates.
void save_grid_summary_tsv(std::span<const GridCell> cells, const std::string& path);

/// The fixed calibration bundle used by simulations and tests when no
/// fitted bundle is supplied: headline Pareto parameters with edit costs
/// derived from a plausible per-cycle edit probability vector.
CalibrationBundle reference_bundle();

}  // namespace mixdeconv
