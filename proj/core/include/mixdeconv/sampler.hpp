#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixdeconv/calibration.hpp"
#include "mixdeconv/distance_matrix.hpp"
#include "mixdeconv/dna.hpp"
#include "mixdeconv/genotype_space.hpp"
#include "mixdeconv/likelihood.hpp"
#include "mixdeconv/priors.hpp"
#include "mixdeconv/rng.hpp"

namespace mixdeconv {

/// Tuning of the Metropolis proposals: Dirichlet(alpha_p * p + beta) random
/// walk on p and a lognormal step of size eta_c on c.
struct ProposalConfig {
    double alpha_p = 25.0;
    double eta_c = 0.25;

    static ProposalConfig defaults_for(int k) {
        ProposalConfig c;
        c.alpha_p = k >= 3 ? 70.0 : 25.0;
        return c;
    }
};

struct ChainConfig {
    int steps = 1100;
    int burn_in = 100;
    std::uint64_t seed = 1;
    std::vector<double> init_p;  // empty = balanced-ish descending default
    double init_c = 22.0;
    std::optional<ProposalConfig> proposal;  // defaults chosen by k
    bool prior_only = false;                 // test hook: data likelihood off
    LaplaceOptions laplace;
    int threads = 1;
};

struct StepRecord {
    std::vector<double> p;
    double c = 0.0;
    double log_importance_ratio = 0.0;  // natural log; -inf when degenerate
    bool accepted_p = false;
    bool accepted_c = false;
    bool is_burn_in = false;
};

struct ChainTrace {
    std::vector<StepRecord> steps;
    int burn_in = 0;
    std::uint64_t seed = 0;
    double acceptance_p = 0.0;  // post burn-in
    double acceptance_c = 0.0;
    int laplace_failures = 0;   // integrals that came back as zero
    int laplace_total = 0;
};

/// Current sampler state. p stays sorted descending (identifiability);
/// rows of every per-locus matrix are permuted together with p, and rows
/// belonging to known contributors always hold their fixed genotypes.
struct MixtureState {
    std::vector<double> p;
    double c = 22.0;
    std::vector<int> labels;  // labels[row] < num_known marks a fixed row
    std::vector<std::vector<Genotype>> genotypes;  // [locus][row]
};

/// Blocked Metropolis-within-Gibbs over (A, p, c), sweep order A then p
/// then c; emits the per-step importance ratio used by the Bayes factor
/// estimator. Reproducible: the trace depends only on (inputs, seed).
ChainTrace run_chain(const CaseData& c, const CalibrationBundle& calibration,
                     const DistanceMatrix& distances, const ChainConfig& config);

void save_trace_tsv(const ChainTrace& trace, const std::string& path);

}  // namespace mixdeconv
