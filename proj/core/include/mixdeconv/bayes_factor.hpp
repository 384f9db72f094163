#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixdeconv/dna.hpp"
#include "mixdeconv/sampler.hpp"

namespace mixdeconv {

/// Per-locus description of the two nested matrix spaces: the full space
/// (known rows fixed, unknown rows free) and its slices with one row pinned
/// to the POI genotype. The POI's total prior mass gives the analytic upper
/// bound on the Bayes factor.
struct HypothesisSpaces {
    std::vector<Genotype> poi;            // per locus
    std::vector<double> log_prior_poi;    // per locus, natural log
    double log10_upper_bound = 0.0;       // -sum log10 prior(POI)
};

HypothesisSpaces build_hypothesis_spaces(const CaseData& c);

struct BayesFactorReport {
    double log10_bf = 0.0;
    double log10_upper_bound = 0.0;
    double mc_se_log10 = 0.0;  // naive MC standard error of the mean ratio (heuristic)
    double acceptance_p = 0.0;
    double acceptance_c = 0.0;
    int steps = 0;
    int burn_in = 0;
    std::uint64_t seed = 0;
    double laplace_failure_rate = 0.0;
    std::vector<std::string> warnings;
};

/// Mean-of-ratios importance-sampling estimate over the post-burn-in steps,
/// streamed in the log domain, with the analytic upper bound attached.
BayesFactorReport bf_estimate(const ChainTrace& trace, const CaseData& c,
                              const HypothesisSpaces& spaces);

/// Losses for the decision rule: k_ij is the loss of supporting model i
/// when model j is true. Requires k12 > k22 and k21 > k11.
struct DecisionLosses {
    double k11 = 0.0;
    double k12 = 1.0;
    double k21 = 1.0;
    double k22 = 0.0;
};

/// log10 of the decision threshold ((k12-k22)/(k21-k11)) * (P(M2)/P(M1)).
double decision_threshold_log10(const DecisionLosses& losses, double prior_m1, double prior_m2);

/// True iff the evidence supports the contributor model: log10 BF strictly
/// above the threshold (ties go to the alternative).
bool decide_supports_m1(double log10_bf, const DecisionLosses& losses, double prior_m1,
                        double prior_m2);

void save_report_json(const BayesFactorReport& report, const std::string& path);
BayesFactorReport load_report_json(const std::string& path);

}  // namespace mixdeconv
