#pragma once

#include <span>
#include <string>
#include <vector>

#include "mixdeconv/dna.hpp"
#include "mixdeconv/ecdf.hpp"
#include "mixdeconv/graveyard.hpp"
#include "mixdeconv/pareto.hpp"
#include "mixdeconv/rfl.hpp"

namespace mixdeconv {

/// Everything inference needs about the sequencing chemistry: fitted edit
/// probabilities, edit costs (back stutter = 1), and the artifact-distance
/// density parameters, plus provenance of the fit.
struct CalibrationBundle {
    EditProbabilities edit_probs;
    EditCosts costs;
    ParetoParams pareto;
    std::string corpus_hash;
    int iterations = 0;        // cost-changing rounds of the fixed-point loop
    double final_cost_delta = 0.0;
    double edit_fit_residual = 0.0;
};

/// Inverts the artifact density at each edit probability to get that edit's
/// distance, then rescales so back stutter costs exactly 1. Requires every
/// probability to be inside (0, (1-rho)*shape*lambda); throws naming the
/// offending edit type otherwise.
EditCosts probs_to_costs(const EditProbabilities& probs, const ParetoParams& params);

struct ParetoFitOptions {
    bool weighted = true;  // down-rank isolated support points
    int max_iterations = 3000;
    double tolerance = 1e-12;
};

/// Weighted-L1 fit of the zero-inflated Pareto CDF to an averaged ECDF.
/// Weight of a support point is the reciprocal of its local half-gap,
/// normalized to mean 1 (or 1 everywhere with weighted = false).
ParetoParams fit_pareto(const AveragedEcdf& ecdf, const ParetoParams& init,
                        const ParetoFitOptions& opts = {});

/// Objective value of the (possibly weighted) L1 fit, exposed so callers can
/// verify monotone improvement.
double pareto_fit_objective(const AveragedEcdf& ecdf, const ParetoParams& params,
                            const ParetoFitOptions& opts = {});

struct CalibrateOptions {
    ParetoFitOptions fit;
    EcdfOptions ecdf;
    double cost_tolerance = 1e-6;
    int max_rounds = 20;
};

/// Full calibration pipeline on a homozygous training corpus: graveyard
/// tally -> edit probabilities, then the costs -> distances -> ECDF ->
/// Pareto -> costs loop iterated to a fixed point.
CalibrationBundle calibrate(std::span<const LocusReadTable> corpus, const ParetoParams& init,
                            const CalibrateOptions& opts = {});

/// Doc-weighted graveyard state frequencies, averaged over loci.
StateVector tally_state_freqs(std::span<const LocusReadTable> corpus, const EcdfOptions& opts = {});

void save_bundle(const CalibrationBundle& bundle, const std::string& path);
CalibrationBundle load_bundle(const std::string& path);

}  // namespace mixdeconv
