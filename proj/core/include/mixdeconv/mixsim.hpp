#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mixdeconv/calibration.hpp"
#include "mixdeconv/dna.hpp"

namespace mixdeconv {

/// How to mix k source profiles into one synthetic case.
struct MixSpec {
    int k = 2;
    std::vector<double> p_mix;  // true mixing proportions, length k
    double depth_mean = 2500.0;
    double depth_sd = 200.0;
    std::uint64_t seed = 1;
};

/// A marker with its small universe of plausible parent alleles
/// (flank + motif repeats + flank at varying repeat counts).
struct LocusSimModel {
    Locus locus;
    std::vector<std::string> allele_universe;
};

/// Deterministic set of synthetic loci for simulations.
std::vector<LocusSimModel> make_sim_loci(std::size_t count, std::uint64_t seed);

struct SimulatedLocus {
    Locus locus;
    std::pair<std::string, std::string> genotype;
    std::vector<ReadRow> reads;
};

/// One simulated single-source contributor: genotype plus amplified reads
/// at every locus.
struct SourceProfile {
    std::vector<SimulatedLocus> loci;
};

/// Simulates a single-source profile: genotype drawn uniformly with
/// replacement from the allele universe, then reads whose artifact
/// distances follow the calibration's zero-inflated Pareto snapped onto
/// the parent's attainable (<= 2 edits) distance lattice; the sequence at
/// a distance is drawn uniformly over the positioned edits realizing it.
SourceProfile gen_profile(std::span<const LocusSimModel> loci, const CalibrationBundle& calib,
                          std::uint64_t seed, double depth_mean = 2500.0,
                          double depth_sd = 200.0);

/// The mixture synthesis: per locus draw a total depth, split it across
/// contributors multinomially at p_mix, draw that many sequences from each
/// contributor's read distribution, and merge duplicates by summing doc.
std::vector<LocusReadTable> synth_mixture(std::span<const SourceProfile> profiles,
                                          const MixSpec& spec);

/// Attainable artifact distances from one parent (scripts of at most two
/// edits, insert+delete and fwd+back mixtures excluded), sorted ascending.
/// Exposed for the generator's oracle tests.
std::vector<double> attainable_distances(const std::string& parent, const Locus& locus,
                                         const EditCosts& costs);

/// Cell probabilities of the snapped zero-inflated Pareto over the lattice
/// (index 0 is the zero-distance atom). This is the exact distribution
/// gen_profile draws distances from.
std::vector<double> snapped_cell_masses(std::span<const double> lattice,
                                        const ParetoParams& params);

}  // namespace mixdeconv
