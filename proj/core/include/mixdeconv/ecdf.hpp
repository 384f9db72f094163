#pragma once

#include <span>
#include <vector>

#include "mixdeconv/dna.hpp"
#include "mixdeconv/rfl.hpp"

namespace mixdeconv {

/// Pointwise average of per-locus empirical CDFs over artifact distances.
/// The support is the union of distances attained at any locus; the value
/// at t averages only the loci that attained t themselves.
struct AveragedEcdf {
    std::vector<double> support_x;
    std::vector<double> values_y;

    bool empty() const { return support_x.empty(); }
};

struct EcdfOptions {
    /// When a training locus has a tied maximal depth of coverage, pick the
    /// lexicographically smallest sequence instead of failing.
    bool tie_break_lexicographic = false;
};

/// Builds the averaged ECDF from homozygous training loci. The designated
/// parent at each locus is the (unique) highest-count sequence; distances
/// are to that parent and weighted by each row's depth of coverage.
AveragedEcdf build_averaged_ecdf(std::span<const LocusReadTable> training, const EditCosts& costs,
                                 const EcdfOptions& opts = {});

}  // namespace mixdeconv
