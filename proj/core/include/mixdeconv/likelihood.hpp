#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mixdeconv/distance_matrix.hpp"
#include "mixdeconv/dna.hpp"
#include "mixdeconv/genotype_space.hpp"
#include "mixdeconv/pareto.hpp"

namespace mixdeconv {

/// Per-locus read data preprocessed for likelihood evaluation:
/// log(f(d)/C) for every (allele, read-pattern) pair, with reads sharing an
/// identical pattern row collapsed and their doc summed. Built once per
/// (case, calibration) and shared read-only.
struct LocusWorkspace {
    std::size_t num_alleles = 0;
    std::size_t num_patterns = 0;
    std::vector<double> log_fc;  // num_alleles x num_patterns, row-major
    std::vector<double> doc;     // per pattern, summed over collapsed reads
    double total_doc = 0.0;

    double log_fc_at(std::size_t allele, std::size_t pattern) const {
        return log_fc[allele * num_patterns + pattern];
    }
};

LocusWorkspace build_locus_workspace(const DistanceMatrixLocus& dm, const LocusReadTable& reads,
                                     const ParetoParams& pareto);

/// Everything log_G needs at one locus for one assignment matrix: the
/// nonzero-support allele ids, the Dirichlet parameters u = c * q on that
/// support, and the shared workspace.
struct LikelihoodContext {
    const LocusWorkspace* ws = nullptr;
    std::vector<std::size_t> support;  // allele indices with q > 0
    std::vector<double> u;             // c * q over the support

    std::size_t dim() const { return support.size(); }
};

LikelihoodContext make_context(const LocusWorkspace& ws, const GenotypeMatrix& a,
                               std::span<const double> p, double c);

/// log density of the softmax-reparametrized Dirichlet at the free vector a,
/// with parameters u > 0; includes the Gaussian factor on the coordinate sum
/// and the exact Z_Dir(u)/I normalizing constant.
double softmax_dirichlet_logpdf(std::span<const double> a, std::span<const double> u);

/// log G: the reparametrized prior term plus the doc-weighted read product,
/// each read marginalized over the support alleles. All arithmetic in the
/// log domain.
double log_G(std::span<const double> a, const LikelihoodContext& ctx);

struct LaplaceOptions {
    int max_iterations = 80000;
    double f_tolerance = 1e-9;
    double x_tolerance = 1e-6;
    double hessian_step = 1e-4;
};

struct LaplaceResult {
    double log_value = 0.0;  // -inf when not converged
    std::vector<double> argmax;
    bool converged = false;
    double hessian_log_det = 0.0;
};

/// Laplace approximation of integral of exp(log_f) over R^dim:
/// log_f(xhat) + dim/2 * log(2*pi) - 1/2 * log det(-H), maximized by
/// Nelder-Mead from x0 and with H the central-difference Hessian at the
/// optimum. A failed optimization or a non-positive-definite -H yields
/// converged = false and log_value = -inf (the integral counts as zero).
LaplaceResult laplace_log_integral(const std::function<double(std::span<const double>)>& log_f,
                                   std::vector<double> x0, const LaplaceOptions& opts = {});

/// Laplace approximation of the per-locus marginal integral of G.
LaplaceResult laplace_integral(const LikelihoodContext& ctx, const LaplaceOptions& opts = {},
                               std::span<const double> warm_start = {});

}  // namespace mixdeconv
