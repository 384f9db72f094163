#pragma once

#include <span>

#include "mixdeconv/dna.hpp"

namespace mixdeconv {

/// Priors of the mixture model: symmetric Dirichlet(1/k) on mixing
/// proportions, a lognormal on the concentration matched to a given mean
/// and variance, and a uniform draw-with-replacement prior on genotype rows.
struct PriorSpec {
    int k = 2;
    double c_mean = 22.0;
    double c_var = 3.0;

    double lognormal_mu() const;
    double lognormal_sigma2() const;
};

/// log Dirichlet(1/k, ..., 1/k) density at p.
double log_prior_p(std::span<const double> p, const PriorSpec& spec);

/// log lognormal density at c.
double log_prior_c(double c, const PriorSpec& spec);

/// log of the uniform genotype-row prior: 1/J^2 homozygous, 2/J^2
/// heterozygous.
double log_prior_row_uniform(const Genotype& g, std::size_t num_alleles);

/// log normalizing constant of a Dirichlet: sum lgamma(u_i) - lgamma(sum u).
double log_dirichlet_norm(std::span<const double> u);

/// log Dirichlet(alpha) density at x (general parameters, used by the
/// proposal ratio).
double log_dirichlet_pdf(std::span<const double> x, std::span<const double> alpha);

}  // namespace mixdeconv
