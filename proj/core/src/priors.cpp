#include "mixdeconv/priors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mixdeconv {

double PriorSpec::lognormal_mu() const {
    const double m2 = c_mean * c_mean;
    return std::log(m2 / std::sqrt(m2 + c_var));
}

double PriorSpec::lognormal_sigma2() const {
    return std::log(1.0 + c_var / (c_mean * c_mean));
}

double log_dirichlet_norm(std::span<const double> u) {
    double sum = 0.0, lg = 0.0;
    for (double v : u) {
        if (!(v > 0.0)) throw std::domain_error("dirichlet: parameters must be positive");
        lg += std::lgamma(v);
        sum += v;
    }
    return lg - std::lgamma(sum);
}

double log_dirichlet_pdf(std::span<const double> x, std::span<const double> alpha) {
    if (x.size() != alpha.size()) throw std::invalid_argument("dirichlet: size mismatch");
    double lp = -log_dirichlet_norm(alpha);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0)) return -std::numeric_limits<double>::infinity();
        lp += (alpha[i] - 1.0) * std::log(x[i]);
    }
    return lp;
}

double log_prior_p(std::span<const double> p, const PriorSpec& spec) {
    if (static_cast<int>(p.size()) != spec.k)
        throw std::invalid_argument("log_prior_p: wrong dimension");
    double sum = 0.0;
    for (double v : p) {
        if (!(v > 0.0)) throw std::domain_error("log_prior_p: p must be strictly positive");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-8) throw std::domain_error("log_prior_p: p must sum to 1");
    const std::vector<double> alpha(p.size(), 1.0 / spec.k);
    return log_dirichlet_pdf(p, alpha);
}

double log_prior_c(double c, const PriorSpec& spec) {
    if (!(c > 0.0)) throw std::domain_error("log_prior_c: c must be positive");
    const double mu = spec.lognormal_mu();
    const double s2 = spec.lognormal_sigma2();
    const double z = std::log(c) - mu;
    return -z * z / (2.0 * s2) - std::log(c) - 0.5 * std::log(2.0 * std::numbers::pi * s2);
}

double log_prior_row_uniform(const Genotype& g, std::size_t num_alleles) {
    if (g.b >= num_alleles) throw std::out_of_range("log_prior_row_uniform: allele out of range");
    const double j2 = static_cast<double>(num_alleles) * static_cast<double>(num_alleles);
    return g.homozygous() ? -std::log(j2) : std::log(2.0) - std::log(j2);
}

}  // namespace mixdeconv
