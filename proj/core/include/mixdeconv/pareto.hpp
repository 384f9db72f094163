#pragma once

namespace mixdeconv {

class CounterRng;

/// Zero-inflated Pareto over artifact distances: an atom of mass
/// `zero_mass_rho` at d = 0 and a Lomax-type tail for d > 0.
struct ParetoParams {
    double shape = 1.0;       // tail shape (> 0)
    double rate_lambda = 1.0; // tail rate (> 0)
    double zero_mass_rho = 0.0;

    bool valid() const {
        return shape > 0 && rate_lambda > 0 && zero_mass_rho >= 0 && zero_mass_rho < 1;
    }
};

/// rho at d = 0, (1-rho) * shape * lambda / (1 + lambda d)^(shape+1) for d > 0.
double pareto_pdf(double d, const ParetoParams& p);

/// rho + (1-rho) * (1 - (1 + lambda d)^-shape).
double pareto_cdf(double d, const ParetoParams& p);

/// log of pareto_pdf, safe for the log-domain likelihood.
double pareto_log_pdf(double d, const ParetoParams& p);

/// Inverse of the continuous-part CDF: the d > 0 with
/// 1 - (1 + lambda d)^-shape = u.
double pareto_quantile_continuous(double u, const ParetoParams& p);

/// One draw from the zero-inflated distribution.
double pareto_sample(const ParetoParams& p, CounterRng& rng);

}  // namespace mixdeconv
