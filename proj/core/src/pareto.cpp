#include "mixdeconv/pareto.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mixdeconv/rng.hpp"

namespace mixdeconv {

namespace {
void check(double d, const ParetoParams& p) {
    if (d < 0) throw std::domain_error("pareto: negative distance");
    if (!p.valid()) throw std::domain_error("pareto: invalid parameters");
}
}  // namespace

double pareto_pdf(double d, const ParetoParams& p) {
    check(d, p);
    if (d == 0.0) return p.zero_mass_rho;
    return (1.0 - p.zero_mass_rho) * p.shape * p.rate_lambda /
           std::pow(1.0 + p.rate_lambda * d, p.shape + 1.0);
}

double pareto_cdf(double d, const ParetoParams& p) {
    check(d, p);
    return p.zero_mass_rho +
           (1.0 - p.zero_mass_rho) * (1.0 - std::pow(1.0 + p.rate_lambda * d, -p.shape));
}

double pareto_log_pdf(double d, const ParetoParams& p) {
    check(d, p);
    if (d == 0.0) {
        return p.zero_mass_rho > 0 ? std::log(p.zero_mass_rho)
                                   : -std::numeric_limits<double>::infinity();
    }
    return std::log1p(-p.zero_mass_rho) + std::log(p.shape) + std::log(p.rate_lambda) -
           (p.shape + 1.0) * std::log1p(p.rate_lambda * d);
}

double pareto_quantile_continuous(double u, const ParetoParams& p) {
    if (!(u >= 0.0 && u < 1.0)) throw std::domain_error("pareto quantile: u must be in [0,1)");
    return (std::pow(1.0 - u, -1.0 / p.shape) - 1.0) / p.rate_lambda;
}

double pareto_sample(const ParetoParams& p, CounterRng& rng) {
    if (rng.uniform01() < p.zero_mass_rho) return 0.0;
    return pareto_quantile_continuous(rng.uniform01(), p);
}

}  // namespace mixdeconv
