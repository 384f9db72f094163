#include "doctest.h"

#include <cmath>

#include "mixdeconv/calibration.hpp"
#include "mixdeconv/pareto.hpp"
#include "mixdeconv/rng.hpp"
#include "oracles.hpp"

using namespace mixdeconv;

static const ParetoParams kPaper{2.668, 0.513, 0.683};

TEST_CASE("pareto cdf basics") {
    CHECK(pareto_cdf(0.0, kPaper) == doctest::Approx(0.683));
    CHECK(pareto_cdf(1e9, kPaper) == doctest::Approx(1.0));
    CHECK_THROWS_AS(pareto_pdf(-0.5, kPaper), std::domain_error);

    double prev = 0.0;
    for (double d = 0.0; d < 50.0; d += 0.25) {
        const double f = pareto_cdf(d, kPaper);
        CHECK(f >= prev - 1e-15);
        prev = f;
    }
}

TEST_CASE("pareto continuous part integrates to 1 - rho") {
    auto log_f = [&](double d) { return pareto_log_pdf(d, kPaper); };
    // split the integral: bulk plus tail by the analytic survival function
    const double cut = 2000.0;
    const double bulk = std::exp(testsup::log_integral_1d(log_f, 1e-12, cut, 4096));
    const double tail = (1.0 - kPaper.zero_mass_rho) *
                        std::pow(1.0 + kPaper.rate_lambda * cut, -kPaper.shape);
    CHECK(bulk + tail == doctest::Approx(1.0 - kPaper.zero_mass_rho).epsilon(1e-8));
}

TEST_CASE("pareto quantile inverts the cdf") {
    CounterRng rng(5);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform01() * 0.999;
        const double d = pareto_quantile_continuous(u, kPaper);
        const double back = 1.0 - std::pow(1.0 + kPaper.rate_lambda * d, -kPaper.shape);
        CHECK(back == doctest::Approx(u).epsilon(1e-10));
    }
}

TEST_CASE("probs_to_costs inversion consistency") {
    EditProbabilities probs;
    probs.p_fwd = 0.0020;
    probs.p_back = 0.0040;
    probs.p_ins = 0.0012;
    probs.p_del = 0.0014;
    probs.p_snp = 0.0030;

    const EditCosts costs = probs_to_costs(probs, kPaper);
    CHECK(costs.cost_back_stutter == doctest::Approx(1.0));

    // putting the un-normalized distance back through the density returns
    // the probability
    const double scale = (1.0 - kPaper.zero_mass_rho) * kPaper.shape * kPaper.rate_lambda;
    auto invert = [&](double p) {
        return (std::pow(p / scale, -1.0 / (kPaper.shape + 1.0)) - 1.0) / kPaper.rate_lambda;
    };
    for (double p : {0.0020, 0.0040, 0.0012, 0.0014, 0.0030}) {
        const double d = invert(p);
        const double back = scale * std::pow(1.0 + kPaper.rate_lambda * d,
                                             -(kPaper.shape + 1.0));
        CHECK(back == doctest::Approx(p).epsilon(1e-10));
    }

}

TEST_CASE("probs_to_costs rejects out-of-range probabilities") {
    EditProbabilities probs;
    probs.p_fwd = probs.p_back = probs.p_ins = probs.p_del = 0.001;
    probs.p_snp = 0.9;  // above (1-rho) shape lambda
    CHECK_THROWS_WITH_AS(probs_to_costs(probs, kPaper),
                         doctest::Contains("snp"), std::domain_error);
}

TEST_CASE("equal probabilities give equal costs, rarer edits cost more") {
    EditProbabilities probs;
    probs.p_fwd = 0.003;
    probs.p_back = 0.003;
    probs.p_ins = 0.0005;
    probs.p_del = 0.002;
    probs.p_snp = 0.002;
    const EditCosts costs = probs_to_costs(probs, kPaper);
    CHECK(costs.cost_forward_stutter == doctest::Approx(costs.cost_back_stutter));
    CHECK(costs.cost_snp == doctest::Approx(costs.cost_delete));
    CHECK(costs.cost_insert > costs.cost_delete);
}
