#include "doctest.h"

#include <cmath>
#include <numbers>

#include "mixdeconv/likelihood.hpp"
#include "mixdeconv/rng.hpp"
#include "oracles.hpp"

using namespace mixdeconv;

namespace {

// Hand-built workspace: distances and counts are laid out directly, the way
// a tiny case would produce them.
LocusWorkspace make_workspace(std::size_t num_alleles, std::size_t num_reads,
                              const std::vector<double>& distances,
                              const std::vector<std::uint64_t>& counts,
                              const std::vector<double>& doc, const ParetoParams& pareto) {
    LocusWorkspace ws;
    ws.num_alleles = num_alleles;
    ws.num_patterns = num_reads;
    ws.log_fc.resize(num_alleles * num_reads);
    ws.doc = doc;
    for (double d : doc) ws.total_doc += d;
    for (std::size_t j = 0; j < num_alleles; ++j)
        for (std::size_t m = 0; m < num_reads; ++m)
            ws.log_fc[j * num_reads + m] =
                pareto_log_pdf(distances[j * num_reads + m], pareto) -
                std::log(static_cast<double>(counts[j * num_reads + m]));
    return ws;
}

const ParetoParams kPareto{2.668, 0.513, 0.683};

LikelihoodContext context_over(const LocusWorkspace& ws, const std::vector<std::size_t>& support,
                               const std::vector<double>& u) {
    LikelihoodContext ctx;
    ctx.ws = &ws;
    ctx.support = support;
    ctx.u = u;
    return ctx;
}

}  // namespace

TEST_CASE("softmax point normalization and exchangeability") {
    const std::vector<double> u = {8.0, 6.0};
    const std::vector<double> a = {0.3, -0.2};
    const std::vector<double> a_shifted = {-0.2, 0.3};
    const std::vector<double> u_sym = {7.0, 7.0};
    CHECK(softmax_dirichlet_logpdf(a, u_sym) ==
          doctest::Approx(softmax_dirichlet_logpdf(a_shifted, u_sym)).epsilon(1e-12));
    CHECK_THROWS_AS(softmax_dirichlet_logpdf(a, {8.0, 0.0}), std::domain_error);
}

TEST_CASE("softmax-dirichlet density integrates to one (2-dim)") {
    const std::vector<double> u = {11.0, 7.7};
    auto log_f = [&](std::span<const double> a) { return softmax_dirichlet_logpdf(a, u); };
    const double log_integral = testsup::log_integral_box(log_f, 2, -16.0, 16.0, 220);
    CHECK(std::exp(log_integral) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("softmax-dirichlet density integrates to one (3-dim)") {
    const std::vector<double> u = {11.0, 6.6, 4.4};
    auto log_f = [&](std::span<const double> a) { return softmax_dirichlet_logpdf(a, u); };
    const double log_integral = testsup::log_integral_box(log_f, 3, -14.0, 14.0, 140);
    CHECK(std::exp(log_integral) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("log_G single allele, single read at distance zero") {
    // one catalog allele, one read identical to it: data term = doc*log(rho/1)
    const auto ws = make_workspace(1, 1, {0.0}, {1}, {17.0}, kPareto);
    const auto ctx = context_over(ws, {0}, {22.0});
    const std::vector<double> a = {0.4};
    const double expected =
        softmax_dirichlet_logpdf(a, ctx.u) + 17.0 * std::log(kPareto.zero_mass_rho);
    CHECK(log_G(a, ctx) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("log_G doc-weighting is associative over merged rows") {
    // same pattern entered as one row of doc 4 and as two rows of doc 1+3
    const auto merged = make_workspace(2, 1, {0.0, 1.3}, {1, 4}, {4.0}, kPareto);
    const auto split = make_workspace(2, 2, {0.0, 0.0, 1.3, 1.3}, {1, 1, 4, 4}, {1.0, 3.0},
                                      kPareto);
    const auto ctx_m = context_over(merged, {0, 1}, {10.0, 12.0});
    const auto ctx_s = context_over(split, {0, 1}, {10.0, 12.0});
    const std::vector<double> a = {0.25, -0.5};
    CHECK(log_G(a, ctx_m) == doctest::Approx(log_G(a, ctx_s)).epsilon(1e-13));
}

TEST_CASE("log_G drops by total doc * log 2 when counts double") {
    const std::vector<double> dist = {0.0, 1.0, 2.3, 1.0, 0.0, 1.7};
    const std::vector<std::uint64_t> c1 = {1, 3, 9, 3, 1, 4};
    std::vector<std::uint64_t> c2 = c1;
    for (auto& v : c2) v *= 2;
    const std::vector<double> doc = {11.0, 5.0, 2.0};
    const auto ws1 = make_workspace(2, 3, dist, c1, doc, kPareto);
    const auto ws2 = make_workspace(2, 3, dist, c2, doc, kPareto);
    const auto ctx1 = context_over(ws1, {0, 1}, {9.0, 13.0});
    const auto ctx2 = context_over(ws2, {0, 1}, {9.0, 13.0});
    const std::vector<double> a = {0.1, 0.2};
    const double total_doc = 18.0;
    CHECK(log_G(a, ctx1) - log_G(a, ctx2) ==
          doctest::Approx(total_doc * std::log(2.0)).epsilon(1e-10));
}

TEST_CASE("laplace is exact for a gaussian integrand") {
    // log f = -0.5 (x - m)' A (x - m) + const, integral = const_part *
    // (2 pi)^{d/2} |A|^{-1/2}
    auto log_f = [](std::span<const double> x) {
        const double dx = x[0] - 0.7, dy = x[1] + 0.3;
        return -0.5 * (2.0 * dx * dx + 1.3 * dy * dy + 0.8 * dx * dy) + 1.234;
    };
    const double det = 2.0 * 1.3 - 0.4 * 0.4;
    const double expected = 1.234 + std::log(2.0 * std::numbers::pi) - 0.5 * std::log(det);
    const auto res = laplace_log_integral(log_f, {0.0, 0.0});
    REQUIRE(res.converged);
    CHECK(res.log_value == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("laplace matches quadrature on constructed 2-dim contexts") {
    CounterRng rng(2024);
    for (int trial = 0; trial < 6; ++trial) {
        const std::size_t reads = 4 + rng.uniform_below(4);
        std::vector<double> dist(2 * reads);
        std::vector<std::uint64_t> counts(2 * reads);
        std::vector<double> doc(reads);
        for (std::size_t m = 0; m < reads; ++m) {
            for (std::size_t j = 0; j < 2; ++j) {
                dist[j * reads + m] = (m % 3 == j % 3) ? 0.0 : 0.8 + rng.uniform01() * 2.0;
                counts[j * reads + m] = 1 + rng.uniform_below(30);
            }
            doc[m] = 1.0 + static_cast<double>(rng.uniform_below(40));
        }
        const auto ws = make_workspace(2, reads, dist, counts, doc, kPareto);
        const double c = 22.0;
        const double q0 = 0.3 + rng.uniform01() * 0.4;
        const auto ctx = context_over(ws, {0, 1}, {c * q0, c * (1.0 - q0)});

        const auto lap = laplace_integral(ctx);
        REQUIRE(lap.converged);

        auto log_f = [&](std::span<const double> a) { return log_G(a, ctx); };
        const double quad = testsup::log_integral_box(log_f, 2, -14.0, 14.0, 180);
        CHECK(std::abs(lap.log_value - quad) <= 0.05 * std::abs(quad));
    }
}

TEST_CASE("laplace stationarity at the reported optimum") {
    const auto ws = make_workspace(
        2, 3, {0.0, 1.0, 2.2, 1.1, 0.0, 1.9}, {1, 2, 14, 3, 1, 8}, {40.0, 31.0, 4.0}, kPareto);
    const auto ctx = context_over(ws, {0, 1}, {12.0, 10.0});
    const auto lap = laplace_integral(ctx);
    REQUIRE(lap.converged);
    const double h = 1e-5;
    double grad_norm = 0.0;
    std::vector<double> x = lap.argmax;
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = lap.argmax[i] + h;
        const double fp = log_G(x, ctx);
        x[i] = lap.argmax[i] - h;
        const double fm = log_G(x, ctx);
        x[i] = lap.argmax[i];
        grad_norm += std::pow((fp - fm) / (2 * h), 2);
    }
    grad_norm = std::sqrt(grad_norm);
    const double f0 = log_G(lap.argmax, ctx);
    CHECK(grad_norm <= 1e-3 * std::abs(f0));
}

TEST_CASE("permuting catalog order with its slices leaves log_G unchanged") {
    const std::vector<double> dist = {0.0, 1.0, 2.3, 1.0, 0.0, 1.7};
    const std::vector<std::uint64_t> counts = {1, 3, 9, 3, 1, 4};
    const std::vector<double> doc = {11.0, 5.0, 2.0};
    std::vector<double> dist_p = {1.0, 0.0, 1.7, 0.0, 1.0, 2.3};
    std::vector<std::uint64_t> counts_p = {3, 1, 4, 1, 3, 9};
    const auto ws = make_workspace(2, 3, dist, counts, doc, kPareto);
    const auto wsp = make_workspace(2, 3, dist_p, counts_p, doc, kPareto);
    const auto ctx = context_over(ws, {0, 1}, {9.0, 13.0});
    const auto ctxp = context_over(wsp, {0, 1}, {13.0, 9.0});
    const std::vector<double> a = {0.37, -0.11};
    const std::vector<double> ap = {-0.11, 0.37};
    CHECK(log_G(a, ctx) == doctest::Approx(log_G(ap, ctxp)).epsilon(1e-13));
}

TEST_CASE("ill-conditioned context reports a zero integral instead of failing") {
    // a support coordinate with essentially no mass drives the optimum to
    // -infinity in that direction; the Hessian check must catch it
    const auto ws = make_workspace(2, 2, {0.0, 5.0, 40.0, 39.0}, {1, 50, 1000, 1000},
                                   {200.0, 10.0}, kPareto);
    LikelihoodContext ctx = context_over(ws, {0, 1}, {30.0, 1e-9});
    LaplaceOptions opts;
    opts.max_iterations = 400;  // starved on purpose
    const auto lap = laplace_integral(ctx, opts);
    if (!lap.converged) {
        CHECK(lap.log_value == -std::numeric_limits<double>::infinity());
    } else {
        CHECK(std::isfinite(lap.log_value));
    }
}
