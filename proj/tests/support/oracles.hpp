#pragma once

// Independent oracles used by the unit and acceptance suites. Everything
// here deliberately avoids the library's own computation paths: the RFL
// oracle is a budgeted recursive enumerator instead of the DP table, the
// integrals are tensor quadrature instead of Laplace.

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mixdeconv/rfl.hpp"

namespace testsup {

/// Minimum cost over all edit scripts with at most `max_edits` edits that
/// transform parent into child, found by exhaustive recursion over
/// (parent suffix, child suffix). Edits consume disjoint regions of the
/// parent left to right; stutter moves follow the same adjacency rule the
/// library documents. Returns +inf when no script within budget exists.
double script_min_cost(const std::string& parent, const std::string& child,
                       const std::string& motif, const mixdeconv::EditCosts& costs,
                       int max_edits);

/// All strings reachable from `parent` by applying at most `depth` edits to
/// the evolving string, mapped to the cheapest generating application order.
/// Used to produce test pairs (the expected values come from
/// script_min_cost, not from these generation costs).
std::map<std::string, double> enumerate_children(const std::string& parent,
                                                 const std::string& motif,
                                                 const mixdeconv::EditCosts& costs, int depth);

/// Gauss-Legendre nodes/weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// log of the integral of exp(log_f) over the box [lo, hi]^dim using an
/// n-point tensor Gauss-Legendre rule.
double log_integral_box(const std::function<double(std::span<const double>)>& log_f, int dim,
                        double lo, double hi, int nodes);

/// Same on an axis-aligned box with per-axis bounds.
double log_integral_box(const std::function<double(std::span<const double>)>& log_f,
                        std::span<const double> lo, std::span<const double> hi, int nodes);

/// One-dimensional log-domain integral.
double log_integral_1d(const std::function<double(double)>& log_f, double lo, double hi,
                       int nodes);

/// Kolmogorov-Smirnov statistic of samples against an analytic CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Asymptotic KS critical value c(alpha)/sqrt(n).
double ks_critical(double alpha, std::size_t n);

/// Dvoretzky-Kiefer-Wolfowitz band half-width at confidence 1 - alpha.
double dkw_epsilon(std::size_t n, double alpha);

}  // namespace testsup
