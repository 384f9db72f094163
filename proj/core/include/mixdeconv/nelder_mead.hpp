#pragma once

#include <functional>
#include <span>
#include <vector>

namespace mixdeconv {

struct NelderMeadOptions {
    int max_iterations = 80000;
    double f_tolerance = 1e-10;  // spread of simplex function values
    double x_tolerance = 1e-8;   // spread of simplex vertices (inf norm)
    // Initial simplex: each coordinate displaced relative to |x0_i|,
    // or by zero_step for coordinates equal to zero.
    double relative_step = 0.05;
    double zero_step = 0.00025;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

/// Derivative-free simplex minimizer (reflection 1, expansion 2,
/// contraction 0.5, shrink 0.5). The objective may return +inf to
/// encode hard bounds.
NelderMeadResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& f,
                                      std::vector<double> x0,
                                      const NelderMeadOptions& opts = {});

}  // namespace mixdeconv
