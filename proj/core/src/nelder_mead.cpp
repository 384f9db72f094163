#include "mixdeconv/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mixdeconv {

NelderMeadResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& f,
                                      std::vector<double> x0, const NelderMeadOptions& opts) {
    const std::size_t n = x0.size();
    NelderMeadResult res;
    if (n == 0) {
        res.x = x0;
        res.value = f(x0);
        res.converged = true;
        res.evaluations = 1;
        return res;
    }

    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        double v = f(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };

    std::vector<std::vector<double>> simplex(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) {
        if (x0[i] != 0.0)
            simplex[i + 1][i] = x0[i] * (1.0 + opts.relative_step);
        else
            simplex[i + 1][i] = opts.zero_step;
    }
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);

    int iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });

        const std::size_t best = order[0], worst = order[n], second = order[n - 1];

        double fspread = 0.0, xspread = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            if (std::isfinite(fv[i]) && std::isfinite(fv[best]))
                fspread = std::max(fspread, std::abs(fv[i] - fv[best]));
            else if (i != best)
                fspread = std::numeric_limits<double>::infinity();
            for (std::size_t d = 0; d < n; ++d)
                xspread = std::max(xspread, std::abs(simplex[i][d] - simplex[best][d]));
        }
        if (fspread <= opts.f_tolerance && xspread <= opts.x_tolerance) {
            res.converged = true;
            break;
        }

        for (std::size_t d = 0; d < n; ++d) {
            double s = 0.0;
            for (std::size_t i = 0; i <= n; ++i)
                if (i != worst) s += simplex[i][d];
            centroid[d] = s / static_cast<double>(n);
        }

        for (std::size_t d = 0; d < n; ++d) xr[d] = centroid[d] + (centroid[d] - simplex[worst][d]);
        const double fr = eval(xr);

        if (fr < fv[best]) {
            for (std::size_t d = 0; d < n; ++d) xe[d] = centroid[d] + 2.0 * (xr[d] - centroid[d]);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            simplex[worst] = xr;
            fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            const std::vector<double>& base = outside ? xr : simplex[worst];
            for (std::size_t d = 0; d < n; ++d) xc[d] = centroid[d] + 0.5 * (base[d] - centroid[d]);
            const double fc = eval(xc);
            if (fc < (outside ? fr : fv[worst])) {
                simplex[worst] = xc;
                fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t d = 0; d < n; ++d)
                        simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
                    fv[i] = eval(simplex[i]);
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (fv[i] < fv[best]) best = i;
    res.x = simplex[best];
    res.value = fv[best];
    res.iterations = iter;
    res.evaluations = evals;
    return res;
}

}  // namespace mixdeconv
