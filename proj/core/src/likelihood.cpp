#include "mixdeconv/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mixdeconv/nelder_mead.hpp"
#include "mixdeconv/priors.hpp"

namespace mixdeconv {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxDim = 64;
}  // namespace

LocusWorkspace build_locus_workspace(const DistanceMatrixLocus& dm, const LocusReadTable& reads,
                                     const ParetoParams& pareto) {
    if (dm.num_sequences != reads.rows.size())
        throw std::invalid_argument("locus workspace: distance matrix / read table mismatch");
    const std::size_t J = dm.num_alleles, M = dm.num_sequences;

    // raw per-read columns of log(f(d)/C)
    std::vector<double> col(J);
    std::vector<std::vector<double>> cols(M, std::vector<double>(J));
    for (std::size_t m = 0; m < M; ++m) {
        for (std::size_t j = 0; j < J; ++j) {
            const double d = dm.distance[dm.idx(j, m)];
            const double logc = std::log(static_cast<double>(dm.count[dm.idx(j, m)]));
            cols[m][j] = pareto_log_pdf(d, pareto) - logc;
        }
    }

    // collapse reads with bitwise-identical columns, summing doc
    LocusWorkspace ws;
    ws.num_alleles = J;
    std::vector<std::size_t> pattern_of(M);
    std::vector<std::size_t> reps;
    for (std::size_t m = 0; m < M; ++m) {
        std::size_t found = reps.size();
        for (std::size_t r = 0; r < reps.size(); ++r) {
            if (std::memcmp(cols[reps[r]].data(), cols[m].data(), J * sizeof(double)) == 0) {
                found = r;
                break;
            }
        }
        if (found == reps.size()) reps.push_back(m);
        pattern_of[m] = found;
    }

    ws.num_patterns = reps.size();
    ws.log_fc.resize(J * ws.num_patterns);
    ws.doc.assign(ws.num_patterns, 0.0);
    for (std::size_t r = 0; r < reps.size(); ++r)
        for (std::size_t j = 0; j < J; ++j) ws.log_fc[j * ws.num_patterns + r] = cols[reps[r]][j];
    for (std::size_t m = 0; m < M; ++m) ws.doc[pattern_of[m]] += static_cast<double>(reads.rows[m].doc);
    for (double d : ws.doc) ws.total_doc += d;
    return ws;
}

LikelihoodContext make_context(const LocusWorkspace& ws, const GenotypeMatrix& a,
                               std::span<const double> p, double c) {
    if (a.num_alleles != ws.num_alleles)
        throw std::invalid_argument("make_context: catalog size mismatch");
    if (!(c > 0.0)) throw std::domain_error("make_context: c must be positive");
    const std::vector<double> q = allele_proportions(a, p);
    LikelihoodContext ctx;
    ctx.ws = &ws;
    for (std::size_t j = 0; j < q.size(); ++j) {
        if (q[j] > 0.0) {
            ctx.support.push_back(j);
            ctx.u.push_back(c * q[j]);
        }
    }
    if (ctx.support.empty()) throw std::domain_error("make_context: empty support");
    return ctx;
}

double softmax_dirichlet_logpdf(std::span<const double> a, std::span<const double> u) {
    const std::size_t n = a.size();
    if (n != u.size() || n == 0)
        throw std::invalid_argument("softmax_dirichlet_logpdf: dimension mismatch");
    for (double v : u)
        if (!(v > 0.0)) throw std::domain_error("softmax_dirichlet_logpdf: u must be positive");

    double amax = a[0], asum = 0.0;
    for (double v : a) {
        amax = std::max(amax, v);
        asum += v;
    }
    double lse = 0.0;
    for (double v : a) lse += std::exp(v - amax);
    lse = amax + std::log(lse);

    const double dim = static_cast<double>(n);
    double lp = -asum * asum / (2.0 * dim) - 0.5 * std::log(2.0 * std::numbers::pi * dim);
    for (std::size_t i = 0; i < n; ++i) lp += u[i] * (a[i] - lse);
    lp -= log_dirichlet_norm(u) - std::log(dim);
    return lp;
}

double log_G(std::span<const double> a, const LikelihoodContext& ctx) {
    const std::size_t dim = ctx.dim();
    if (a.size() != dim) throw std::invalid_argument("log_G: dimension mismatch");
    if (dim > kMaxDim) throw std::invalid_argument("log_G: support too large");
    const LocusWorkspace& ws = *ctx.ws;

    double lp[kMaxDim];
    double amax = a[0];
    for (std::size_t t = 1; t < dim; ++t) amax = std::max(amax, a[t]);
    double lse = 0.0;
    for (std::size_t t = 0; t < dim; ++t) lse += std::exp(a[t] - amax);
    lse = amax + std::log(lse);
    for (std::size_t t = 0; t < dim; ++t) lp[t] = a[t] - lse;

    double total = softmax_dirichlet_logpdf(a, ctx.u);

    const std::size_t R = ws.num_patterns;
    for (std::size_t r = 0; r < R; ++r) {
        double best = kNegInf;
        double term[kMaxDim];
        for (std::size_t t = 0; t < dim; ++t) {
            term[t] = lp[t] + ws.log_fc[ctx.support[t] * R + r];
            best = std::max(best, term[t]);
        }
        if (best == kNegInf) return kNegInf;
        double s = 0.0;
        for (std::size_t t = 0; t < dim; ++t) s += std::exp(term[t] - best);
        total += ws.doc[r] * (best + std::log(s));
    }
    return total;
}

LaplaceResult laplace_log_integral(const std::function<double(std::span<const double>)>& log_f,
                                   std::vector<double> x0, const LaplaceOptions& opts) {
    const std::size_t dim = x0.size();
    LaplaceResult res;
    res.log_value = kNegInf;

    auto neg = [&](std::span<const double> x) { return -log_f(x); };
    NelderMeadOptions nm;
    nm.max_iterations = opts.max_iterations;
    nm.f_tolerance = opts.f_tolerance;
    nm.x_tolerance = opts.x_tolerance;
    const auto opt = nelder_mead_minimize(neg, std::move(x0), nm);
    res.argmax = opt.x;
    if (!opt.converged || !std::isfinite(opt.value)) return res;

    // central-difference Hessian of log_f at the optimum, symmetrized by
    // construction (cross terms use the 4-point formula)
    const double h = opts.hessian_step;
    const double f0 = -opt.value;
    std::vector<double> x = opt.x;
    std::vector<double> hess(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        x[i] = opt.x[i] + h;
        const double fp = log_f(x);
        x[i] = opt.x[i] - h;
        const double fm = log_f(x);
        x[i] = opt.x[i];
        hess[i * dim + i] = (fp - 2.0 * f0 + fm) / (h * h);
    }
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i + 1; j < dim; ++j) {
            x[i] = opt.x[i] + h;
            x[j] = opt.x[j] + h;
            const double fpp = log_f(x);
            x[j] = opt.x[j] - h;
            const double fpm = log_f(x);
            x[i] = opt.x[i] - h;
            const double fmm = log_f(x);
            x[j] = opt.x[j] + h;
            const double fmp = log_f(x);
            x[i] = opt.x[i];
            x[j] = opt.x[j];
            const double v = (fpp + fmm - fpm - fmp) / (4.0 * h * h);
            hess[i * dim + j] = v;
            hess[j * dim + i] = v;
        }
    }

    // Cholesky of -H; failure marks the integral as zero
    std::vector<double> chol(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = -hess[i * dim + j];
            for (std::size_t k = 0; k < j; ++k) s -= chol[i * dim + k] * chol[j * dim + k];
            if (i == j) {
                if (!(s > 1e-300) || !std::isfinite(s)) return res;
                chol[i * dim + i] = std::sqrt(s);
            } else {
                chol[i * dim + j] = s / chol[j * dim + j];
            }
        }
    }
    double log_det = 0.0;
    for (std::size_t i = 0; i < dim; ++i) log_det += 2.0 * std::log(chol[i * dim + i]);

    res.converged = true;
    res.hessian_log_det = log_det;
    res.log_value = f0 + 0.5 * static_cast<double>(dim) * std::log(2.0 * std::numbers::pi) -
                    0.5 * log_det;
    return res;
}

LaplaceResult laplace_integral(const LikelihoodContext& ctx, const LaplaceOptions& opts,
                               std::span<const double> warm_start) {
    std::vector<double> x0;
    if (warm_start.size() == ctx.dim()) {
        x0.assign(warm_start.begin(), warm_start.end());
    } else {
        x0.resize(ctx.dim());
        for (std::size_t t = 0; t < ctx.dim(); ++t) x0[t] = std::log(ctx.u[t]);
    }
    auto f = [&](std::span<const double> a) { return log_G(a, ctx); };
    return laplace_log_integral(f, std::move(x0), opts);
}

}  // namespace mixdeconv
