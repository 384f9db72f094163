#include "mixdeconv/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mixdeconv/thread_pool.hpp"

namespace mixdeconv {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lse(std::span<const double> v) {
    double best = kNegInf;
    for (double x : v) best = std::max(best, x);
    if (best == kNegInf) return kNegInf;
    double s = 0.0;
    for (double x : v)
        if (x != kNegInf) s += std::exp(x - best);
    return best + std::log(s);
}

struct LocusEngine {
    LocusWorkspace ws;
    std::vector<Genotype> genotypes;  // all J(J+1)/2, lexicographic
    Genotype poi;
    double log_prior_poi = 0.0;
    std::size_t num_combos = 1;  // genotypes^k_unknown
    // scratch, reused every sweep
    std::vector<double> log_weight;
    std::vector<double> laplace_value;
    std::vector<std::vector<double>> warm;  // per combo argmax, warm starts
};

// Odometer decode: digit r = genotype index of the r-th free row.
void decode_combo(std::size_t combo, std::size_t digits, std::size_t base,
                  std::vector<std::size_t>& out) {
    out.resize(digits);
    for (std::size_t r = 0; r < digits; ++r) {
        out[r] = combo % base;
        combo /= base;
    }
}

struct Chain {
    const CaseData& cd;
    const ChainConfig& cfg;
    PriorSpec prior;
    ProposalConfig prop;
    int k = 0, num_known = 0, k_unknown = 0;
    std::vector<LocusEngine> loci;
    MixtureState state;
    std::vector<double> cur_laplace;  // per locus, at (A_cur, p, c)
    CounterRng rng;
    int laplace_failures = 0;
    int laplace_total = 0;

    Chain(const CaseData& c, const CalibrationBundle& calib, const DistanceMatrix& dm,
          const ChainConfig& config)
        : cd(c), cfg(config), rng(config.seed) {
        k = c.num_contributors_k;
        num_known = c.num_known();
        k_unknown = k - num_known;
        if (k_unknown < 1)
            throw std::invalid_argument("run_chain: need at least one unknown contributor");
        prior.k = k;
        prop = cfg.proposal.value_or(ProposalConfig::defaults_for(k));

        loci.resize(c.loci.size());
        for (std::size_t l = 0; l < c.loci.size(); ++l) {
            LocusEngine& e = loci[l];
            e.ws = build_locus_workspace(dm.loci[l], c.loci[l].reads, calib.pareto);
            e.genotypes = enumerate_genotypes(c.loci[l].catalog.size());
            e.poi = c.poi_profile[l];
            e.log_prior_poi = log_prior_row_uniform(e.poi, c.loci[l].catalog.size());
            e.num_combos = 1;
            for (int r = 0; r < k_unknown; ++r) e.num_combos *= e.genotypes.size();
            e.log_weight.resize(e.num_combos);
            e.laplace_value.resize(e.num_combos);
            e.warm.resize(e.num_combos);
        }

        // initial state: p descending, c, fixed rows bound to their profiles
        state.p = cfg.init_p;
        if (state.p.empty()) {
            state.p.resize(k);
            for (int i = 0; i < k; ++i) state.p[i] = static_cast<double>(k - i);
            const double s = std::accumulate(state.p.begin(), state.p.end(), 0.0);
            for (double& v : state.p) v /= s;
        }
        if (static_cast<int>(state.p.size()) != k)
            throw std::invalid_argument("run_chain: init_p has wrong dimension");
        std::stable_sort(state.p.begin(), state.p.end(), std::greater<double>());
        state.c = cfg.init_c;
        state.labels.resize(k);
        std::iota(state.labels.begin(), state.labels.end(), 0);
        state.genotypes.assign(c.loci.size(), std::vector<Genotype>(k));
        for (std::size_t l = 0; l < c.loci.size(); ++l)
            for (int i = 0; i < k; ++i)
                if (state.labels[i] < num_known)
                    state.genotypes[l][i] = c.known_profiles[state.labels[i]].second[l];
        cur_laplace.assign(c.loci.size(), 0.0);
    }

    std::vector<int> free_rows() const {
        std::vector<int> out;
        for (int i = 0; i < k; ++i)
            if (state.labels[i] >= num_known) out.push_back(i);
        return out;
    }

    GenotypeMatrix matrix_for(std::size_t l, const std::vector<int>& free,
                              const std::vector<std::size_t>& digits) const {
        GenotypeMatrix a;
        a.num_alleles = cd.loci[l].catalog.size();
        a.rows = state.genotypes[l];
        for (std::size_t r = 0; r < free.size(); ++r)
            a.rows[free[r]] = loci[l].genotypes[digits[r]];
        return a;
    }

    double matrix_log_prior(const GenotypeMatrix& a) const {
        double lp = 0.0;
        for (const auto& g : a.rows) lp += log_prior_row_uniform(g, a.num_alleles);
        return lp;
    }

    // Evaluates the marginal integral for one assignment matrix.
    double integral_for(std::size_t l, const GenotypeMatrix& a, std::span<const double> p,
                        double c, std::span<const double> warm, std::vector<double>* argmax) {
        if (cfg.prior_only) return 0.0;
        const LikelihoodContext ctx = make_context(loci[l].ws, a, p, c);
        const LaplaceResult res = laplace_integral(ctx, cfg.laplace, warm);
        if (argmax) *argmax = res.argmax;
        ++laplace_total;
        if (!res.converged) ++laplace_failures;
        return res.log_value;
    }

    // Full enumeration at the current (p, c): fills per-combo weights and
    // returns everything the A-update and the importance term need.
    void enumerate_locus(std::size_t l, const std::vector<int>& free) {
        LocusEngine& e = loci[l];
        std::vector<std::size_t> digits;
        if (cfg.prior_only) {
            for (std::size_t ci = 0; ci < e.num_combos; ++ci) {
                decode_combo(ci, free.size(), e.genotypes.size(), digits);
                const GenotypeMatrix a = matrix_for(l, free, digits);
                e.laplace_value[ci] = 0.0;
                e.log_weight[ci] = matrix_log_prior(a);
            }
            return;
        }
        const int threads = cfg.threads;
        std::atomic<int> failures{0};
        parallel_for(e.num_combos, threads, [&](std::size_t ci) {
            std::vector<std::size_t> local_digits;
            decode_combo(ci, free.size(), e.genotypes.size(), local_digits);
            const GenotypeMatrix a = matrix_for(l, free, local_digits);
            const LikelihoodContext ctx = make_context(e.ws, a, state.p, state.c);
            const LaplaceResult res = laplace_integral(ctx, cfg.laplace, e.warm[ci]);
            e.warm[ci] = res.argmax;
            if (!res.converged) failures.fetch_add(1);
            e.laplace_value[ci] = res.log_value;
            e.log_weight[ci] = matrix_log_prior(a) + res.log_value;
        });
        laplace_total += static_cast<int>(e.num_combos);
        laplace_failures += failures.load();
    }

    // Importance-sampling term of Eq-style estimator at the current (p, c):
    // sum over rows i of prod over loci of
    //   [sum over matrices with row i = POI] / (pi(POI) * [sum over all]).
    double importance_log_term(const std::vector<int>& free,
                               const std::vector<double>& denoms) {
        std::vector<double> per_row(k, 0.0);
        std::vector<std::size_t> digits;
        for (std::size_t l = 0; l < loci.size(); ++l) {
            LocusEngine& e = loci[l];
            for (int i = 0; i < k; ++i) {
                double num = kNegInf;
                const auto it = std::find(free.begin(), free.end(), i);
                if (it == free.end()) {
                    // fixed row: matches iff its profile equals the POI here
                    if (state.genotypes[l][i] == e.poi) num = denoms[l];
                } else {
                    const std::size_t slot = static_cast<std::size_t>(it - free.begin());
                    const std::size_t target = genotype_index(e.poi, cd.loci[l].catalog.size());
                    std::vector<double> matched;
                    for (std::size_t ci = 0; ci < e.num_combos; ++ci) {
                        decode_combo(ci, free.size(), e.genotypes.size(), digits);
                        if (digits[slot] == target) matched.push_back(e.log_weight[ci]);
                    }
                    num = lse(matched);
                }
                per_row[i] += num - denoms[l] - e.log_prior_poi;
            }
        }
        return lse(per_row);
    }

    void gibbs_update_A(const std::vector<int>& free, const std::vector<double>& denoms) {
        std::vector<std::size_t> digits;
        for (std::size_t l = 0; l < loci.size(); ++l) {
            LocusEngine& e = loci[l];
            if (denoms[l] == kNegInf)
                throw std::runtime_error("all marginal integrals are zero at locus " +
                                         cd.loci[l].reads.locus.name +
                                         " (model cannot explain the reads)");
            std::vector<double> w(e.num_combos);
            for (std::size_t ci = 0; ci < e.num_combos; ++ci)
                w[ci] = e.log_weight[ci] == kNegInf ? 0.0 : std::exp(e.log_weight[ci] - denoms[l]);
            const std::size_t pick = rng.categorical(w);
            decode_combo(pick, free.size(), e.genotypes.size(), digits);
            for (std::size_t r = 0; r < free.size(); ++r)
                state.genotypes[l][free[r]] = e.genotypes[digits[r]];
            cur_laplace[l] = e.laplace_value[pick];
        }
    }

    bool metropolis_update_p() {
        std::vector<double> alpha(k);
        for (int i = 0; i < k; ++i) alpha[i] = prop.alpha_p * state.p[i] + 1.0 / k;
        std::vector<double> proposed = rng.dirichlet(alpha);

        std::vector<double> alpha_rev(k);
        for (int i = 0; i < k; ++i) alpha_rev[i] = prop.alpha_p * proposed[i] + 1.0 / k;

        double log_h_new = log_prior_p(proposed, prior);
        std::vector<double> new_laplace(loci.size(), 0.0);
        for (std::size_t l = 0; l < loci.size() && log_h_new != kNegInf; ++l) {
            GenotypeMatrix a;
            a.num_alleles = cd.loci[l].catalog.size();
            a.rows = state.genotypes[l];
            new_laplace[l] = integral_for(l, a, proposed, state.c, {}, nullptr);
            log_h_new += new_laplace[l];
        }
        double log_h_cur = log_prior_p(state.p, prior);
        for (double v : cur_laplace) log_h_cur += v;

        const double log_rb =
            log_dirichlet_pdf(state.p, alpha_rev) - log_dirichlet_pdf(proposed, alpha);
        const double log_accept = log_h_new - log_h_cur + log_rb;
        if (std::log(rng.uniform01()) >= log_accept) return false;

        state.p = std::move(proposed);
        cur_laplace = std::move(new_laplace);
        sort_state();
        return true;
    }

    bool metropolis_update_c() {
        const double proposed = std::exp(std::log(state.c) + prop.eta_c * rng.normal());
        double log_g_new = log_prior_c(proposed, prior);
        std::vector<double> new_laplace(loci.size(), 0.0);
        for (std::size_t l = 0; l < loci.size() && log_g_new != kNegInf; ++l) {
            GenotypeMatrix a;
            a.num_alleles = cd.loci[l].catalog.size();
            a.rows = state.genotypes[l];
            new_laplace[l] = integral_for(l, a, state.p, proposed, {}, nullptr);
            log_g_new += new_laplace[l];
        }
        double log_g_cur = log_prior_c(state.c, prior);
        for (double v : cur_laplace) log_g_cur += v;

        // lognormal proposal correction reduces to proposed / current
        const double log_accept = log_g_new - log_g_cur + std::log(proposed) - std::log(state.c);
        if (std::log(rng.uniform01()) >= log_accept) return false;
        state.c = proposed;
        cur_laplace = std::move(new_laplace);
        return true;
    }

    // Descending stable sort of p; rows, labels and genotypes follow.
    void sort_state() {
        std::vector<int> order(k);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return state.p[a] > state.p[b]; });
        bool identity = true;
        for (int i = 0; i < k; ++i)
            if (order[i] != i) identity = false;
        if (identity) return;

        std::vector<double> p(k);
        std::vector<int> labels(k);
        for (int i = 0; i < k; ++i) {
            p[i] = state.p[order[i]];
            labels[i] = state.labels[order[i]];
        }
        state.p = std::move(p);
        state.labels = std::move(labels);
        for (auto& rows : state.genotypes) {
            std::vector<Genotype> permuted(k);
            for (int i = 0; i < k; ++i) permuted[i] = rows[order[i]];
            rows = std::move(permuted);
        }
    }
};

}  // namespace

ChainTrace run_chain(const CaseData& c, const CalibrationBundle& calibration,
                     const DistanceMatrix& distances, const ChainConfig& config) {
    if (config.steps <= config.burn_in || config.burn_in < 0)
        throw std::invalid_argument("run_chain: need steps > burn_in >= 0");
    if (c.loci.empty()) throw std::invalid_argument("run_chain: case has no loci");
    if (distances.loci.size() != c.loci.size())
        throw std::invalid_argument("run_chain: distance matrix does not match case");

    Chain chain(c, calibration, distances, config);
    ChainTrace trace;
    trace.burn_in = config.burn_in;
    trace.seed = config.seed;
    trace.steps.reserve(config.steps);

    int accept_p = 0, accept_c = 0, counted = 0;
    for (int step = 0; step < config.steps; ++step) {
        const std::vector<int> free = chain.free_rows();
        std::vector<double> denoms(chain.loci.size());
        for (std::size_t l = 0; l < chain.loci.size(); ++l) {
            chain.enumerate_locus(l, free);
            denoms[l] = lse(chain.loci[l].log_weight);
        }
        const double log_term = chain.importance_log_term(free, denoms);
        chain.gibbs_update_A(free, denoms);
        const bool ap = chain.metropolis_update_p();
        const bool ac = chain.metropolis_update_c();

        StepRecord rec;
        rec.p = chain.state.p;
        rec.c = chain.state.c;
        rec.log_importance_ratio = log_term;
        rec.accepted_p = ap;
        rec.accepted_c = ac;
        rec.is_burn_in = step < config.burn_in;
        if (!rec.is_burn_in) {
            ++counted;
            accept_p += ap;
            accept_c += ac;
        }
        trace.steps.push_back(std::move(rec));
    }
    trace.acceptance_p = counted > 0 ? static_cast<double>(accept_p) / counted : 0.0;
    trace.acceptance_c = counted > 0 ? static_cast<double>(accept_c) / counted : 0.0;
    trace.laplace_failures = chain.laplace_failures;
    trace.laplace_total = chain.laplace_total;
    return trace;
}

void save_trace_tsv(const ChainTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace: " + path);
    out << "# seed=" << trace.seed << " burn_in=" << trace.burn_in << '\n';
    char buf[64];
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        out << i;
        for (double v : s.p) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << '\t' << buf;
        }
        std::snprintf(buf, sizeof(buf), "%.17g", s.c);
        out << '\t' << buf;
        std::snprintf(buf, sizeof(buf), "%.17g", s.log_importance_ratio / std::numbers::ln10);
        out << '\t' << buf << '\t' << (s.accepted_p ? 1 : 0) << '\t' << (s.accepted_c ? 1 : 0)
            << '\n';
    }
    if (!out) throw std::runtime_error("write failed for trace: " + path);
}

}  // namespace mixdeconv
