#include "mixdeconv/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "mixdeconv/nelder_mead.hpp"

namespace mixdeconv {

namespace {

double invert_one(double p_edit, const ParetoParams& params, const char* edit_name) {
    const double scale = (1.0 - params.zero_mass_rho) * params.shape * params.rate_lambda;
    if (!(p_edit > 0.0) || !(p_edit < scale)) {
        std::ostringstream msg;
        msg << "probs_to_costs: probability of edit '" << edit_name << "' (" << p_edit
            << ") must lie in (0, " << scale << ") for the density inversion";
        throw std::domain_error(msg.str());
    }
    return (std::pow(p_edit / scale, -1.0 / (params.shape + 1.0)) - 1.0) / params.rate_lambda;
}

}  // namespace

EditCosts probs_to_costs(const EditProbabilities& probs, const ParetoParams& params) {
    if (!params.valid()) throw std::domain_error("probs_to_costs: invalid Pareto parameters");
    EditCosts c;
    c.cost_insert = invert_one(probs.p_ins, params, "insert");
    c.cost_delete = invert_one(probs.p_del, params, "delete");
    c.cost_snp = invert_one(probs.p_snp, params, "snp");
    c.cost_forward_stutter = invert_one(probs.p_fwd, params, "forward_stutter");
    c.cost_back_stutter = invert_one(probs.p_back, params, "back_stutter");
    return c.normalized();
}

namespace {

std::vector<double> support_weights(const AveragedEcdf& ecdf, bool weighted) {
    const std::size_t n = ecdf.support_x.size();
    std::vector<double> w(n, 1.0);
    if (!weighted || n < 2) return w;
    for (std::size_t i = 0; i < n; ++i) {
        double gap;
        if (i == 0)
            gap = (ecdf.support_x[1] - ecdf.support_x[0]) / 2.0;
        else if (i + 1 == n)
            gap = (ecdf.support_x[n - 1] - ecdf.support_x[n - 2]) / 2.0;
        else
            gap = (ecdf.support_x[i + 1] - ecdf.support_x[i - 1]) / 2.0;
        w[i] = 1.0 / std::max(gap, 1e-12);
    }
    double mean = 0.0;
    for (double v : w) mean += v;
    mean /= static_cast<double>(n);
    for (double& v : w) v /= mean;
    return w;
}

double objective_at(const AveragedEcdf& ecdf, std::span<const double> weights,
                    const ParetoParams& p) {
    double total = 0.0;
    for (std::size_t i = 0; i < ecdf.support_x.size(); ++i)
        total += weights[i] * std::abs(ecdf.values_y[i] - pareto_cdf(ecdf.support_x[i], p));
    return total;
}

}  // namespace

double pareto_fit_objective(const AveragedEcdf& ecdf, const ParetoParams& params,
                            const ParetoFitOptions& opts) {
    const auto w = support_weights(ecdf, opts.weighted);
    return objective_at(ecdf, w, params);
}

ParetoParams fit_pareto(const AveragedEcdf& ecdf, const ParetoParams& init,
                        const ParetoFitOptions& opts) {
    if (ecdf.empty()) throw std::invalid_argument("fit_pareto: empty ECDF");
    const auto w = support_weights(ecdf, opts.weighted);

    auto objective = [&](std::span<const double> x) {
        ParetoParams p{x[0], x[1], x[2]};
        if (!p.valid()) return std::numeric_limits<double>::infinity();
        return objective_at(ecdf, w, p);
    };

    NelderMeadOptions nm;
    nm.max_iterations = opts.max_iterations;
    nm.f_tolerance = opts.tolerance;
    nm.x_tolerance = opts.tolerance;
    const auto r = nelder_mead_minimize(
        objective, {init.shape, init.rate_lambda, init.zero_mass_rho}, nm);
    if (!r.converged && !std::isfinite(r.value)) {
        std::ostringstream msg;
        msg << "fit_pareto failed: best iterate (shape,lambda,rho) = " << r.x[0] << ' ' << r.x[1]
            << ' ' << r.x[2] << " objective = " << r.value;
        throw std::runtime_error(msg.str());
    }
    return ParetoParams{r.x[0], r.x[1], r.x[2]};
}

StateVector tally_state_freqs(std::span<const LocusReadTable> corpus, const EcdfOptions& opts) {
    if (corpus.empty()) throw std::invalid_argument("tally_state_freqs: empty corpus");
    StateVector mean{};
    for (const auto& table : corpus) {
        // parent = unique highest-count sequence (same rule as the ECDF)
        std::size_t best = 0;
        for (std::size_t r = 1; r < table.rows.size(); ++r) {
            if (table.rows[r].doc > table.rows[best].doc ||
                (opts.tie_break_lexicographic && table.rows[r].doc == table.rows[best].doc &&
                 table.rows[r].sequence < table.rows[best].sequence))
                best = r;
        }
        StateVector counts{};
        double total = 0.0;
        for (const auto& row : table.rows) {
            const int s =
                classify_artifact(table.rows[best].sequence, row.sequence,
                                  table.locus.primary_motif);
            counts[s] += static_cast<double>(row.doc);
            total += static_cast<double>(row.doc);
        }
        for (int s = 0; s < kNumStates; ++s) mean[s] += counts[s] / total;
    }
    for (int s = 0; s < kNumStates; ++s) mean[s] /= static_cast<double>(corpus.size());
    return mean;
}

namespace {

std::string corpus_fnv_hash(std::span<const LocusReadTable> corpus) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](const void* data, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    };
    for (const auto& t : corpus) {
        mix(t.locus.name.data(), t.locus.name.size());
        for (const auto& r : t.rows) {
            mix(r.sequence.data(), r.sequence.size());
            mix(&r.doc, sizeof(r.doc));
        }
    }
    std::ostringstream s;
    s << std::hex << h;
    return s.str();
}

double max_cost_delta(const EditCosts& a, const EditCosts& b) {
    return std::max({std::abs(a.cost_insert - b.cost_insert),
                     std::abs(a.cost_delete - b.cost_delete), std::abs(a.cost_snp - b.cost_snp),
                     std::abs(a.cost_forward_stutter - b.cost_forward_stutter),
                     std::abs(a.cost_back_stutter - b.cost_back_stutter)});
}

}  // namespace

CalibrationBundle calibrate(std::span<const LocusReadTable> corpus, const ParetoParams& init,
                            const CalibrateOptions& opts) {
    if (corpus.empty()) throw std::invalid_argument("calibrate: empty training corpus");

    CalibrationBundle bundle;
    bundle.corpus_hash = corpus_fnv_hash(corpus);

    const StateVector freqs = tally_state_freqs(corpus, opts.ecdf);
    const EditProbFit fit = fit_edit_probs(freqs);
    bundle.edit_probs = fit.probs;
    bundle.edit_fit_residual = fit.residual;

    EditCosts costs = probs_to_costs(bundle.edit_probs, init);
    ParetoParams params = init;

    std::ostringstream trajectory;
    int changed_rounds = 0;
    bool converged = false;
    for (int round = 1; round <= opts.max_rounds; ++round) {
        const AveragedEcdf ecdf = build_averaged_ecdf(corpus, costs, opts.ecdf);
        params = fit_pareto(ecdf, params, opts.fit);
        const EditCosts next = probs_to_costs(bundle.edit_probs, params);
        const double delta = max_cost_delta(next, costs);
        trajectory << "round " << round << ": delta=" << delta << " costs=(" << next.cost_insert
                   << ',' << next.cost_delete << ',' << next.cost_snp << ','
                   << next.cost_forward_stutter << ",1)\n";
        costs = next;
        bundle.final_cost_delta = delta;
        if (delta < opts.cost_tolerance) {
            converged = true;
            break;
        }
        ++changed_rounds;
    }
    if (!converged)
        throw std::runtime_error("calibrate: cost loop did not settle within " +
                                 std::to_string(opts.max_rounds) + " rounds\n" + trajectory.str());

    bundle.costs = costs;
    bundle.pareto = params;
    bundle.iterations = changed_rounds;
    return bundle;
}

void save_bundle(const CalibrationBundle& bundle, const std::string& path) {
    nlohmann::json j;
    j["edit_probs"] = {{"fwd", bundle.edit_probs.p_fwd}, {"back", bundle.edit_probs.p_back},
                       {"ins", bundle.edit_probs.p_ins}, {"del", bundle.edit_probs.p_del},
                       {"snp", bundle.edit_probs.p_snp}};
    j["costs"] = {{"insert", bundle.costs.cost_insert},
                  {"delete", bundle.costs.cost_delete},
                  {"snp", bundle.costs.cost_snp},
                  {"forward_stutter", bundle.costs.cost_forward_stutter},
                  {"back_stutter", bundle.costs.cost_back_stutter}};
    j["pareto"] = {{"shape", bundle.pareto.shape},
                   {"rate_lambda", bundle.pareto.rate_lambda},
                   {"zero_mass_rho", bundle.pareto.zero_mass_rho}};
    j["provenance"] = {{"corpus_hash", bundle.corpus_hash},
                       {"iterations", bundle.iterations},
                       {"final_cost_delta", bundle.final_cost_delta},
                       {"edit_fit_residual", bundle.edit_fit_residual}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write calibration bundle: " + path);
    out << j.dump(2) << '\n';
}

CalibrationBundle load_bundle(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read calibration bundle: " + path);
    nlohmann::json j;
    in >> j;
    CalibrationBundle b;
    b.edit_probs.p_fwd = j.at("edit_probs").at("fwd");
    b.edit_probs.p_back = j.at("edit_probs").at("back");
    b.edit_probs.p_ins = j.at("edit_probs").at("ins");
    b.edit_probs.p_del = j.at("edit_probs").at("del");
    b.edit_probs.p_snp = j.at("edit_probs").at("snp");
    b.costs.cost_insert = j.at("costs").at("insert");
    b.costs.cost_delete = j.at("costs").at("delete");
    b.costs.cost_snp = j.at("costs").at("snp");
    b.costs.cost_forward_stutter = j.at("costs").at("forward_stutter");
    b.costs.cost_back_stutter = j.at("costs").at("back_stutter");
    b.pareto.shape = j.at("pareto").at("shape");
    b.pareto.rate_lambda = j.at("pareto").at("rate_lambda");
    b.pareto.zero_mass_rho = j.at("pareto").at("zero_mass_rho");
    if (j.contains("provenance")) {
        const auto& p = j["provenance"];
        b.corpus_hash = p.value("corpus_hash", "");
        b.iterations = p.value("iterations", 0);
        b.final_cost_delta = p.value("final_cost_delta", 0.0);
        b.edit_fit_residual = p.value("edit_fit_residual", 0.0);
    }
    return b;
}

}  // namespace mixdeconv
