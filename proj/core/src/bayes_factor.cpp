#include "mixdeconv/bayes_factor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

#include "mixdeconv/priors.hpp"

namespace mixdeconv {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

HypothesisSpaces build_hypothesis_spaces(const CaseData& c) {
    if (c.poi_profile.size() != c.loci.size())
        throw std::invalid_argument("hypothesis spaces: POI profile does not cover all loci");
    HypothesisSpaces h;
    h.poi = c.poi_profile;
    h.log_prior_poi.resize(c.loci.size());
    double bound = 0.0;
    for (std::size_t l = 0; l < c.loci.size(); ++l) {
        h.log_prior_poi[l] = log_prior_row_uniform(c.poi_profile[l], c.loci[l].catalog.size());
        bound -= h.log_prior_poi[l] / std::numbers::ln10;
    }
    h.log10_upper_bound = bound;
    return h;
}

BayesFactorReport bf_estimate(const ChainTrace& trace, const CaseData& c,
                              const HypothesisSpaces& spaces) {
    (void)c;
    BayesFactorReport rep;
    rep.log10_upper_bound = spaces.log10_upper_bound;
    rep.acceptance_p = trace.acceptance_p;
    rep.acceptance_c = trace.acceptance_c;
    rep.steps = static_cast<int>(trace.steps.size());
    rep.burn_in = trace.burn_in;
    rep.seed = trace.seed;
    rep.laplace_failure_rate =
        trace.laplace_total > 0
            ? static_cast<double>(trace.laplace_failures) / trace.laplace_total
            : 0.0;

    std::vector<double> terms;
    terms.reserve(trace.steps.size());
    for (const auto& s : trace.steps)
        if (!s.is_burn_in) terms.push_back(s.log_importance_ratio);
    if (terms.empty()) throw std::invalid_argument("bf_estimate: no post-burn-in steps");

    double best = kNegInf;
    for (double t : terms) best = std::max(best, t);
    if (best == kNegInf) {
        rep.log10_bf = kNegInf;
        rep.warnings.push_back(
            "every importance term was zero: the POI genotype carries no posterior mass "
            "anywhere in the trace");
        return rep;
    }
    double sum = 0.0, sum_sq = 0.0;
    for (double t : terms) {
        if (t == kNegInf) continue;
        sum += std::exp(t - best);
        sum_sq += std::exp(2.0 * (t - best));
    }
    const double n = static_cast<double>(terms.size());
    const double log_mean = best + std::log(sum / n);
    rep.log10_bf = log_mean / std::numbers::ln10;

    // delta-method standard error of log10 of the mean ratio; heuristic, the
    // terms are autocorrelated MCMC output
    const double log_mean_sq = 2.0 * best + std::log(sum_sq / n);
    const double ratio = std::exp(log_mean_sq - 2.0 * log_mean);
    rep.mc_se_log10 = std::sqrt(std::max(ratio - 1.0, 0.0) / n) / std::numbers::ln10;

    if (rep.log10_bf > rep.log10_upper_bound + 1e-9)
        rep.warnings.push_back("estimate exceeds the analytic upper bound; the disjointness "
                               "approximation of the POI slices is breaking down");
    return rep;
}

double decision_threshold_log10(const DecisionLosses& losses, double prior_m1, double prior_m2) {
    if (!(losses.k12 > losses.k22) || !(losses.k21 > losses.k11))
        throw std::invalid_argument("decision losses must satisfy k12 > k22 and k21 > k11");
    if (!(prior_m1 > 0.0) || !(prior_m2 > 0.0) || std::abs(prior_m1 + prior_m2 - 1.0) > 1e-9)
        throw std::invalid_argument("model priors must be positive and sum to 1");
    const double t =
        (losses.k12 - losses.k22) / (losses.k21 - losses.k11) * (prior_m2 / prior_m1);
    return std::log10(t);
}

bool decide_supports_m1(double log10_bf, const DecisionLosses& losses, double prior_m1,
                        double prior_m2) {
    return log10_bf > decision_threshold_log10(losses, prior_m1, prior_m2);
}

void save_report_json(const BayesFactorReport& report, const std::string& path) {
    nlohmann::json j;
    j["log10_bf"] = std::isfinite(report.log10_bf) ? nlohmann::json(report.log10_bf)
                                                   : nlohmann::json("-inf");
    j["log10_upper_bound"] = report.log10_upper_bound;
    j["mc_se_log10"] = report.mc_se_log10;
    j["acceptance_p"] = report.acceptance_p;
    j["acceptance_c"] = report.acceptance_c;
    j["steps"] = report.steps;
    j["burn_in"] = report.burn_in;
    j["seed"] = report.seed;
    j["laplace_failure_rate"] = report.laplace_failure_rate;
    j["warnings"] = report.warnings;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    out << j.dump(2) << '\n';
}

BayesFactorReport load_report_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read report: " + path);
    nlohmann::json j;
    in >> j;
    BayesFactorReport r;
    if (j.at("log10_bf").is_string())
        r.log10_bf = kNegInf;
    else
        r.log10_bf = j.at("log10_bf");
    r.log10_upper_bound = j.at("log10_upper_bound");
    r.mc_se_log10 = j.value("mc_se_log10", 0.0);
    r.acceptance_p = j.value("acceptance_p", 0.0);
    r.acceptance_c = j.value("acceptance_c", 0.0);
    r.steps = j.value("steps", 0);
    r.burn_in = j.value("burn_in", 0);
    r.seed = j.value("seed", std::uint64_t{0});
    r.laplace_failure_rate = j.value("laplace_failure_rate", 0.0);
    if (j.contains("warnings"))
        r.warnings = j["warnings"].get<std::vector<std::string>>();
    return r;
}

}  // namespace mixdeconv
