#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace testsup {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ScriptSearch {
    const std::string& x;
    const std::string& y;
    const std::string& motif;
    const mixdeconv::EditCosts& costs;
    std::size_t k;
    double best = kInf;

    bool motif_at(const std::string& s, std::size_t pos) const {
        return pos + k <= s.size() && s.compare(pos, k, motif) == 0;
    }

    void rec(std::size_t i, std::size_t j, int edits_left, double cost) {
        if (cost >= best) return;
        if (i == x.size() && j == y.size()) {
            best = cost;
            return;
        }
        // free match first: it can only help the prune
        if (i < x.size() && j < y.size() && x[i] == y[j]) rec(i + 1, j + 1, edits_left, cost);
        if (edits_left == 0) return;
        if (i < x.size() && j < y.size() && x[i] != y[j])
            rec(i + 1, j + 1, edits_left - 1, cost + costs.cost_snp);
        if (i < x.size()) rec(i + 1, j, edits_left - 1, cost + costs.cost_delete);
        if (j < y.size()) rec(i, j + 1, edits_left - 1, cost + costs.cost_insert);
        if (motif_at(x, i)) rec(i + k, j, edits_left - 1, cost + costs.cost_back_stutter);
        if (motif_at(y, j)) {
            const bool adjacent = motif_at(y, j + k) || motif_at(x, i) ||
                                  (j >= k && motif_at(y, j - k)) ||
                                  (i >= k && motif_at(x, i - k));
            if (adjacent) rec(i, j + k, edits_left - 1, cost + costs.cost_forward_stutter);
        }
    }
};

}  // namespace

double script_min_cost(const std::string& parent, const std::string& child,
                       const std::string& motif, const mixdeconv::EditCosts& costs,
                       int max_edits) {
    ScriptSearch s{parent, child, motif, costs, motif.size()};
    s.rec(0, 0, max_edits, 0.0);
    return s.best;
}

namespace {

// One application step: all strings one restricted edit away from s, with
// the edit's cost.
void one_edit_neighbours(const std::string& s, const std::string& motif,
                         const mixdeconv::EditCosts& costs,
                         std::vector<std::pair<std::string, double>>& out) {
    static const char bases[] = {'A', 'C', 'G', 'T'};
    const std::size_t k = motif.size();
    out.clear();
    for (std::size_t i = 0; i <= s.size(); ++i)
        for (char b : bases) {
            std::string t = s;
            t.insert(t.begin() + i, b);
            out.emplace_back(std::move(t), costs.cost_insert);
        }
    if (s.size() > 1)
        for (std::size_t i = 0; i < s.size(); ++i) {
            std::string t = s;
            t.erase(i, 1);
            out.emplace_back(std::move(t), costs.cost_delete);
        }
    for (std::size_t i = 0; i < s.size(); ++i)
        for (char b : bases) {
            if (s[i] == b) continue;
            std::string t = s;
            t[i] = b;
            out.emplace_back(std::move(t), costs.cost_snp);
        }
    for (std::size_t i = 0; i + k <= s.size(); ++i) {
        if (s.compare(i, k, motif) != 0) continue;
        // duplicate the copy (forward stutter) and drop it (back stutter)
        std::string dup = s;
        dup.insert(i, motif);
        out.emplace_back(std::move(dup), costs.cost_forward_stutter);
        if (s.size() > k) {
            std::string del = s;
            del.erase(i, k);
            out.emplace_back(std::move(del), costs.cost_back_stutter);
        }
    }
}

}  // namespace

std::map<std::string, double> enumerate_children(const std::string& parent,
                                                 const std::string& motif,
                                                 const mixdeconv::EditCosts& costs, int depth) {
    std::map<std::string, double> best;
    best[parent] = 0.0;
    std::vector<std::pair<std::string, double>> frontier = {{parent, 0.0}};
    std::vector<std::pair<std::string, double>> neigh;
    for (int d = 0; d < depth; ++d) {
        std::vector<std::pair<std::string, double>> next;
        for (const auto& [s, cost] : frontier) {
            one_edit_neighbours(s, motif, costs, neigh);
            for (auto& [t, c] : neigh) {
                const double total = cost + c;
                auto it = best.find(t);
                if (it == best.end() || total < it->second) {
                    best[t] = total;
                    next.emplace_back(t, total);
                } else if (d + 1 < depth) {
                    // still worth expanding through a dominated path? no:
                    // any continuation from the cheaper copy dominates
                }
            }
        }
        frontier = std::move(next);
    }
    return best;
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double z0 = z;
            z = z0 - p0 / pp;
            if (std::abs(z - z0) < 1e-15) break;
        }
        const double half = 0.5 * (b - a), mid = 0.5 * (b + a);
        nodes[i] = mid - half * z;
        nodes[n - 1 - i] = mid + half * z;
        weights[i] = 2.0 * half / ((1.0 - z * z) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

double log_integral_box(const std::function<double(std::span<const double>)>& log_f,
                        std::span<const double> lo, std::span<const double> hi, int nodes) {
    const int dim = static_cast<int>(lo.size());
    std::vector<std::vector<double>> xs(dim), ws(dim);
    for (int d = 0; d < dim; ++d) gauss_legendre(nodes, lo[d], hi[d], xs[d], ws[d]);

    std::vector<int> idx(dim, 0);
    std::vector<double> point(dim);
    double best = -kInf;
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(std::pow(nodes, dim)));
    while (true) {
        double logw = 0.0;
        for (int d = 0; d < dim; ++d) {
            point[d] = xs[d][idx[d]];
            logw += std::log(ws[d][idx[d]]);
        }
        const double v = log_f(point) + logw;
        vals.push_back(v);
        best = std::max(best, v);
        int d = 0;
        while (d < dim && ++idx[d] == nodes) idx[d++] = 0;
        if (d == dim) break;
    }
    if (best == -kInf) return -kInf;
    double sum = 0.0;
    for (double v : vals)
        if (v != -kInf) sum += std::exp(v - best);
    return best + std::log(sum);
}

double log_integral_box(const std::function<double(std::span<const double>)>& log_f, int dim,
                        double lo, double hi, int nodes) {
    std::vector<double> l(dim, lo), h(dim, hi);
    return log_integral_box(log_f, l, h, nodes);
}

double log_integral_1d(const std::function<double(double)>& log_f, double lo, double hi,
                       int nodes) {
    auto wrap = [&](std::span<const double> x) { return log_f(x[0]); };
    return log_integral_box(wrap, 1, lo, hi, nodes);
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

double ks_critical(double alpha, std::size_t n) {
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

double dkw_epsilon(std::size_t n, double alpha) {
    return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

}  // namespace testsup
