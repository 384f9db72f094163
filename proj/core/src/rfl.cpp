#include "mixdeconv/rfl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mixdeconv {

namespace {

struct Cell {
    double cost = std::numeric_limits<double>::infinity();
    std::uint16_t n_ins = 0, n_del = 0, n_snp = 0, n_fwd = 0, n_back = 0;

    std::uint32_t edits() const {
        return std::uint32_t(n_ins) + n_del + n_snp + n_fwd + n_back;
    }
};

// cost, then total edits, then lex (back, fwd, del, ins, snp)
bool better(const Cell& a, const Cell& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.edits() != b.edits()) return a.edits() < b.edits();
    if (a.n_back != b.n_back) return a.n_back < b.n_back;
    if (a.n_fwd != b.n_fwd) return a.n_fwd < b.n_fwd;
    if (a.n_del != b.n_del) return a.n_del < b.n_del;
    if (a.n_ins != b.n_ins) return a.n_ins < b.n_ins;
    return a.n_snp < b.n_snp;
}

}  // namespace

RflResult rfl_distance(const std::string& parent, const std::string& child,
                       const std::string& motif, const EditCosts& costs, std::uint32_t kappa) {
    if (parent.empty() || child.empty()) throw std::invalid_argument("rfl_distance: empty string");
    if (motif.empty()) throw std::invalid_argument("rfl_distance: empty motif");
    if (!costs.valid()) throw std::invalid_argument("rfl_distance: costs must be positive");

    const std::size_t n = parent.size(), m = child.size(), k = motif.size();

    // motif_x[i] <=> parent[i .. i+k) == motif, likewise for the child
    std::vector<char> motif_x(n + 1, 0), motif_y(m + 1, 0);
    for (std::size_t i = 0; i + k <= n; ++i) motif_x[i] = parent.compare(i, k, motif) == 0;
    for (std::size_t j = 0; j + k <= m; ++j) motif_y[j] = child.compare(j, k, motif) == 0;

    std::vector<Cell> dp((n + 1) * (m + 1));
    auto at = [&](std::size_t i, std::size_t j) -> Cell& { return dp[i * (m + 1) + j]; };
    at(0, 0).cost = 0.0;

    auto relax = [](Cell& dst, Cell cand) {
        if (better(cand, dst)) dst = cand;
    };

    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= m; ++j) {
            if (i == 0 && j == 0) continue;
            Cell& cur = at(i, j);
            if (i >= 1 && j >= 1) {
                Cell c = at(i - 1, j - 1);
                if (parent[i - 1] != child[j - 1]) {
                    c.cost += costs.cost_snp;
                    ++c.n_snp;
                }
                relax(cur, c);
            }
            if (i >= 1) {
                Cell c = at(i - 1, j);
                c.cost += costs.cost_delete;
                ++c.n_del;
                relax(cur, c);
            }
            if (j >= 1) {
                Cell c = at(i, j - 1);
                c.cost += costs.cost_insert;
                ++c.n_ins;
                relax(cur, c);
            }
            // back stutter: drop one motif copy from the parent
            if (i >= k && motif_x[i - k]) {
                Cell c = at(i - k, j);
                c.cost += costs.cost_back_stutter;
                ++c.n_back;
                relax(cur, c);
            }
            // forward stutter: emit one motif copy next to an existing copy
            // (neighbour checked on either side, in parent or child form)
            if (j >= k && motif_y[j - k]) {
                const bool adjacent = (j >= 2 * k && motif_y[j - 2 * k]) ||
                                      (i + k <= n && motif_x[i]) ||
                                      (i >= k && motif_x[i - k]) ||
                                      (j + k <= m && motif_y[j]);
                if (adjacent) {
                    Cell c = at(i, j - k);
                    c.cost += costs.cost_forward_stutter;
                    ++c.n_fwd;
                    relax(cur, c);
                }
            }
        }
    }

    const Cell& fin = at(n, m);
    RflResult r;
    r.table.n_ins = fin.n_ins;
    r.table.n_del = fin.n_del;
    r.table.n_snp = fin.n_snp;
    r.table.n_fwd = fin.n_fwd;
    r.table.n_back = fin.n_back;
    r.table.parent_len = static_cast<std::uint32_t>(n);
    r.table.kappa = kappa;
    r.distance = r.table.cost_under(costs);
    return r;
}

std::size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("ntable: 64-bit overflow");
    return r;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("ntable: 64-bit overflow");
    return r;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
    if (r > n) return 0;
    r = std::min(r, n - r);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
        // result * (n - r + i) is guaranteed divisible by i
        unsigned __int128 t = static_cast<unsigned __int128>(result) * (n - r + i);
        t /= i;
        if (t > std::numeric_limits<std::uint64_t>::max())
            throw std::overflow_error("ntable: binomial overflow");
        result = static_cast<std::uint64_t>(t);
    }
    return result;
}

std::uint64_t ipow(std::uint64_t base, std::uint32_t exp) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < exp; ++i) r = checked_mul(r, base);
    return r;
}

}  // namespace

std::uint64_t ntable(const EditTable& t) {
    if (t.parent_len < 1) throw std::invalid_argument("ntable: parent_len must be >= 1");
    if (t.kappa < 1) throw std::invalid_argument("ntable: kappa must be >= 1");
    const std::uint64_t chars = std::uint64_t(t.n_ins) + t.n_del + t.n_snp;
    std::uint64_t v = binomial(t.parent_len, chars);
    v = checked_mul(v, ipow(3, t.n_snp));
    v = checked_mul(v, ipow(4, t.n_ins));
    v = checked_mul(v, binomial(std::uint64_t(t.kappa) + t.n_fwd - 1, t.n_fwd));
    v = checked_mul(v, binomial(std::uint64_t(t.kappa) + t.n_back - 1, t.n_back));
    return v;
}

std::vector<ContinuityBucket> continuity_counts(std::vector<ArtifactObservation> observations) {
    std::sort(observations.begin(), observations.end(),
              [](const ArtifactObservation& a, const ArtifactObservation& b) {
                  return a.distance < b.distance;
              });
    std::vector<ContinuityBucket> out;
    std::size_t i = 0;
    while (i < observations.size()) {
        const double d = observations[i].distance;
        std::size_t j = i;
        std::vector<const EditTable*> tables;
        while (j < observations.size() &&
               observations[j].distance - d <= 1e-9 * std::max(1.0, std::abs(d))) {
            bool dup = false;
            for (const auto* t : tables)
                if (*t == observations[j].table) {
                    dup = true;
                    break;
                }
            if (!dup) tables.push_back(&observations[j].table);
            ++j;
        }
        std::uint64_t total = 0;
        for (const auto* t : tables) total = checked_add(total, ntable(*t));
        out.push_back({d, std::max<std::uint64_t>(total, 1)});
        i = j;
    }
    return out;
}

}  // namespace mixdeconv
