#include "mixdeconv/graveyard.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mixdeconv/nelder_mead.hpp"

namespace mixdeconv {

std::array<std::array<double, kNumStates>, kNumStates> graveyard_matrix(
    const EditProbabilities& probs) {
    const double pn = probs.p_none();
    const double pa = probs.p_any();
    std::array<std::array<double, kNumStates>, kNumStates> t{};
    t[kStateNone] = {pn, probs.p_fwd, probs.p_back, probs.p_ins, probs.p_del, probs.p_snp, 0.0};
    for (int s = kStateFwd; s <= kStateSnp; ++s) {
        t[s][s] = pn;
        t[s][kStateGraveyard] = pa;
    }
    t[kStateGraveyard][kStateGraveyard] = 1.0;
    return t;
}

StateVector graveyard_forward(const EditProbabilities& probs) {
    const double pn = probs.p_none();
    const double pa = probs.p_any();
    const double pn28 = std::pow(pn, kPcrCycles - 1);
    StateVector v{};
    v[kStateNone] = pn28 * pn;
    v[kStateFwd] = kPcrCycles * probs.p_fwd * pn28;
    v[kStateBack] = kPcrCycles * probs.p_back * pn28;
    v[kStateIns] = kPcrCycles * probs.p_ins * pn28;
    v[kStateDel] = kPcrCycles * probs.p_del * pn28;
    v[kStateSnp] = kPcrCycles * probs.p_snp * pn28;
    v[kStateGraveyard] = 1.0 - pn28 * (pn + kPcrCycles * pa);
    return v;
}

StateVector graveyard_forward_matrix_power(const EditProbabilities& probs) {
    const auto t = graveyard_matrix(probs);
    StateVector v{};
    v[kStateNone] = 1.0;
    for (int cycle = 0; cycle < kPcrCycles; ++cycle) {
        StateVector next{};
        for (int i = 0; i < kNumStates; ++i)
            for (int j = 0; j < kNumStates; ++j) next[j] += v[i] * t[i][j];
        v = next;
    }
    return v;
}

EditProbFit fit_edit_probs(const StateVector& state_freqs) {
    auto unpack = [](std::span<const double> x) {
        EditProbabilities p;
        p.p_fwd = x[0];
        p.p_back = x[1];
        p.p_ins = x[2];
        p.p_del = x[3];
        p.p_snp = x[4];
        return p;
    };
    auto objective = [&](std::span<const double> x) {
        for (double v : x)
            if (v < 0.0) return std::numeric_limits<double>::infinity();
        const EditProbabilities p = unpack(x);
        if (p.p_any() >= 1.0) return std::numeric_limits<double>::infinity();
        const StateVector pred = graveyard_forward(p);
        double ss = 0.0;
        for (int s = 0; s < kNumStates; ++s) {
            const double d = pred[s] - state_freqs[s];
            ss += d * d;
        }
        return ss;
    };

    // Analytic inversion of the closed form as the starting point; exact
    // when the input is itself a forward image.
    const double pn = std::pow(std::clamp(state_freqs[kStateNone], 1e-300, 1.0),
                               1.0 / kPcrCycles);
    const double denom = kPcrCycles * std::pow(pn, kPcrCycles - 1);
    std::vector<double> x0(5);
    for (int e = 0; e < 5; ++e)
        x0[e] = std::max(0.0, state_freqs[kStateFwd + e] / denom);

    NelderMeadOptions opts;
    opts.max_iterations = 50000;
    opts.f_tolerance = 1e-24;
    opts.x_tolerance = 1e-12;
    opts.zero_step = 1e-4;
    const auto r = nelder_mead_minimize(objective, x0, opts);

    EditProbFit fit;
    fit.probs = unpack(r.x);
    fit.residual = r.value;
    fit.converged = r.converged;
    if (!r.converged) {
        std::ostringstream msg;
        msg << "fit_edit_probs failed to converge; best iterate (f,b,i,d,s) = ";
        for (double v : r.x) msg << v << ' ';
        msg << "residual = " << r.value;
        throw std::runtime_error(msg.str());
    }
    return fit;
}

namespace {

bool single_char_insertion(const std::string& parent, const std::string& seq) {
    if (seq.size() != parent.size() + 1) return false;
    std::size_t i = 0;
    while (i < parent.size() && parent[i] == seq[i]) ++i;
    return parent.compare(i, std::string::npos, seq, i + 1, std::string::npos) == 0;
}

bool single_motif_insertion(const std::string& parent, const std::string& seq,
                            const std::string& motif) {
    const std::size_t k = motif.size();
    if (seq.size() != parent.size() + k) return false;
    for (std::size_t i = 0; i + k <= seq.size(); ++i) {
        if (seq.compare(i, k, motif) != 0) continue;
        if (seq.compare(0, i, parent, 0, i) != 0) continue;
        if (seq.compare(i + k, std::string::npos, parent, i, std::string::npos) != 0) continue;
        // inserted copy must sit next to an existing copy in the parent
        const bool left = i >= k && parent.compare(i - k, k, motif) == 0;
        const bool right = i + k <= parent.size() && parent.compare(i, k, motif) == 0;
        if (left || right) return true;
    }
    return false;
}

bool single_motif_deletion(const std::string& parent, const std::string& seq,
                           const std::string& motif) {
    const std::size_t k = motif.size();
    if (parent.size() != seq.size() + k) return false;
    for (std::size_t i = 0; i + k <= parent.size(); ++i) {
        if (parent.compare(i, k, motif) != 0) continue;
        if (parent.compare(0, i, seq, 0, i) != 0) continue;
        if (parent.compare(i + k, std::string::npos, seq, i, std::string::npos) == 0) return true;
    }
    return false;
}

}  // namespace

int classify_artifact(const std::string& parent, const std::string& seq,
                      const std::string& motif) {
    if (seq == parent) return kStateNone;
    const std::size_t k = motif.size();
    const long delta = static_cast<long>(seq.size()) - static_cast<long>(parent.size());

    if (delta == static_cast<long>(k) && single_motif_insertion(parent, seq, motif))
        return kStateFwd;
    if (delta == -static_cast<long>(k) && single_motif_deletion(parent, seq, motif))
        return kStateBack;
    if (delta == 1 && single_char_insertion(parent, seq)) return kStateIns;
    if (delta == -1 && single_char_insertion(seq, parent)) return kStateDel;
    if (delta == 0) {
        std::size_t mismatches = 0;
        for (std::size_t i = 0; i < parent.size(); ++i)
            if (parent[i] != seq[i]) ++mismatches;
        if (mismatches == 1) return kStateSnp;
    }
    return kStateGraveyard;
}

}  // namespace mixdeconv
