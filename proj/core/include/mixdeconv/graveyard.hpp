#pragma once

#include <array>
#include <string>

namespace mixdeconv {

/// Per-PCR-cycle probabilities of each single-edit class. p_none() is the
/// stay-put probability, p_any() the total edit probability.
struct EditProbabilities {
    double p_fwd = 0.0;
    double p_back = 0.0;
    double p_ins = 0.0;
    double p_del = 0.0;
    double p_snp = 0.0;

    double p_any() const { return p_fwd + p_back + p_ins + p_del + p_snp; }
    double p_none() const { return 1.0 - p_any(); }
    bool valid() const {
        return p_fwd >= 0 && p_back >= 0 && p_ins >= 0 && p_del >= 0 && p_snp >= 0 &&
               p_any() < 1.0;
    }
};

// State order used everywhere: none, fwd, back, ins, del, snp, graveyard.
inline constexpr int kStateNone = 0;
inline constexpr int kStateFwd = 1;
inline constexpr int kStateBack = 2;
inline constexpr int kStateIns = 3;
inline constexpr int kStateDel = 4;
inline constexpr int kStateSnp = 5;
inline constexpr int kStateGraveyard = 6;
inline constexpr int kNumStates = 7;
inline constexpr int kPcrCycles = 29;

using StateVector = std::array<double, kNumStates>;

/// 7x7 absorbing transition matrix of the single-edit chain.
std::array<std::array<double, kNumStates>, kNumStates> graveyard_matrix(
    const EditProbabilities& probs);

/// State occupation after the PCR cycles, by the closed form. Agrees with
/// repeated multiplication by graveyard_matrix to ~1e-12.
StateVector graveyard_forward(const EditProbabilities& probs);

/// Same distribution via explicit matrix power (kept as the slow
/// cross-check of the closed form).
StateVector graveyard_forward_matrix_power(const EditProbabilities& probs);

struct EditProbFit {
    EditProbabilities probs;
    double residual = 0.0;  // sum of squared deviations at the optimum
    bool converged = false;
};

/// Least-squares inversion of graveyard_forward: finds edit probabilities
/// whose predicted state occupation best matches the empirical 7-vector.
/// Throws std::runtime_error (carrying the best iterate in the message) if
/// the optimizer fails to converge.
EditProbFit fit_edit_probs(const StateVector& state_freqs);

/// Structural classification of one observed sequence against its parent:
/// exactly the parent, exactly one edit of a given type, or the graveyard
/// (everything at two or more edits).
int classify_artifact(const std::string& parent, const std::string& seq,
                      const std::string& motif);

}  // namespace mixdeconv
