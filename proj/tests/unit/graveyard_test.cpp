#include "doctest.h"

#include <cmath>

#include "mixdeconv/graveyard.hpp"
#include "mixdeconv/rng.hpp"

using namespace mixdeconv;

namespace {
EditProbabilities uniform_probs(double p) {
    EditProbabilities e;
    e.p_fwd = e.p_back = e.p_ins = e.p_del = e.p_snp = p;
    return e;
}
}  // namespace

TEST_CASE("graveyard forward with no edits stays at the parent") {
    const auto v = graveyard_forward(EditProbabilities{});
    CHECK(v[kStateNone] == doctest::Approx(1.0));
    for (int s = 1; s < kNumStates; ++s) CHECK(v[s] == doctest::Approx(0.0));
}

TEST_CASE("graveyard forward closed form: parent mass at p_n = 0.99") {
    const auto v = graveyard_forward(uniform_probs(0.002));
    CHECK(v[kStateNone] == doctest::Approx(std::pow(0.99, 29)).epsilon(1e-12));
    CHECK(v[kStateNone] == doctest::Approx(0.7472).epsilon(1e-4));
}

TEST_CASE("graveyard closed form equals the 29-fold matrix power") {
    CounterRng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        EditProbabilities e;
        e.p_fwd = rng.uniform01() * 0.01;
        e.p_back = rng.uniform01() * 0.01;
        e.p_ins = rng.uniform01() * 0.01;
        e.p_del = rng.uniform01() * 0.01;
        e.p_snp = rng.uniform01() * 0.01;
        const auto closed = graveyard_forward(e);
        const auto power = graveyard_forward_matrix_power(e);
        double sum = 0.0;
        for (int s = 0; s < kNumStates; ++s) {
            CHECK(std::abs(closed[s] - power[s]) <= 1e-12);
            sum += closed[s];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("fit_edit_probs round trip") {
    CounterRng rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        EditProbabilities truth;
        truth.p_fwd = 1e-4 + rng.uniform01() * 0.009;
        truth.p_back = 1e-4 + rng.uniform01() * 0.009;
        truth.p_ins = 1e-4 + rng.uniform01() * 0.009;
        truth.p_del = 1e-4 + rng.uniform01() * 0.009;
        truth.p_snp = 1e-4 + rng.uniform01() * 0.009;
        const auto fit = fit_edit_probs(graveyard_forward(truth));
        CHECK(std::abs(fit.probs.p_fwd - truth.p_fwd) < 1e-4);
        CHECK(std::abs(fit.probs.p_back - truth.p_back) < 1e-4);
        CHECK(std::abs(fit.probs.p_ins - truth.p_ins) < 1e-4);
        CHECK(std::abs(fit.probs.p_del - truth.p_del) < 1e-4);
        CHECK(std::abs(fit.probs.p_snp - truth.p_snp) < 1e-4);
    }
}

TEST_CASE("fit_edit_probs boundary: pure parent data gives zero edit probabilities") {
    StateVector v{};
    v[kStateNone] = 1.0;
    const auto fit = fit_edit_probs(v);
    CHECK(fit.probs.p_any() < 1e-6);
}

TEST_CASE("fit_edit_probs tolerates perturbed inputs") {
    CounterRng rng(41);
    EditProbabilities truth = uniform_probs(0.004);
    auto v = graveyard_forward(truth);
    for (int s = 0; s < kNumStates - 1; ++s) v[s] += (rng.uniform01() - 0.5) * 2e-3;
    double sum = 0.0;
    for (int s = 0; s < kNumStates - 1; ++s) sum += v[s];
    v[kStateGraveyard] = 1.0 - sum;
    const auto fit = fit_edit_probs(v);
    CHECK(fit.residual <= 5e-6);  // within the injected noise scale
}

TEST_CASE("classify_artifact recognizes each single-edit class") {
    const std::string motif = "AACG";
    std::string parent = "TT";
    for (int i = 0; i < 5; ++i) parent += motif;
    parent += "GG";

    CHECK(classify_artifact(parent, parent, motif) == kStateNone);

    std::string fwd = parent;
    fwd.insert(2, motif);
    CHECK(classify_artifact(parent, fwd, motif) == kStateFwd);

    std::string back = parent;
    back.erase(2, motif.size());
    CHECK(classify_artifact(parent, back, motif) == kStateBack);

    std::string ins = parent;
    ins.insert(ins.begin() + 1, 'T');
    CHECK(classify_artifact(parent, ins, motif) == kStateIns);

    std::string del = parent;
    del.erase(0, 1);
    CHECK(classify_artifact(parent, del, motif) == kStateDel);

    std::string snp = parent;
    snp[4] = snp[4] == 'A' ? 'C' : 'A';
    CHECK(classify_artifact(parent, snp, motif) == kStateSnp);

    std::string grave = parent;
    grave[0] = grave[0] == 'A' ? 'C' : 'A';
    grave[5] = grave[5] == 'G' ? 'T' : 'G';
    CHECK(classify_artifact(parent, grave, motif) == kStateGraveyard);

    // four arbitrary inserted chars are not a stutter
    std::string fake = parent;
    fake.insert(0, "AAAA");
    CHECK(classify_artifact(parent, fake, motif) == kStateGraveyard);
}
