#include "doctest.h"

#include <cmath>
#include <vector>

#include "mixdeconv/rng.hpp"

using namespace mixdeconv;

TEST_CASE("counter rng reproducibility and stream independence") {
    CounterRng a(42), b(42), c(42, 1);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
    bool any_diff = false;
    CounterRng a2(42);
    for (int i = 0; i < 64; ++i) any_diff |= a2.next_u64() != c.next_u64();
    CHECK(any_diff);
}

TEST_CASE("uniform01 stays inside the open interval and looks flat") {
    CounterRng rng(7);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal moments") {
    CounterRng rng(11);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        s += z;
        s2 += z * z;
    }
    CHECK(s / n == doctest::Approx(0.0).epsilon(0.02));
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("gamma and dirichlet moments") {
    CounterRng rng(13);
    const int n = 100000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += rng.gamma(3.5);
    CHECK(s / n == doctest::Approx(3.5).epsilon(0.02));

    const std::vector<double> alpha = {2.0, 5.0, 3.0};
    std::vector<double> mean(3, 0.0);
    for (int i = 0; i < n / 10; ++i) {
        const auto d = rng.dirichlet(alpha);
        for (int j = 0; j < 3; ++j) mean[j] += d[j];
    }
    for (int j = 0; j < 3; ++j)
        CHECK(mean[j] / (n / 10) == doctest::Approx(alpha[j] / 10.0).epsilon(0.03));
}

TEST_CASE("categorical respects weights") {
    CounterRng rng(17);
    const std::vector<double> w = {1.0, 0.0, 3.0};
    int counts[3] = {0, 0, 0};
    for (int i = 0; i < 40000; ++i) ++counts[rng.categorical(w)];
    CHECK(counts[1] == 0);
    CHECK(static_cast<double>(counts[2]) / counts[0] == doctest::Approx(3.0).epsilon(0.1));
}
