#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "dqas/circuitgen.hpp"
#include "dqas/error.hpp"
#include "dqas/expressibility.hpp"
#include "oracles.hpp"

using namespace dqas;

TEST(HaarMasses, SumToOneAndMatchClosedForm) {
    for (double dim : {2.0, 8.0, 64.0}) {
        const auto m = haar_bin_masses(dim, 75);
        ASSERT_EQ(m.size(), 75u);
        EXPECT_NEAR(std::accumulate(m.begin(), m.end(), 0.0), 1.0, 1e-12);
        const double a = 10.0 / 75;
        const double b = 11.0 / 75;
        EXPECT_NEAR(m[10], std::pow(1 - a, dim - 1) - std::pow(1 - b, dim - 1), 1e-15);
    }
    for (double v : haar_bin_masses(64, 75)) EXPECT_GT(v, 0.0);
}

TEST(HaarMasses, QubitIsUniform) {
    for (double v : haar_bin_masses(2, 10)) EXPECT_NEAR(v, 0.1, 1e-15);
}

TEST(FidelityBin, Edges) {
    EXPECT_EQ(fidelity_bin(0.0, 75), 0);
    EXPECT_EQ(fidelity_bin(1.0, 75), 74);
    EXPECT_EQ(fidelity_bin(0.5, 10), 5);
    EXPECT_EQ(fidelity_bin(0.0999, 10), 0);
}

TEST(Expressibility, IdentityCircuitIsMaximallyBad) {
    // Every fidelity is 1, so the histogram is a spike in the last bin.
    const int bins = 75;
    const double dim = 64;
    const auto est = estimate_expressibility(Circuit::on_line(6), {1000, bins}, 1);
    const auto q = haar_bin_masses(dim, bins);
    const double eps = 1e-12;
    const double z = 1 + bins * eps;
    double expected = 0.0;
    for (int k = 0; k < bins; ++k) {
        const double p = ((k == bins - 1 ? 1.0 : 0.0) + eps) / z;
        expected += p * std::log(p / q[k]);
    }
    EXPECT_NEAR(est.value, expected, 1e-9);
    EXPECT_GT(est.value, 200.0);
}

TEST(Expressibility, HaarSamplesMatchAnalyticMasses) {
    std::mt19937_64 rng(44);
    const int n = 3;
    const int bins = 75;
    std::vector<std::uint64_t> counts(bins, 0);
    double mean = 0.0;
    const int samples = 40000;
    for (int i = 0; i < samples; ++i) {
        const double f = fidelity(oracle::haar_state(n, rng), oracle::haar_state(n, rng));
        mean += f / samples;
        ++counts[fidelity_bin(f, bins)];
    }
    EXPECT_NEAR(mean, 1.0 / 8, 0.005);
    EXPECT_LT(kl_from_haar(counts, 8), 0.01);
}

TEST(Expressibility, DeepCircuitsBeatShallowOnes) {
    const ExpressibilitySettings s{3000, 75};
    const double shallow = estimate_expressibility(oracle::hardware_efficient(3, 1), s, 2).value;
    const double deep = estimate_expressibility(oracle::hardware_efficient(3, 6, true), s, 2).value;
    EXPECT_LT(deep, shallow);
    EXPECT_LT(deep, 0.1);
}

TEST(Expressibility, Deterministic) {
    const auto d = two_yorktown_device();
    const auto c = generate(d, GenerationRequest{}, 9);
    const ExpressibilitySettings s{500, 75};
    EXPECT_EQ(estimate_expressibility(c, s, 4).value, estimate_expressibility(c, s, 4).value);
    EXPECT_NE(estimate_expressibility(c, s, 4).value, estimate_expressibility(c, s, 5).value);
}

TEST(Expressibility, StableUnderMoreSamples) {
    const auto c = oracle::hardware_efficient(4, 3, true);
    const double a = estimate_expressibility(c, {5000, 75}, 1).value;
    const double b = estimate_expressibility(c, {10000, 75}, 1).value;
    EXPECT_LT(std::abs(a - b), 0.05);
}

TEST(Expressibility, NonNegative) {
    const auto d = two_yorktown_device();
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        EXPECT_GE(estimate_expressibility(generate(d, GenerationRequest{}, seed), {300, 75}, seed).value, 0.0);
}

TEST(Expressibility, RejectsBadSettings) {
    EXPECT_THROW(estimate_expressibility(Circuit::on_line(2), {0, 75}, 1), PreconditionError);
    EXPECT_THROW(estimate_expressibility(Circuit::on_line(2), {100, 0}, 1), PreconditionError);
}
