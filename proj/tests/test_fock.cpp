// Copyright 2026 The Sg2 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include <gtest/gtest.h>

#include "sg2/errors.hpp"
#include "sg2/fock.hpp"

using namespace sg2;

TEST(FockDistribution, rejects_unnormalized_and_out_of_range) {
    EXPECT_THROW(FockDistribution({0.5, 0.4}), ValidationError);
    EXPECT_THROW(FockDistribution({1.1, -0.1}), ValidationError);
    EXPECT_NO_THROW(FockDistribution({0.25, 0.75}));
}

TEST(FockDistribution, upper_bound_entry_is_excluded_from_normalization) {
    FockDistribution d({0.97, 0.029, 0.001, 2.1e-6}, true);
    EXPECT_TRUE(d.p3_is_upper_bound());
    EXPECT_THROW(FockDistribution({0.97, 0.029, 0.001}, true), ValidationError);
}

TEST(FockDistribution, from_brightness_uses_second_order_relation) {
    auto d = FockDistribution::from_brightness(0.029, 0.06);
    EXPECT_NEAR(d[2], 0.06 * 0.029 * 0.029 / 2.0, 1e-18);
    EXPECT_NEAR(d[2], 2.523e-5, 1e-8);
    EXPECT_NEAR(d[0] + d[1] + d[2] + d[3], 1.0, 1e-15);
    EXPECT_TRUE(d.is_monotone());
    EXPECT_FALSE(FockDistribution({0.2, 0.8}).is_monotone());
}

TEST(OccupationPattern, enumeration_counts_match_stars_and_bars) {
    // C(n + m - 1, n) patterns for n photons in m modes.
    EXPECT_EQ(OccupationPattern::enumerate(4, 1).size(), 4u);
    EXPECT_EQ(OccupationPattern::enumerate(4, 2).size(), 10u);
    EXPECT_EQ(OccupationPattern::enumerate(4, 3).size(), 20u);
    EXPECT_EQ(OccupationPattern::enumerate(4, 4).size(), 35u);
    for (const auto& p : OccupationPattern::enumerate(4, 3)) EXPECT_EQ(p.total_photons(), 3);
}

TEST(SamplePhotonNumber, degenerate_distributions) {
    Rng rng(1);
    FockDistribution vac({1, 0, 0, 0});
    FockDistribution one({0, 1, 0, 0});
    for (int i = 0; i < 1000; ++i) {
        EXPECT_EQ(sample_photon_number(vac, rng), 0);
        EXPECT_EQ(sample_photon_number(one, rng), 1);
    }
}

TEST(SamplePhotonNumber, empirical_frequencies_within_binomial_error) {
    const double p1 = 0.029, p2 = 2.9e-5;
    FockDistribution d({1.0 - p1 - p2, p1, p2, 0.0});
    Rng rng(20260101);
    const int trials = 10'000'000;
    std::array<long, 4> counts{};
    for (int i = 0; i < trials; ++i) counts[static_cast<std::size_t>(sample_photon_number(d, rng))]++;
    for (std::size_t n = 0; n < 4; ++n) {
        double p = d[n];
        double sigma = std::sqrt(trials * p * (1 - p));
        EXPECT_LE(std::abs(counts[n] - trials * p), 4.0 * sigma + 1e-9) << "n = " << n;
    }
}

TEST(SamplePhotonNumber, same_seed_same_sequence) {
    FockDistribution d({0.5, 0.3, 0.2});
    Rng a(7), b(7);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_photon_number(d, a), sample_photon_number(d, b));
}

TEST(Zeta, reference_values) {
    EXPECT_DOUBLE_EQ(zeta(0, 1.34, 3.64), 1.34);
    // Direct evaluation: 1 + 0.34 * exp(-4 / 3.64) = 1.11330...
    EXPECT_NEAR(zeta(4, 1.34, 3.64), 1.1133, 5e-5);
    EXPECT_NEAR(zeta(100000, 2.5, 3.0), 1.0, 1e-15);
}

TEST(Zeta, even_bounded_and_non_increasing) {
    for (double z0 : {1.0, 1.34, 2.0, 5.0}) {
        for (double tau : {0.5, 3.64, 40.0}) {
            double prev = zeta(0, z0, tau);
            for (int k = 0; k < 200; ++k) {
                double v = zeta(k, z0, tau);
                EXPECT_DOUBLE_EQ(v, zeta(-k, z0, tau));
                EXPECT_GE(v, 1.0);
                EXPECT_LE(v, z0);
                EXPECT_LE(v, prev);
                prev = v;
            }
        }
    }
}

TEST(SourceModel, validation) {
    SourceModel s;
    s.fock = FockDistribution::from_brightness(0.029, 0.05);
    s.indistinguishability = 0.61;
    s.zeta0 = 1.34;
    s.tau1 = 3.64;
    EXPECT_NO_THROW(s.validate());
    // 4 pulses at 6.575 ns reproduce the 26.3 ns delay line.
    EXPECT_NEAR(4 * s.pulse_period_ns, 26.3, 1e-9);
    auto bad = s;
    bad.zeta0 = 0.9;
    EXPECT_THROW(bad.validate(), ValidationError);
    bad = s;
    bad.indistinguishability = 1.2;
    EXPECT_THROW(bad.validate(), ValidationError);
    bad = s;
    bad.tau1 = 0;
    EXPECT_THROW(bad.validate(), ValidationError);
}
