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
#include <random>

#include <gtest/gtest.h>

#include "sg2/efficiency.hpp"
#include "sg2/errors.hpp"

using namespace sg2;

namespace {

EfficiencyOptions small(std::uint64_t n, int reps) {
    EfficiencyOptions o;
    o.n_pulses = n;
    o.replications = reps;
    o.seed = 7;
    return o;
}

}  // namespace

TEST(VarianceRatio, stated_points) {
    EXPECT_DOUBLE_EQ(variance_ratio_C(0.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(variance_ratio_C(1.0, 0.0), 2.0);
    EXPECT_NEAR(variance_ratio_C(0.06, 0.60), 1.277, 0.005);
}

TEST(VarianceRatio, closed_form_and_bound) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ug(0.0, 3.0), uc(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const double g = ug(rng), c = uc(rng);
        const double r = variance_ratio_C(g, c);
        EXPECT_NEAR(r, 1.0 + (1.0 + g - c) / (1.0 + g + c), 1e-14);
        EXPECT_GT(r, 1.0);
    }
    for (double g : {0.0, 0.01, 0.5})
        for (double c : {0.0, 0.99, 1.0}) {
            if (g == 0.0 && c == 1.0) continue;
            EXPECT_GT(variance_ratio_C(g, c), 1.0);
        }
}

TEST(VarianceRatio, rejects_unphysical) {
    EXPECT_THROW(variance_ratio_C(-0.1, 0.5), ValidationError);
    EXPECT_THROW(variance_ratio_C(0.1, 1.5), ValidationError);
    EXPECT_THROW(variance_ratio_C(0.1, -0.1), ValidationError);
}

TEST(ZeroLagBlocks, matches_direct_tally) {
    ClickStream s;
    s.n_pulses = 1003;
    std::mt19937_64 rng(5);
    for (std::uint64_t i = 0; i < s.n_pulses; ++i) {
        const auto mask = static_cast<std::uint8_t>(rng() % 16);
        if (mask) s.records.push_back({i, mask});
    }
    const int nb = 7;
    auto blocks = zero_lag_blocks(s, nb);
    ASSERT_EQ(blocks.size(), 7u);
    ZeroLagCounts total;
    for (int b = 0; b < nb; ++b) {
        const std::uint64_t lo = b * s.n_pulses / nb, hi = (b + 1) * s.n_pulses / nb;
        ZeroLagCounts want;
        want.pulses = hi - lo;
        for (const auto& r : s.records) {
            if (r.pulse < lo || r.pulse >= hi) continue;
            const bool a = r.mask & 1, bb = r.mask & 2, c = r.mask & 4, d = r.mask & 8;
            want.singles[0] += a;
            want.singles[1] += bb;
            want.singles[2] += c;
            want.singles[3] += d;
            want.pairs[0] += a && bb;
            want.pairs[1] += c && d;
            want.pairs[2] += a && c;
            want.pairs[3] += a && d;
            want.pairs[4] += bb && c;
            want.pairs[5] += bb && d;
            want.side1 += a || bb;
            want.side2 += c || d;
            want.sides += (a || bb) && (c || d);
        }
        const auto& got = blocks[static_cast<std::size_t>(b)];
        EXPECT_EQ(got.pulses, want.pulses);
        EXPECT_EQ(got.singles, want.singles);
        EXPECT_EQ(got.pairs, want.pairs);
        EXPECT_EQ(got.side1, want.side1);
        EXPECT_EQ(got.side2, want.side2);
        EXPECT_EQ(got.sides, want.sides);
        total.merge(got);
    }
    EXPECT_EQ(total.pulses, s.n_pulses);
    EXPECT_THROW(zero_lag_blocks(s, 0), ValidationError);
}

TEST(EmpiricalVariances, requires_thirty_replications) {
    EXPECT_THROW(empirical_variances(0.1, 0.5, EfficiencyMethod::Sg2, small(100000, 29)), ValidationError);
    EXPECT_NO_THROW(replicate(0.1, 0.5, EfficiencyMethod::Sg2, small(100000, 2)));
}

TEST(EmpiricalVariances, rejects_bad_options) {
    auto o = small(100000, 2);
    o.split = 1.0;
    EXPECT_THROW(replicate(0.1, 0.5, EfficiencyMethod::SantoriTwoStep, o), ValidationError);
    o = small(100000, 2);
    o.jackknife_blocks = 1;
    EXPECT_THROW(replicate(0.1, 0.5, EfficiencyMethod::Sg2, o), ValidationError);
    o = small(1000, 2);
    EXPECT_THROW(replicate(0.1, 0.5, EfficiencyMethod::Sg2, o), ValidationError);
    EXPECT_THROW(replicate(0.1, 1.2, EfficiencyMethod::Sg2, small(100000, 2)), ValidationError);
}

TEST(EmpiricalVariances, deterministic) {
    auto a = replicate(0.3, 0.7, EfficiencyMethod::HwpVisibility, small(100000, 3));
    auto b = replicate(0.3, 0.7, EfficiencyMethod::HwpVisibility, small(100000, 3));
    EXPECT_EQ(a.mean_g2, b.mean_g2);
    EXPECT_EQ(a.jackknife_var_c, b.jackknife_var_c);
}

TEST(EmpiricalVariances, ideal_source_has_no_spread) {
    auto o = small(100000, 3);
    auto s = replicate(0.0, 1.0, EfficiencyMethod::Sg2, o);
    auto k = replicate(0.0, 1.0, EfficiencyMethod::KnownPurityHom, o);
    EXPECT_NEAR(s.mean_c, 1.0, 0.1);
    EXPECT_DOUBLE_EQ(s.sample_var_c_known, 0.0);
    EXPECT_DOUBLE_EQ(s.jackknife_var_c_known, 0.0);
    EXPECT_DOUBLE_EQ(k.jackknife_var_c, 0.0);
    EXPECT_TRUE(std::isnan(ratio_c_known(k, s).value));
}

TEST(EmpiricalVariances, known_purity_ratio_follows_closed_form) {
    auto o = small(1000000, 30);
    for (auto [g, c] : {std::pair{0.5, 0.5}, std::pair{0.05, 0.95}}) {
        auto s = replicate(g, c, EfficiencyMethod::Sg2, o);
        auto k = replicate(g, c, EfficiencyMethod::KnownPurityHom, o);
        auto r = ratio_c_known(k, s);
        EXPECT_NEAR(r.value, variance_ratio_C(g, c), 3 * r.sigma) << g << " " << c;
        EXPECT_LT(r.sigma / r.value, 0.1);
    }
}

TEST(EmpiricalVariances, per_trial_units_do_not_depend_on_budget) {
    auto lo = replicate(0.3, 0.6, EfficiencyMethod::KnownPurityHom, small(250000, 30));
    auto hi = replicate(0.3, 0.6, EfficiencyMethod::KnownPurityHom, small(1000000, 30));
    EXPECT_NEAR(lo.jackknife_var_c, hi.jackknife_var_c, 3 * std::hypot(lo.jackknife_var_c_sigma, hi.jackknife_var_c_sigma));
    EXPECT_LT(std::abs(lo.jackknife_var_c / hi.jackknife_var_c - 1.0), 0.15);
}

TEST(EmpiricalVariances, jackknife_agrees_with_replication_spread) {
    auto v = replicate(0.3, 0.6, EfficiencyMethod::SantoriTwoStep, small(250000, 60));
    const double sample_sigma = v.sample_var_c * std::sqrt(2.0 / 59.0);
    EXPECT_NEAR(v.sample_var_c, v.jackknife_var_c, 3 * std::hypot(sample_sigma, v.jackknife_var_c_sigma));
    EXPECT_GT(v.sample_var_g2, 0.0);
}

TEST(EmpiricalVariances, hwp_and_two_step_recover_the_source) {
    auto o = small(1000000, 5);
    for (auto m : {EfficiencyMethod::HwpVisibility, EfficiencyMethod::SantoriTwoStep, EfficiencyMethod::Sg2}) {
        auto v = replicate(0.4, 0.7, m, o);
        EXPECT_NEAR(v.mean_g2, 0.4, 0.1) << to_string(m);
        EXPECT_NEAR(v.mean_c, 0.7, 0.1) << to_string(m);
    }
}

TEST(Ratios, propagation) {
    VarianceEstimate t, s;
    t.jackknife_var_g2 = 3;
    t.jackknife_var_g2_sigma = 0.3;
    t.jackknife_var_c = 1;
    t.jackknife_var_c_sigma = 0.4;
    s.jackknife_var_g2 = 1;
    s.jackknife_var_g2_sigma = 0;
    s.jackknife_var_c = 1;
    s.jackknife_var_c_sigma = 0.2;
    s.jackknife_var_c_known = 0.5;
    s.jackknife_var_c_known_sigma = 0.05;
    auto r = scoring_ratio(t, s);
    EXPECT_DOUBLE_EQ(r.value, 2.0);
    EXPECT_NEAR(r.sigma, 2.0 * std::hypot(0.5 / 4.0, 0.2 / 2.0), 1e-12);
    auto c = ratio_c_known(t, s);
    EXPECT_DOUBLE_EQ(c.value, 2.0);
    EXPECT_NEAR(c.sigma, 2.0 * std::hypot(0.4, 0.1), 1e-12);
    s.jackknife_var_g2 = s.jackknife_var_c = 0;
    EXPECT_TRUE(std::isnan(scoring_ratio(t, s).value));
}

TEST(ScoringMap, layout_and_analytic_layer) {
    auto o = small(20000, 2);
    o.jackknife_blocks = 10;
    auto map = scoring_map(5, o);
    ASSERT_EQ(map.points.size(), 25u);
    EXPECT_DOUBLE_EQ(map.points[7].g2, 0.25);
    EXPECT_DOUBLE_EQ(map.points[7].coalescence, 0.5);
    // The C = 0 edge ties at 2; the reported cell is the high-g2 corner.
    EXPECT_EQ(map.argmax_analytic, 20u);
    EXPECT_DOUBLE_EQ(map.points[map.argmax_analytic].ratio_c_analytic, 2.0);
    for (const auto& p : map.points) EXPECT_GE(p.ratio_c_analytic, 1.0);
    EXPECT_THROW(scoring_map(4, o), ValidationError);
}
