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

#include "sg2/errors.hpp"
#include "sg2/fitter.hpp"

using namespace sg2;

namespace {

ZetaFit reference_zeta() {
    ZetaFit z;
    z.zeta0 = 1.34;
    z.tau1 = 3.64;
    return z;
}

CorrelationMatrix with_sigma(CorrelationMatrix m, double rel) {
    for (std::size_t k = 0; k < m.value.size(); ++k) m.sigma[k] = rel * std::max(m.value[k], 0.05);
    return m;
}

}  // namespace

TEST(PredictMatrix, limiting_cases) {
    auto bal = CircuitModel::balanced(4);
    auto flat = ZetaFit::flat();
    auto ideal = predict_matrix(0.0, 1.0, bal, flat);
    EXPECT_NEAR(ideal.value[0], 1.0, 1e-12);
    EXPECT_NEAR(ideal.value[1], 1.0, 1e-12);
    for (int p = 2; p < 6; ++p) EXPECT_NEAR(ideal.value[static_cast<std::size_t>(p)], 0.0, 1e-12);
    auto dist = predict_matrix(0.0, 0.0, bal, flat);
    for (double v : dist.value) EXPECT_NEAR(v, 0.5, 1e-12);
}

TEST(PredictMatrix, reference_point) {
    auto m = predict_matrix(0.05, 0.61, CircuitModel::balanced(4), reference_zeta());
    EXPECT_NEAR((m.value[0] + m.value[1]) / 2, 0.9297, 5e-4);
    EXPECT_NEAR((m.value[2] + m.value[3] + m.value[4] + m.value[5]) / 4, 0.2506, 5e-4);
}

TEST(PredictMatrix, consistent_with_closed_form_inversion) {
    auto bal = CircuitModel::balanced(4);
    auto z = reference_zeta();
    for (double g : {0.0, 0.05, 0.4, 1.0, 1.7})
        for (double c : {0.0, 0.3, 0.61, 1.0}) {
            auto m = predict_matrix(g, c, bal, z);
            const double a = (m.value[0] + m.value[1]) / 2;
            const double x = (m.value[2] + m.value[3] + m.value[4] + m.value[5]) / 4;
            auto e = extract_sg2(a, 0.01, x, 0.01, z, 4);
            EXPECT_NEAR(e.g2_hbt0.raw, g, 1e-10);
            EXPECT_NEAR(e.coalescence.raw, c, 1e-10);
        }
}

TEST(PredictMatrix, unbalanced_circuit_uses_exact_engine) {
    // Two photons meeting at an r/t BS2 with full overlap: the AC coincidence follows the
    // HOM formula on the first splitter times the BS3/BS4 routing.
    CircuitModel skew(Beamsplitter(0.6, 0.8), Beamsplitter(), Beamsplitter(), 4);
    auto flat = ZetaFit::flat();
    auto ind = predict_matrix(0.0, 1.0, skew, flat);
    auto dist = predict_matrix(0.0, 0.0, skew, flat);
    const double hom_ind = hom_coincidence(1.0, 0.6, 0.8), hom_dist = hom_coincidence(0.0, 0.6, 0.8);
    for (int p = 2; p < 6; ++p) EXPECT_NEAR(ind.value[static_cast<std::size_t>(p)] / dist.value[static_cast<std::size_t>(p)], hom_ind / hom_dist, 1e-10);
}

TEST(Fit, noiseless_inversion) {
    auto bal = CircuitModel::balanced(4);
    auto z = reference_zeta();
    for (auto [g, c] : {std::pair{0.3, 0.7}, {0.05, 0.61}, {1.2, 0.2}}) {
        auto m = with_sigma(predict_matrix(g, c, bal, z), 0.02);
        auto f = fit(m, bal, z);
        EXPECT_NEAR(f.g2, g, 1e-4);
        EXPECT_NEAR(f.coalescence, c, 1e-4);
        EXPECT_NEAR(f.chi2, 0.0, 1e-6);
        EXPECT_FALSE(f.at_boundary);
        EXPECT_GT(f.covariance[0][0], 0.0);
    }
}

TEST(Fit, boundary_is_flagged) {
    auto bal = CircuitModel::balanced(4);
    auto flat = ZetaFit::flat();
    auto m = with_sigma(predict_matrix(0.0, 1.0, bal, flat), 0.02);
    auto f = fit(m, bal, flat);
    EXPECT_TRUE(f.at_boundary);
    EXPECT_NEAR(f.g2, 0.0, 1e-4);
    EXPECT_NEAR(f.coalescence, 1.0, 1e-4);
}

TEST(Fit, invariant_under_sigma_scaling_and_relabeling) {
    auto bal = CircuitModel::balanced(4);
    auto z = reference_zeta();
    auto m = with_sigma(predict_matrix(0.4, 0.5, bal, z), 0.03);
    const double bumps[6] = {0.02, -0.01, 0.015, -0.02, 0.005, 0.01};
    for (int p = 0; p < 6; ++p) m.value[static_cast<std::size_t>(p)] += bumps[p];
    auto base = fit(m, bal, z);
    auto scaled = m;
    for (auto& s : scaled.sigma) s *= 7.5;
    auto f = fit(scaled, bal, z);
    EXPECT_NEAR(f.g2, base.g2, 1e-6);
    EXPECT_NEAR(f.coalescence, base.coalescence, 1e-6);
    // A <-> B maps AC <-> BC and AD <-> BD; C <-> D maps AC <-> AD and BC <-> BD.
    for (auto perm : {std::array<int, 6>{0, 1, 4, 5, 2, 3}, std::array<int, 6>{0, 1, 3, 2, 5, 4}}) {
        CorrelationMatrix r;
        for (int p = 0; p < 6; ++p) {
            r.value[static_cast<std::size_t>(p)] = m.value[static_cast<std::size_t>(perm[static_cast<std::size_t>(p)])];
            r.sigma[static_cast<std::size_t>(p)] = m.sigma[static_cast<std::size_t>(perm[static_cast<std::size_t>(p)])];
        }
        auto g = fit(r, bal, z);
        EXPECT_NEAR(g.g2, base.g2, 1e-6);
        EXPECT_NEAR(g.coalescence, base.coalescence, 1e-6);
    }
}

TEST(Fit, chi2_per_dof_is_calibrated) {
    auto bal = CircuitModel::balanced(4);
    auto z = reference_zeta();
    auto truth = predict_matrix(0.3, 0.6, bal, z);
    std::mt19937_64 gen(2024);
    std::normal_distribution<double> n01;
    double total = 0.0;
    const int repeats = 100;
    for (int r = 0; r < repeats; ++r) {
        CorrelationMatrix m;
        for (std::size_t k = 0; k < 6; ++k) {
            m.sigma[k] = 0.05 * truth.value[k];
            m.value[k] = truth.value[k] + m.sigma[k] * n01(gen);
        }
        total += fit(m, bal, z).chi2 / 4.0;
    }
    // Mean of 100 chi2(4)/4 draws has standard deviation ~0.07.
    EXPECT_NEAR(total / repeats, 1.0, 0.25);
}

TEST(Fit, rejects_degenerate_sigma) {
    auto bal = CircuitModel::balanced(4);
    auto m = predict_matrix(0.3, 0.6, bal, reference_zeta());
    m.sigma[3] = 0.0;
    EXPECT_THROW(fit(m, bal, reference_zeta()), ValidationError);
    EXPECT_THROW(predict_matrix(-0.1, 0.5, bal, reference_zeta()), ValidationError);
}
