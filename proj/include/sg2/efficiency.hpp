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

#ifndef SG2_EFFICIENCY_HPP
#define SG2_EFFICIENCY_HPP

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "sg2/simulate.hpp"

namespace sg2 {

/// sigma^2(C_trad) / sigma^2(C_Sg2) with g2 known: 2 (g2 + 1) / (g2 + C + 1).
double variance_ratio_C(double g2, double coalescence);

enum class EfficiencyMethod {
    Sg2,             ///< one interferometer run, number-resolving outputs
    SantoriTwoStep,  ///< HBT run + HOM run, two conventional detectors each
    HwpVisibility,   ///< co- and cross-polarized HOM runs, two conventional detectors
    KnownPurityHom,  ///< one HOM run, g2 taken as exactly known
};

std::string_view to_string(EfficiencyMethod method);

/// Zero-lag tallies of one block of pulses; every estimator below is a ratio of sums.
struct ZeroLagCounts {
    std::uint64_t pulses = 0;
    std::array<std::uint64_t, 4> singles{};
    std::array<std::uint64_t, 6> pairs{};  ///< kPairs order
    std::uint64_t side1 = 0, side2 = 0, sides = 0;  ///< merged {A,B} and {C,D}

    void merge(const ZeroLagCounts& other);
};

std::vector<ZeroLagCounts> zero_lag_blocks(const ClickStream& stream, int n_blocks);

struct EfficiencyOptions {
    double p1 = 0.1;  ///< single-photon probability of the simulated source
    std::uint64_t n_pulses = 1000000;  ///< total budget per replication, shared by a method's runs
    int replications = 30;
    int jackknife_blocks = 20;
    double split = 0.5;  ///< budget fraction of the first run in two-step methods
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

struct VarianceEstimate {
    EfficiencyMethod method = EfficiencyMethod::Sg2;
    int replications = 0;
    std::uint64_t n_pulses = 0;
    double mean_g2 = 0.0, mean_c = 0.0;
    /// Per-trial variances (sigma^2 * n_pulses). "sample" is the spread over replications;
    /// "jackknife" pools delete-one-block estimates within each replication.
    double sample_var_g2 = 0.0, sample_var_c = 0.0;
    double jackknife_var_g2 = 0.0, jackknife_var_c = 0.0;
    double jackknife_var_g2_sigma = 0.0, jackknife_var_c_sigma = 0.0;
    /// Sg2 only: C = (g2 + 1)(a - c)/(a + c) with g2 known.
    double sample_var_c_known = 0.0, jackknife_var_c_known = 0.0, jackknife_var_c_known_sigma = 0.0;
};

/// R independent simulate + estimate cycles at (g2, C) with zeta == 1. Requires R >= 30.
VarianceEstimate empirical_variances(double g2, double coalescence, EfficiencyMethod method,
                                     const EfficiencyOptions& options);

/// As empirical_variances but without the R >= 30 floor; the jackknife figures remain
/// usable down to R = 1.
VarianceEstimate replicate(double g2, double coalescence, EfficiencyMethod method, const EfficiencyOptions& options);

struct Ratio {
    double value = 0.0;
    double sigma = 0.0;
};

/// Jackknife-based ratios; NaN when both variances vanish (e.g. g2 = 0, C = 1).
Ratio ratio_c_known(const VarianceEstimate& trad, const VarianceEstimate& sg2);
Ratio scoring_ratio(const VarianceEstimate& trad, const VarianceEstimate& sg2);

struct EfficiencyPoint {
    double g2 = 0.0;
    double coalescence = 0.0;
    double ratio_c_analytic = 0.0;
    Ratio ratio_c_empirical;
    Ratio scoring;
    int replications = 0;
};

struct ScoringMap {
    int resolution = 0;
    EfficiencyOptions options;
    std::vector<EfficiencyPoint> points;  ///< g2 index major, C index minor
    std::size_t argmax_analytic = 0;
    std::size_t argmax_scoring = 0;
};

/// Uniform resolution x resolution grid over g2 in [0, 1] and C in [0, 1].
ScoringMap scoring_map(int resolution, const EfficiencyOptions& options);

}  // namespace sg2

#endif  // SG2_EFFICIENCY_HPP
