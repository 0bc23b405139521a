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

#ifndef SG2_ESTIMATOR_HPP
#define SG2_ESTIMATOR_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sg2/circuit.hpp"
#include "sg2/fock.hpp"
#include "sg2/simulate.hpp"

namespace sg2 {

inline constexpr int kNumPairs = 6;

/// Pair order AB, CD, AC, AD, BC, BD: the first two are the "auto" pairs sharing one
/// emulated number-resolving detector.
inline constexpr std::array<std::pair<int, int>, kNumPairs> kPairs = {{{0, 1}, {2, 3}, {0, 2}, {0, 3}, {1, 2}, {1, 3}}};

std::string pair_name(int pair);
int pair_index(const std::string& name);

struct CorrelationSet {
    std::uint64_t n_pulses = 0;
    int max_lag = 0;
    std::array<std::uint64_t, 4> singles_counts{};
    std::array<double, 4> singles{};  ///< click probability per pulse
    /// counts[pair][j + max_lag]: clicks on first detector at pulse i and second at i + j.
    std::array<std::vector<std::uint64_t>, kNumPairs> counts;
    std::array<std::vector<double>, kNumPairs> g2;
    std::array<std::vector<double>, kNumPairs> g2_sigma;
    std::uint64_t triples = 0;     ///< pulses with exactly three detectors firing
    std::uint64_t quadruples = 0;  ///< pulses with all four detectors firing

    double at(int pair, int j) const { return g2[static_cast<std::size_t>(pair)][static_cast<std::size_t>(j + max_lag)]; }
    double sigma_at(int pair, int j) const {
        return g2_sigma[static_cast<std::size_t>(pair)][static_cast<std::size_t>(j + max_lag)];
    }
    std::uint64_t count_at(int pair, int j) const {
        return counts[static_cast<std::size_t>(pair)][static_cast<std::size_t>(j + max_lag)];
    }
};

/// Raw integer tallies; merging partitions is plain addition.
struct CorrelationCounts {
    int max_lag = 0;
    std::array<std::uint64_t, 4> singles{};
    std::array<std::vector<std::uint64_t>, kNumPairs> counts;
    std::uint64_t triples = 0, quadruples = 0;

    explicit CorrelationCounts(int max_lag = 0);
    void merge(const CorrelationCounts& other);
};

/// Tally records [begin, end) against all later records within max_lag pulses.
CorrelationCounts count_correlations(const ClickStream& stream, int max_lag, std::size_t begin, std::size_t end);

CorrelationSet normalize(const CorrelationCounts& counts, std::uint64_t n_pulses);

/// Throws ValidationError on an empty stream and NumericalError naming a silent detector.
CorrelationSet correlate(const ClickStream& stream, int max_lag, unsigned threads = 1);

struct AutoCross {
    int max_lag = 0;
    std::vector<double> auto_g2, auto_sigma, cross_g2, cross_sigma;

    double auto_at(int j) const { return auto_g2[static_cast<std::size_t>(j + max_lag)]; }
    double cross_at(int j) const { return cross_g2[static_cast<std::size_t>(j + max_lag)]; }
    double auto_sigma_at(int j) const { return auto_sigma[static_cast<std::size_t>(j + max_lag)]; }
    double cross_sigma_at(int j) const { return cross_sigma[static_cast<std::size_t>(j + max_lag)]; }
};

AutoCross average_auto_cross(const CorrelationSet& cs);

enum class PlateauModel {
    Direct,          ///< g2[j] = zeta(j)
    Interferometer,  ///< g2[j] = (2 zeta(j) + zeta(j - d) + zeta(j + d)) / 4
};

struct PlateauData {
    std::vector<int> lags;
    std::vector<double> values, sigmas;
};

/// Mean over all six pairs and both signs of j for 1 <= j <= max_lag, skipping
/// excluded_lag. Pooling +-j makes the plateau invariant under detector relabeling.
PlateauData plateau_from(const CorrelationSet& cs, int excluded_lag);

double plateau_value(int j, double zeta0, double tau1, PlateauModel model, int delay);

struct ZetaFit {
    double zeta0 = 1.0;
    double tau1 = 1.0;
    std::array<std::array<double, 2>, 2> covariance{};  ///< over (zeta0, tau1)
    std::vector<int> excluded{0};
    PlateauModel model = PlateauModel::Direct;
    int delay = 0;
    bool at_boundary = false;  ///< zeta0 pinned to 1: amplitude not 2 sigma above zero
    bool tau1_identified = true;
    double chi2 = 0.0;
    int dof = 0;
    int iterations = 0;

    double zeta(std::int64_t k) const;
    double zeta_sigma(std::int64_t k) const;
    /// d zeta(k) / d (zeta0, tau1)
    std::array<double, 2> zeta_gradient(std::int64_t k) const;

    static ZetaFit flat();
};

/// Weighted least squares of the plateau model. The amplitude zeta0 - 1 is solved
/// linearly (clamped at 0) for each tau1; ln tau1 is scanned over [0.5, 1000] and
/// refined by Brent minimization. Covariance from the Jacobian at the optimum.
ZetaFit fit_zeta(const PlateauData& plateau, PlateauModel model, int delay);

struct Estimate {
    double value = 0.0;
    double sigma = 0.0;
    double raw = 0.0;  ///< before clamping to the physical range
    bool clamped = false;
};

struct Sg2Extraction {
    Estimate g2_hbt0, coalescence;
    double covariance = 0.0;  ///< cov(g2_hbt0, C) of the raw estimates
};

Sg2Extraction extract_sg2(double auto0, double auto0_sigma, double cross0, double cross0_sigma, const ZetaFit& zeta,
                          int delay);

Estimate visibility(const Sg2Extraction& sg2);
double visibility(double g2_hbt0, double coalescence);

double traditional_coalescence(double g2_hbt0, double g2_hom0);

/// (g2, C) from conventional two-sided HOM correlations in the co- and cross-polarized
/// settings: g2 = 2 g_cross - 1, C = 2 (g_cross - g_co).
std::pair<double, double> hwp_estimates(double g2_hom_co, double g2_hom_cross);
double hwp_visibility(double g2_hom_co, double g2_hom_cross);

struct HbtResult {
    Estimate g2_hbt0;
    double mean_zero_lag = 0.0;
    double mean_zero_lag_sigma = 0.0;
    ZetaFit zeta;
};

HbtResult hbt_from_bypass(const CorrelationSet& cs);
HbtResult hbt_from_bypass(const ClickStream& stream, int max_lag = 50, unsigned threads = 1);

/// Zero-lag correlation between the merged sides {A, B} and {C, D}: the coincidence
/// ratio a pair of conventional detectors after BS2 would record.
Estimate merged_zero_lag(const ClickStream& stream);

/// Probability that three photons entering together are seen by three distinct detectors,
/// times eta^3. Sg2-type modes average over arm choices; HBT uses the bypass input.
double three_fold_efficiency(const CircuitModel& circuit, double eta, MeasurementMode mode);

/// Upper limit of a Poisson mean given k observed events at confidence 1 - alpha.
double poisson_upper_limit(std::uint64_t k, double alpha);

struct FockReconstruction {
    FockDistribution fock;
    double p3 = 0.0;
    bool p3_upper_bound = true;
    double p3_upper_limit = 0.0;
    double three_fold_efficiency = 0.0;
    double alpha = 0.05;
};

FockReconstruction reconstruct_fock(double singles_rate_hz, double pulse_rate_hz, double eta, double g2_hbt0,
                                    std::uint64_t triple_counts, double n_trials, double alpha, double eps3);

}  // namespace sg2

#endif  // SG2_ESTIMATOR_HPP
