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

#ifndef SG2_FOCK_HPP
#define SG2_FOCK_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "sg2/rng.hpp"

namespace sg2 {

/// Diagonal photon-number distribution p[n], n = 0..N_max.
///
/// When `p3_is_upper_bound` is set, the last entry is a one-sided bound rather than a
/// probability, and normalization is checked on the remaining entries only.
class FockDistribution {
   public:
    FockDistribution() : p_{1.0} {}

    /// Validates entries in [0, 1] and sum 1 within 1e-12. Throws ValidationError.
    explicit FockDistribution(std::vector<double> p, bool p3_is_upper_bound = false);

    /// p = [1 - p1 - p2 - p3, p1, p2, p3] with p2 = g2 * p1^2 / 2.
    static FockDistribution from_brightness(double p1, double g2, double p3 = 0.0);

    std::span<const double> p() const { return p_; }
    double operator[](std::size_t n) const { return n < p_.size() ? p_[n] : 0.0; }
    std::size_t max_photons() const { return p_.size() - 1; }
    bool p3_is_upper_bound() const { return p3_is_upper_bound_; }

    /// p0 >= p1 >= p2 >= p3, the ordering assumed by low-brightness reconstructions.
    bool is_monotone() const;

    double mean_photon_number() const;

   private:
    std::vector<double> p_;
    bool p3_is_upper_bound_ = false;
};

/// Photon counts per optical mode.
class OccupationPattern {
   public:
    OccupationPattern() = default;
    explicit OccupationPattern(std::vector<int> counts);

    std::span<const int> counts() const { return counts_; }
    int operator[](std::size_t mode) const { return counts_[mode]; }
    std::size_t modes() const { return counts_.size(); }
    int total_photons() const { return total_; }

    /// All patterns of `photons` indistinguishable particles over `modes` modes, in
    /// lexicographically decreasing order of the count vector.
    static std::vector<OccupationPattern> enumerate(int modes, int photons);

    friend bool operator==(const OccupationPattern&, const OccupationPattern&) = default;

   private:
    std::vector<int> counts_;
    int total_ = 0;
};

/// Parameterized pulsed quantum-light source.
///
/// `fock` holds the intrinsic per-pulse distribution; the brightness modulation that
/// produces zeta(k) scales p_n by s^n with E[s] = 1, so the mean one-photon probability is
/// p1 and the mean two-photon probability is zeta0 * p2.
struct SourceModel {
    FockDistribution fock;
    double indistinguishability = 1.0;  ///< C_true in [0, 1], mean |<a|b>|^2 at zero detuning
    double zeta0 = 1.0;                 ///< zero-delay bunching excess, >= 1
    double tau1 = 1.0;                  ///< jitter correlation time in pulses, > 0
    double pulse_period_ns = 6.575;
    double spectral_jitter = 0.0;  ///< marginal detuning spread in units of the photon linewidth

    /// Throws ValidationError on any violated invariant.
    void validate() const;
};

/// Draws n with probability p[n]. The distribution was validated at construction.
int sample_photon_number(const FockDistribution& dist, Rng& rng);

/// Pulse-to-pulse correlation excess 1 + (zeta0 - 1) exp(-|k| / tau1).
double zeta(std::int64_t k, double zeta0, double tau1);

}  // namespace sg2

#endif  // SG2_FOCK_HPP
