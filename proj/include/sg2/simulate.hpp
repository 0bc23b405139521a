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

#ifndef SG2_SIMULATE_HPP
#define SG2_SIMULATE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sg2/circuit.hpp"
#include "sg2/fock.hpp"
#include "sg2/rng.hpp"

namespace sg2 {

/// Optical configuration of a run.
///
/// Sg2 and the two HWP settings route photons through the unbalanced interferometer;
/// HomHwpCross rotates the long arm's polarization by pi/2. Hbt bypasses the input
/// splitter and sends every photon into one BS2 input.
enum class MeasurementMode { Sg2, Hbt, HomHwpCo, HomHwpCross };

/// Emulated: BS3/BS4 feed pairs of non-resolving detectors (what the lab setup does).
/// NumberResolving: each BS2 output ends in an ideal two-photon-resolving detector; a
/// reading of 1 sets one of its two channel bits at random, a reading of >= 2 sets both.
enum class Detection { Emulated, NumberResolving };

std::string_view to_string(MeasurementMode mode);
std::string_view to_string(Detection detection);
/// Accepts "sg2", "hbt", "hom-hwp-co", "hom-hwp-cross". Throws ValidationError otherwise.
MeasurementMode parse_mode(std::string_view text);

using ConfigHash = std::array<std::uint8_t, 32>;

std::string to_hex(const ConfigHash& hash);
ConfigHash sha256(std::string_view text);

struct ExperimentConfig {
    SourceModel source;
    CircuitModel circuit;
    MeasurementMode mode = MeasurementMode::Sg2;
    Detection detection = Detection::Emulated;
    double efficiency = 1.0;  ///< per-photon path and detection efficiency eta in (0, 1]
    double dark_prob = 0.0;   ///< per detector per pulse
    std::uint64_t n_pulses = 1;
    std::uint64_t seed = 0;

    void validate() const;

    /// Every field that influences the click stream, one "key=value" per line with
    /// round-trip precision.
    std::string canonical_text() const;

    /// SHA-256 of canonical_text().
    ConfigHash hash() const;

    /// Pulses per independently seeded block. Depends only on the config, never on the
    /// thread count: max(65536, 1000 * ceil(tau1), 2 * delay).
    std::uint64_t block_length() const;
};

/// Stationary latent process behind spectral jitter and the correlated brightness.
///
/// x follows a unit-variance AR(1) chain x' = phi x + sqrt(1 - phi^2) e with
/// phi = exp(-1 / (2 tau1)). The photon detuning is spectral_jitter * x and the brightness
/// factor is s = a + b x^2 with b = sqrt((zeta0 - 1) / 2), a = 1 - b. For Gaussian x this
/// gives E[s] = 1 and E[s_i s_{i+k}] = 1 + (zeta0 - 1) exp(-|k| / tau1) exactly, which
/// requires zeta0 <= 3 to keep s non-negative.
class JitterProcess {
   public:
    JitterProcess(double zeta0, double tau1, double spectral_jitter);

    /// Draw the state from the stationary distribution.
    void reset(Rng& rng) { x_ = rng.normal(); }
    void step(Rng& rng) { x_ = phi_ * x_ + innovation_ * rng.normal(); }

    double latent() const { return x_; }
    double brightness() const { return a_ + b_ * x_ * x_; }
    double detuning() const { return spectral_jitter_ * x_; }
    double phi() const { return phi_; }

    /// False when the process is constant (zeta0 = 1 and no spectral jitter).
    bool active() const { return b_ > 0.0 || spectral_jitter_ > 0.0; }

   private:
    double phi_, innovation_, a_, b_, spectral_jitter_;
    double x_ = 0.0;
};

/// Overlap-squared of two photons emitted with the given detunings:
/// C_true * exp(-(delta_a - delta_b)^2 / 2), or 0 when their polarizations are crossed.
double effective_overlap(const SourceModel& source, double detuning_a, double detuning_b, bool cross_polarized);

/// Ensemble coalescence of photons k pulses apart as measured by an interferometer:
/// C_true E[s_i s_j J_ij] / E[s_i s_j], by 2-D quadrature over the latent pair.
double expected_coalescence(const SourceModel& source, int k);

/// C_true that makes expected_coalescence(source, k) equal `target`.
/// Throws ValidationError when the jitter already pushes the maximum below the target.
double calibrate_indistinguishability(SourceModel source, int k, double target);

struct ClickRecord {
    std::uint64_t pulse = 0;
    std::uint8_t mask = 0;  ///< bit 0 = A ... bit 3 = D

    friend bool operator==(const ClickRecord&, const ClickRecord&) = default;
};

/// Pulse-ordered detector clicks. Pulses with no click are not stored.
struct ClickStream {
    std::uint64_t n_pulses = 0;
    ConfigHash config_hash{};
    std::vector<ClickRecord> records;

    /// Strictly increasing pulse indices below n_pulses, non-empty 4-bit masks.
    void validate() const;
};

/// Bookkeeping of one simulated run.
struct SimulationTally {
    std::uint64_t emitted_photons = 0;
    std::uint64_t surviving_photons = 0;
    std::uint64_t multiphoton_slots = 0;  ///< slots where >= 2 photons met the network
};

/// Monte Carlo of the full measurement. Bit-identical output for any `threads` >= 1.
ClickStream run_experiment(const ExperimentConfig& config, unsigned threads = 1, SimulationTally* tally = nullptr);

}  // namespace sg2

#endif  // SG2_SIMULATE_HPP
