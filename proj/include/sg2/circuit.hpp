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

#ifndef SG2_CIRCUIT_HPP
#define SG2_CIRCUIT_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sg2/fock.hpp"

namespace sg2 {

using Complex = std::complex<double>;
using Unitary = Eigen::Matrix4cd;

/// Amplitude reflection and transmission of a lossless beamsplitter, r^2 + t^2 = 1.
struct Beamsplitter {
    double r = M_SQRT1_2;
    double t = M_SQRT1_2;

    Beamsplitter() = default;
    /// Throws ValidationError unless r, t in [0, 1] and r^2 + t^2 = 1 within 1e-12.
    Beamsplitter(double r, double t);

    static Beamsplitter balanced() { return {}; }
};

// Column (input) indices of the network. Columns 0 and 3 are the vacuum ports of BS3 and BS4.
inline constexpr int kVacuumInputBs3 = 0;
inline constexpr int kLongArmInput = 1;
inline constexpr int kShortArmInput = 2;
inline constexpr int kVacuumInputBs4 = 3;

// Row (output) indices: detectors A, B behind BS3 and C, D behind BS4.
inline constexpr int kNumDetectors = 4;
inline constexpr char kDetectorNames[kNumDetectors + 1] = "ABCD";

/// Four-mode network BS2 -> (BS3, BS4) -> detectors, rows = outputs A..D, columns = inputs.
/// Reflections carry a factor i:
///
///     | i r3   i r2 t3    t2 t3     0    |
///     | t3    -r2 r3      i r3 t2   0    |
///     | 0      i r4 t2   -r2 r4     t4   |
///     | 0      t2 t4      i r2 t4   i r4 |
Unitary build_unitary(const Beamsplitter& bs2, const Beamsplitter& bs3, const Beamsplitter& bs4);

/// Interferometer plus the number-resolving detection network (without the input FBS).
class CircuitModel {
   public:
    CircuitModel() : CircuitModel({}, {}, {}, 4) {}
    CircuitModel(Beamsplitter bs2, Beamsplitter bs3, Beamsplitter bs4, int delay_pulses);

    static CircuitModel balanced(int delay_pulses) { return CircuitModel({}, {}, {}, delay_pulses); }

    const Beamsplitter& bs2() const { return bs2_; }
    const Beamsplitter& bs3() const { return bs3_; }
    const Beamsplitter& bs4() const { return bs4_; }
    int delay_pulses() const { return delay_; }
    const Unitary& unitary() const { return u_; }

   private:
    Beamsplitter bs2_, bs3_, bs4_;
    int delay_;
    Unitary u_;
};

/// Exact permanent via Ryser's formula with Gray-code column updates, O(2^n n).
/// Throws ValidationError for non-square input.
Complex permanent(const Eigen::MatrixXcd& m);

/// Internal (non-spatial) degrees of freedom of one photon.
///
/// Photons with equal `incoherent_tag` and equal polarization share a Gaussian spectral
/// mode; their overlap amplitude is exp(-(detuning_a - detuning_b)^2 / 4), with detuning in
/// units of the linewidth, so |overlap|^2 = exp(-delta^2 / 2). Different tags or
/// polarizations are orthogonal. Tag 0 is the shared coherent mode; non-zero tags mark a
/// photon that is distinguishable from every other photon.
struct InternalState {
    double detuning = 0.0;
    int polarization = 0;
    std::uint64_t incoherent_tag = 0;
};

Complex overlap(const InternalState& a, const InternalState& b);

struct InputPhoton {
    int mode = 0;
    InternalState state;
};

/// Gram matrix S(i, j) = <psi_i | psi_j> of the photons' internal states.
Eigen::MatrixXcd gram_matrix(std::span<const InputPhoton> photons);

/// Probability of `pattern` at the outputs of `u` for photons injected in `input_modes`
/// with internal-state Gram matrix `gram`:
///
///     P = sum_tau prod_j S(tau(j), j) * perm(W o conj(W)_tau) / (prod_o r_o! * norm)
///
/// where W(k, j) = u(o_k, mode_j) lists output rows by pattern multiplicity and
/// norm = sum_pi prod_k S(pi(k), k) [mode_pi(k) == mode_k] is the input state's norm.
/// Exact for any number of photons; intended for n <= 8.
double output_pattern_probability(const Eigen::MatrixXcd& u, std::span<const int> input_modes,
                                  const Eigen::MatrixXcd& gram, const OccupationPattern& pattern);

/// Convenience overload on the network unitary of `circuit`.
double output_pattern_probability(const CircuitModel& circuit, std::span<const InputPhoton> photons,
                                  const OccupationPattern& pattern);

/// Probabilities of every pattern in OccupationPattern::enumerate(u.rows(), n).
std::vector<double> output_distribution(const Eigen::MatrixXcd& u, std::span<const InputPhoton> photons);

/// Two single photons, one per input of a beamsplitter, with overlap-squared M: probability
/// they leave through different ports, (r^2 - t^2)^2 + 2 r^2 t^2 (1 - M).
double hom_coincidence(double overlap_squared, double r, double t);

}  // namespace sg2

#endif  // SG2_CIRCUIT_HPP
