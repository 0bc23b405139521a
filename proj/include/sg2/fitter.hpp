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

#ifndef SG2_FITTER_HPP
#define SG2_FITTER_HPP

#include <array>

#include "sg2/circuit.hpp"
#include "sg2/estimator.hpp"

namespace sg2 {

/// Zero-lag correlations in kPairs order (AB, CD, AC, AD, BC, BD).
struct CorrelationMatrix {
    std::array<double, kNumPairs> value{};
    std::array<double, kNumPairs> sigma{};

    static CorrelationMatrix from(const CorrelationSet& cs);
    /// Throws ValidationError on negative entries or non-positive / non-finite sigma.
    void validate() const;
};

/// Forward model at low brightness. Two-photon coincidences in one time slot come from
/// (a) a two-photon pulse whose photons took the same arm, weight g2 zeta(0) / 8 per arm,
/// and (b) photons of pulses d apart meeting at BS2, weight zeta(d) / 4, in the mixture
/// C * indistinguishable + (1 - C) * distinguishable. Pattern probabilities come from the
/// exact permanent engine; each pair is normalized by its singles product.
CorrelationMatrix predict_matrix(double g2, double coalescence, const CircuitModel& circuit, const ZetaFit& zeta);

struct BosonFit {
    double g2 = 0.0;
    double coalescence = 0.0;
    std::array<std::array<double, 2>, 2> covariance{};  ///< over (g2, C)
    double chi2 = 0.0;
    int dof = kNumPairs - 2;
    bool at_boundary = false;
    int iterations = 0;
};

/// Minimizes sum ((measured - predicted) / sigma)^2 over (g2, C) in [0, 2] x [0, 1]:
/// 21 x 21 grid seed, then Nelder-Mead refinement to 1e-6 in the parameters.
BosonFit fit(const CorrelationMatrix& measured, const CircuitModel& circuit, const ZetaFit& zeta);

}  // namespace sg2

#endif  // SG2_FITTER_HPP
