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

#ifndef SG2_CONFIG_HPP
#define SG2_CONFIG_HPP

#include <iosfwd>
#include <string>

#include "sg2/efficiency.hpp"
#include "sg2/simulate.hpp"

namespace sg2 {

/// Contents of a run configuration file:
///
///     [source]     p1, g2_target | p2, C, zeta0, tau1, pulse_period_ns, spectral_jitter
///     [circuit]    r2, t2, r3, t3, r4, t4, delay_pulses
///     [detection]  eta, dark_prob, number_resolving
///     [run]        n_pulses, seed, mode, max_lag
///
/// p1 and n_pulses are required; g2_target and p2 are mutually exclusive. A beamsplitter
/// given only r (or t) gets the lossless complement. Unknown sections and keys are errors.
struct RunConfig {
    ExperimentConfig experiment;
    int max_lag = 50;
};

/// Throws ValidationError naming the offending section and key.
RunConfig parse_config(std::istream& in, const std::string& origin = "<config>");

/// IoError when the file cannot be opened.
RunConfig load_config(const std::string& path);

/// INI text that parse_config reads back to the same config.
std::string format_config(const RunConfig& config);

/// Efficiency-map settings, one [efficiency] section with keys p1, n_pulses, replications,
/// jackknife_blocks, split, seed, resolution. All optional.
struct EfficiencyConfig {
    EfficiencyOptions options;
    int resolution = 11;

    std::string canonical_text() const;
};

EfficiencyConfig parse_efficiency_config(std::istream& in, const std::string& origin = "<config>");
EfficiencyConfig load_efficiency_config(const std::string& path);

}  // namespace sg2

#endif  // SG2_CONFIG_HPP
