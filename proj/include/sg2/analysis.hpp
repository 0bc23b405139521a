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

#ifndef SG2_ANALYSIS_HPP
#define SG2_ANALYSIS_HPP

#include <optional>
#include <string>
#include <vector>

#include "sg2/config.hpp"
#include "sg2/estimator.hpp"
#include "sg2/fitter.hpp"

namespace sg2 {

inline constexpr const char* kToolVersion = "0.1.0";

struct ThirdOrder {
    std::uint64_t triples = 0;     ///< pulses with exactly three detectors firing
    std::uint64_t quadruples = 0;  ///< pulses with all four firing
    double n_trials = 0.0;
};

struct Sg2Report {
    std::string tool_version = kToolVersion;
    ConfigHash config_hash{};
    MeasurementMode mode = MeasurementMode::Sg2;
    std::uint64_t n_pulses = 0;
    int delay = 0;
    CircuitModel circuit;

    CorrelationSet correlations;
    AutoCross auto_cross;
    ZetaFit zeta;

    /// C and V are absent (NaN) for an HBT-mode run.
    Estimate g2_hbt0, coalescence, visibility;
    double g2_c_covariance = 0.0;
    /// Conventional two-detector zero-lag value with {A,B} and {C,D} merged: HBT in the
    /// bypass mode, HOM in the interferometer modes.
    Estimate g2_merged0;

    FockReconstruction fock;
    ThirdOrder third_order;
    std::optional<BosonFit> boson_fit;
    std::vector<std::string> warnings;
};

struct AnalysisOptions {
    int max_lag = 50;
    double alpha = 0.05;
    unsigned threads = 1;
};

/// Refuses a stream whose embedded hash belongs to the same config in another mode,
/// naming both modes. A stream from an unrelated config is accepted with a warning;
/// an all-zero hash (external data) is accepted silently.
void check_stream_mode(const ClickStream& stream, const ExperimentConfig& config, std::vector<std::string>* warnings);

Sg2Report analyze(const ClickStream& stream, const ExperimentConfig& config, const AnalysisOptions& options);

}  // namespace sg2

#endif  // SG2_ANALYSIS_HPP
