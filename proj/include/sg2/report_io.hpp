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

#ifndef SG2_REPORT_IO_HPP
#define SG2_REPORT_IO_HPP

#include <iosfwd>
#include <string>

#include "sg2/analysis.hpp"
#include "sg2/config.hpp"
#include "sg2/efficiency.hpp"
#include "sg2/fitter.hpp"

namespace sg2 {

// Report JSON keys (NaN is written as null):
//
//   tool, tool_version, config_hash, mode, n_pulses, delay_pulses,
//   circuit {r2 t2 r3 t3 r4 t4 delay_pulses},
//   g2_hbt0 / coalescence / visibility / g2_merged0 {value sigma raw clamped},
//   cov_g2_coalescence,
//   zeta {zeta0 tau1 covariance excluded_lags model at_boundary tau1_identified chi2 dof},
//   singles {A B C D}, correlation_matrix {AB..BD: {g2 sigma counts}},
//   auto_cross {lags auto auto_sigma cross cross_sigma},
//   fock {p p3_is_upper_bound p3_upper_limit alpha three_fold_efficiency},
//   third_order {triples quadruples n_trials}, boson_fit {...} | null, warnings [...]

void write_report_json(const Sg2Report& report, std::ostream& out);
void save_report(const Sg2Report& report, const std::string& path);

/// "pair,j,g2,raw_counts" for every pair and lag, after a "# ..." provenance line.
void write_histogram_csv(const Sg2Report& report, std::ostream& out);
void save_histogram_csv(const Sg2Report& report, const std::string& path);

/// What the boson-sampling fit needs: correlation_matrix, zeta and circuit, read from a
/// report or from a hand-written JSON with the same three keys.
struct FitInput {
    CorrelationMatrix matrix;
    ZetaFit zeta;
    CircuitModel circuit;
    std::string config_hash;
};

FitInput read_fit_input(std::istream& in, const std::string& origin = "<json>");
FitInput load_fit_input(const std::string& path);

void write_fit_json(const BosonFit& fit, const FitInput& input, std::ostream& out);
void save_fit(const BosonFit& fit, const FitInput& input, const std::string& path);

/// CSV "g2,C,ratio_analytic,ratio_empirical,sigma,scoring_ratio,scoring_sigma" plus a JSON
/// file with the settings, argmax cells, config hash and tool version.
void write_scoring_csv(const ScoringMap& map, const EfficiencyConfig& config, std::ostream& out);
void write_scoring_json(const ScoringMap& map, const EfficiencyConfig& config, std::ostream& out);
/// Writes `path` (CSV) and `path` with its extension replaced by ".json".
void save_scoring_map(const ScoringMap& map, const EfficiencyConfig& config, const std::string& path);

}  // namespace sg2

#endif  // SG2_REPORT_IO_HPP
