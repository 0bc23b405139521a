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

#include "sg2/analysis.hpp"

#include <cmath>
#include <limits>

#include "sg2/errors.hpp"

namespace sg2 {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_zero(const ConfigHash& h) {
    for (auto b : h)
        if (b) return false;
    return true;
}

void note_clamp(const Estimate& e, const char* name, std::vector<std::string>& w) {
    if (e.clamped) w.push_back(std::string(name) + " raw estimate " + std::to_string(e.raw) + " clamped to the physical range");
}

}  // namespace

void check_stream_mode(const ClickStream& stream, const ExperimentConfig& config, std::vector<std::string>* warnings) {
    if (is_zero(stream.config_hash) || stream.config_hash == config.hash()) return;
    for (auto m : {MeasurementMode::Sg2, MeasurementMode::Hbt, MeasurementMode::HomHwpCo, MeasurementMode::HomHwpCross}) {
        ExperimentConfig other = config;
        other.mode = m;
        if (other.hash() == stream.config_hash)
            throw ValidationError("stream was recorded in mode '" + std::string(to_string(m)) + "' but analysis mode is '" +
                                  std::string(to_string(config.mode)) + "'");
    }
    if (warnings) warnings->push_back("stream config hash " + to_hex(stream.config_hash) + " differs from the analysis config");
}

Sg2Report analyze(const ClickStream& stream, const ExperimentConfig& config, const AnalysisOptions& options) {
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
    Sg2Report r;
    check_stream_mode(stream, config, &r.warnings);
    r.config_hash = config.hash();
    r.mode = config.mode;
    r.n_pulses = stream.n_pulses;
    r.delay = config.circuit.delay_pulses();
    r.circuit = config.circuit;
    if (config.mode != MeasurementMode::Hbt && options.max_lag < r.delay + 4)
        throw ValidationError("max_lag must exceed the interferometer delay by at least 4 for the zeta fit");

    r.correlations = correlate(stream, options.max_lag, options.threads);
    r.auto_cross = average_auto_cross(r.correlations);
    r.g2_merged0 = merged_zero_lag(stream);

    if (config.mode == MeasurementMode::Hbt) {
        auto hbt = hbt_from_bypass(r.correlations);
        r.zeta = hbt.zeta;
        r.g2_hbt0 = hbt.g2_hbt0;
        r.coalescence = r.visibility = {kNaN, kNaN, kNaN, false};
    } else {
        r.zeta = fit_zeta(plateau_from(r.correlations, r.delay), PlateauModel::Interferometer, r.delay);
        auto sg2 = extract_sg2(r.auto_cross.auto_at(0), r.auto_cross.auto_sigma_at(0), r.auto_cross.cross_at(0),
                               r.auto_cross.cross_sigma_at(0), r.zeta, r.delay);
        r.g2_hbt0 = sg2.g2_hbt0;
        r.coalescence = sg2.coalescence;
        r.g2_c_covariance = sg2.covariance;
        r.visibility = visibility(sg2);
        note_clamp(r.coalescence, "C", r.warnings);
        try {
            r.boson_fit = fit(CorrelationMatrix::from(r.correlations), config.circuit, r.zeta);
            if (r.boson_fit->at_boundary) r.warnings.push_back("boson-sampling fit ended on the parameter boundary");
        } catch (const NumericalError& e) {
            r.warnings.push_back(std::string("boson-sampling fit failed: ") + e.what());
        } catch (const ValidationError& e) {
            r.warnings.push_back(std::string("boson-sampling fit skipped: ") + e.what());
        }
    }
    note_clamp(r.g2_hbt0, "g2_hbt0", r.warnings);
    if (r.zeta.at_boundary) r.warnings.push_back("zeta amplitude not significant; zeta fixed to 1");
    else if (!r.zeta.tau1_identified) r.warnings.push_back("tau1 not identified by the plateau fit");

    r.third_order = {r.correlations.triples, r.correlations.quadruples, static_cast<double>(stream.n_pulses)};
    double singles = 0.0;
    for (double p : r.correlations.singles) singles += p;
    const double pulse_rate = 1e9 / config.source.pulse_period_ns;
    const double eps3 = three_fold_efficiency(config.circuit, config.efficiency, config.mode);
    const std::uint64_t threefold = r.third_order.triples + r.third_order.quadruples;
    r.fock = reconstruct_fock(singles * pulse_rate, pulse_rate, config.efficiency, r.g2_hbt0.value, threefold,
                              r.third_order.n_trials, options.alpha, eps3);
    if (threefold > 0)
        r.warnings.push_back("three-fold coincidences include accidental overlaps of neighbouring pulses; p3 is an overestimate");
    return r;
}

}  // namespace sg2
