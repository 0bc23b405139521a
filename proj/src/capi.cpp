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

#include "sg2/sg2.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <new>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>

#include "sg2/analysis.hpp"
#include "sg2/clickstream_io.hpp"
#include "sg2/config.hpp"
#include "sg2/efficiency.hpp"
#include "sg2/errors.hpp"
#include "sg2/report_io.hpp"

struct sg2_config {
    sg2::RunConfig run;
};

struct sg2_stream {
    sg2::ClickStream stream;
};

struct sg2_report {
    sg2::Sg2Report report;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
sg2_status guarded(Fn&& fn) {
    g_last_error.clear();
    try {
        fn();
        return SG2_OK;
    } catch (const sg2::ValidationError& e) {
        g_last_error = e.what();
        return SG2_ERR_VALIDATION;
    } catch (const sg2::IoError& e) {
        g_last_error = e.what();
        return SG2_ERR_IO;
    } catch (const sg2::NumericalError& e) {
        g_last_error = e.what();
        return SG2_ERR_NUMERICAL;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return SG2_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SG2_ERR_INTERNAL;
    }
}

template <typename T>
void require(const T* p, const char* what) {
    if (!p) throw sg2::ValidationError(std::string(what) + " must not be NULL");
}

unsigned resolve_threads(unsigned threads) {
    if (threads) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

sg2::EfficiencyConfig to_core(const sg2_efficiency_options& o) {
    std::ostringstream ini;
    ini.precision(17);
    ini << "[efficiency]\np1 = " << o.p1 << "\nn_pulses = " << o.n_pulses << "\nreplications = " << o.replications
        << "\njackknife_blocks = " << o.jackknife_blocks << "\nsplit = " << o.split << "\nseed = " << o.seed
        << "\nresolution = " << o.resolution << "\n";
    std::istringstream in(ini.str());
    return sg2::parse_efficiency_config(in, "efficiency options");
}

void from_core(const sg2::EfficiencyConfig& c, sg2_efficiency_options* out) {
    out->p1 = c.options.p1;
    out->n_pulses = c.options.n_pulses;
    out->replications = c.options.replications;
    out->jackknife_blocks = c.options.jackknife_blocks;
    out->split = c.options.split;
    out->seed = c.options.seed;
    out->resolution = c.resolution;
}

double root(double v) { return v >= 0.0 ? std::sqrt(v) : std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

extern "C" {

const char* sg2_last_error(void) { return g_last_error.c_str(); }

const char* sg2_version(void) { return sg2::kToolVersion; }

sg2_status sg2_config_load(const char* path, sg2_config** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new sg2_config{sg2::load_config(path)};
    });
}

sg2_status sg2_config_parse(const char* text, sg2_config** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        std::istringstream in(text);
        *out = new sg2_config{sg2::parse_config(in)};
    });
}

void sg2_config_free(sg2_config* config) { delete config; }

sg2_status sg2_config_set_seed(sg2_config* config, uint64_t seed) {
    return guarded([&] {
        require(config, "config");
        config->run.experiment.seed = seed;
    });
}

sg2_status sg2_config_set_pulses(sg2_config* config, uint64_t n_pulses) {
    return guarded([&] {
        require(config, "config");
        if (n_pulses < 1) throw sg2::ValidationError("n_pulses must be at least 1");
        config->run.experiment.n_pulses = n_pulses;
    });
}

sg2_status sg2_config_set_mode(sg2_config* config, const char* mode) {
    return guarded([&] {
        require(config, "config");
        require(mode, "mode");
        config->run.experiment.mode = sg2::parse_mode(mode);
    });
}

const char* sg2_config_mode(const sg2_config* config) {
    return config ? sg2::to_string(config->run.experiment.mode).data() : "";
}

int sg2_config_max_lag(const sg2_config* config) { return config ? config->run.max_lag : 0; }

sg2_status sg2_config_hash(const sg2_config* config, char out[65]) {
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        const auto hex = sg2::to_hex(config->run.experiment.hash());
        hex.copy(out, 64);
        out[64] = '\0';
    });
}

sg2_status sg2_simulate(const sg2_config* config, unsigned threads, sg2_stream** out, sg2_sim_summary* summary) {
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        sg2::SimulationTally tally;
        auto s = std::make_unique<sg2_stream>();
        s->stream = sg2::run_experiment(config->run.experiment, resolve_threads(threads), &tally);
        if (summary) {
            summary->emitted_photons = tally.emitted_photons;
            summary->surviving_photons = tally.surviving_photons;
            summary->multiphoton_slots = tally.multiphoton_slots;
            std::array<std::uint64_t, 4> clicks{};
            for (const auto& r : s->stream.records)
                for (int d = 0; d < 4; ++d) clicks[static_cast<std::size_t>(d)] += (r.mask >> d) & 1u;
            for (int d = 0; d < 4; ++d)
                summary->singles[d] = static_cast<double>(clicks[static_cast<std::size_t>(d)]) / static_cast<double>(s->stream.n_pulses);
        }
        *out = s.release();
    });
}

sg2_status sg2_stream_load(const char* path, sg2_stream** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new sg2_stream{sg2::load_stream(path)};
    });
}

sg2_status sg2_stream_save(const sg2_stream* stream, const char* path) {
    return guarded([&] {
        require(stream, "stream");
        require(path, "path");
        sg2::save_stream(stream->stream, path);
    });
}

void sg2_stream_free(sg2_stream* stream) { delete stream; }

uint64_t sg2_stream_pulses(const sg2_stream* stream) { return stream ? stream->stream.n_pulses : 0; }

uint64_t sg2_stream_records(const sg2_stream* stream) { return stream ? stream->stream.records.size() : 0; }

sg2_status sg2_analyze(const sg2_stream* stream, const sg2_config* config, const sg2_analysis_options* options,
                       sg2_report** out) {
    return guarded([&] {
        require(stream, "stream");
        require(config, "config");
        require(out, "out");
        sg2::AnalysisOptions o;
        o.max_lag = config->run.max_lag;
        if (options) {
            if (options->max_lag) o.max_lag = options->max_lag;
            if (options->alpha != 0.0) o.alpha = options->alpha;
            o.threads = resolve_threads(options->threads);
        }
        *out = new sg2_report{sg2::analyze(stream->stream, config->run.experiment, o)};
    });
}

void sg2_report_free(sg2_report* report) { delete report; }

sg2_status sg2_report_summarize(const sg2_report* report, sg2_report_summary* out) {
    return guarded([&] {
        require(report, "report");
        require(out, "out");
        const auto& r = report->report;
        *out = {};
        out->g2_hbt0 = r.g2_hbt0.value;
        out->g2_hbt0_sigma = r.g2_hbt0.sigma;
        out->coalescence = r.coalescence.value;
        out->coalescence_sigma = r.coalescence.sigma;
        out->visibility = r.visibility.value;
        out->visibility_sigma = r.visibility.sigma;
        out->g2_merged0 = r.g2_merged0.value;
        out->g2_merged0_sigma = r.g2_merged0.sigma;
        out->zeta0 = r.zeta.zeta0;
        out->tau1 = r.zeta.tau1;
        out->zeta0_sigma = root(r.zeta.covariance[0][0]);
        out->tau1_sigma = root(r.zeta.covariance[1][1]);
        for (std::size_t n = 0; n < 4; ++n) out->p[n] = r.fock.fock[n];
        out->p3_is_upper_bound = r.fock.p3_upper_bound;
        out->p3_upper_limit = r.fock.p3_upper_limit;
        out->triples = r.third_order.triples;
        out->quadruples = r.third_order.quadruples;
        out->has_boson_fit = r.boson_fit.has_value();
        if (r.boson_fit) {
            out->fit_g2 = r.boson_fit->g2;
            out->fit_coalescence = r.boson_fit->coalescence;
            out->fit_g2_sigma = root(r.boson_fit->covariance[0][0]);
            out->fit_coalescence_sigma = root(r.boson_fit->covariance[1][1]);
            out->fit_chi2 = r.boson_fit->chi2;
        }
        out->n_warnings = r.warnings.size();
    });
}

const char* sg2_report_warning(const sg2_report* report, size_t index) {
    if (!report || index >= report->report.warnings.size()) return nullptr;
    return report->report.warnings[index].c_str();
}

sg2_status sg2_report_save_json(const sg2_report* report, const char* path) {
    return guarded([&] {
        require(report, "report");
        require(path, "path");
        sg2::save_report(report->report, path);
    });
}

sg2_status sg2_report_save_histogram(const sg2_report* report, const char* path) {
    return guarded([&] {
        require(report, "report");
        require(path, "path");
        sg2::save_histogram_csv(report->report, path);
    });
}

sg2_status sg2_fit_file(const char* in_path, const char* out_path, sg2_fit_result* out) {
    return guarded([&] {
        require(in_path, "in_path");
        const auto input = sg2::load_fit_input(in_path);
        const auto f = sg2::fit(input.matrix, input.circuit, input.zeta);
        if (out_path) sg2::save_fit(f, input, out_path);
        if (out) {
            out->g2 = f.g2;
            out->coalescence = f.coalescence;
            out->g2_sigma = root(f.covariance[0][0]);
            out->coalescence_sigma = root(f.covariance[1][1]);
            out->chi2 = f.chi2;
            out->dof = f.dof;
            out->at_boundary = f.at_boundary;
        }
    });
}

void sg2_efficiency_defaults(sg2_efficiency_options* out) {
    if (out) from_core(sg2::EfficiencyConfig{}, out);
}

sg2_status sg2_efficiency_load(const char* path, sg2_efficiency_options* out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        from_core(sg2::load_efficiency_config(path), out);
    });
}

sg2_status sg2_efficiency_map(const sg2_efficiency_options* options, unsigned threads, const char* out_path,
                              sg2_map_summary* summary) {
    return guarded([&] {
        require(options, "options");
        require(out_path, "out_path");
        auto cfg = to_core(*options);
        cfg.options.threads = resolve_threads(threads);
        const auto map = sg2::scoring_map(cfg.resolution, cfg.options);
        sg2::save_scoring_map(map, cfg, out_path);
        if (summary) {
            const auto& a = map.points[map.argmax_analytic];
            const auto& s = map.points[map.argmax_scoring];
            std::size_t ones = 0;
            for (const auto& p : map.points) ones += p.scoring.value >= 1.0;
            *summary = {a.g2,         a.coalescence,     a.ratio_c_analytic, s.g2, s.coalescence, s.scoring.value,
                        s.scoring.sigma, static_cast<double>(ones) / static_cast<double>(map.points.size())};
        }
    });
}

sg2_status sg2_variance_ratio_c(double g2, double coalescence, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = sg2::variance_ratio_C(g2, coalescence);
    });
}

sg2_status sg2_selftest(sg2_line_callback emit, void* user) {
    return guarded([&] {
        int failures = 0;
        auto report = [&](bool ok, const std::string& what) {
            failures += !ok;
            const std::string line = std::string(ok ? "ok   " : "FAIL ") + what;
            if (emit) emit(line.c_str(), user);
        };

        Eigen::MatrixXcd m(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = sg2::Complex(1.0 + i + 2.0 * j, 0.5 * (i - j));
        sg2::Complex brute = 0.0;
        int perm[3] = {0, 1, 2};
        do brute += m(0, perm[0]) * m(1, perm[1]) * m(2, perm[2]);
        while (std::next_permutation(perm, perm + 3));
        report(std::abs(sg2::permanent(m) - brute) < 1e-10, "permanent agrees with the permutation sum");

        report(std::abs(sg2::hom_coincidence(1.0, M_SQRT1_2, M_SQRT1_2)) < 1e-12 &&
                   std::abs(sg2::hom_coincidence(0.0, M_SQRT1_2, M_SQRT1_2) - 0.5) < 1e-12,
               "balanced HOM coincidence is (1 - M) / 2");

        report(std::abs(sg2::variance_ratio_C(0.0, 1.0) - 1.0) < 1e-15 && std::abs(sg2::variance_ratio_C(1.0, 0.0) - 2.0) < 1e-15,
               "variance ratio limits 1 and 2");

        sg2::ExperimentConfig cfg;
        cfg.source.fock = sg2::FockDistribution::from_brightness(0.029, 0.05);
        cfg.source.indistinguishability = 0.61;
        cfg.source.zeta0 = 1.34;
        cfg.source.tau1 = 3.64;
        cfg.n_pulses = 1000000;
        cfg.seed = 1;
        const auto one = sg2::run_experiment(cfg, 1);
        const auto two = sg2::run_experiment(cfg, 2);
        report(one.records == two.records, "click stream independent of thread count");

        const auto r = sg2::analyze(one, cfg, {});
        report(std::abs(r.g2_hbt0.value - 0.05) < 0.1 && std::abs(r.coalescence.value - 0.61) < 0.1,
               "simulate and analyze round trip (g2 = " + std::to_string(r.g2_hbt0.value) +
                   ", C = " + std::to_string(r.coalescence.value) + ")");

        if (failures) throw sg2::NumericalError(std::to_string(failures) + " self-test check(s) failed");
    });
}

}  // extern "C"
