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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sg2/sg2.h"

namespace {

struct Common {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> pulses;
    std::optional<std::string> mode;
    unsigned threads = 0;
    double alpha = 0.05;
};

int fail(sg2_status s) {
    std::fprintf(stderr, "sg2: error: %s\n", sg2_last_error());
    return static_cast<int>(s);
}

#define SG2_TRY(expr)                          \
    do {                                       \
        sg2_status status_ = (expr);           \
        if (status_ != SG2_OK) return fail(status_); \
    } while (0)

template <typename T, void (*Free)(T*)>
struct Handle {
    T* p = nullptr;
    ~Handle() { Free(p); }
};

int load_run_config(const Common& o, Handle<sg2_config, sg2_config_free>& c) {
    SG2_TRY(sg2_config_load(o.config.c_str(), &c.p));
    if (o.seed) SG2_TRY(sg2_config_set_seed(c.p, *o.seed));
    if (o.pulses) SG2_TRY(sg2_config_set_pulses(c.p, *o.pulses));
    if (o.mode) SG2_TRY(sg2_config_set_mode(c.p, o.mode->c_str()));
    return 0;
}

int cmd_simulate(const Common& o) {
    Handle<sg2_config, sg2_config_free> c;
    if (int rc = load_run_config(o, c)) return rc;
    Handle<sg2_stream, sg2_stream_free> s;
    sg2_sim_summary sum{};
    SG2_TRY(sg2_simulate(c.p, o.threads, &s.p, &sum));
    SG2_TRY(sg2_stream_save(s.p, o.out.c_str()));
    char hash[65];
    SG2_TRY(sg2_config_hash(c.p, hash));
    std::printf("wrote %s\n", o.out.c_str());
    std::printf("mode            %s\n", sg2_config_mode(c.p));
    std::printf("pulses          %llu\n", static_cast<unsigned long long>(sg2_stream_pulses(s.p)));
    std::printf("click records   %llu\n", static_cast<unsigned long long>(sg2_stream_records(s.p)));
    std::printf("emitted photons %llu (%llu detected-path, %llu multi-photon slots)\n",
                static_cast<unsigned long long>(sum.emitted_photons), static_cast<unsigned long long>(sum.surviving_photons),
                static_cast<unsigned long long>(sum.multiphoton_slots));
    std::printf("singles/pulse   A %.6g  B %.6g  C %.6g  D %.6g\n", sum.singles[0], sum.singles[1], sum.singles[2], sum.singles[3]);
    std::printf("config hash     %s\n", hash);
    return 0;
}

std::string sibling(const std::string& path, const std::string& suffix) {
    std::filesystem::path p(path);
    return (p.parent_path() / (p.stem().string() + suffix)).string();
}

int cmd_analyze(const Common& o, const std::string& stream_path, const std::string& histogram) {
    Handle<sg2_config, sg2_config_free> c;
    if (int rc = load_run_config(o, c)) return rc;
    Handle<sg2_stream, sg2_stream_free> s;
    SG2_TRY(sg2_stream_load(stream_path.c_str(), &s.p));
    if (!o.pulses) SG2_TRY(sg2_config_set_pulses(c.p, sg2_stream_pulses(s.p)));
    sg2_analysis_options opts{0, o.alpha, o.threads};
    Handle<sg2_report, sg2_report_free> r;
    SG2_TRY(sg2_analyze(s.p, c.p, &opts, &r.p));
    SG2_TRY(sg2_report_save_json(r.p, o.out.c_str()));
    const std::string hist = histogram.empty() ? sibling(o.out, "_histogram.csv") : histogram;
    SG2_TRY(sg2_report_save_histogram(r.p, hist.c_str()));
    sg2_report_summary m{};
    SG2_TRY(sg2_report_summarize(r.p, &m));
    std::printf("wrote %s and %s\n", o.out.c_str(), hist.c_str());
    std::printf("g2_HBT[0]   %.4f +- %.4f\n", m.g2_hbt0, m.g2_hbt0_sigma);
    if (!std::isnan(m.coalescence)) {
        std::printf("C           %.4f +- %.4f\n", m.coalescence, m.coalescence_sigma);
        std::printf("V           %.4f +- %.4f\n", m.visibility, m.visibility_sigma);
    }
    std::printf("merged g2   %.4f +- %.4f\n", m.g2_merged0, m.g2_merged0_sigma);
    std::printf("zeta0       %.4f +- %.4f   tau1 %.3f +- %.3f pulses\n", m.zeta0, m.zeta0_sigma, m.tau1, m.tau1_sigma);
    std::printf("p0..p2      %.6g  %.6g  %.6g\n", m.p[0], m.p[1], m.p[2]);
    std::printf("p3          %s %.3g (%llu triples, %llu quadruples)\n", m.p3_is_upper_bound ? "<" : "=", m.p[3],
                static_cast<unsigned long long>(m.triples), static_cast<unsigned long long>(m.quadruples));
    if (m.has_boson_fit)
        std::printf("boson fit   g2 %.4f +- %.4f  C %.4f +- %.4f  chi2 %.2f\n", m.fit_g2, m.fit_g2_sigma, m.fit_coalescence,
                    m.fit_coalescence_sigma, m.fit_chi2);
    for (std::size_t i = 0; i < m.n_warnings; ++i) std::printf("warning: %s\n", sg2_report_warning(r.p, i));
    return 0;
}

int cmd_efficiency(const Common& o, std::optional<int> resolution, std::optional<int> replications) {
    sg2_efficiency_options opts;
    sg2_efficiency_defaults(&opts);
    if (!o.config.empty()) SG2_TRY(sg2_efficiency_load(o.config.c_str(), &opts));
    if (o.seed) opts.seed = *o.seed;
    if (o.pulses) opts.n_pulses = *o.pulses;
    if (resolution) opts.resolution = *resolution;
    if (replications) opts.replications = *replications;
    sg2_map_summary m{};
    SG2_TRY(sg2_efficiency_map(&opts, o.threads, o.out.c_str(), &m));
    std::printf("wrote %s and %s\n", o.out.c_str(), sibling(o.out, ".json").c_str());
    std::printf("analytic C-variance ratio max %.4f at g2 = %.3f, C = %.3f\n", m.analytic_value, m.analytic_g2,
                m.analytic_coalescence);
    std::printf("scoring ratio max %.3f +- %.3f at g2 = %.3f, C = %.3f\n", m.scoring_value, m.scoring_sigma, m.scoring_g2,
                m.scoring_coalescence);
    std::printf("cells with scoring ratio >= 1: %.1f%%\n", 100.0 * m.fraction_at_least_one);
    return 0;
}

int cmd_fit(const std::string& in, const std::string& out) {
    sg2_fit_result f{};
    SG2_TRY(sg2_fit_file(in.c_str(), out.empty() ? nullptr : out.c_str(), &f));
    if (!out.empty()) std::printf("wrote %s\n", out.c_str());
    std::printf("g2 %.5f +- %.5f  C %.5f +- %.5f  chi2 %.3f / %d%s\n", f.g2, f.g2_sigma, f.coalescence, f.coalescence_sigma, f.chi2,
                f.dof, f.at_boundary ? "  (at boundary)" : "");
    return 0;
}

int cmd_selftest() {
    auto emit = [](const char* line, void*) { std::printf("%s\n", line); };
    SG2_TRY(sg2_selftest(emit, nullptr));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simultaneous second-order correlation simulator and analyzer"};
    app.set_version_flag("--version", std::string(sg2_version()));
    app.require_subcommand(1);

    Common o;
    auto add_threads = [&](CLI::App* sub) {
        sub->add_option("--threads", o.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    };
    auto add_run_overrides = [&](CLI::App* sub) {
        sub->add_option("--seed", o.seed, "override the config seed");
        sub->add_option("--pulses", o.pulses, "override the number of pulses");
        add_threads(sub);
    };

    auto* sim = app.add_subcommand("simulate", "generate a click stream (.csv for text, binary otherwise)");
    sim->add_option("--config", o.config, "run configuration (INI)")->required();
    sim->add_option("--out", o.out, "click stream output")->required();
    sim->add_option("--mode", o.mode, "sg2 | hbt | hom-hwp-co | hom-hwp-cross");
    add_run_overrides(sim);

    std::string stream_path, histogram;
    auto* ana = app.add_subcommand("analyze", "extract g2, C, V, zeta and the Fock distribution from a click stream");
    ana->add_option("stream", stream_path, "click stream file")->required();
    ana->add_option("--config", o.config, "run configuration the stream was made with")->required();
    ana->add_option("--out", o.out, "report JSON")->required();
    ana->add_option("--histogram", histogram, "correlation histogram CSV (default: <out>_histogram.csv)");
    ana->add_option("--mode", o.mode, "analysis mode: sg2 | hbt | hom-hwp-co | hom-hwp-cross");
    ana->add_option("--alpha", o.alpha, "p3 upper-limit significance (confidence 1 - alpha)");
    add_run_overrides(ana);

    std::optional<int> resolution, replications;
    auto* eff = app.add_subcommand("efficiency-map", "variance ratios and scoring ratios over the (g2, C) plane");
    eff->add_option("--config", o.config, "efficiency settings (INI [efficiency] section)");
    eff->add_option("--out", o.out, "heatmap CSV; metadata goes to the .json sibling")->required();
    eff->add_option("--resolution", resolution, "grid points per axis");
    eff->add_option("--replications", replications, "replications per method and cell");
    add_run_overrides(eff);

    std::string fit_in;
    auto* fit = app.add_subcommand("fit", "fit (g2, C) to a report's zero-lag correlation matrix");
    fit->add_option("input", fit_in, "report JSON or matrix JSON")->required();
    fit->add_option("--out", o.out, "fit JSON");

    auto* self = app.add_subcommand("selftest", "quick internal consistency checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return SG2_ERR_VALIDATION;
    }

    if (*sim) return cmd_simulate(o);
    if (*ana) return cmd_analyze(o, stream_path, histogram);
    if (*eff) return cmd_efficiency(o, resolution, replications);
    if (*fit) return cmd_fit(fit_in, o.out);
    if (*self) return cmd_selftest();
    return SG2_ERR_VALIDATION;
}
