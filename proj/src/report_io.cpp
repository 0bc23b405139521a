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

#include "sg2/report_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "sg2/errors.hpp"

namespace sg2 {

namespace {

using nlohmann::json;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json estimate(const Estimate& e) {
    return {{"value", num(e.value)}, {"sigma", num(e.sigma)}, {"raw", num(e.raw)}, {"clamped", e.clamped}};
}

json matrix2(const std::array<std::array<double, 2>, 2>& m) {
    return json::array({json::array({num(m[0][0]), num(m[0][1])}), json::array({num(m[1][0]), num(m[1][1])})});
}

json circuit_json(const CircuitModel& c) {
    return {{"r2", c.bs2().r}, {"t2", c.bs2().t}, {"r3", c.bs3().r}, {"t3", c.bs3().t},
            {"r4", c.bs4().r}, {"t4", c.bs4().t}, {"delay_pulses", c.delay_pulses()}};
}

json zeta_json(const ZetaFit& z) {
    return {{"zeta0", num(z.zeta0)},
            {"tau1", num(z.tau1)},
            {"covariance", matrix2(z.covariance)},
            {"excluded_lags", z.excluded},
            {"model", z.model == PlateauModel::Direct ? "direct" : "interferometer"},
            {"at_boundary", z.at_boundary},
            {"tau1_identified", z.tau1_identified},
            {"chi2", num(z.chi2)},
            {"dof", z.dof}};
}

json fit_json(const BosonFit& f) {
    return {{"g2", num(f.g2)},
            {"coalescence", num(f.coalescence)},
            {"covariance", matrix2(f.covariance)},
            {"chi2", num(f.chi2)},
            {"dof", f.dof},
            {"at_boundary", f.at_boundary},
            {"iterations", f.iterations}};
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("failed writing " + path);
}

double get_number(const json& j, const char* key, const std::string& origin) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number()) throw ValidationError(origin + ": missing numeric key '" + key + "'");
    return it->get<double>();
}

}  // namespace

void write_report_json(const Sg2Report& r, std::ostream& out) {
    json j;
    j["tool"] = "sg2";
    j["tool_version"] = r.tool_version;
    j["config_hash"] = to_hex(r.config_hash);
    j["mode"] = std::string(to_string(r.mode));
    j["n_pulses"] = r.n_pulses;
    j["delay_pulses"] = r.delay;
    j["circuit"] = circuit_json(r.circuit);
    j["g2_hbt0"] = estimate(r.g2_hbt0);
    j["coalescence"] = estimate(r.coalescence);
    j["visibility"] = estimate(r.visibility);
    j["cov_g2_coalescence"] = num(r.g2_c_covariance);
    j["g2_merged0"] = estimate(r.g2_merged0);
    j["zeta"] = zeta_json(r.zeta);
    const auto& cs = r.correlations;
    json singles, matrix;
    for (int d = 0; d < kNumDetectors; ++d) singles[std::string(1, kDetectorNames[d])] = num(cs.singles[static_cast<std::size_t>(d)]);
    for (int p = 0; p < kNumPairs; ++p)
        matrix[pair_name(p)] = {{"g2", num(cs.at(p, 0))}, {"sigma", num(cs.sigma_at(p, 0))}, {"counts", cs.count_at(p, 0)}};
    j["singles"] = singles;
    j["correlation_matrix"] = matrix;
    json ac = {{"lags", json::array()}, {"auto", json::array()}, {"auto_sigma", json::array()}, {"cross", json::array()},
               {"cross_sigma", json::array()}};
    for (int l = -r.auto_cross.max_lag; l <= r.auto_cross.max_lag; ++l) {
        ac["lags"].push_back(l);
        ac["auto"].push_back(num(r.auto_cross.auto_at(l)));
        ac["auto_sigma"].push_back(num(r.auto_cross.auto_sigma_at(l)));
        ac["cross"].push_back(num(r.auto_cross.cross_at(l)));
        ac["cross_sigma"].push_back(num(r.auto_cross.cross_sigma_at(l)));
    }
    j["auto_cross"] = ac;
    json p = json::array();
    for (double v : r.fock.fock.p()) p.push_back(num(v));
    j["fock"] = {{"p", p},
                 {"p3_is_upper_bound", r.fock.p3_upper_bound},
                 {"p3_upper_limit", num(r.fock.p3_upper_limit)},
                 {"alpha", r.fock.alpha},
                 {"three_fold_efficiency", num(r.fock.three_fold_efficiency)}};
    j["third_order"] = {{"triples", r.third_order.triples}, {"quadruples", r.third_order.quadruples}, {"n_trials", r.third_order.n_trials}};
    j["boson_fit"] = r.boson_fit ? fit_json(*r.boson_fit) : json(nullptr);
    j["warnings"] = r.warnings;
    out << j.dump(2) << "\n";
}

void save_report(const Sg2Report& report, const std::string& path) {
    auto out = open_out(path);
    write_report_json(report, out);
    finish(out, path);
}

void write_histogram_csv(const Sg2Report& r, std::ostream& out) {
    out << "# sg2 tool_version=" << r.tool_version << " config_hash=" << to_hex(r.config_hash) << "\n";
    out << "pair,j,g2,raw_counts\n";
    out.precision(10);
    const auto& cs = r.correlations;
    for (int p = 0; p < kNumPairs; ++p)
        for (int l = -cs.max_lag; l <= cs.max_lag; ++l) out << pair_name(p) << "," << l << "," << cs.at(p, l) << "," << cs.count_at(p, l) << "\n";
}

void save_histogram_csv(const Sg2Report& report, const std::string& path) {
    auto out = open_out(path);
    write_histogram_csv(report, out);
    finish(out, path);
}

FitInput read_fit_input(std::istream& in, const std::string& origin) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError(origin + ": malformed JSON: " + e.what());
    }
    if (!j.is_object()) throw ValidationError(origin + ": expected a JSON object");
    FitInput f;
    auto m = j.find("correlation_matrix");
    if (m == j.end() || !m->is_object()) throw ValidationError(origin + ": missing 'correlation_matrix'");
    for (int p = 0; p < kNumPairs; ++p) {
        auto e = m->find(pair_name(p));
        if (e == m->end()) throw ValidationError(origin + ": correlation_matrix lacks pair " + pair_name(p));
        f.matrix.value[static_cast<std::size_t>(p)] = get_number(*e, "g2", origin);
        f.matrix.sigma[static_cast<std::size_t>(p)] = get_number(*e, "sigma", origin);
    }
    f.matrix.validate();
    f.zeta = ZetaFit::flat();
    if (auto z = j.find("zeta"); z != j.end() && z->is_object()) {
        f.zeta.zeta0 = get_number(*z, "zeta0", origin);
        f.zeta.tau1 = get_number(*z, "tau1", origin);
        if (!(f.zeta.zeta0 >= 1.0 && f.zeta.tau1 > 0.0)) throw ValidationError(origin + ": zeta needs zeta0 >= 1 and tau1 > 0");
    }
    if (auto c = j.find("circuit"); c != j.end() && c->is_object()) {
        auto bs = [&](const char* r, const char* t) { return Beamsplitter(get_number(*c, r, origin), get_number(*c, t, origin)); };
        f.circuit = CircuitModel(bs("r2", "t2"), bs("r3", "t3"), bs("r4", "t4"), static_cast<int>(get_number(*c, "delay_pulses", origin)));
    }
    if (auto h = j.find("config_hash"); h != j.end() && h->is_string()) f.config_hash = h->get<std::string>();
    return f;
}

FitInput load_fit_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return read_fit_input(in, path);
}

void write_fit_json(const BosonFit& fit, const FitInput& input, std::ostream& out) {
    json j;
    j["tool"] = "sg2";
    j["tool_version"] = kToolVersion;
    j["config_hash"] = input.config_hash;
    j["boson_fit"] = fit_json(fit);
    j["sigma_g2"] = num(std::sqrt(fit.covariance[0][0]));
    j["sigma_coalescence"] = num(std::sqrt(fit.covariance[1][1]));
    j["circuit"] = circuit_json(input.circuit);
    j["zeta"] = {{"zeta0", num(input.zeta.zeta0)}, {"tau1", num(input.zeta.tau1)}};
    out << j.dump(2) << "\n";
}

void save_fit(const BosonFit& fit, const FitInput& input, const std::string& path) {
    auto out = open_out(path);
    write_fit_json(fit, input, out);
    finish(out, path);
}

void write_scoring_csv(const ScoringMap& map, const EfficiencyConfig& config, std::ostream& out) {
    out << "# sg2 tool_version=" << kToolVersion << " config_hash=" << to_hex(sha256(config.canonical_text())) << "\n";
    out << "g2,C,ratio_analytic,ratio_empirical,sigma,scoring_ratio,scoring_sigma\n";
    out.precision(10);
    for (const auto& p : map.points)
        out << p.g2 << "," << p.coalescence << "," << p.ratio_c_analytic << "," << p.ratio_c_empirical.value << ","
            << p.ratio_c_empirical.sigma << "," << p.scoring.value << "," << p.scoring.sigma << "\n";
}

void write_scoring_json(const ScoringMap& map, const EfficiencyConfig& config, std::ostream& out) {
    const auto& o = map.options;
    auto cell = [&](std::size_t k) {
        const auto& p = map.points[k];
        return json{{"g2", p.g2}, {"C", p.coalescence}, {"ratio_analytic", num(p.ratio_c_analytic)}, {"scoring_ratio", num(p.scoring.value)},
                    {"scoring_sigma", num(p.scoring.sigma)}};
    };
    std::size_t at_ones = 0;
    for (const auto& p : map.points) at_ones += p.scoring.value >= 1.0;
    json j = {{"tool", "sg2"},
              {"tool_version", kToolVersion},
              {"config_hash", to_hex(sha256(config.canonical_text()))},
              {"resolution", map.resolution},
              {"p1", o.p1},
              {"n_pulses", o.n_pulses},
              {"replications", o.replications},
              {"jackknife_blocks", o.jackknife_blocks},
              {"split", o.split},
              {"seed", o.seed},
              {"argmax_analytic", cell(map.argmax_analytic)},
              {"argmax_scoring", cell(map.argmax_scoring)},
              {"fraction_scoring_at_least_one", static_cast<double>(at_ones) / static_cast<double>(map.points.size())}};
    out << j.dump(2) << "\n";
}

void save_scoring_map(const ScoringMap& map, const EfficiencyConfig& config, const std::string& path) {
    {
        auto out = open_out(path);
        write_scoring_csv(map, config, out);
        finish(out, path);
    }
    const std::string meta = std::filesystem::path(path).replace_extension(".json").string();
    if (meta == path) throw ValidationError("scoring map CSV path must not end in .json");
    auto out = open_out(meta);
    write_scoring_json(map, config, out);
    finish(out, meta);
}

}  // namespace sg2
