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

#include "sg2/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "sg2/errors.hpp"

namespace sg2 {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>> kSchema = {
    {"source", {"p1", "g2_target", "p2", "C", "zeta0", "tau1", "pulse_period_ns", "spectral_jitter"}},
    {"circuit", {"r2", "t2", "r3", "t3", "r4", "t4", "delay_pulses"}},
    {"detection", {"eta", "dark_prob", "number_resolving"}},
    {"run", {"n_pulses", "seed", "mode", "max_lag"}},
};

class Reader {
   public:
    Reader(const pt::ptree& tree, std::string origin) : tree_(tree), origin_(std::move(origin)) {}

    [[noreturn]] void fail(const std::string& where, const std::string& what) const {
        throw ValidationError(origin_ + ": " + where + ": " + what);
    }

    std::optional<std::string> raw(const std::string& section, const std::string& key) const {
        auto sec = tree_.get_child_optional(section);
        if (!sec) return std::nullopt;
        auto v = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!v) return std::nullopt;
        return *v;
    }

    std::optional<double> real(const std::string& section, const std::string& key) const {
        auto text = raw(section, key);
        if (!text) return std::nullopt;
        double v = 0.0;
        const char* end = text->data() + text->size();
        auto [ptr, ec] = std::from_chars(text->data(), end, v);
        if (ec != std::errc() || ptr != end || !std::isfinite(v))
            fail("[" + section + "] " + key, "expected a number, got '" + *text + "'");
        return v;
    }

    std::optional<std::uint64_t> count(const std::string& section, const std::string& key) const {
        auto v = real(section, key);
        if (!v) return std::nullopt;
        if (*v < 0.0 || *v != std::floor(*v) || *v > 9007199254740992.0)
            fail("[" + section + "] " + key, "expected a non-negative integer");
        return static_cast<std::uint64_t>(*v);
    }

    std::optional<std::uint64_t> u64(const std::string& section, const std::string& key) const {
        auto text = raw(section, key);
        if (!text) return std::nullopt;
        std::uint64_t v = 0;
        const char* end = text->data() + text->size();
        auto [ptr, ec] = std::from_chars(text->data(), end, v);
        if (ec != std::errc() || ptr != end) fail("[" + section + "] " + key, "expected an unsigned integer, got '" + *text + "'");
        return v;
    }

    std::optional<bool> flag(const std::string& section, const std::string& key) const {
        auto text = raw(section, key);
        if (!text) return std::nullopt;
        if (*text == "true" || *text == "1" || *text == "yes") return true;
        if (*text == "false" || *text == "0" || *text == "no") return false;
        fail("[" + section + "] " + key, "expected true or false, got '" + *text + "'");
    }

   private:
    const pt::ptree& tree_;
    std::string origin_;
};

Beamsplitter splitter(const Reader& r, const std::string& n) {
    auto refl = r.real("circuit", "r" + n), trans = r.real("circuit", "t" + n);
    if (!refl && !trans) return {};
    if (!trans) trans = std::sqrt(std::max(0.0, 1.0 - *refl * *refl));
    if (!refl) refl = std::sqrt(std::max(0.0, 1.0 - *trans * *trans));
    try {
        return Beamsplitter(*refl, *trans);
    } catch (const ValidationError& e) {
        r.fail("[circuit] r" + n + "/t" + n, e.what());
    }
}

pt::ptree read_checked(std::istream& in, const std::string& origin, const std::map<std::string, std::set<std::string>>& schema) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ValidationError(origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    Reader r(tree, origin);
    for (const auto& [section, body] : tree) {
        auto it = schema.find(section);
        if (it == schema.end()) {
            if (body.empty()) r.fail(section, "key outside any section");
            r.fail("[" + section + "]", "unknown section");
        }
        for (const auto& [key, value] : body) {
            (void)value;
            if (!it->second.count(key)) r.fail("[" + section + "] " + key, "unknown key");
        }
    }
    return tree;
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& origin) {
    const pt::ptree tree = read_checked(in, origin, kSchema);
    Reader r(tree, origin);

    RunConfig cfg;
    auto& x = cfg.experiment;
    auto p1 = r.real("source", "p1");
    if (!p1) r.fail("[source] p1", "required key missing");
    auto g2 = r.real("source", "g2_target");
    auto p2 = r.real("source", "p2");
    if (g2 && p2) r.fail("[source]", "give either g2_target or p2, not both");
    try {
        if (p2) {
            x.source.fock = FockDistribution({1.0 - *p1 - *p2, *p1, *p2, 0.0});
        } else {
            x.source.fock = FockDistribution::from_brightness(*p1, g2.value_or(0.0));
        }
    } catch (const ValidationError& e) {
        r.fail("[source] p1/p2", e.what());
    }
    x.source.indistinguishability = r.real("source", "C").value_or(1.0);
    x.source.zeta0 = r.real("source", "zeta0").value_or(1.0);
    x.source.tau1 = r.real("source", "tau1").value_or(1.0);
    x.source.pulse_period_ns = r.real("source", "pulse_period_ns").value_or(x.source.pulse_period_ns);
    x.source.spectral_jitter = r.real("source", "spectral_jitter").value_or(0.0);

    auto delay = r.count("circuit", "delay_pulses").value_or(4);
    if (delay < 1 || delay > 1000) r.fail("[circuit] delay_pulses", "must lie in [1, 1000]");
    x.circuit = CircuitModel(splitter(r, "2"), splitter(r, "3"), splitter(r, "4"), static_cast<int>(delay));

    x.efficiency = r.real("detection", "eta").value_or(1.0);
    x.dark_prob = r.real("detection", "dark_prob").value_or(0.0);
    x.detection = r.flag("detection", "number_resolving").value_or(false) ? Detection::NumberResolving : Detection::Emulated;

    auto n = r.count("run", "n_pulses");
    if (!n) r.fail("[run] n_pulses", "required key missing");
    x.n_pulses = *n;
    x.seed = r.u64("run", "seed").value_or(0);
    if (auto mode = r.raw("run", "mode")) {
        try {
            x.mode = parse_mode(*mode);
        } catch (const ValidationError& e) {
            r.fail("[run] mode", e.what());
        }
    }
    auto lag = r.count("run", "max_lag").value_or(50);
    if (lag < 1 || lag > 100000) r.fail("[run] max_lag", "must lie in [1, 100000]");
    cfg.max_lag = static_cast<int>(lag);

    try {
        x.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(origin + ": " + e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    return parse_config(in, path);
}

std::string format_config(const RunConfig& config) {
    const auto& x = config.experiment;
    std::ostringstream out;
    out.precision(17);
    out << "[source]\np1 = " << x.source.fock[1] << "\np2 = " << x.source.fock[2]
        << "\nC = " << x.source.indistinguishability << "\nzeta0 = " << x.source.zeta0 << "\ntau1 = " << x.source.tau1
        << "\npulse_period_ns = " << x.source.pulse_period_ns << "\nspectral_jitter = " << x.source.spectral_jitter
        << "\n\n[circuit]\nr2 = " << x.circuit.bs2().r << "\nt2 = " << x.circuit.bs2().t << "\nr3 = " << x.circuit.bs3().r
        << "\nt3 = " << x.circuit.bs3().t << "\nr4 = " << x.circuit.bs4().r << "\nt4 = " << x.circuit.bs4().t
        << "\ndelay_pulses = " << x.circuit.delay_pulses() << "\n\n[detection]\neta = " << x.efficiency
        << "\ndark_prob = " << x.dark_prob << "\nnumber_resolving = " << (x.detection == Detection::NumberResolving ? "true" : "false")
        << "\n\n[run]\nn_pulses = " << x.n_pulses << "\nseed = " << x.seed << "\nmode = " << to_string(x.mode)
        << "\nmax_lag = " << config.max_lag << "\n";
    return out.str();
}

EfficiencyConfig parse_efficiency_config(std::istream& in, const std::string& origin) {
    static const std::map<std::string, std::set<std::string>> schema = {
        {"efficiency", {"p1", "n_pulses", "replications", "jackknife_blocks", "split", "seed", "resolution"}}};
    const pt::ptree tree = read_checked(in, origin, schema);
    Reader r(tree, origin);
    EfficiencyConfig cfg;
    auto& o = cfg.options;
    o.p1 = r.real("efficiency", "p1").value_or(o.p1);
    o.n_pulses = r.count("efficiency", "n_pulses").value_or(o.n_pulses);
    o.replications = static_cast<int>(std::min<std::uint64_t>(r.count("efficiency", "replications").value_or(30), 1000000));
    o.jackknife_blocks = static_cast<int>(std::min<std::uint64_t>(r.count("efficiency", "jackknife_blocks").value_or(20), 1000000));
    o.split = r.real("efficiency", "split").value_or(o.split);
    o.seed = r.u64("efficiency", "seed").value_or(o.seed);
    cfg.resolution = static_cast<int>(std::min<std::uint64_t>(r.count("efficiency", "resolution").value_or(11), 1001));
    if (!(o.p1 > 0.0 && o.p1 <= 0.5)) r.fail("[efficiency] p1", "must lie in (0, 0.5]");
    if (o.replications < 1) r.fail("[efficiency] replications", "must be >= 1");
    if (o.jackknife_blocks < 2) r.fail("[efficiency] jackknife_blocks", "must be >= 2");
    if (!(o.split > 0.0 && o.split < 1.0)) r.fail("[efficiency] split", "must lie in (0, 1)");
    if (o.n_pulses < static_cast<std::uint64_t>(o.jackknife_blocks) * 1000)
        r.fail("[efficiency] n_pulses", "must allow at least 1000 pulses per jackknife block");
    if (cfg.resolution < 5) r.fail("[efficiency] resolution", "must be >= 5");
    return cfg;
}

EfficiencyConfig load_efficiency_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    return parse_efficiency_config(in, path);
}

std::string EfficiencyConfig::canonical_text() const {
    std::ostringstream out;
    out.precision(17);
    out << "format=sg2-efficiency-v1\np1=" << options.p1 << "\nn_pulses=" << options.n_pulses
        << "\nreplications=" << options.replications << "\njackknife_blocks=" << options.jackknife_blocks
        << "\nsplit=" << options.split << "\nseed=" << options.seed << "\nresolution=" << resolution << "\n";
    return out.str();
}

}  // namespace sg2
