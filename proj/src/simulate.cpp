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

#include "sg2/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <openssl/evp.h>

#include "parallel.hpp"
#include "sg2/errors.hpp"

namespace sg2 {

std::string_view to_string(MeasurementMode mode) {
    switch (mode) {
        case MeasurementMode::Sg2: return "sg2";
        case MeasurementMode::Hbt: return "hbt";
        case MeasurementMode::HomHwpCo: return "hom-hwp-co";
        case MeasurementMode::HomHwpCross: return "hom-hwp-cross";
    }
    return "?";
}

std::string_view to_string(Detection detection) {
    return detection == Detection::Emulated ? "emulated" : "number-resolving";
}

MeasurementMode parse_mode(std::string_view text) {
    for (auto m : {MeasurementMode::Sg2, MeasurementMode::Hbt, MeasurementMode::HomHwpCo, MeasurementMode::HomHwpCross}) {
        if (text == to_string(m)) return m;
    }
    throw ValidationError("unknown measurement mode '" + std::string(text) +
                          "' (expected sg2, hbt, hom-hwp-co or hom-hwp-cross)");
}

std::string to_hex(const ConfigHash& hash) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (auto b : hash) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 15]);
    }
    return out;
}

void ExperimentConfig::validate() const {
    source.validate();
    if (source.zeta0 > 3.0) {
        throw ValidationError("the jitter simulation supports zeta0 in [1, 3]; got " + std::to_string(source.zeta0));
    }
    if (!(efficiency > 0.0 && efficiency <= 1.0)) {
        throw ValidationError("efficiency eta must lie in (0, 1]");
    }
    if (!(dark_prob >= 0.0 && dark_prob < 1.0)) {
        throw ValidationError("dark count probability must lie in [0, 1)");
    }
    if (n_pulses < 1) {
        throw ValidationError("n_pulses must be at least 1");
    }
}

std::string ExperimentConfig::canonical_text() const {
    std::ostringstream out;
    out.precision(17);
    auto p = source.fock.p();
    out << "format=sg2-config-v1\n";
    for (std::size_t n = 0; n < p.size(); ++n) out << "source.p" << n << "=" << p[n] << "\n";
    out << "source.C=" << source.indistinguishability << "\n"
        << "source.zeta0=" << source.zeta0 << "\n"
        << "source.tau1=" << source.tau1 << "\n"
        << "source.pulse_period_ns=" << source.pulse_period_ns << "\n"
        << "source.spectral_jitter=" << source.spectral_jitter << "\n"
        << "circuit.r2=" << circuit.bs2().r << "\ncircuit.t2=" << circuit.bs2().t << "\n"
        << "circuit.r3=" << circuit.bs3().r << "\ncircuit.t3=" << circuit.bs3().t << "\n"
        << "circuit.r4=" << circuit.bs4().r << "\ncircuit.t4=" << circuit.bs4().t << "\n"
        << "circuit.delay_pulses=" << circuit.delay_pulses() << "\n"
        << "detection.eta=" << efficiency << "\n"
        << "detection.dark_prob=" << dark_prob << "\n"
        << "detection.number_resolving=" << (detection == Detection::NumberResolving ? 1 : 0) << "\n"
        << "run.mode=" << to_string(mode) << "\n"
        << "run.n_pulses=" << n_pulses << "\n"
        << "run.seed=" << seed << "\n";
    return out.str();
}

ConfigHash ExperimentConfig::hash() const { return sha256(canonical_text()); }

ConfigHash sha256(std::string_view text) {
    ConfigHash h{};
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), h.data(), &len, EVP_sha256(), nullptr) != 1 || len != h.size()) {
        throw NumericalError("SHA-256 digest failed");
    }
    return h;
}

std::uint64_t ExperimentConfig::block_length() const {
    auto by_tau = static_cast<std::uint64_t>(1000.0 * std::ceil(source.tau1));
    auto by_delay = static_cast<std::uint64_t>(2 * circuit.delay_pulses());
    return std::max<std::uint64_t>({65536, by_tau, by_delay});
}

JitterProcess::JitterProcess(double zeta0, double tau1, double spectral_jitter)
    : phi_(std::exp(-1.0 / (2.0 * tau1))),
      innovation_(std::sqrt(1.0 - phi_ * phi_)),
      a_(0.0),
      b_(std::sqrt(std::max(0.0, zeta0 - 1.0) / 2.0)),
      spectral_jitter_(spectral_jitter) {
    a_ = 1.0 - b_;
}

double effective_overlap(const SourceModel& source, double detuning_a, double detuning_b, bool cross_polarized) {
    if (cross_polarized) return 0.0;
    double d = detuning_a - detuning_b;
    return source.indistinguishability * std::exp(-d * d / 2.0);
}

double expected_coalescence(const SourceModel& source, int k) {
    JitterProcess proc(source.zeta0, source.tau1, source.spectral_jitter);
    const double rho = std::pow(proc.phi(), std::abs(k));
    const double b = std::sqrt((source.zeta0 - 1.0) / 2.0), a = 1.0 - b;
    const double sj = source.spectral_jitter;
    if (sj == 0.0) return source.indistinguishability;

    // Trapezoid rule on a wide square; the Gaussian integrand makes it spectrally accurate.
    // x_j = rho x_i + sqrt(1 - rho^2) y with x_i, y independent standard normals.
    const int n = 401;
    const double lim = 8.5, step = 2 * lim / (n - 1);
    const double c = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        double xi = -lim + i * step;
        double wi = std::exp(-xi * xi / 2);
        for (int j = 0; j < n; ++j) {
            double y = -lim + j * step;
            double w = wi * std::exp(-y * y / 2);
            double xj = rho * xi + c * y;
            double ss = (a + b * xi * xi) * (a + b * xj * xj);
            double d = sj * (xi - xj);
            num += w * ss * std::exp(-d * d / 2);
            den += w * ss;
        }
    }
    return source.indistinguishability * num / den;
}

double calibrate_indistinguishability(SourceModel source, int k, double target) {
    source.indistinguishability = 1.0;
    double ceiling = expected_coalescence(source, k);
    if (target > ceiling) {
        throw ValidationError("spectral jitter limits coalescence at this delay to " + std::to_string(ceiling));
    }
    return target / ceiling;
}

void ClickStream::validate() const {
    std::uint64_t prev = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.pulse >= n_pulses) {
            throw ValidationError("click record " + std::to_string(i) + " has pulse index " + std::to_string(r.pulse) +
                                  " >= n_pulses " + std::to_string(n_pulses));
        }
        if (i > 0 && r.pulse <= prev) {
            throw ValidationError("click records are not strictly increasing at record " + std::to_string(i));
        }
        if (r.mask == 0 || r.mask > 15) {
            throw ValidationError("click record " + std::to_string(i) + " has invalid detector mask");
        }
        prev = r.pulse;
    }
}

namespace {

struct Arrival {
    std::uint64_t slot;
    InputPhoton photon;
};

struct BlockRange {
    std::uint64_t begin, end;
};

// Stream tags for derive_seed.
constexpr std::uint64_t kEmissionStream = 0;
constexpr std::uint64_t kRoutingStream = 1;
constexpr std::uint64_t kDarkStream = 2;  // + detector index

struct BlockEmission {
    std::vector<Arrival> arrivals;  // sorted by slot
    std::uint64_t emitted = 0, surviving = 0;
};

BlockEmission emit_block(const ExperimentConfig& cfg, std::uint64_t block, BlockRange range) {
    BlockEmission out;
    Rng rng(derive_seed(cfg.seed, block, kEmissionStream));
    const auto& src = cfg.source;
    JitterProcess jitter(src.zeta0, src.tau1, src.spectral_jitter);
    if (jitter.active()) jitter.reset(rng);
    const double p[4] = {0.0, src.fock[1], src.fock[2], src.fock[3]};
    const double keep_common = std::sqrt(src.indistinguishability);
    const bool through_interferometer = cfg.mode != MeasurementMode::Hbt;
    const bool crossed = cfg.mode == MeasurementMode::HomHwpCross;
    const auto delay = static_cast<std::uint64_t>(cfg.circuit.delay_pulses());

    for (std::uint64_t pulse = range.begin; pulse < range.end; ++pulse) {
        if (jitter.active() && pulse != range.begin) jitter.step(rng);
        double s = jitter.brightness();
        double cond[4] = {0.0, p[1] * s, p[2] * s * s, p[3] * s * s * s};
        double total = cond[1] + cond[2] + cond[3];
        if (total > 1.0) {
            // Extreme latent excursions only; emission saturates.
            for (int n = 1; n < 4; ++n) cond[n] /= total;
        }
        double u = rng.uniform();
        int photons = 0;
        double acc = 0.0;
        for (int n = 1; n < 4; ++n) {
            acc += cond[n];
            if (u < acc) {
                photons = n;
                break;
            }
        }
        if (photons == 0) continue;
        out.emitted += static_cast<std::uint64_t>(photons);
        for (int k = 0; k < photons; ++k) {
            if (cfg.efficiency < 1.0 && !rng.bernoulli(cfg.efficiency)) continue;
            ++out.surviving;
            InputPhoton ph;
            bool common = src.indistinguishability >= 1.0 || (src.indistinguishability > 0.0 && rng.bernoulli(keep_common));
            ph.state.incoherent_tag = common ? 0 : pulse * 4 + static_cast<std::uint64_t>(k) + 1;
            ph.state.detuning = jitter.detuning();
            bool long_arm = through_interferometer && rng.bernoulli(0.5);
            ph.mode = long_arm ? kLongArmInput : kShortArmInput;
            ph.state.polarization = (crossed && long_arm) ? 1 : 0;
            std::uint64_t slot = pulse + (long_arm ? delay : 0);
            if (slot < cfg.n_pulses) out.arrivals.push_back({slot, ph});
        }
    }
    std::stable_sort(out.arrivals.begin(), out.arrivals.end(),
                     [](const Arrival& x, const Arrival& y) { return x.slot < y.slot; });
    return out;
}

struct BlockClicks {
    std::vector<ClickRecord> records;
    std::uint64_t multiphoton = 0;
};

std::uint8_t detect(const ExperimentConfig& cfg, const std::array<int, 4>& counts, Rng& rng) {
    std::uint8_t mask = 0;
    if (cfg.detection == Detection::Emulated) {
        for (int d = 0; d < 4; ++d)
            if (counts[static_cast<std::size_t>(d)] > 0) mask |= static_cast<std::uint8_t>(1u << d);
        return mask;
    }
    for (int port = 0; port < 2; ++port) {
        int n = counts[static_cast<std::size_t>(2 * port)] + counts[static_cast<std::size_t>(2 * port + 1)];
        auto both = static_cast<std::uint8_t>(3u << (2 * port));
        if (n >= 2) {
            mask |= both;
        } else if (n == 1) {
            mask |= static_cast<std::uint8_t>(1u << (2 * port + (rng.bernoulli(0.5) ? 1 : 0)));
        }
    }
    return mask;
}

BlockClicks route_block(const ExperimentConfig& cfg, std::uint64_t block, BlockRange range,
                        const BlockEmission* previous, const BlockEmission& current) {
    BlockClicks out;
    Rng rng(derive_seed(cfg.seed, block, kRoutingStream));
    const Eigen::MatrixXcd u = cfg.circuit.unitary();
    std::array<std::array<double, 4>, 4> single_cdf{};
    for (int in = 0; in < 4; ++in) {
        double acc = 0.0;
        for (int o = 0; o < 4; ++o) {
            acc += std::norm(u(o, in));
            single_cdf[static_cast<std::size_t>(in)][static_cast<std::size_t>(o)] = acc;
        }
    }

    std::vector<Arrival> arrivals;
    if (previous) {
        for (const auto& a : previous->arrivals)
            if (a.slot >= range.begin) arrivals.push_back(a);
    }
    for (const auto& a : current.arrivals)
        if (a.slot < range.end) arrivals.push_back(a);
    // Both sources are slot-sorted and the carried-over slots precede this block's own.
    std::stable_sort(arrivals.begin(), arrivals.end(), [](const Arrival& x, const Arrival& y) { return x.slot < y.slot; });

    std::vector<InputPhoton> group;
    std::size_t i = 0;
    while (i < arrivals.size()) {
        std::uint64_t slot = arrivals[i].slot;
        group.clear();
        while (i < arrivals.size() && arrivals[i].slot == slot) group.push_back(arrivals[i++].photon);
        std::array<int, 4> counts{};
        if (group.size() == 1) {
            double x = rng.uniform();
            const auto& cdf = single_cdf[static_cast<std::size_t>(group[0].mode)];
            int o = 0;
            while (o < 3 && x >= cdf[static_cast<std::size_t>(o)]) ++o;
            counts[static_cast<std::size_t>(o)] = 1;
        } else {
            ++out.multiphoton;
            auto probs = output_distribution(u, group);
            auto patterns = OccupationPattern::enumerate(4, static_cast<int>(group.size()));
            double x = rng.uniform();
            double acc = 0.0;
            std::size_t pick = patterns.size() - 1;
            for (std::size_t k = 0; k < probs.size(); ++k) {
                acc += probs[k];
                if (x < acc) {
                    pick = k;
                    break;
                }
            }
            for (int o = 0; o < 4; ++o) counts[static_cast<std::size_t>(o)] = patterns[pick][static_cast<std::size_t>(o)];
        }
        std::uint8_t mask = detect(cfg, counts, rng);
        if (mask) out.records.push_back({slot, mask});
    }

    if (cfg.dark_prob > 0.0) {
        const double log_q = std::log1p(-cfg.dark_prob);
        std::vector<ClickRecord> dark;
        for (int d = 0; d < 4; ++d) {
            Rng drng(derive_seed(cfg.seed, block, kDarkStream + static_cast<std::uint64_t>(d)));
            std::uint64_t pos = range.begin;
            for (;;) {
                // Geometric gap to the next dark click.
                double gap = std::floor(std::log1p(-drng.uniform()) / log_q);
                if (gap >= static_cast<double>(range.end - pos)) break;
                pos += static_cast<std::uint64_t>(gap);
                dark.push_back({pos, static_cast<std::uint8_t>(1u << d)});
                ++pos;
                if (pos >= range.end) break;
            }
        }
        dark.insert(dark.end(), out.records.begin(), out.records.end());
        std::stable_sort(dark.begin(), dark.end(), [](const ClickRecord& x, const ClickRecord& y) { return x.pulse < y.pulse; });
        out.records.clear();
        for (const auto& r : dark) {
            if (!out.records.empty() && out.records.back().pulse == r.pulse) {
                out.records.back().mask |= r.mask;
            } else {
                out.records.push_back(r);
            }
        }
    }
    return out;
}

}  // namespace

ClickStream run_experiment(const ExperimentConfig& config, unsigned threads, SimulationTally* tally) {
    config.validate();
    const std::uint64_t len = config.block_length();
    const std::uint64_t n_blocks = (config.n_pulses + len - 1) / len;
    auto range = [&](std::uint64_t b) { return BlockRange{b * len, std::min(config.n_pulses, (b + 1) * len)}; };

    std::vector<BlockEmission> emissions(n_blocks);
    detail::parallel_for(n_blocks, threads, [&](std::size_t b) { emissions[b] = emit_block(config, b, range(b)); });

    std::vector<BlockClicks> clicks(n_blocks);
    detail::parallel_for(n_blocks, threads, [&](std::size_t b) {
        clicks[b] = route_block(config, b, range(b), b > 0 ? &emissions[b - 1] : nullptr, emissions[b]);
    });

    ClickStream stream;
    stream.n_pulses = config.n_pulses;
    stream.config_hash = config.hash();
    std::size_t total = 0;
    for (const auto& c : clicks) total += c.records.size();
    stream.records.reserve(total);
    SimulationTally t;
    for (std::uint64_t b = 0; b < n_blocks; ++b) {
        stream.records.insert(stream.records.end(), clicks[b].records.begin(), clicks[b].records.end());
        t.emitted_photons += emissions[b].emitted;
        t.surviving_photons += emissions[b].surviving;
        t.multiphoton_slots += clicks[b].multiphoton;
    }
    if (tally) *tally = t;
    return stream;
}

}  // namespace sg2
