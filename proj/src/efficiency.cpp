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

#include "sg2/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "parallel.hpp"
#include "sg2/errors.hpp"
#include "sg2/estimator.hpp"

namespace sg2 {

double variance_ratio_C(double g2, double coalescence) {
    if (!(g2 >= 0.0)) throw ValidationError("g2 must be >= 0");
    if (!(coalescence >= 0.0 && coalescence <= 1.0)) throw ValidationError("C must lie in [0, 1]");
    return 2.0 * (g2 + 1.0) / (g2 + coalescence + 1.0);
}

std::string_view to_string(EfficiencyMethod method) {
    switch (method) {
        case EfficiencyMethod::Sg2: return "sg2";
        case EfficiencyMethod::SantoriTwoStep: return "santori-two-step";
        case EfficiencyMethod::HwpVisibility: return "hwp-visibility";
        case EfficiencyMethod::KnownPurityHom: return "known-purity-hom";
    }
    return "?";
}

void ZeroLagCounts::merge(const ZeroLagCounts& o) {
    pulses += o.pulses;
    for (std::size_t d = 0; d < 4; ++d) singles[d] += o.singles[d];
    for (std::size_t p = 0; p < 6; ++p) pairs[p] += o.pairs[p];
    side1 += o.side1;
    side2 += o.side2;
    sides += o.sides;
}

std::vector<ZeroLagCounts> zero_lag_blocks(const ClickStream& stream, int n_blocks) {
    if (n_blocks < 1) throw ValidationError("need at least one block");
    const auto nb = static_cast<std::uint64_t>(n_blocks);
    std::vector<ZeroLagCounts> blocks(static_cast<std::size_t>(n_blocks));
    for (std::uint64_t b = 0; b < nb; ++b) blocks[b].pulses = (b + 1) * stream.n_pulses / nb - b * stream.n_pulses / nb;
    std::size_t b = 0;
    for (const auto& r : stream.records) {
        while ((b + 1) * stream.n_pulses / nb <= r.pulse) ++b;
        auto& z = blocks[b];
        for (int d = 0; d < 4; ++d)
            if (r.mask >> d & 1u) ++z.singles[static_cast<std::size_t>(d)];
        for (int p = 0; p < kNumPairs; ++p) {
            const auto [l, m] = kPairs[static_cast<std::size_t>(p)];
            if ((r.mask >> l & 1u) && (r.mask >> m & 1u)) ++z.pairs[static_cast<std::size_t>(p)];
        }
        const bool s1 = (r.mask & 0x3u) != 0, s2 = (r.mask & 0xCu) != 0;
        z.side1 += s1;
        z.side2 += s2;
        z.sides += s1 && s2;
    }
    return blocks;
}

namespace {

struct RunSpec {
    MeasurementMode mode;
    Detection detection;
    double budget_fraction;
};

std::vector<RunSpec> runs_for(EfficiencyMethod method, double split) {
    switch (method) {
        case EfficiencyMethod::Sg2: return {{MeasurementMode::Sg2, Detection::NumberResolving, 1.0}};
        case EfficiencyMethod::SantoriTwoStep:
            return {{MeasurementMode::Hbt, Detection::Emulated, split}, {MeasurementMode::HomHwpCo, Detection::Emulated, 1.0 - split}};
        case EfficiencyMethod::HwpVisibility:
            return {{MeasurementMode::HomHwpCo, Detection::Emulated, split},
                    {MeasurementMode::HomHwpCross, Detection::Emulated, 1.0 - split}};
        case EfficiencyMethod::KnownPurityHom: return {{MeasurementMode::HomHwpCo, Detection::Emulated, 1.0}};
    }
    return {};
}

double ratio_or_nan(double num, double den) { return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN(); }

double pair_g2(const ZeroLagCounts& z, int p) {
    const auto [l, m] = kPairs[static_cast<std::size_t>(p)];
    const double norm = static_cast<double>(z.singles[static_cast<std::size_t>(l)]) *
                        static_cast<double>(z.singles[static_cast<std::size_t>(m)]);
    return ratio_or_nan(static_cast<double>(z.pairs[static_cast<std::size_t>(p)]) * static_cast<double>(z.pulses), norm);
}

double merged_g2(const ZeroLagCounts& z) {
    return ratio_or_nan(static_cast<double>(z.sides) * static_cast<double>(z.pulses),
                        static_cast<double>(z.side1) * static_cast<double>(z.side2));
}

struct Estimates {
    double g2, c, c_known;
};

// Zeta == 1 throughout, so the auto/cross relations and the traditional ones need no plateau fit.
Estimates estimate(EfficiencyMethod method, const std::vector<ZeroLagCounts>& run, double g2_state) {
    switch (method) {
        case EfficiencyMethod::Sg2: {
            // A two-photon port fires both channels of an ideal number-resolving output,
            // twice as often as behind the emulating splitter; halve it.
            const double a = (pair_g2(run[0], 0) + pair_g2(run[0], 1)) / 4.0;
            const double c = (pair_g2(run[0], 2) + pair_g2(run[0], 3) + pair_g2(run[0], 4) + pair_g2(run[0], 5)) / 4.0;
            return {a + c - 1.0, a - c, (g2_state + 1.0) * (a - c) / (a + c)};
        }
        case EfficiencyMethod::SantoriTwoStep: {
            const double g = merged_g2(run[0]);
            const double h = merged_g2(run[1]);
            return {g, traditional_coalescence(g, h), traditional_coalescence(g2_state, h)};
        }
        case EfficiencyMethod::HwpVisibility: {
            auto [g, c] = hwp_estimates(merged_g2(run[0]), merged_g2(run[1]));
            return {g, c, c};
        }
        case EfficiencyMethod::KnownPurityHom: {
            const double c = traditional_coalescence(g2_state, merged_g2(run[0]));
            return {g2_state, c, c};
        }
    }
    return {0, 0, 0};
}

void validate(const EfficiencyOptions& o) {
    if (!(o.p1 > 0.0 && o.p1 <= 0.5)) throw ValidationError("efficiency source p1 must lie in (0, 0.5]");
    if (o.replications < 1) throw ValidationError("replications must be >= 1");
    if (o.jackknife_blocks < 2) throw ValidationError("jackknife needs at least 2 blocks");
    if (!(o.split > 0.0 && o.split < 1.0)) throw ValidationError("budget split must lie in (0, 1)");
    if (o.n_pulses < static_cast<std::uint64_t>(o.jackknife_blocks) * 1000)
        throw ValidationError("n_pulses must allow at least 1000 pulses per jackknife block");
}

struct RepResult {
    Estimates full;
    double jk_g2, jk_c, jk_c_known;
};

double sample_variance(const std::vector<double>& x) {
    if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double s = 0.0;
    for (double v : x) s += (v - mean) * (v - mean);
    return s / static_cast<double>(x.size() - 1);
}

std::pair<double, double> mean_and_error(const std::vector<double>& x, int blocks) {
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    if (x.size() >= 2) return {mean, std::sqrt(sample_variance(x) / static_cast<double>(x.size()))};
    return {mean, mean * std::sqrt(2.0 / (blocks - 1))};
}

}  // namespace

VarianceEstimate replicate(double g2, double coalescence, EfficiencyMethod method, const EfficiencyOptions& opt) {
    validate(opt);
    if (!(g2 >= 0.0)) throw ValidationError("g2 must be >= 0");
    if (!(coalescence >= 0.0 && coalescence <= 1.0)) throw ValidationError("C must lie in [0, 1]");

    SourceModel source;
    source.fock = FockDistribution::from_brightness(opt.p1, g2);
    source.indistinguishability = coalescence;
    const double mean_n = source.fock[1] + 2.0 * source.fock[2];
    const double g2_state = 2.0 * source.fock[2] / (mean_n * mean_n);
    const auto specs = runs_for(method, opt.split);
    const int nb = opt.jackknife_blocks;

    std::vector<RepResult> reps(static_cast<std::size_t>(opt.replications));
    detail::parallel_for(reps.size(), opt.threads, [&](std::size_t r) {
        std::vector<std::vector<ZeroLagCounts>> blocks;
        for (std::size_t k = 0; k < specs.size(); ++k) {
            ExperimentConfig cfg;
            cfg.source = source;
            cfg.circuit = CircuitModel::balanced(4);
            cfg.mode = specs[k].mode;
            cfg.detection = specs[k].detection;
            cfg.n_pulses = static_cast<std::uint64_t>(std::llround(specs[k].budget_fraction * static_cast<double>(opt.n_pulses)));
            cfg.seed = derive_seed(opt.seed, r, k + 8 * static_cast<std::uint64_t>(method));
            blocks.push_back(zero_lag_blocks(run_experiment(cfg), nb));
        }
        std::vector<ZeroLagCounts> total(specs.size());
        for (std::size_t k = 0; k < specs.size(); ++k)
            for (const auto& b : blocks[k]) total[k].merge(b);
        RepResult res;
        res.full = estimate(method, total, g2_state);

        std::vector<double> tg(static_cast<std::size_t>(nb)), tc(static_cast<std::size_t>(nb)), tk(static_cast<std::size_t>(nb));
        for (int b = 0; b < nb; ++b) {
            std::vector<ZeroLagCounts> loo(specs.size());
            for (std::size_t k = 0; k < specs.size(); ++k) {
                loo[k] = total[k];
                const auto& z = blocks[k][static_cast<std::size_t>(b)];
                loo[k].pulses -= z.pulses;
                for (std::size_t d = 0; d < 4; ++d) loo[k].singles[d] -= z.singles[d];
                for (std::size_t p = 0; p < 6; ++p) loo[k].pairs[p] -= z.pairs[p];
                loo[k].side1 -= z.side1;
                loo[k].side2 -= z.side2;
                loo[k].sides -= z.sides;
            }
            auto e = estimate(method, loo, g2_state);
            tg[static_cast<std::size_t>(b)] = e.g2;
            tc[static_cast<std::size_t>(b)] = e.c;
            tk[static_cast<std::size_t>(b)] = e.c_known;
        }
        const double scale = static_cast<double>(nb - 1) * static_cast<double>(nb - 1) / nb;
        res.jk_g2 = sample_variance(tg) * scale;
        res.jk_c = sample_variance(tc) * scale;
        res.jk_c_known = sample_variance(tk) * scale;
        reps[r] = res;
    });

    VarianceEstimate out;
    out.method = method;
    out.replications = opt.replications;
    out.n_pulses = opt.n_pulses;
    const double n = static_cast<double>(opt.n_pulses);
    std::vector<double> g, c, k, jg, jc, jk;
    for (const auto& r : reps) {
        g.push_back(r.full.g2);
        c.push_back(r.full.c);
        k.push_back(r.full.c_known);
        jg.push_back(r.jk_g2 * n);
        jc.push_back(r.jk_c * n);
        jk.push_back(r.jk_c_known * n);
    }
    out.mean_g2 = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    out.mean_c = std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(c.size());
    out.sample_var_g2 = sample_variance(g) * n;
    out.sample_var_c = sample_variance(c) * n;
    out.sample_var_c_known = sample_variance(k) * n;
    std::tie(out.jackknife_var_g2, out.jackknife_var_g2_sigma) = mean_and_error(jg, nb);
    std::tie(out.jackknife_var_c, out.jackknife_var_c_sigma) = mean_and_error(jc, nb);
    std::tie(out.jackknife_var_c_known, out.jackknife_var_c_known_sigma) = mean_and_error(jk, nb);
    return out;
}

VarianceEstimate empirical_variances(double g2, double coalescence, EfficiencyMethod method, const EfficiencyOptions& options) {
    if (options.replications < 30)
        throw ValidationError("empirical_variances needs R >= 30 replications for a stable sample variance");
    return replicate(g2, coalescence, method, options);
}

namespace {

Ratio divide(double num, double num_sigma, double den, double den_sigma) {
    if (!(den > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    const double r = num / den;
    const double rel = std::hypot(num > 0.0 ? num_sigma / num : 0.0, den_sigma / den);
    return {r, std::abs(r) * rel};
}

}  // namespace

Ratio ratio_c_known(const VarianceEstimate& trad, const VarianceEstimate& sg2) {
    return divide(trad.jackknife_var_c, trad.jackknife_var_c_sigma, sg2.jackknife_var_c_known, sg2.jackknife_var_c_known_sigma);
}

Ratio scoring_ratio(const VarianceEstimate& trad, const VarianceEstimate& sg2) {
    return divide(trad.jackknife_var_g2 + trad.jackknife_var_c, std::hypot(trad.jackknife_var_g2_sigma, trad.jackknife_var_c_sigma),
                  sg2.jackknife_var_g2 + sg2.jackknife_var_c, std::hypot(sg2.jackknife_var_g2_sigma, sg2.jackknife_var_c_sigma));
}

ScoringMap scoring_map(int resolution, const EfficiencyOptions& options) {
    if (resolution < 5) throw ValidationError("scoring map resolution must be >= 5 per axis");
    validate(options);
    ScoringMap map;
    map.resolution = resolution;
    map.options = options;
    const auto cells = static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
    map.points.resize(cells);
    detail::parallel_for(cells, options.threads, [&](std::size_t cell) {
        const std::size_t i = cell / static_cast<std::size_t>(resolution), j = cell % static_cast<std::size_t>(resolution);
        EfficiencyPoint pt;
        pt.g2 = static_cast<double>(i) / (resolution - 1);
        pt.coalescence = static_cast<double>(j) / (resolution - 1);
        pt.ratio_c_analytic = variance_ratio_C(pt.g2, pt.coalescence);
        pt.replications = options.replications;
        EfficiencyOptions o = options;
        o.threads = 1;
        o.seed = derive_seed(options.seed, cell, 0);
        const auto sg2 = replicate(pt.g2, pt.coalescence, EfficiencyMethod::Sg2, o);
        const auto two_step = replicate(pt.g2, pt.coalescence, EfficiencyMethod::SantoriTwoStep, o);
        const auto known = replicate(pt.g2, pt.coalescence, EfficiencyMethod::KnownPurityHom, o);
        pt.ratio_c_empirical = ratio_c_known(known, sg2);
        pt.scoring = scoring_ratio(two_step, sg2);
        map.points[cell] = pt;
    });
    // Ties resolve to the later cell, i.e. larger g2.
    auto argmax = [&](auto key) {
        std::size_t best = 0;
        double v = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < cells; ++k) {
            const double x = key(map.points[k]);
            if (std::isfinite(x) && x >= v) {
                v = x;
                best = k;
            }
        }
        return best;
    };
    map.argmax_analytic = argmax([](const EfficiencyPoint& p) { return p.ratio_c_analytic; });
    map.argmax_scoring = argmax([](const EfficiencyPoint& p) { return p.scoring.value; });
    return map;
}

}  // namespace sg2
