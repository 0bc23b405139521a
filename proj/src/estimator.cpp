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

#include "sg2/estimator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <gsl/gsl_cdf.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_min.h>

#include "parallel.hpp"
#include "sg2/errors.hpp"

namespace sg2 {

namespace {

struct GslErrorsOff {
    GslErrorsOff() { gsl_set_error_handler_off(); }
} const gsl_errors_off;

std::size_t idx(int j, int max_lag) { return static_cast<std::size_t>(j + max_lag); }

}  // namespace

std::string pair_name(int pair) {
    const auto& [l, m] = kPairs.at(static_cast<std::size_t>(pair));
    return {kDetectorNames[l], kDetectorNames[m]};
}

int pair_index(const std::string& name) {
    for (int p = 0; p < kNumPairs; ++p)
        if (pair_name(p) == name) return p;
    throw ValidationError("unknown detector pair '" + name + "'");
}

CorrelationCounts::CorrelationCounts(int lag) : max_lag(lag) {
    if (lag < 0) throw ValidationError("max_lag must be >= 0");
    for (auto& c : counts) c.assign(static_cast<std::size_t>(2 * lag + 1), 0);
}

void CorrelationCounts::merge(const CorrelationCounts& other) {
    if (other.max_lag != max_lag) throw ValidationError("cannot merge correlation counts with different lag windows");
    for (int d = 0; d < 4; ++d) singles[static_cast<std::size_t>(d)] += other.singles[static_cast<std::size_t>(d)];
    for (std::size_t p = 0; p < counts.size(); ++p)
        for (std::size_t k = 0; k < counts[p].size(); ++k) counts[p][k] += other.counts[p][k];
    triples += other.triples;
    quadruples += other.quadruples;
}

CorrelationCounts count_correlations(const ClickStream& stream, int max_lag, std::size_t begin, std::size_t end) {
    CorrelationCounts out(max_lag);
    const auto& rec = stream.records;
    end = std::min(end, rec.size());
    for (std::size_t i = begin; i < end; ++i) {
        const std::uint8_t a = rec[i].mask;
        for (int d = 0; d < 4; ++d)
            if (a & (1u << d)) ++out.singles[static_cast<std::size_t>(d)];
        int fired = std::popcount(static_cast<unsigned>(a));
        if (fired == 3) ++out.triples;
        if (fired == 4) ++out.quadruples;
        for (int p = 0; p < kNumPairs; ++p) {
            const auto& [l, m] = kPairs[static_cast<std::size_t>(p)];
            if ((a >> l & 1u) && (a >> m & 1u)) ++out.counts[static_cast<std::size_t>(p)][idx(0, max_lag)];
        }
        for (std::size_t k = i + 1; k < rec.size(); ++k) {
            std::uint64_t gap = rec[k].pulse - rec[i].pulse;
            if (gap > static_cast<std::uint64_t>(max_lag)) break;
            const int j = static_cast<int>(gap);
            const std::uint8_t b = rec[k].mask;
            for (int p = 0; p < kNumPairs; ++p) {
                const auto& [l, m] = kPairs[static_cast<std::size_t>(p)];
                auto& c = out.counts[static_cast<std::size_t>(p)];
                if ((a >> l & 1u) && (b >> m & 1u)) ++c[idx(j, max_lag)];
                if ((a >> m & 1u) && (b >> l & 1u)) ++c[idx(-j, max_lag)];
            }
        }
    }
    return out;
}

CorrelationSet normalize(const CorrelationCounts& counts, std::uint64_t n_pulses) {
    if (n_pulses == 0) throw ValidationError("cannot normalize correlations over zero pulses");
    CorrelationSet cs;
    cs.n_pulses = n_pulses;
    cs.max_lag = counts.max_lag;
    cs.singles_counts = counts.singles;
    cs.counts = counts.counts;
    cs.triples = counts.triples;
    cs.quadruples = counts.quadruples;
    const double n = static_cast<double>(n_pulses);
    for (int d = 0; d < 4; ++d) {
        if (counts.singles[static_cast<std::size_t>(d)] == 0)
            throw NumericalError(std::string("detector ") + kDetectorNames[d] +
                                 " recorded no clicks; g2 normalization is undefined");
        cs.singles[static_cast<std::size_t>(d)] = static_cast<double>(counts.singles[static_cast<std::size_t>(d)]) / n;
    }
    for (int p = 0; p < kNumPairs; ++p) {
        const auto& [l, m] = kPairs[static_cast<std::size_t>(p)];
        const auto sp = static_cast<std::size_t>(p);
        const double sl = static_cast<double>(counts.singles[static_cast<std::size_t>(l)]);
        const double sm = static_cast<double>(counts.singles[static_cast<std::size_t>(m)]);
        const double norm = n * cs.singles[static_cast<std::size_t>(l)] * cs.singles[static_cast<std::size_t>(m)];
        cs.g2[sp].resize(counts.counts[sp].size());
        cs.g2_sigma[sp].resize(counts.counts[sp].size());
        for (std::size_t k = 0; k < counts.counts[sp].size(); ++k) {
            const double c = static_cast<double>(counts.counts[sp][k]);
            const double g = c / norm;
            // An empty bin still carries the uncertainty of one count.
            const double counting = std::sqrt(std::max(c, 1.0)) / norm;
            cs.g2[sp][k] = g;
            cs.g2_sigma[sp][k] = std::hypot(counting, g * std::sqrt(1.0 / sl + 1.0 / sm));
        }
    }
    return cs;
}

CorrelationSet correlate(const ClickStream& stream, int max_lag, unsigned threads) {
    if (stream.n_pulses == 0) throw ValidationError("click stream covers zero pulses");
    if (stream.records.empty()) throw ValidationError("click stream contains no clicks");
    const std::size_t n = stream.records.size();
    const std::size_t parts = std::max<std::size_t>(1, std::min<std::size_t>(threads, n / 4096 + 1));
    std::vector<CorrelationCounts> partial(parts, CorrelationCounts(max_lag));
    detail::parallel_for(parts, threads, [&](std::size_t k) {
        partial[k] = count_correlations(stream, max_lag, k * n / parts, (k + 1) * n / parts);
    });
    CorrelationCounts total(max_lag);
    for (const auto& p : partial) total.merge(p);
    return normalize(total, stream.n_pulses);
}

AutoCross average_auto_cross(const CorrelationSet& cs) {
    AutoCross out;
    out.max_lag = cs.max_lag;
    const std::size_t len = static_cast<std::size_t>(2 * cs.max_lag + 1);
    for (const auto& g : cs.g2)
        if (g.size() != len) throw ValidationError("correlation set is missing detector pairs");
    out.auto_g2.resize(len);
    out.auto_sigma.resize(len);
    out.cross_g2.resize(len);
    out.cross_sigma.resize(len);
    for (std::size_t k = 0; k < len; ++k) {
        out.auto_g2[k] = (cs.g2[0][k] + cs.g2[1][k]) / 2.0;
        out.auto_sigma[k] = std::hypot(cs.g2_sigma[0][k], cs.g2_sigma[1][k]) / 2.0;
        double sum = 0.0, var = 0.0;
        for (std::size_t p = 2; p < 6; ++p) {
            sum += cs.g2[p][k];
            var += cs.g2_sigma[p][k] * cs.g2_sigma[p][k];
        }
        out.cross_g2[k] = sum / 4.0;
        out.cross_sigma[k] = std::sqrt(var) / 4.0;
    }
    return out;
}

PlateauData plateau_from(const CorrelationSet& cs, int excluded_lag) {
    PlateauData out;
    for (int j = 1; j <= cs.max_lag; ++j) {
        if (j == std::abs(excluded_lag)) continue;
        double sum = 0.0, var = 0.0;
        for (int p = 0; p < kNumPairs; ++p)
            for (int sj : {-j, j}) {
                sum += cs.at(p, sj);
                var += cs.sigma_at(p, sj) * cs.sigma_at(p, sj);
            }
        out.lags.push_back(j);
        out.values.push_back(sum / (2 * kNumPairs));
        out.sigmas.push_back(std::sqrt(var) / (2 * kNumPairs));
    }
    return out;
}

double plateau_value(int j, double zeta0, double tau1, PlateauModel model, int delay) {
    if (model == PlateauModel::Direct) return zeta(j, zeta0, tau1);
    return (2.0 * zeta(j, zeta0, tau1) + zeta(j - delay, zeta0, tau1) + zeta(j + delay, zeta0, tau1)) / 4.0;
}

double ZetaFit::zeta(std::int64_t k) const { return sg2::zeta(k, zeta0, tau1); }

std::array<double, 2> ZetaFit::zeta_gradient(std::int64_t k) const {
    const double ak = static_cast<double>(std::llabs(k));
    const double e = std::exp(-ak / tau1);
    return {e, (zeta0 - 1.0) * e * ak / (tau1 * tau1)};
}

double ZetaFit::zeta_sigma(std::int64_t k) const {
    auto g = zeta_gradient(k);
    double var = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            var += g[static_cast<std::size_t>(a)] * covariance[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] *
                   g[static_cast<std::size_t>(b)];
    return std::sqrt(std::max(var, 0.0));
}

ZetaFit ZetaFit::flat() {
    ZetaFit f;
    f.at_boundary = true;
    f.tau1_identified = false;
    return f;
}

namespace {

struct ProjectedFit {
    double amp = 0.0, chi2 = 0.0, amp_var = 0.0;
};

// Model is linear in the amplitude A = zeta0 - 1 at fixed tau1: m_j = 1 + A h_j(tau1).
ProjectedFit project_amplitude(const PlateauData& data, PlateauModel model, int delay, double tau1) {
    double shh = 0.0, shr = 0.0, srr = 0.0;
    for (std::size_t i = 0; i < data.lags.size(); ++i) {
        const double w = 1.0 / (data.sigmas[i] * data.sigmas[i]);
        const double h = plateau_value(data.lags[i], 2.0, tau1, model, delay) - 1.0;
        const double r = data.values[i] - 1.0;
        shh += w * h * h;
        shr += w * h * r;
        srr += w * r * r;
    }
    ProjectedFit out;
    out.amp = shh > 0.0 ? std::max(0.0, shr / shh) : 0.0;
    out.chi2 = srr - 2.0 * out.amp * shr + out.amp * out.amp * shh;
    out.amp_var = shh > 0.0 ? 1.0 / shh : 0.0;
    return out;
}

struct BrentData {
    const PlateauData* data;
    PlateauModel model;
    int delay;
};

double projected_chi2(double log_tau, void* params) {
    const auto* bd = static_cast<const BrentData*>(params);
    return project_amplitude(*bd->data, bd->model, bd->delay, std::exp(log_tau)).chi2;
}

constexpr double kTauMin = 0.5;
constexpr double kTauMax = 1000.0;

}  // namespace

ZetaFit fit_zeta(const PlateauData& plateau, PlateauModel model, int delay) {
    const std::size_t n = plateau.lags.size();
    if (plateau.values.size() != n || plateau.sigmas.size() != n)
        throw ValidationError("plateau lags, values and sigmas differ in length");
    if (delay < 0) throw ValidationError("interferometer delay must be >= 0");
    PlateauData data;
    for (std::size_t i = 0; i < n; ++i) {
        const int j = plateau.lags[i];
        if (j == 0 || (model == PlateauModel::Interferometer && std::abs(j) == delay)) continue;
        if (!std::isfinite(plateau.values[i]) || !(plateau.sigmas[i] > 0.0) || !std::isfinite(plateau.sigmas[i])) continue;
        data.lags.push_back(j);
        data.values.push_back(plateau.values[i]);
        data.sigmas.push_back(plateau.sigmas[i]);
    }
    if (data.lags.size() < 6)
        throw ValidationError("zeta fit needs at least 6 usable lags, got " + std::to_string(data.lags.size()));

    ZetaFit fit;
    fit.model = model;
    fit.delay = model == PlateauModel::Interferometer ? delay : 0;
    fit.excluded = {0};
    if (fit.delay > 0) fit.excluded = {-fit.delay, 0, fit.delay};
    fit.dof = static_cast<int>(data.lags.size()) - 2;

    constexpr int kGrid = 121;
    const double lo = std::log(kTauMin), hi = std::log(kTauMax);
    std::vector<double> grid(kGrid), chi(kGrid);
    int best = 0;
    for (int g = 0; g < kGrid; ++g) {
        grid[static_cast<std::size_t>(g)] = lo + (hi - lo) * g / (kGrid - 1);
        chi[static_cast<std::size_t>(g)] = project_amplitude(data, model, delay, std::exp(grid[static_cast<std::size_t>(g)])).chi2;
        if (chi[static_cast<std::size_t>(g)] < chi[static_cast<std::size_t>(best)]) best = g;
    }
    double log_tau = grid[static_cast<std::size_t>(best)];
    bool interior = best > 0 && best < kGrid - 1;
    if (interior && chi[static_cast<std::size_t>(best)] < chi[static_cast<std::size_t>(best - 1)] &&
        chi[static_cast<std::size_t>(best)] < chi[static_cast<std::size_t>(best + 1)]) {
        BrentData bd{&data, model, delay};
        gsl_function fn{projected_chi2, &bd};
        gsl_min_fminimizer* m = gsl_min_fminimizer_alloc(gsl_min_fminimizer_brent);
        gsl_min_fminimizer_set_with_values(m, &fn, log_tau, chi[static_cast<std::size_t>(best)],
                                           grid[static_cast<std::size_t>(best - 1)], chi[static_cast<std::size_t>(best - 1)],
                                           grid[static_cast<std::size_t>(best + 1)], chi[static_cast<std::size_t>(best + 1)]);
        constexpr int kMaxIter = 200;
        int status = GSL_CONTINUE;
        int iter = 0;
        while (status == GSL_CONTINUE && iter < kMaxIter) {
            ++iter;
            status = gsl_min_fminimizer_iterate(m);
            if (status) break;
            status = gsl_min_test_interval(gsl_min_fminimizer_x_lower(m), gsl_min_fminimizer_x_upper(m), 1e-7, 0.0);
        }
        log_tau = gsl_min_fminimizer_x_minimum(m);
        gsl_min_fminimizer_free(m);
        fit.iterations = iter;
        if (status != GSL_SUCCESS) {
            auto last = project_amplitude(data, model, delay, std::exp(log_tau));
            std::ostringstream msg;
            msg << "zeta fit did not converge after " << iter << " iterations (" << gsl_strerror(status)
                << "); last iterate zeta0=" << 1.0 + last.amp << " tau1=" << std::exp(log_tau);
            throw NumericalError(msg.str());
        }
    }

    const double tau1 = std::exp(log_tau);
    const auto proj = project_amplitude(data, model, delay, tau1);
    fit.chi2 = proj.chi2;
    fit.tau1 = tau1;
    // An amplitude within 2 sigma of zero is read as "no resolvable jitter": tau1 is then
    // unconstrained and a free zeta0 would only add noise to every normalization.
    if (proj.amp <= 2.0 * std::sqrt(proj.amp_var)) {
        fit.zeta0 = 1.0;
        fit.at_boundary = true;
        fit.tau1_identified = false;
        fit.covariance = {{{proj.amp_var, 0.0}, {0.0, 0.0}}};
        return fit;
    }
    fit.zeta0 = 1.0 + proj.amp;

    // Covariance of (zeta0, tau1) from the weighted Jacobian of the full model.
    Eigen::Matrix2d info = Eigen::Matrix2d::Zero();
    for (std::size_t i = 0; i < data.lags.size(); ++i) {
        const int j = data.lags[i];
        const int d = fit.delay;
        auto grad = [&](int k) { return fit.zeta_gradient(k); };
        std::array<double, 2> gj = grad(j);
        if (model == PlateauModel::Interferometer) {
            auto gm = grad(j - d), gp = grad(j + d);
            for (std::size_t k = 0; k < 2; ++k) gj[k] = (2.0 * gj[k] + gm[k] + gp[k]) / 4.0;
        }
        const Eigen::Vector2d row(gj[0] / data.sigmas[i], gj[1] / data.sigmas[i]);
        info += row * row.transpose();
    }
    const bool invertible = std::abs(info.determinant()) > 1e-300 * std::max(1.0, info.norm());
    if (invertible) {
        const Eigen::Matrix2d cov = info.inverse();
        fit.covariance = {{{cov(0, 0), cov(0, 1)}, {cov(1, 0), cov(1, 1)}}};
    } else {
        fit.covariance = {{{proj.amp_var, 0.0}, {0.0, std::numeric_limits<double>::infinity()}}};
    }
    fit.tau1_identified = interior && invertible;
    return fit;
}

Sg2Extraction extract_sg2(double a, double sa, double c, double sc, const ZetaFit& zf, int delay) {
    const double z0 = zf.zeta(0);
    const double zd = zf.zeta(delay);
    if (!(z0 > 0.0) || !(zd > 0.0)) throw ValidationError("zeta(0) and zeta(d) must be positive");
    const double g = (a + c - zd) / z0;
    const double coal = (a - c) / zd;

    const auto grad0 = zf.zeta_gradient(0);
    const auto gradd = zf.zeta_gradient(delay);
    std::array<double, 2> dg{}, dc{};
    for (std::size_t k = 0; k < 2; ++k) {
        dg[k] = -gradd[k] / z0 - g * grad0[k] / z0;
        dc[k] = -coal * gradd[k] / zd;
    }
    auto quad = [&](const std::array<double, 2>& u, const std::array<double, 2>& v) {
        double s = 0.0;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) s += u[i] * zf.covariance[i][j] * v[j];
        return s;
    };
    const double var_g = (sa * sa + sc * sc) / (z0 * z0) + quad(dg, dg);
    const double var_c = (sa * sa + sc * sc) / (zd * zd) + quad(dc, dc);
    const double cov = (sa * sa - sc * sc) / (z0 * zd) + quad(dg, dc);

    Sg2Extraction out;
    out.g2_hbt0 = {std::max(g, 0.0), std::sqrt(std::max(var_g, 0.0)), g, g < 0.0};
    out.coalescence = {std::clamp(coal, 0.0, 1.0), std::sqrt(std::max(var_c, 0.0)), coal, coal < 0.0 || coal > 1.0};
    out.covariance = cov;
    return out;
}

double visibility(double g2_hbt0, double coalescence) { return coalescence / (1.0 + g2_hbt0); }

Estimate visibility(const Sg2Extraction& s) {
    const double g = s.g2_hbt0.value, c = s.coalescence.value;
    const double dv_dc = 1.0 / (1.0 + g);
    const double dv_dg = -c / ((1.0 + g) * (1.0 + g));
    const double var = dv_dc * dv_dc * s.coalescence.sigma * s.coalescence.sigma +
                       dv_dg * dv_dg * s.g2_hbt0.sigma * s.g2_hbt0.sigma + 2.0 * dv_dc * dv_dg * s.covariance;
    const double v = visibility(g, c);
    return {v, std::sqrt(std::max(var, 0.0)), visibility(s.g2_hbt0.raw, s.coalescence.raw),
            s.g2_hbt0.clamped || s.coalescence.clamped};
}

double traditional_coalescence(double g2_hbt0, double g2_hom0) { return 1.0 + g2_hbt0 - 2.0 * g2_hom0; }

std::pair<double, double> hwp_estimates(double g2_hom_co, double g2_hom_cross) {
    return {2.0 * g2_hom_cross - 1.0, 2.0 * (g2_hom_cross - g2_hom_co)};
}

double hwp_visibility(double g2_hom_co, double g2_hom_cross) {
    if (!(g2_hom_cross > 0.0)) throw NumericalError("cross-polarized HOM correlation is zero");
    return 1.0 - g2_hom_co / g2_hom_cross;
}

HbtResult hbt_from_bypass(const CorrelationSet& cs) {
    HbtResult out;
    double sum = 0.0, var = 0.0;
    for (int p = 0; p < kNumPairs; ++p) {
        sum += cs.at(p, 0);
        var += cs.sigma_at(p, 0) * cs.sigma_at(p, 0);
    }
    out.mean_zero_lag = sum / kNumPairs;
    out.mean_zero_lag_sigma = std::sqrt(var) / kNumPairs;
    out.zeta = fit_zeta(plateau_from(cs, 0), PlateauModel::Direct, 0);
    const double z0 = out.zeta.zeta0;
    const double g = out.mean_zero_lag / z0;
    const double var_z0 = out.zeta.covariance[0][0];
    const double sigma = std::sqrt(out.mean_zero_lag_sigma * out.mean_zero_lag_sigma / (z0 * z0) + g * g * var_z0 / (z0 * z0));
    out.g2_hbt0 = {std::max(g, 0.0), sigma, g, g < 0.0};
    return out;
}

HbtResult hbt_from_bypass(const ClickStream& stream, int max_lag, unsigned threads) {
    return hbt_from_bypass(correlate(stream, max_lag, threads));
}

Estimate merged_zero_lag(const ClickStream& stream) {
    if (stream.n_pulses == 0) throw ValidationError("click stream covers zero pulses");
    std::uint64_t s1 = 0, s2 = 0, both = 0;
    for (const auto& r : stream.records) {
        const bool a = (r.mask & 0x3u) != 0, b = (r.mask & 0xCu) != 0;
        s1 += a;
        s2 += b;
        both += a && b;
    }
    if (s1 == 0) throw NumericalError("merged detector side A|B recorded no clicks");
    if (s2 == 0) throw NumericalError("merged detector side C|D recorded no clicks");
    const double n = static_cast<double>(stream.n_pulses);
    const double d1 = static_cast<double>(s1), d2 = static_cast<double>(s2), c = static_cast<double>(both);
    const double norm = d1 * d2 / n;
    const double g = c / norm;
    const double sigma = std::hypot(std::sqrt(std::max(c, 1.0)) / norm, g * std::sqrt(1.0 / d1 + 1.0 / d2));
    return {g, sigma, g, false};
}

double three_fold_efficiency(const CircuitModel& circuit, double eta, MeasurementMode mode) {
    if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("eta must lie in (0, 1]");
    const Eigen::MatrixXcd u = circuit.unitary();
    const auto patterns = OccupationPattern::enumerate(kNumDetectors, 3);
    auto distinct3 = [&](int input) {
        std::vector<InputPhoton> photons(3, InputPhoton{input, {}});
        auto probs = output_distribution(u, photons);
        double p = 0.0;
        for (std::size_t k = 0; k < patterns.size(); ++k) {
            int occupied = 0;
            for (int o = 0; o < kNumDetectors; ++o) occupied += patterns[k][static_cast<std::size_t>(o)] > 0;
            if (occupied >= 3) p += probs[k];
        }
        return p;
    };
    const double eta3 = eta * eta * eta;
    if (mode == MeasurementMode::Hbt) return eta3 * distinct3(kShortArmInput);
    // All three photons must pick the same arm to share a time slot: 1/8 each.
    return eta3 * (distinct3(kShortArmInput) + distinct3(kLongArmInput)) / 8.0;
}

double poisson_upper_limit(std::uint64_t k, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
    if (k == 0) return std::log(1.0 / alpha);
    return 0.5 * gsl_cdf_chisq_Pinv(1.0 - alpha, 2.0 * static_cast<double>(k + 1));
}

FockReconstruction reconstruct_fock(double singles_rate_hz, double pulse_rate_hz, double eta, double g2_hbt0,
                                    std::uint64_t triple_counts, double n_trials, double alpha, double eps3) {
    if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("eta must lie in (0, 1]");
    if (!(n_trials > 0.0)) throw ValidationError("n_trials must be positive");
    if (!(pulse_rate_hz > 0.0)) throw ValidationError("pulse rate must be positive");
    if (!(singles_rate_hz >= 0.0)) throw ValidationError("singles rate must be >= 0");
    if (!(g2_hbt0 >= 0.0)) throw ValidationError("g2_hbt0 must be >= 0");
    if (!(eps3 > 0.0)) throw ValidationError("three-fold efficiency must be positive");
    const double p1 = singles_rate_hz / (pulse_rate_hz * eta);
    if (p1 > 1.0)
        throw ValidationError("singles rate exceeds pulse_rate * eta: p1 = " + std::to_string(p1) + " > 1 is unphysical");
    const double p2 = g2_hbt0 * p1 * p1 / 2.0;
    FockReconstruction out;
    out.alpha = alpha;
    out.three_fold_efficiency = eps3;
    out.p3_upper_limit = poisson_upper_limit(triple_counts, alpha) / (n_trials * eps3);
    if (triple_counts == 0) {
        out.p3 = std::min(1.0, out.p3_upper_limit);
        out.p3_upper_bound = true;
        out.fock = FockDistribution({1.0 - p1 - p2, p1, p2, out.p3}, true);
    } else {
        out.p3 = static_cast<double>(triple_counts) / (n_trials * eps3);
        out.p3_upper_bound = false;
        if (p1 + p2 + out.p3 > 1.0) throw ValidationError("reconstructed p1 + p2 + p3 exceeds 1");
        out.fock = FockDistribution({1.0 - p1 - p2 - out.p3, p1, p2, out.p3});
    }
    return out;
}

}  // namespace sg2
