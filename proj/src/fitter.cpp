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

#include "sg2/fitter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "sg2/errors.hpp"

namespace sg2 {

CorrelationMatrix CorrelationMatrix::from(const CorrelationSet& cs) {
    CorrelationMatrix m;
    for (int p = 0; p < kNumPairs; ++p) {
        m.value[static_cast<std::size_t>(p)] = cs.at(p, 0);
        m.sigma[static_cast<std::size_t>(p)] = cs.sigma_at(p, 0);
    }
    return m;
}

void CorrelationMatrix::validate() const {
    for (int p = 0; p < kNumPairs; ++p) {
        const auto k = static_cast<std::size_t>(p);
        if (!(value[k] >= 0.0) || !std::isfinite(value[k]))
            throw ValidationError("correlation " + pair_name(p) + " must be finite and >= 0");
        if (!(sigma[k] > 0.0) || !std::isfinite(sigma[k]))
            throw ValidationError("uncertainty of " + pair_name(p) + " must be finite and > 0");
    }
}

namespace {

// g_lm = g2 * same[lm] + C * (ind[lm] - dist[lm]) + dist[lm], zeta factors included.
struct LinearModel {
    std::array<double, kNumPairs> same{}, ind{}, dist{};

    double at(int p, double g2, double c) const {
        const auto k = static_cast<std::size_t>(p);
        return g2 * same[k] + c * ind[k] + (1.0 - c) * dist[k];
    }
};

double pair_probability(const std::vector<double>& probs, const std::vector<OccupationPattern>& patterns, int l, int m) {
    for (std::size_t k = 0; k < patterns.size(); ++k)
        if (patterns[k][static_cast<std::size_t>(l)] == 1 && patterns[k][static_cast<std::size_t>(m)] == 1) return probs[k];
    return 0.0;
}

LinearModel linear_model(const CircuitModel& circuit, const ZetaFit& zeta) {
    const Eigen::MatrixXcd u = circuit.unitary();
    const auto patterns = OccupationPattern::enumerate(kNumDetectors, 2);
    const InternalState common{};
    InternalState other{};
    other.incoherent_tag = 1;

    std::vector<InputPhoton> short_pair{{kShortArmInput, common}, {kShortArmInput, common}};
    std::vector<InputPhoton> long_pair{{kLongArmInput, common}, {kLongArmInput, common}};
    std::vector<InputPhoton> meet_ind{{kLongArmInput, common}, {kShortArmInput, common}};
    std::vector<InputPhoton> meet_dist{{kLongArmInput, common}, {kShortArmInput, other}};
    const auto p_ss = output_distribution(u, short_pair);
    const auto p_ll = output_distribution(u, long_pair);
    const auto p_ind = output_distribution(u, meet_ind);
    const auto p_dist = output_distribution(u, meet_dist);

    const double z0 = zeta.zeta(0);
    const double zd = zeta.zeta(circuit.delay_pulses());
    LinearModel lm;
    for (int p = 0; p < kNumPairs; ++p) {
        const auto [l, m] = kPairs[static_cast<std::size_t>(p)];
        // Singles per photon-per-pulse: each photon picks an arm with probability 1/2.
        const double sl = 0.5 * (std::norm(u(l, kLongArmInput)) + std::norm(u(l, kShortArmInput)));
        const double sm = 0.5 * (std::norm(u(m, kLongArmInput)) + std::norm(u(m, kShortArmInput)));
        const double norm = sl * sm;
        const auto k = static_cast<std::size_t>(p);
        lm.same[k] = z0 / 8.0 * (pair_probability(p_ss, patterns, l, m) + pair_probability(p_ll, patterns, l, m)) / norm;
        lm.ind[k] = zd / 4.0 * pair_probability(p_ind, patterns, l, m) / norm;
        lm.dist[k] = zd / 4.0 * pair_probability(p_dist, patterns, l, m) / norm;
    }
    return lm;
}

struct Objective {
    const CorrelationMatrix* measured;
    LinearModel model;

    double chi2(double g2, double c) const {
        double s = 0.0;
        for (int p = 0; p < kNumPairs; ++p) {
            const auto k = static_cast<std::size_t>(p);
            const double r = (measured->value[k] - model.at(p, g2, c)) / measured->sigma[k];
            s += r * r;
        }
        return s;
    }
};

constexpr double kG2Max = 2.0;

double penalized(const gsl_vector* x, void* params) {
    const auto* obj = static_cast<const Objective*>(params);
    const double g = gsl_vector_get(x, 0), c = gsl_vector_get(x, 1);
    const double gc = std::clamp(g, 0.0, kG2Max), cc = std::clamp(c, 0.0, 1.0);
    const double outside = (g - gc) * (g - gc) + (c - cc) * (c - cc);
    return obj->chi2(gc, cc) + 1e6 * outside;
}

}  // namespace

CorrelationMatrix predict_matrix(double g2, double coalescence, const CircuitModel& circuit, const ZetaFit& zeta) {
    if (!(g2 >= 0.0) || !std::isfinite(g2)) throw ValidationError("g2 must be finite and >= 0");
    if (!(coalescence >= 0.0 && coalescence <= 1.0)) throw ValidationError("C must lie in [0, 1]");
    const auto lm = linear_model(circuit, zeta);
    CorrelationMatrix out;
    for (int p = 0; p < kNumPairs; ++p) {
        out.value[static_cast<std::size_t>(p)] = lm.at(p, g2, coalescence);
        out.sigma[static_cast<std::size_t>(p)] = 1.0;
    }
    return out;
}

BosonFit fit(const CorrelationMatrix& measured, const CircuitModel& circuit, const ZetaFit& zeta) {
    measured.validate();
    Objective obj{&measured, linear_model(circuit, zeta)};

    constexpr int kGrid = 21;
    double best_g = 0.0, best_c = 0.0, best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i)
        for (int j = 0; j < kGrid; ++j) {
            const double g = kG2Max * i / (kGrid - 1), c = 1.0 * j / (kGrid - 1);
            const double v = obj.chi2(g, c);
            if (v < best) {
                best = v;
                best_g = g;
                best_c = c;
            }
        }

    gsl_multimin_function fn{penalized, 2, &obj};
    gsl_vector* x = gsl_vector_alloc(2);
    gsl_vector* step = gsl_vector_alloc(2);
    gsl_vector_set(x, 0, best_g);
    gsl_vector_set(x, 1, best_c);
    gsl_vector_set_all(step, 0.05);
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
    gsl_multimin_fminimizer_set(s, &fn, x, step);
    int status = GSL_CONTINUE;
    int iter = 0;
    constexpr int kMaxIter = 5000;
    while (status == GSL_CONTINUE && iter < kMaxIter) {
        ++iter;
        if (gsl_multimin_fminimizer_iterate(s)) break;
        status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-8);
    }
    const double g = std::clamp(gsl_vector_get(s->x, 0), 0.0, kG2Max);
    const double c = std::clamp(gsl_vector_get(s->x, 1), 0.0, 1.0);
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(step);
    gsl_vector_free(x);
    if (status != GSL_SUCCESS) {
        std::ostringstream msg;
        msg << "boson-sampling fit did not converge after " << iter << " iterations; last iterate g2=" << g << " C=" << c;
        throw NumericalError(msg.str());
    }

    BosonFit out;
    out.g2 = g;
    out.coalescence = c;
    out.chi2 = obj.chi2(g, c);
    out.iterations = iter;
    constexpr double kEdge = 1e-6;
    out.at_boundary = g < kEdge || g > kG2Max - kEdge || c < kEdge || c > 1.0 - kEdge;

    // Quadratic approximation: covariance = (J^T W J)^-1 with J = d prediction / d (g2, C).
    Eigen::Matrix2d info = Eigen::Matrix2d::Zero();
    for (int p = 0; p < kNumPairs; ++p) {
        const auto k = static_cast<std::size_t>(p);
        const Eigen::Vector2d row(obj.model.same[k] / measured.sigma[k],
                                  (obj.model.ind[k] - obj.model.dist[k]) / measured.sigma[k]);
        info += row * row.transpose();
    }
    if (std::abs(info.determinant()) <= 1e-300) throw NumericalError("boson-sampling fit has a singular information matrix");
    const Eigen::Matrix2d cov = info.inverse();
    out.covariance = {{{cov(0, 0), cov(0, 1)}, {cov(1, 0), cov(1, 1)}}};
    return out;
}

}  // namespace sg2
