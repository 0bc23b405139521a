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

#include "sg2/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "sg2/errors.hpp"

namespace sg2 {

namespace {

constexpr Complex kI{0.0, 1.0};

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace

Beamsplitter::Beamsplitter(double r_, double t_) : r(r_), t(t_) {
    if (!(r >= 0.0 && r <= 1.0 && t >= 0.0 && t <= 1.0)) {
        throw ValidationError("beamsplitter coefficients must lie in [0, 1]");
    }
    if (std::abs(r * r + t * t - 1.0) > 1e-12) {
        throw ValidationError("beamsplitter is not lossless: r^2 + t^2 = " + std::to_string(r * r + t * t));
    }
}

Unitary build_unitary(const Beamsplitter& bs2, const Beamsplitter& bs3, const Beamsplitter& bs4) {
    const double r2 = bs2.r, t2 = bs2.t, r3 = bs3.r, t3 = bs3.t, r4 = bs4.r, t4 = bs4.t;
    Unitary u;
    u << kI * r3, kI * r2 * t3, t2 * t3, 0.0,
         t3, -r2 * r3, kI * r3 * t2, 0.0,
         0.0, kI * r4 * t2, -r2 * r4, t4,
         0.0, t2 * t4, kI * r2 * t4, kI * r4;
    return u;
}

CircuitModel::CircuitModel(Beamsplitter bs2, Beamsplitter bs3, Beamsplitter bs4, int delay_pulses)
    : bs2_(bs2), bs3_(bs3), bs4_(bs4), delay_(delay_pulses), u_(build_unitary(bs2, bs3, bs4)) {
    if (delay_pulses < 1) {
        throw ValidationError("interferometer delay must be a positive number of pulses");
    }
    double defect = (u_.adjoint() * u_ - Unitary::Identity()).cwiseAbs().maxCoeff();
    if (defect > 1e-12) {
        throw ValidationError("beamsplitter parameters do not yield a unitary network");
    }
}

Complex permanent(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) {
        throw ValidationError("permanent needs a square matrix, got " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()));
    }
    const int n = static_cast<int>(m.rows());
    if (n == 0) return 1.0;
    if (n > 30) throw ValidationError("permanent size exceeds supported range");

    // Ryser: perm = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} m(i, j).
    // Walk subsets in Gray-code order so each step adds or removes one column.
    std::vector<Complex> row_sums(static_cast<std::size_t>(n), 0.0);
    Complex total = 0.0;
    std::uint64_t gray = 0;
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < count; ++k) {
        int col = std::countr_zero(k);
        std::uint64_t bit = std::uint64_t{1} << col;
        gray ^= bit;
        double sign = (gray & bit) ? 1.0 : -1.0;
        Complex prod = 1.0;
        for (int i = 0; i < n; ++i) {
            row_sums[static_cast<std::size_t>(i)] += sign * m(i, col);
            prod *= row_sums[static_cast<std::size_t>(i)];
        }
        bool odd = std::popcount(gray) & 1;
        total += odd ? -prod : prod;
    }
    return (n % 2 == 0) ? total : -total;
}

Complex overlap(const InternalState& a, const InternalState& b) {
    if (a.polarization != b.polarization || a.incoherent_tag != b.incoherent_tag) return 0.0;
    double delta = a.detuning - b.detuning;
    return std::exp(-delta * delta / 4.0);
}

Eigen::MatrixXcd gram_matrix(std::span<const InputPhoton> photons) {
    const auto n = static_cast<Eigen::Index>(photons.size());
    Eigen::MatrixXcd s(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            s(i, j) = overlap(photons[static_cast<std::size_t>(i)].state, photons[static_cast<std::size_t>(j)].state);
        }
    }
    return s;
}

double output_pattern_probability(const Eigen::MatrixXcd& u, std::span<const int> input_modes,
                                  const Eigen::MatrixXcd& gram, const OccupationPattern& pattern) {
    const int n = static_cast<int>(input_modes.size());
    if (pattern.total_photons() != n) {
        throw ValidationError("pattern holds " + std::to_string(pattern.total_photons()) +
                              " photons but " + std::to_string(n) + " were injected");
    }
    if (static_cast<Eigen::Index>(pattern.modes()) != u.rows()) {
        throw ValidationError("pattern mode count does not match the network");
    }
    if (gram.rows() != n || gram.cols() != n) {
        throw ValidationError("Gram matrix size does not match photon count");
    }
    if (n == 0) return 1.0;

    std::vector<int> out_rows;
    out_rows.reserve(static_cast<std::size_t>(n));
    double out_factorials = 1.0;
    for (std::size_t o = 0; o < pattern.modes(); ++o) {
        for (int c = 0; c < pattern[o]; ++c) out_rows.push_back(static_cast<int>(o));
        out_factorials *= factorial(pattern[o]);
    }

    Eigen::MatrixXcd w(n, n);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) w(k, j) = u(out_rows[static_cast<std::size_t>(k)], input_modes[static_cast<std::size_t>(j)]);
    }

    std::vector<int> tau(static_cast<std::size_t>(n));
    std::iota(tau.begin(), tau.end(), 0);
    Complex numerator = 0.0;
    Complex norm = 0.0;
    Eigen::MatrixXcd x(n, n);
    do {
        Complex weight = 1.0;
        bool same_modes = true;
        for (int j = 0; j < n && weight != 0.0; ++j) {
            int tj = tau[static_cast<std::size_t>(j)];
            weight *= gram(tj, j);
            same_modes = same_modes && input_modes[static_cast<std::size_t>(tj)] == input_modes[static_cast<std::size_t>(j)];
        }
        if (std::abs(weight) < 1e-300) continue;
        if (same_modes) norm += weight;
        for (int k = 0; k < n; ++k) {
            for (int j = 0; j < n; ++j) x(k, j) = w(k, j) * std::conj(w(k, tau[static_cast<std::size_t>(j)]));
        }
        numerator += weight * permanent(x);
    } while (std::next_permutation(tau.begin(), tau.end()));

    return numerator.real() / (out_factorials * norm.real());
}

double output_pattern_probability(const CircuitModel& circuit, std::span<const InputPhoton> photons,
                                  const OccupationPattern& pattern) {
    std::vector<int> modes;
    for (const auto& ph : photons) modes.push_back(ph.mode);
    Eigen::MatrixXcd u = circuit.unitary();
    return output_pattern_probability(u, modes, gram_matrix(photons), pattern);
}

std::vector<double> output_distribution(const Eigen::MatrixXcd& u, std::span<const InputPhoton> photons) {
    std::vector<int> modes;
    for (const auto& ph : photons) modes.push_back(ph.mode);
    Eigen::MatrixXcd gram = gram_matrix(photons);
    auto patterns = OccupationPattern::enumerate(static_cast<int>(u.rows()), static_cast<int>(photons.size()));
    std::vector<double> probs;
    probs.reserve(patterns.size());
    for (const auto& pat : patterns) probs.push_back(output_pattern_probability(u, modes, gram, pat));
    return probs;
}

double hom_coincidence(double overlap_squared, double r, double t) {
    double d = r * r - t * t;
    return d * d + 2.0 * r * r * t * t * (1.0 - overlap_squared);
}

}  // namespace sg2
