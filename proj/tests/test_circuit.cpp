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
#include <random>

#include <gtest/gtest.h>

#include "oracles/oracles.hpp"
#include "sg2/circuit.hpp"
#include "sg2/errors.hpp"

using namespace sg2;

namespace {

const Complex I{0.0, 1.0};
const double h = M_SQRT1_2;

// Probability that the two BS2 output arms (A|B and C|D) each receive exactly one photon.
double split_probability(const CircuitModel& c, std::vector<InputPhoton> photons) {
    double p = 0.0;
    for (const auto& pat : OccupationPattern::enumerate(4, 2)) {
        if (pat[0] + pat[1] == 1 && pat[2] + pat[3] == 1) p += output_pattern_probability(c, photons, pat);
    }
    return p;
}

InputPhoton photon(int mode, double detuning = 0.0, int pol = 0, std::uint64_t tag = 0) {
    return InputPhoton{mode, InternalState{detuning, pol, tag}};
}

}  // namespace

TEST(Beamsplitter, rejects_lossy_parameters) {
    EXPECT_THROW(Beamsplitter(0.5, 0.5), ValidationError);
    EXPECT_THROW(Beamsplitter(-0.1, std::sqrt(0.99)), ValidationError);
    EXPECT_NO_THROW(Beamsplitter(0.6, 0.8));
}

TEST(BuildUnitary, matches_printed_matrix) {
    Beamsplitter b2(0.6, 0.8), b3(0.7, std::sqrt(0.51)), b4(h, h);
    Unitary u = build_unitary(b2, b3, b4);
    const double r2 = 0.6, t2 = 0.8, r3 = 0.7, t3 = std::sqrt(0.51), r4 = h, t4 = h;
    EXPECT_EQ(u(0, 0), I * r3);
    EXPECT_EQ(u(0, 1), I * r2 * t3);
    EXPECT_EQ(u(0, 2), Complex(t2 * t3));
    EXPECT_EQ(u(0, 3), Complex(0.0));
    EXPECT_EQ(u(1, 1), Complex(-r2 * r3));
    EXPECT_EQ(u(2, 2), Complex(-r2 * r4));
    EXPECT_EQ(u(3, 3), I * r4);
    EXPECT_EQ(u(3, 1), Complex(t2 * t4));
}

TEST(BuildUnitary, unitary_for_generic_and_balanced_parameters) {
    Beamsplitter b2(0.6, 0.8), b3(0.7, std::sqrt(0.51)), b4(h, h);
    Unitary u = build_unitary(b2, b3, b4);
    EXPECT_LT((u.adjoint() * u - Unitary::Identity()).cwiseAbs().maxCoeff(), 1e-12);

    Unitary bal = CircuitModel::balanced(4).unitary();
    EXPECT_LT((bal.adjoint() * bal - Unitary::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    for (int col = 0; col < 4; ++col) EXPECT_NEAR(bal.col(col).squaredNorm(), 1.0, 1e-12);
}

TEST(BuildUnitary, transparent_bs2_zeroes_reflection_terms) {
    Unitary u = build_unitary(Beamsplitter(0.0, 1.0), {}, {});
    // Entries carrying r2 vanish: the long arm only reaches C, D and the short arm only A, B.
    EXPECT_EQ(u(0, kLongArmInput), Complex(0.0));
    EXPECT_EQ(u(1, kLongArmInput), Complex(0.0));
    EXPECT_EQ(u(2, kShortArmInput), Complex(0.0));
    EXPECT_EQ(u(3, kShortArmInput), Complex(0.0));
}

TEST(Permanent, small_reference_values) {
    EXPECT_NEAR(std::abs(permanent(Eigen::MatrixXcd::Identity(3, 3)) - 1.0), 0.0, 1e-15);
    Eigen::MatrixXcd hom(2, 2);
    hom << I * h, h, h, I * h;
    EXPECT_LT(std::abs(permanent(hom)), 1e-15);
    Eigen::MatrixXcd ones = Eigen::MatrixXcd::Ones(5, 5);
    EXPECT_NEAR(permanent(ones).real(), 120.0, 1e-9);
    EXPECT_THROW(permanent(Eigen::MatrixXcd::Ones(2, 3)), ValidationError);
}

TEST(Permanent, gaussian_integer_matrices_match_permutation_sum_exactly) {
    std::mt19937_64 gen(11);
    const Complex entries[] = {0.0, 1.0, -1.0, I, -I};
    std::uniform_int_distribution<int> pick(0, 4);
    for (int n = 1; n <= 6; ++n) {
        for (int rep = 0; rep < 20; ++rep) {
            Eigen::MatrixXcd m(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) m(i, j) = entries[pick(gen)];
            EXPECT_EQ(permanent(m), oracle::naive_permanent(m)) << "n = " << n;
        }
    }
}

TEST(Permanent, random_complex_matrices_match_permutation_sum) {
    std::mt19937_64 gen(12);
    for (int n = 1; n <= 7; ++n) {
        Eigen::MatrixXcd m = oracle::random_unitary(n, gen) * 1.7;
        EXPECT_LT(std::abs(permanent(m) - oracle::naive_permanent(m)), 1e-11);
    }
}

TEST(PatternProbability, single_photon_splits_evenly_at_balanced_network) {
    auto c = CircuitModel::balanced(4);
    for (int in : {kLongArmInput, kShortArmInput}) {
        std::vector<InputPhoton> ph{photon(in)};
        for (int d = 0; d < 4; ++d) {
            std::vector<int> counts(4, 0);
            counts[static_cast<std::size_t>(d)] = 1;
            EXPECT_NEAR(output_pattern_probability(c, ph, OccupationPattern(counts)), 0.25, 1e-14);
        }
    }
}

TEST(PatternProbability, hom_dip_at_bs2) {
    auto c = CircuitModel::balanced(4);
    EXPECT_NEAR(split_probability(c, {photon(kLongArmInput), photon(kShortArmInput)}), 0.0, 1e-14);
    // Orthogonal polarizations: classical 50:50 enumeration gives 1/2.
    EXPECT_NEAR(split_probability(c, {photon(kLongArmInput, 0, 0), photon(kShortArmInput, 0, 1)}), 0.5, 1e-14);
    EXPECT_NEAR(split_probability(c, {photon(kLongArmInput, 0, 0, 1), photon(kShortArmInput, 0, 0, 2)}), 0.5, 1e-14);
}

TEST(PatternProbability, partial_overlap_follows_hom_formula) {
    auto c = CircuitModel::balanced(4);
    for (double delta : {0.0, 0.3, 1.0, 2.5}) {
        double m = std::exp(-delta * delta / 2.0);
        double p = split_probability(c, {photon(kLongArmInput, 0.0), photon(kShortArmInput, delta)});
        EXPECT_NEAR(p, hom_coincidence(m, h, h), 1e-13);
        EXPECT_NEAR(p, (1.0 - m) / 2.0, 1e-13);
    }
}

TEST(PatternProbability, photon_count_mismatch_is_rejected) {
    auto c = CircuitModel::balanced(4);
    std::vector<InputPhoton> ph{photon(1)};
    EXPECT_THROW(output_pattern_probability(c, ph, OccupationPattern({1, 1, 0, 0})), ValidationError);
}

TEST(PatternProbability, sums_to_one_and_matches_fock_space_oracle) {
    std::mt19937_64 gen(99);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_int_distribution<int> mode(0, 3);
    for (int rep = 0; rep < 6; ++rep) {
        Eigen::MatrixXcd u = oracle::random_unitary(4, gen);
        for (int n = 1; n <= 3; ++n) {
            std::vector<oracle::OraclePhoton> ophotons;
            std::vector<int> modes;
            for (int k = 0; k < n; ++k) {
                Eigen::VectorXcd v(3);
                for (int a = 0; a < 3; ++a) v(a) = Complex(g(gen), g(gen));
                v.normalize();
                int m = mode(gen);
                ophotons.push_back({m, v});
                modes.push_back(m);
            }
            Eigen::MatrixXcd gram(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) gram(i, j) = ophotons[i].internal.dot(ophotons[j].internal);
            oracle::FockSpaceOracle ref(u, ophotons);
            double total = 0.0;
            for (const auto& pat : OccupationPattern::enumerate(4, n)) {
                double p = output_pattern_probability(u, modes, gram, pat);
                total += p;
                std::vector<int> counts(pat.counts().begin(), pat.counts().end());
                EXPECT_NEAR(p, ref.probability(counts), 1e-10);
            }
            EXPECT_NEAR(total, 1.0, 1e-10);
        }
    }
}

TEST(PatternProbability, swapping_identical_photons_changes_nothing) {
    auto c = CircuitModel(Beamsplitter(0.6, 0.8), Beamsplitter(0.7, std::sqrt(0.51)), {}, 4);
    std::vector<InputPhoton> ab{photon(kLongArmInput), photon(kShortArmInput)};
    std::vector<InputPhoton> ba{photon(kShortArmInput), photon(kLongArmInput)};
    for (const auto& pat : OccupationPattern::enumerate(4, 2)) {
        EXPECT_NEAR(output_pattern_probability(c, ab, pat), output_pattern_probability(c, ba, pat), 1e-14);
    }
}

TEST(HomCoincidence, reference_values) {
    EXPECT_NEAR(hom_coincidence(1.0, h, h), 0.0, 1e-15);
    EXPECT_NEAR(hom_coincidence(0.0, h, h), 0.5, 1e-15);
    EXPECT_NEAR(hom_coincidence(0.61, h, h), 0.195, 1e-15);
    // Unbalanced splitter: distinguishable photons give r^4 + t^4.
    EXPECT_NEAR(hom_coincidence(0.0, 0.6, 0.8), std::pow(0.6, 4) + std::pow(0.8, 4), 1e-15);
}
