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

// Independent reference computations for the unit and acceptance suites. Nothing here
// calls into the library's permanent or pattern-probability code.
#ifndef SG2_TESTS_ORACLES_HPP
#define SG2_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace sg2::oracle {

using Complex = std::complex<double>;

/// Permanent as the plain n! permutation sum.
inline Complex naive_permanent(const Eigen::MatrixXcd& m) {
    const int n = static_cast<int>(m.rows());
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    Complex total = 0.0;
    do {
        Complex prod = 1.0;
        for (int i = 0; i < n; ++i) prod *= m(i, perm[static_cast<std::size_t>(i)]);
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

struct OraclePhoton {
    int mode;
    Eigen::VectorXcd internal;  // amplitudes over an explicit internal basis
};

/// Pattern probabilities by explicit second-quantized evolution.
///
/// The input state prod_k (sum_nu psi_k(nu) a^dag_{m_k, nu}) |0> is expanded term by term
/// through a^dag_{m, nu} -> sum_o U(o, m) b^dag_{o, nu}, collecting coefficients of each
/// normal-ordered monomial. A monomial with occupations q has norm^2 prod q!. The spatial
/// pattern probability sums |coefficient|^2 prod q! over internal labels, divided by the
/// input state's norm^2 computed the same way with U = identity.
class FockSpaceOracle {
   public:
    FockSpaceOracle(Eigen::MatrixXcd u, std::vector<OraclePhoton> photons)
        : u_(std::move(u)), photons_(std::move(photons)) {
        internal_dim_ = photons_.empty() ? 1 : static_cast<int>(photons_.front().internal.size());
        out_ = expand(u_);
        Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(u_.rows(), u_.cols());
        auto in = expand(id);
        norm_ = 0.0;
        for (const auto& [key, c] : in) norm_ += std::norm(c) * multiplicity(key);
    }

    /// Probability of per-mode photon counts `pattern`.
    double probability(const std::vector<int>& pattern) const {
        double p = 0.0;
        for (const auto& [key, c] : out_) {
            std::vector<int> counts(static_cast<std::size_t>(u_.rows()), 0);
            for (int idx : key) counts[static_cast<std::size_t>(idx / internal_dim_)]++;
            if (counts == pattern) p += std::norm(c) * multiplicity(key);
        }
        return p / norm_;
    }

   private:
    using Key = std::vector<int>;

    static double multiplicity(const Key& key) {
        double m = 1.0;
        std::size_t i = 0;
        while (i < key.size()) {
            std::size_t j = i;
            while (j < key.size() && key[j] == key[i]) ++j;
            for (std::size_t f = 2; f <= j - i; ++f) m *= static_cast<double>(f);
            i = j;
        }
        return m;
    }

    std::map<Key, Complex> expand(const Eigen::MatrixXcd& u) const {
        std::map<Key, Complex> state{{Key{}, 1.0}};
        for (const auto& ph : photons_) {
            std::map<Key, Complex> next;
            for (const auto& [key, c] : state) {
                for (int o = 0; o < u.rows(); ++o) {
                    Complex uo = u(o, ph.mode);
                    if (uo == 0.0) continue;
                    for (int nu = 0; nu < internal_dim_; ++nu) {
                        Complex a = ph.internal(nu);
                        if (a == 0.0) continue;
                        Key k = key;
                        k.push_back(o * internal_dim_ + nu);
                        std::sort(k.begin(), k.end());
                        next[k] += c * uo * a;
                    }
                }
            }
            state = std::move(next);
        }
        return state;
    }

    Eigen::MatrixXcd u_;
    std::vector<OraclePhoton> photons_;
    int internal_dim_ = 1;
    std::map<Key, Complex> out_;
    double norm_ = 1.0;
};

/// Haar-random unitary from the QR decomposition of a complex Ginibre matrix.
inline Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& gen) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXcd z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z(i, j) = Complex(g(gen), g(gen));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
    return q;
}

}  // namespace sg2::oracle

#endif  // SG2_TESTS_ORACLES_HPP
