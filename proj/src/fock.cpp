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

#include "sg2/fock.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "sg2/errors.hpp"

namespace sg2 {

FockDistribution::FockDistribution(std::vector<double> p, bool p3_is_upper_bound)
    : p_(std::move(p)), p3_is_upper_bound_(p3_is_upper_bound) {
    if (p_.empty()) {
        throw ValidationError("Fock distribution needs at least one entry");
    }
    for (std::size_t n = 0; n < p_.size(); ++n) {
        if (!(p_[n] >= 0.0 && p_[n] <= 1.0)) {
            std::ostringstream msg;
            msg << "Fock probability p" << n << " = " << p_[n] << " is outside [0, 1]";
            throw ValidationError(msg.str());
        }
    }
    std::size_t summed = p_.size();
    if (p3_is_upper_bound_) {
        if (p_.size() < 4) {
            throw ValidationError("p3 upper-bound flag set but distribution has no p3 entry");
        }
        summed = 3;
    }
    double total = std::accumulate(p_.begin(), p_.begin() + static_cast<std::ptrdiff_t>(summed), 0.0);
    if (std::abs(total - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg.precision(15);
        msg << "Fock distribution sums to " << total << ", expected 1";
        throw ValidationError(msg.str());
    }
}

FockDistribution FockDistribution::from_brightness(double p1, double g2, double p3) {
    if (!(p1 >= 0.0 && p1 <= 1.0) || !(g2 >= 0.0) || !(p3 >= 0.0)) {
        throw ValidationError("brightness parameters must satisfy p1 in [0,1], g2 >= 0, p3 >= 0");
    }
    double p2 = g2 * p1 * p1 / 2.0;
    double p0 = 1.0 - p1 - p2 - p3;
    if (p0 < 0.0) {
        throw ValidationError("p1 + p2 + p3 exceeds 1");
    }
    return FockDistribution({p0, p1, p2, p3});
}

bool FockDistribution::is_monotone() const {
    for (std::size_t n = 1; n < p_.size(); ++n) {
        if (p_[n] > p_[n - 1]) return false;
    }
    return true;
}

double FockDistribution::mean_photon_number() const {
    double mean = 0.0;
    std::size_t last = p3_is_upper_bound_ ? 3 : p_.size();
    for (std::size_t n = 1; n < last; ++n) mean += static_cast<double>(n) * p_[n];
    return mean;
}

OccupationPattern::OccupationPattern(std::vector<int> counts) : counts_(std::move(counts)) {
    for (int c : counts_) {
        if (c < 0) throw ValidationError("occupation counts must be non-negative");
        total_ += c;
    }
}

std::vector<OccupationPattern> OccupationPattern::enumerate(int modes, int photons) {
    std::vector<OccupationPattern> out;
    std::vector<int> counts(static_cast<std::size_t>(modes), 0);
    // Depth-first over the first mode's count, remaining photons recursively.
    auto rec = [&](auto& self, int mode, int left) -> void {
        if (mode == modes - 1) {
            counts[static_cast<std::size_t>(mode)] = left;
            out.emplace_back(counts);
            return;
        }
        for (int c = left; c >= 0; --c) {
            counts[static_cast<std::size_t>(mode)] = c;
            self(self, mode + 1, left - c);
        }
    };
    if (modes > 0) rec(rec, 0, photons);
    return out;
}

void SourceModel::validate() const {
    if (fock.p3_is_upper_bound()) {
        throw ValidationError("source distribution cannot carry an upper-bound entry");
    }
    if (fock.max_photons() > 3) {
        throw ValidationError("source distribution is truncated at n = 3");
    }
    if (!(indistinguishability >= 0.0 && indistinguishability <= 1.0)) {
        throw ValidationError("indistinguishability C must lie in [0, 1]");
    }
    if (!(zeta0 >= 1.0)) {
        throw ValidationError("zeta0 must be >= 1 (bunching excess); got " + std::to_string(zeta0));
    }
    if (!(tau1 > 0.0)) {
        throw ValidationError("tau1 must be positive");
    }
    if (!(pulse_period_ns > 0.0)) {
        throw ValidationError("pulse_period_ns must be positive");
    }
    if (!(spectral_jitter >= 0.0)) {
        throw ValidationError("spectral_jitter must be non-negative");
    }
}

int sample_photon_number(const FockDistribution& dist, Rng& rng) {
    double u = rng.uniform();
    auto p = dist.p();
    double acc = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        acc += p[n];
        if (u < acc) return static_cast<int>(n);
    }
    // u landed in the rounding slack above the cumulative sum; return the last populated n.
    for (std::size_t n = p.size(); n-- > 0;) {
        if (p[n] > 0.0) return static_cast<int>(n);
    }
    return 0;
}

double zeta(std::int64_t k, double zeta0, double tau1) {
    return 1.0 + (zeta0 - 1.0) * std::exp(-std::abs(static_cast<double>(k)) / tau1);
}

}  // namespace sg2
