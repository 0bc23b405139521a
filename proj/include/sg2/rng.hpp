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

#ifndef SG2_RNG_HPP
#define SG2_RNG_HPP

#include <cstdint>
#include <random>

namespace sg2 {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for stream `stream` of block `block` under a user seed.
///
/// Mapping: splitmix64(splitmix64(seed ^ 0x5347324300000000) + block * 0x9E3779B97F4A7C15 + stream).
/// The mapping is part of the reproducibility contract: the same (seed, block, stream)
/// triple yields the same generator state on every platform and thread count.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t block, std::uint64_t stream);

/// Pseudo-random source with platform-stable conversions.
///
/// The engine is std::mt19937_64 (fully specified by the standard). Uniform and normal
/// variates are converted here rather than through <random> distributions, whose output
/// is implementation-defined.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal variate (Marsaglia polar method, cached pair).
    double normal();

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

   private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace sg2

#endif  // SG2_RNG_HPP
