// Copyright 2026 The bosonstat Authors
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

#ifndef BOSONSTAT_CORE_RNG_HPP
#define BOSONSTAT_CORE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace bosonstat {

// 64-bit finalizer used both for seed derivation and as the SplitMix64 step.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Every random stream in the toolkit is keyed by (master seed, component tag,
// index). Identical keys give identical streams on every platform, which is
// what makes whole pipelines byte-reproducible from a single --seed flag.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                           std::uint64_t index = 0) {
    return mix64(mix64(master ^ fnv1a64(tag)) ^ index);
}

// Counter-based generator (SplitMix64). The state is a plain counter, so
// streams never collide in shared-nothing parallel loops and the sequence is
// identical regardless of how work is scheduled.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return mix64(state_++); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1); safe as a log() argument.
    double uniform_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, bound). Lemire's multiply-shift with rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0) {
            throw std::invalid_argument("Rng::next_below: bound must be positive");
        }
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            std::uint64_t t = (0 - bound) % bound;
            while (lo < t) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller; the spare value is cached.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform_open();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // Fisher-Yates; permutes the whole vector.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Partial Fisher-Yates: after the call, v[0..k) is a uniform
    // without-replacement sample of the original contents.
    template <typename T>
    void partial_shuffle(std::vector<T>& v, std::size_t k) {
        if (k > v.size()) {
            throw std::invalid_argument("Rng::partial_shuffle: k exceeds size");
        }
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + static_cast<std::size_t>(next_below(v.size() - i));
            std::swap(v[i], v[j]);
        }
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace bosonstat

#endif
