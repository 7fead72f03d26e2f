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

#ifndef BOSONSTAT_DETECTOR_EVENTS_HPP
#define BOSONSTAT_DETECTOR_EVENTS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "bosonstat/core/config_space.hpp"
#include "bosonstat/core/rng.hpp"
#include "bosonstat/linear_optics/distribution.hpp"

namespace bosonstat {

// Counted output configurations of an experiment or simulation, dense over
// the configuration space. Plain samples carry integer counts; bias-corrected
// samples carry real-valued weights.
struct EventSample {
    std::shared_ptr<const ConfigurationSpace> space;
    std::vector<double> weights;

    int n() const { return space->n(); }
    int m() const { return space->m(); }

    double total() const {
        double t = 0.0;
        for (double w : weights) {
            t += w;
        }
        return t;
    }

    bool has_integer_counts(double eps = 1e-9) const {
        for (double w : weights) {
            if (std::abs(w - std::round(w)) > eps) {
                return false;
            }
        }
        return true;
    }

    std::vector<double> frequencies() const {
        double t = total();
        if (t <= 0.0) {
            throw std::invalid_argument("EventSample: empty sample");
        }
        std::vector<double> f(weights.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            f[i] = weights[i] / t;
        }
        return f;
    }

    static EventSample empty(int n, int m) {
        auto space = ConfigurationSpace::get(n, m);
        std::vector<double> w(space->size(), 0.0);
        return EventSample{std::move(space), std::move(w)};
    }
};

namespace detail {

// Cumulative table for inverse-CDF sampling; binary search per draw.
class DiscreteSampler {
  public:
    explicit DiscreteSampler(const std::vector<double>& probs) : cdf_(probs.size()) {
        double acc = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            acc += probs[i];
            cdf_[i] = acc;
        }
        if (!cdf_.empty()) {
            cdf_.back() = 1.0;
        }
    }

    std::size_t draw(Rng& rng) const {
        double u = rng.uniform();
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        return static_cast<std::size_t>(it - cdf_.begin());
    }

  private:
    std::vector<double> cdf_;
};

}  // namespace detail

// N i.i.d. configuration draws from an exact distribution.
inline EventSample sample_events(const OutputDistribution& dist, std::int64_t count,
                                 std::uint64_t seed) {
    if (count < 1) {
        throw std::invalid_argument("sample_events: count must be >= 1");
    }
    detail::DiscreteSampler sampler(dist.probs);
    Rng rng(seed);
    std::vector<double> weights(dist.size(), 0.0);
    for (std::int64_t i = 0; i < count; ++i) {
        weights[sampler.draw(rng)] += 1.0;
    }
    return EventSample{dist.space, std::move(weights)};
}

// R multinomial resamples of size round(total) from the empirical
// frequencies; the standard Monte Carlo error-bar generator.
inline std::vector<EventSample> bootstrap_resample(const EventSample& events, int replicates,
                                                   std::uint64_t seed) {
    if (replicates < 1) {
        throw std::invalid_argument("bootstrap_resample: need at least one replicate");
    }
    auto n_draw = static_cast<std::int64_t>(std::llround(events.total()));
    if (n_draw < 1) {
        throw std::invalid_argument("bootstrap_resample: empty sample");
    }
    detail::DiscreteSampler sampler(events.frequencies());
    std::vector<EventSample> out;
    out.reserve(static_cast<std::size_t>(replicates));
    for (int r = 0; r < replicates; ++r) {
        Rng rng(derive_seed(seed, "bootstrap", static_cast<std::uint64_t>(r)));
        std::vector<double> weights(events.weights.size(), 0.0);
        for (std::int64_t i = 0; i < n_draw; ++i) {
            weights[sampler.draw(rng)] += 1.0;
        }
        out.push_back(EventSample{events.space, std::move(weights)});
    }
    return out;
}

inline double total_variation_distance(const EventSample& a, const EventSample& b) {
    if (a.n() != b.n() || a.m() != b.m()) {
        throw std::invalid_argument("total_variation_distance: shape mismatch");
    }
    auto fa = a.frequencies();
    auto fb = b.frequencies();
    double s = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i) {
        s += std::abs(fa[i] - fb[i]);
    }
    return 0.5 * s;
}

inline double total_variation_distance(const EventSample& a, const OutputDistribution& b) {
    if (a.n() != b.n() || a.m() != b.m()) {
        throw std::invalid_argument("total_variation_distance: shape mismatch");
    }
    auto fa = a.frequencies();
    double s = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i) {
        s += std::abs(fa[i] - b.probs[i]);
    }
    return 0.5 * s;
}

inline double total_variation_distance(const OutputDistribution& a, const EventSample& b) {
    return total_variation_distance(b, a);
}

}  // namespace bosonstat

#endif
