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

#ifndef BOSONSTAT_CORRELATORS_RESOURCE_HPP
#define BOSONSTAT_CORRELATORS_RESOURCE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bosonstat/core/rng.hpp"
#include "bosonstat/correlators/cdataset.hpp"
#include "bosonstat/correlators/features.hpp"
#include "bosonstat/detector/events.hpp"

namespace bosonstat {

struct SubsetPoint {
    std::vector<int> modes;  // 1-based, ascending
    double nm = 0.0;
    double cv = 0.0;
    double kept_fraction = 0.0;  // share of events surviving postselection
};

struct SubsetSizeSummary {
    int size = 0;
    int subsets_used = 0;
    int subsets_excluded = 0;  // no surviving events
    double mean_nm = 0.0;
    double mean_cv = 0.0;
    double std_nm = 0.0;
    double std_cv = 0.0;
};

struct ModeSubsetAnalysis {
    std::vector<SubsetPoint> points;
    std::vector<SubsetSizeSummary> per_size;
};

namespace detail {

inline void for_each_combination(int m, int k, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> modes(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        modes[static_cast<std::size_t>(i)] = i + 1;
    }
    while (true) {
        fn(modes);
        int i = k - 1;
        while (i >= 0 && modes[static_cast<std::size_t>(i)] == m - (k - 1 - i)) {
            --i;
        }
        if (i < 0) {
            return;
        }
        ++modes[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) {
            modes[static_cast<std::size_t>(j)] = modes[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
}

}  // namespace detail

// Restricts a sample to events with every photon inside `modes`, re-expressed
// over the reduced mode set. Returns an empty-total sample when nothing
// survives.
inline EventSample restrict_to_modes(const EventSample& events, const std::vector<int>& modes) {
    auto space = ConfigurationSpace::get(events.n(), static_cast<int>(modes.size()));
    EventSample out{space, std::vector<double>(space->size(), 0.0)};
    Occupation reduced(modes.size());
    for (std::size_t ci = 0; ci < events.weights.size(); ++ci) {
        double w = events.weights[ci];
        if (w == 0.0) {
            continue;
        }
        const Occupation& occ = events.space->config(ci);
        int inside = 0;
        for (std::size_t k = 0; k < modes.size(); ++k) {
            int c = occ[static_cast<std::size_t>(modes[k] - 1)];
            reduced[k] = c;
            inside += c;
        }
        if (inside == events.n()) {
            out.weights[space->index_of(reduced)] += w;
        }
    }
    return out;
}

// Postselected (NM, CV) over every mode subset of the requested sizes, with
// the NM normalization using the subset size. Subsets with no surviving
// events are excluded and counted in the summary.
inline ModeSubsetAnalysis mode_subset_analysis(const EventSample& events,
                                               const std::vector<int>& subset_sizes) {
    const int m = events.m();
    const double total = events.total();
    if (total <= 0.0) {
        throw std::invalid_argument("mode_subset_analysis: empty sample");
    }
    ModeSubsetAnalysis out;
    for (int size : subset_sizes) {
        if (size < 2 || size > m) {
            throw std::invalid_argument("mode_subset_analysis: subset size out of range");
        }
        SubsetSizeSummary summary;
        summary.size = size;
        std::vector<double> nms, cvs;
        detail::for_each_combination(m, size, [&](const std::vector<int>& modes) {
            EventSample sub = restrict_to_modes(events, modes);
            double kept = sub.total();
            if (kept <= 0.0) {
                ++summary.subsets_excluded;
                return;
            }
            FeatureVector f = summary_statistics(cdataset_estimate(sub));
            SubsetPoint point;
            point.modes = modes;
            point.nm = f[Stat::NM];
            point.cv = f[Stat::CV];
            point.kept_fraction = kept / total;
            nms.push_back(point.nm);
            cvs.push_back(point.cv);
            out.points.push_back(std::move(point));
        });
        summary.subsets_used = static_cast<int>(nms.size());
        if (!nms.empty()) {
            auto mean_of = [](const std::vector<double>& v) {
                double s = 0.0;
                for (double x : v) {
                    s += x;
                }
                return s / static_cast<double>(v.size());
            };
            summary.mean_nm = mean_of(nms);
            summary.mean_cv = mean_of(cvs);
            auto std_of = [](const std::vector<double>& v, double mean) {
                double s = 0.0;
                for (double x : v) {
                    s += (x - mean) * (x - mean);
                }
                return std::sqrt(s / static_cast<double>(v.size()));
            };
            summary.std_nm = std_of(nms, summary.mean_nm);
            summary.std_cv = std_of(cvs, summary.mean_cv);
        }
        out.per_size.push_back(std::move(summary));
    }
    return out;
}

struct ScanRow {
    int size = 0;
    double mean_nm = 0.0;
    double mean_cv = 0.0;
    double std_nm = 0.0;
    double std_cv = 0.0;
};

// Convergence of (NM, CV) with sample size: for each multiple of `step`,
// draws `extractions` without-replacement subsets and reports the mean and
// standard deviation of the estimates across extractions.
inline std::vector<ScanRow> sample_size_scan(const EventSample& events, int step, int extractions,
                                             std::uint64_t seed) {
    if (step < 1 || extractions < 1) {
        throw std::invalid_argument("sample_size_scan: step and extractions must be positive");
    }
    if (!events.has_integer_counts()) {
        throw std::invalid_argument("sample_size_scan: requires integer event counts");
    }
    auto total = static_cast<std::int64_t>(std::llround(events.total()));
    if (step > total) {
        throw std::invalid_argument("sample_size_scan: step exceeds sample size");
    }
    // Expand to one entry per event so extraction is uniform over events.
    std::vector<std::uint32_t> instances;
    instances.reserve(static_cast<std::size_t>(total));
    for (std::size_t ci = 0; ci < events.weights.size(); ++ci) {
        auto count = static_cast<std::int64_t>(std::llround(events.weights[ci]));
        for (std::int64_t k = 0; k < count; ++k) {
            instances.push_back(static_cast<std::uint32_t>(ci));
        }
    }
    std::vector<ScanRow> rows;
    std::vector<std::uint32_t> scratch;
    for (std::int64_t size = step; size <= total; size += step) {
        double s_nm = 0.0, s2_nm = 0.0, s_cv = 0.0, s2_cv = 0.0;
        for (int e = 0; e < extractions; ++e) {
            Rng rng(derive_seed(seed, "extraction",
                                (static_cast<std::uint64_t>(size) << 20) ^
                                    static_cast<std::uint64_t>(e)));
            scratch = instances;
            rng.partial_shuffle(scratch, static_cast<std::size_t>(size));
            EventSample sub{events.space, std::vector<double>(events.weights.size(), 0.0)};
            for (std::int64_t k = 0; k < size; ++k) {
                sub.weights[scratch[static_cast<std::size_t>(k)]] += 1.0;
            }
            FeatureVector f = summary_statistics(cdataset_estimate(sub));
            double nm = f[Stat::NM];
            double cv = f[Stat::CV];
            s_nm += nm;
            s2_nm += nm * nm;
            s_cv += cv;
            s2_cv += cv * cv;
        }
        double inv = 1.0 / static_cast<double>(extractions);
        ScanRow row;
        row.size = static_cast<int>(size);
        row.mean_nm = s_nm * inv;
        row.mean_cv = s_cv * inv;
        row.std_nm = std::sqrt(std::max(0.0, s2_nm * inv - row.mean_nm * row.mean_nm));
        row.std_cv = std::sqrt(std::max(0.0, s2_cv * inv - row.mean_cv * row.mean_cv));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace bosonstat

#endif
