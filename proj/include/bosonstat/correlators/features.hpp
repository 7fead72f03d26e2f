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

#ifndef BOSONSTAT_CORRELATORS_FEATURES_HPP
#define BOSONSTAT_CORRELATORS_FEATURES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bosonstat/correlators/cdataset.hpp"

namespace bosonstat {

// The ten summary statistics of a C-dataset. Index order is fixed; it is the
// feature numbering used by every classifier.
enum class Stat : int {
    NM = 0,   // normalized mean: mean(C) * m^2 / n
    CV = 1,   // coefficient of variation: population std / mean
    S = 2,    // skewness (standardized third central moment)
    K = 3,    // kurtosis (standardized fourth central moment)
    M = 4,    // median
    MD = 5,   // median absolute deviation from the median
    HM = 6,   // harmonic mean of |C|, near-zero entries excluded
    IQR = 7,  // interquartile range, linear-interpolation percentiles
    ROC = 8,  // area under the descending cumulative-share curve of |C|
    TVD = 9,  // total variation distance of normalized |C| from uniform
};

inline constexpr int kStatCount = 10;
inline constexpr std::array<const char*, kStatCount> kStatNames = {
    "nm", "cv", "s", "k", "m", "md", "hm", "iqr", "roc", "tvd"};

inline int stat_index(const std::string& name) {
    for (int i = 0; i < kStatCount; ++i) {
        if (name == kStatNames[static_cast<std::size_t>(i)]) {
            return i;
        }
    }
    throw std::invalid_argument("unknown statistic name: " + name);
}

struct FeatureVector {
    std::array<double, kStatCount> values{};
    std::uint16_t degenerate_mask = 0;  // bit per Stat; value is 0 when set
    int hm_excluded = 0;                // |C| entries dropped from the harmonic mean

    double operator[](Stat s) const { return values[static_cast<std::size_t>(s)]; }
    double at(int i) const { return values[static_cast<std::size_t>(i)]; }
    bool is_degenerate(Stat s) const {
        return (degenerate_mask >> static_cast<int>(s)) & 1;
    }
};

namespace detail {

// Linear interpolation between closest ranks: position p * (K - 1) in the
// sorted values; the even-length median comes out as the midpoint.
inline double percentile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) {
        throw std::invalid_argument("percentile: empty data");
    }
    if (sorted.size() == 1) {
        return sorted[0];
    }
    double pos = p * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    if (lo >= sorted.size() - 1) {
        return sorted.back();
    }
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace detail

// Evaluates all ten statistics. Degenerate cases (zero mean for CV/S, zero
// dispersion for S/K, all-zero dataset for HM/ROC/TVD) are flagged in the
// mask with the value pinned to 0 instead of NaN.
inline FeatureVector summary_statistics(const CDataset& c) {
    const std::size_t count = c.values.size();
    if (count == 0) {
        throw std::invalid_argument("summary_statistics: empty C-dataset");
    }
    if (c.n < 1) {
        throw std::invalid_argument("summary_statistics: photon count missing from C-dataset");
    }
    FeatureVector f;
    auto flag = [&f](Stat s) {
        f.degenerate_mask |= static_cast<std::uint16_t>(1u << static_cast<int>(s));
    };
    auto set = [&f](Stat s, double v) { f.values[static_cast<std::size_t>(s)] = v; };

    double mean = 0.0;
    for (double v : c.values) {
        mean += v;
    }
    mean /= static_cast<double>(count);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : c.values) {
        double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(count);
    m3 /= static_cast<double>(count);
    m4 /= static_cast<double>(count);
    double stdev = std::sqrt(m2);

    set(Stat::NM, mean * static_cast<double>(c.m) * static_cast<double>(c.m) /
                      static_cast<double>(c.n));

    if (mean == 0.0) {
        flag(Stat::CV);
    } else {
        set(Stat::CV, stdev / mean);
    }
    if (stdev == 0.0 || mean == 0.0) {
        flag(Stat::S);
    } else {
        set(Stat::S, m3 / (stdev * stdev * stdev));
    }
    if (stdev == 0.0) {
        flag(Stat::K);
    } else {
        set(Stat::K, m4 / (m2 * m2));
    }

    std::vector<double> sorted(c.values);
    std::sort(sorted.begin(), sorted.end());
    double median = detail::percentile(sorted, 0.5);
    set(Stat::M, median);
    set(Stat::IQR, detail::percentile(sorted, 0.75) - detail::percentile(sorted, 0.25));

    std::vector<double> abs_dev(count);
    for (std::size_t i = 0; i < count; ++i) {
        abs_dev[i] = std::abs(c.values[i] - median);
    }
    std::sort(abs_dev.begin(), abs_dev.end());
    set(Stat::MD, detail::percentile(abs_dev, 0.5));

    // |C| based statistics.
    constexpr double kHmFloor = 1e-12;
    double inv_sum = 0.0;
    int included = 0;
    double abs_total = 0.0;
    std::vector<double> abs_vals(count);
    for (std::size_t i = 0; i < count; ++i) {
        double a = std::abs(c.values[i]);
        abs_vals[i] = a;
        abs_total += a;
        if (a >= kHmFloor) {
            inv_sum += 1.0 / a;
            ++included;
        }
    }
    f.hm_excluded = static_cast<int>(count) - included;
    if (included == 0) {
        flag(Stat::HM);
    } else {
        set(Stat::HM, static_cast<double>(included) / inv_sum);
    }

    if (abs_total == 0.0) {
        flag(Stat::TVD);
        flag(Stat::ROC);
    } else {
        const double uniform = 1.0 / static_cast<double>(count);
        double tvd = 0.0;
        for (double a : abs_vals) {
            tvd += std::abs(a / abs_total - uniform);
        }
        set(Stat::TVD, 0.5 * tvd);

        std::sort(abs_vals.begin(), abs_vals.end(), std::greater<double>());
        double cum = 0.0, area = 0.0;
        for (double a : abs_vals) {
            double next = cum + a / abs_total;
            area += 0.5 * (cum + next) * uniform;
            cum = next;
        }
        set(Stat::ROC, area);
    }
    return f;
}

}  // namespace bosonstat

#endif
