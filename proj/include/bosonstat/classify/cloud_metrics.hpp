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

#ifndef BOSONSTAT_CLASSIFY_CLOUD_METRICS_HPP
#define BOSONSTAT_CLASSIFY_CLOUD_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bosonstat/classify/cloud.hpp"
#include "bosonstat/correlators/features.hpp"

namespace bosonstat {

// Overlap measures between two clouds in a 2-D feature plane, computed on
// normalized histograms over a shared bounding box (padded 5% per side).
struct CloudOverlap {
    double tvd = 0.0;         // half L1 distance between the histograms
    double similarity = 0.0;  // Bhattacharyya coefficient sum sqrt(p q)
};

struct PlaneBox {
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
};

namespace detail {

inline PlaneBox shared_box(const Cloud& a, const Cloud& b, Stat fx, Stat fy) {
    PlaneBox box;
    box.x0 = box.y0 = std::numeric_limits<double>::infinity();
    box.x1 = box.y1 = -std::numeric_limits<double>::infinity();
    auto grow = [&](const Cloud& c) {
        for (const auto& p : c.points) {
            box.x0 = std::min(box.x0, p[fx]);
            box.x1 = std::max(box.x1, p[fx]);
            box.y0 = std::min(box.y0, p[fy]);
            box.y1 = std::max(box.y1, p[fy]);
        }
    };
    grow(a);
    grow(b);
    double pad_x = 0.05 * (box.x1 - box.x0);
    double pad_y = 0.05 * (box.y1 - box.y0);
    box.x0 -= pad_x;
    box.x1 += pad_x;
    box.y0 -= pad_y;
    box.y1 += pad_y;
    return box;
}

inline std::vector<double> plane_histogram(const Cloud& c, Stat fx, Stat fy, int bins,
                                           const PlaneBox& box) {
    std::vector<double> h(static_cast<std::size_t>(bins) * static_cast<std::size_t>(bins), 0.0);
    const double wx = box.x1 > box.x0 ? (box.x1 - box.x0) : 1.0;
    const double wy = box.y1 > box.y0 ? (box.y1 - box.y0) : 1.0;
    for (const auto& p : c.points) {
        int ix = static_cast<int>((p[fx] - box.x0) / wx * bins);
        int iy = static_cast<int>((p[fy] - box.y0) / wy * bins);
        ix = std::clamp(ix, 0, bins - 1);
        iy = std::clamp(iy, 0, bins - 1);
        h[static_cast<std::size_t>(iy) * static_cast<std::size_t>(bins) +
          static_cast<std::size_t>(ix)] += 1.0;
    }
    const double total = static_cast<double>(c.points.size());
    for (double& v : h) {
        v /= total;
    }
    return h;
}

}  // namespace detail

inline CloudOverlap cloud_overlap(const Cloud& a, const Cloud& b, Stat fx, Stat fy, int bins) {
    if (bins < 10) {
        throw std::invalid_argument("cloud_overlap: need at least 10 bins per axis");
    }
    if (a.points.empty() || b.points.empty()) {
        throw std::invalid_argument("cloud_overlap: empty cloud");
    }
    PlaneBox box = detail::shared_box(a, b, fx, fy);
    auto ha = detail::plane_histogram(a, fx, fy, bins, box);
    auto hb = detail::plane_histogram(b, fx, fy, bins, box);
    CloudOverlap out;
    for (std::size_t i = 0; i < ha.size(); ++i) {
        out.tvd += std::abs(ha[i] - hb[i]);
        out.similarity += std::sqrt(ha[i] * hb[i]);
    }
    out.tvd *= 0.5;
    return out;
}

// Per-feature mean of a cloud's points.
inline double cloud_mean(const Cloud& c, Stat f) {
    double s = 0.0;
    for (const auto& p : c.points) {
        s += p[f];
    }
    return s / static_cast<double>(c.points.size());
}

// Mean and covariance of a cloud in a 2-D plane, for confidence ellipses.
struct PlaneGaussian {
    double mean_x = 0.0, mean_y = 0.0;
    double var_x = 0.0, var_y = 0.0, cov_xy = 0.0;

    // Mahalanobis distance of a point from the mean.
    double mahalanobis(double x, double y) const {
        double det = var_x * var_y - cov_xy * cov_xy;
        if (det <= 0.0) {
            throw std::invalid_argument("PlaneGaussian: singular covariance");
        }
        double dx = x - mean_x;
        double dy = y - mean_y;
        double q = (var_y * dx * dx - 2.0 * cov_xy * dx * dy + var_x * dy * dy) / det;
        return std::sqrt(q);
    }
};

inline PlaneGaussian plane_gaussian(const Cloud& c, Stat fx, Stat fy) {
    if (c.points.size() < 2) {
        throw std::invalid_argument("plane_gaussian: need at least two points");
    }
    PlaneGaussian g;
    g.mean_x = cloud_mean(c, fx);
    g.mean_y = cloud_mean(c, fy);
    for (const auto& p : c.points) {
        double dx = p[fx] - g.mean_x;
        double dy = p[fy] - g.mean_y;
        g.var_x += dx * dx;
        g.var_y += dy * dy;
        g.cov_xy += dx * dy;
    }
    auto inv = 1.0 / static_cast<double>(c.points.size());
    g.var_x *= inv;
    g.var_y *= inv;
    g.cov_xy *= inv;
    return g;
}

}  // namespace bosonstat

#endif
