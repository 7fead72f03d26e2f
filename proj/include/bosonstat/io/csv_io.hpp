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

#ifndef BOSONSTAT_IO_CSV_IO_HPP
#define BOSONSTAT_IO_CSV_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bosonstat/classify/transition.hpp"
#include "bosonstat/correlators/resource.hpp"
#include "bosonstat/detector/events.hpp"
#include "bosonstat/io/json_io.hpp"

namespace bosonstat::io {

// Shortest representation that round-trips the double exactly.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double parsed = std::strtod(buf, nullptr);
    if (parsed == v) {
        for (int precision = 1; precision < 17; ++precision) {
            char shorter[32];
            std::snprintf(shorter, sizeof(shorter), "%.*g", precision, v);
            if (std::strtod(shorter, nullptr) == v) {
                return shorter;
            }
        }
    }
    return buf;
}

// EventSample rows are "config,count" with config the sorted occupied-mode
// string "k.l.m"; zero-count configurations are omitted.
inline std::string events_to_csv(const EventSample& events) {
    std::string out = "config,count\n";
    for (std::size_t i = 0; i < events.weights.size(); ++i) {
        if (events.weights[i] != 0.0) {
            out += mode_string(events.space->config(i));
            out += ',';
            out += format_double(events.weights[i]);
            out += '\n';
        }
    }
    return out;
}

inline EventSample events_from_csv(std::istream& in, int n, int m) {
    EventSample events = EventSample::empty(n, m);
    std::string line;
    if (!std::getline(in, line) || line.rfind("config,count", 0) != 0) {
        throw FormatError("events CSV must start with header \"config,count\"");
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw FormatError("events CSV row missing comma: " + line);
        }
        Occupation occ = occupation_from_mode_string(line.substr(0, comma), m);
        int total = 0;
        for (int c : occ) {
            total += c;
        }
        if (total != n) {
            throw FormatError("events CSV row has wrong photon count: " + line);
        }
        events.weights[events.space->index_of(occ)] += std::stod(line.substr(comma + 1));
    }
    return events;
}

inline std::string scan_to_csv(const std::vector<ScanRow>& rows) {
    std::string out = "size,mean_nm,mean_cv,std_nm,std_cv\n";
    for (const auto& r : rows) {
        out += std::to_string(r.size) + ',' + format_double(r.mean_nm) + ',' +
               format_double(r.mean_cv) + ',' + format_double(r.std_nm) + ',' +
               format_double(r.std_cv) + '\n';
    }
    return out;
}

inline std::string subsets_to_csv(const ModeSubsetAnalysis& analysis) {
    std::string out = "subset,size,nm,cv,kept_fraction\n";
    for (const auto& p : analysis.points) {
        std::string modes;
        for (std::size_t i = 0; i < p.modes.size(); ++i) {
            if (i > 0) {
                modes += '.';
            }
            modes += std::to_string(p.modes[i]);
        }
        out += modes + ',' + std::to_string(p.modes.size()) + ',' + format_double(p.nm) + ',' +
               format_double(p.cv) + ',' + format_double(p.kept_fraction) + '\n';
    }
    out += "# per-size summary: size,mean_nm,mean_cv,std_nm,std_cv,used,excluded\n";
    for (const auto& s : analysis.per_size) {
        out += std::to_string(s.size) + ',' + format_double(s.mean_nm) + ',' +
               format_double(s.mean_cv) + ',' + format_double(s.std_nm) + ',' +
               format_double(s.std_cv) + ',' + std::to_string(s.subsets_used) + ',' +
               std::to_string(s.subsets_excluded) + '\n';
    }
    return out;
}

inline std::string transition_to_csv(const std::vector<TransitionPoint>& points) {
    std::string out = "delta,centroid_nm,centroid_cv,tvd,similarity\n";
    for (const auto& p : points) {
        out += format_double(p.delta) + ',' + format_double(p.centroid_nm) + ',' +
               format_double(p.centroid_cv) + ',' + format_double(p.tvd) + ',' +
               format_double(p.similarity) + '\n';
    }
    return out;
}

inline std::string misassignment_to_csv(const std::vector<MisassignmentPoint>& points) {
    std::string out = "beta,one_minus_beta,p_to_i,std\n";
    for (const auto& p : points) {
        out += format_double(p.beta) + ',' + format_double(1.0 - p.beta) + ',' +
               format_double(p.p_to_indistinguishable) + ',' +
               format_double(p.std_across_trainings) + '\n';
    }
    return out;
}

inline std::string importance_to_csv(const std::vector<std::pair<int, double>>& ranking) {
    std::string out = "rank,feature,mdi\n";
    int rank = 1;
    for (const auto& [feature, score] : ranking) {
        out += std::to_string(rank++) + ',' +
               kStatNames[static_cast<std::size_t>(feature)] + ',' + format_double(score) + '\n';
    }
    return out;
}

}  // namespace bosonstat::io

#endif
