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

#ifndef BOSONSTAT_IO_JSON_IO_HPP
#define BOSONSTAT_IO_JSON_IO_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bosonstat/classify/classifiers.hpp"
#include "bosonstat/classify/cloud.hpp"
#include "bosonstat/classify/forest.hpp"
#include "bosonstat/correlators/cdataset.hpp"
#include "bosonstat/correlators/features.hpp"
#include "bosonstat/detector/cascade.hpp"
#include "bosonstat/detector/events.hpp"
#include "bosonstat/linear_optics/distribution.hpp"
#include "bosonstat/linear_optics/mesh.hpp"
#include "bosonstat/linear_optics/unitary.hpp"

namespace bosonstat {

// Raised for malformed or mis-versioned data files (CLI exit code 3), as
// opposed to invalid parameters (exit code 2).
struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

namespace io {

using nlohmann::json;

inline void check_schema(const json& j, const std::string& expected) {
    if (!j.is_object() || !j.contains("schema") || j["schema"] != expected) {
        throw FormatError("expected schema \"" + expected + "\"");
    }
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open file: " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError("invalid JSON in " + path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FormatError("cannot write file: " + path);
    }
    out << text;
}

inline void write_json_file(const std::string& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

// --------------------------------------------------------------------------
// UnitaryMatrix <-> {"schema","dim","re","im"}

inline json unitary_to_json(const UnitaryMatrix& u) {
    const int m = u.dim();
    json re = json::array();
    json im = json::array();
    for (int i = 0; i < m; ++i) {
        json re_row = json::array();
        json im_row = json::array();
        for (int j = 0; j < m; ++j) {
            re_row.push_back(u.mat(i, j).real());
            im_row.push_back(u.mat(i, j).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    return json{{"schema", "unitary/1"}, {"dim", m}, {"re", re}, {"im", im}};
}

inline UnitaryMatrix unitary_from_json(const json& j) {
    check_schema(j, "unitary/1");
    try {
        const int m = j.at("dim").get<int>();
        const auto& re = j.at("re");
        const auto& im = j.at("im");
        Eigen::MatrixXcd mat(m, m);
        for (int i = 0; i < m; ++i) {
            for (int k = 0; k < m; ++k) {
                mat(i, k) = std::complex<double>(re.at(i).at(k).get<double>(),
                                                 im.at(i).at(k).get<double>());
            }
        }
        return UnitaryMatrix::checked(std::move(mat));
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad unitary file: ") + e.what());
    }
}

// --------------------------------------------------------------------------
// Occupation keys: distributions use "n1,n2,...,nm"; event samples use the
// sorted occupied-mode string "k.l.m".

inline std::string occupation_key(const Occupation& occ) {
    std::string s;
    for (std::size_t i = 0; i < occ.size(); ++i) {
        if (i > 0) {
            s += ',';
        }
        s += std::to_string(occ[i]);
    }
    return s;
}

inline Occupation occupation_from_key(const std::string& key, int m, int n) {
    Occupation occ;
    std::istringstream in(key);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        occ.push_back(std::stoi(tok));
    }
    int total = 0;
    for (int c : occ) {
        total += c;
    }
    if (static_cast<int>(occ.size()) != m || total != n) {
        throw FormatError("occupation key \"" + key + "\" does not match (n, m)");
    }
    return occ;
}

inline std::string mode_string(const Occupation& occ) {
    std::string s;
    for (std::size_t mode = 0; mode < occ.size(); ++mode) {
        for (int k = 0; k < occ[mode]; ++k) {
            if (!s.empty()) {
                s += '.';
            }
            s += std::to_string(mode + 1);
        }
    }
    return s;
}

inline Occupation occupation_from_mode_string(const std::string& s, int m) {
    Occupation occ(static_cast<std::size_t>(m), 0);
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, '.')) {
        int mode = std::stoi(tok);
        if (mode < 1 || mode > m) {
            throw FormatError("mode string \"" + s + "\" outside [1, m]");
        }
        occ[static_cast<std::size_t>(mode - 1)] += 1;
    }
    return occ;
}

// --------------------------------------------------------------------------
// OutputDistribution

inline json distribution_to_json(const OutputDistribution& dist) {
    json probs = json::object();
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist.probs[i] != 0.0) {
            probs[occupation_key(dist.space->config(i))] = dist.probs[i];
        }
    }
    return json{{"schema", "distribution/1"},
                {"n", dist.n()},
                {"m", dist.m()},
                {"probs", std::move(probs)}};
}

inline OutputDistribution distribution_from_json(const json& j) {
    check_schema(j, "distribution/1");
    try {
        const int n = j.at("n").get<int>();
        const int m = j.at("m").get<int>();
        auto space = ConfigurationSpace::get(n, m);
        std::vector<double> probs(space->size(), 0.0);
        for (const auto& [key, value] : j.at("probs").items()) {
            probs[space->index_of(occupation_from_key(key, m, n))] = value.get<double>();
        }
        return OutputDistribution::normalized(std::move(space), std::move(probs));
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad distribution file: ") + e.what());
    } catch (const std::logic_error& e) {
        throw FormatError(std::string("bad distribution file: ") + e.what());
    }
}

// --------------------------------------------------------------------------
// EventSample

inline json events_to_json(const EventSample& events) {
    json counts = json::object();
    for (std::size_t i = 0; i < events.weights.size(); ++i) {
        if (events.weights[i] != 0.0) {
            counts[mode_string(events.space->config(i))] = events.weights[i];
        }
    }
    return json{{"schema", "events/1"},
                {"n", events.n()},
                {"m", events.m()},
                {"total", events.total()},
                {"counts", std::move(counts)}};
}

inline EventSample events_from_json(const json& j) {
    check_schema(j, "events/1");
    try {
        const int n = j.at("n").get<int>();
        const int m = j.at("m").get<int>();
        EventSample events = EventSample::empty(n, m);
        for (const auto& [key, value] : j.at("counts").items()) {
            Occupation occ = occupation_from_mode_string(key, m);
            events.weights[events.space->index_of(occ)] += value.get<double>();
        }
        return events;
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad events file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("bad events file: ") + e.what());
    }
}

// --------------------------------------------------------------------------
// CascadeSpec

inline json cascade_to_json(const CascadeSpec& spec) {
    json j{{"schema", "cascade/1"},
           {"first_layer_reflectivity", spec.first_layer_reflectivity},
           {"second_layer_reflectivity", spec.second_layer_reflectivity},
           {"trigger_efficiency", spec.trigger_efficiency}};
    if (!spec.port_efficiencies.empty()) {
        json eta = json::array();
        for (const auto& mode_eta : spec.port_efficiencies) {
            eta.push_back(json::array({mode_eta[0], mode_eta[1], mode_eta[2]}));
        }
        j["port_efficiencies"] = std::move(eta);
    }
    return j;
}

inline CascadeSpec cascade_from_json(const json& j) {
    check_schema(j, "cascade/1");
    try {
        CascadeSpec spec;
        spec.first_layer_reflectivity = j.at("first_layer_reflectivity").get<double>();
        spec.second_layer_reflectivity = j.at("second_layer_reflectivity").get<double>();
        if (j.contains("trigger_efficiency")) {
            spec.trigger_efficiency = j["trigger_efficiency"].get<double>();
        }
        if (j.contains("port_efficiencies")) {
            for (const auto& row : j["port_efficiencies"]) {
                spec.port_efficiencies.push_back(
                    {row.at(0).get<double>(), row.at(1).get<double>(), row.at(2).get<double>()});
            }
        }
        return spec;
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad cascade spec: ") + e.what());
    }
}

// --------------------------------------------------------------------------
// ClickRecord stream (newline-delimited JSON)

inline std::string click_records_to_ndjson(const std::vector<ClickRecord>& records) {
    std::string out;
    for (const auto& rec : records) {
        json ports = json::array();
        for (const auto& [mode, port] : rec.ports) {
            ports.push_back(json::array({mode, port}));
        }
        out += json{{"ports", std::move(ports)}, {"trigger", rec.trigger}}.dump();
        out += '\n';
    }
    return out;
}

inline std::vector<ClickRecord> click_records_from_ndjson(std::istream& in) {
    std::vector<ClickRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        try {
            json j = json::parse(line);
            ClickRecord rec;
            rec.trigger = j.at("trigger").get<bool>();
            for (const auto& pair : j.at("ports")) {
                rec.ports.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
            }
            records.push_back(std::move(rec));
        } catch (const json::exception& e) {
            throw FormatError(std::string("bad click record line: ") + e.what());
        }
    }
    return records;
}

// --------------------------------------------------------------------------
// MeshLayout

inline json layout_to_json(const MeshLayout& layout) {
    json steps = json::array();
    for (const auto& step : layout.steps) {
        json pairs = json::array();
        for (const auto& [a, b] : step) {
            pairs.push_back(json::array({a, b}));
        }
        steps.push_back(std::move(pairs));
    }
    return json{{"schema", "layout/1"},
                {"m", layout.m},
                {"steps", std::move(steps)},
                {"phase_mode",
                 layout.phase_mode == PhaseMode::PerMode ? "per_mode" : "per_coupler"}};
}

inline MeshLayout layout_from_json(const json& j) {
    check_schema(j, "layout/1");
    try {
        MeshLayout layout;
        layout.m = j.at("m").get<int>();
        for (const auto& step : j.at("steps")) {
            std::vector<std::pair<int, int>> pairs;
            for (const auto& pair : step) {
                pairs.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
            }
            layout.steps.push_back(std::move(pairs));
        }
        if (j.contains("phase_mode")) {
            const std::string mode = j["phase_mode"].get<std::string>();
            if (mode == "per_mode") {
                layout.phase_mode = PhaseMode::PerMode;
            } else if (mode == "per_coupler") {
                layout.phase_mode = PhaseMode::PerCoupler;
            } else {
                throw FormatError("unknown phase_mode: " + mode);
            }
        }
        layout.validate();
        return layout;
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad layout file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("bad layout file: ") + e.what());
    }
}

// --------------------------------------------------------------------------
// CDataset / FeatureVector

inline json cdataset_to_json(const CDataset& c) {
    json values = json::object();
    std::size_t idx = 0;
    for (int i = 1; i <= c.m; ++i) {
        for (int j = i + 1; j <= c.m; ++j, ++idx) {
            values[std::to_string(i) + "-" + std::to_string(j)] = c.values[idx];
        }
    }
    return json{{"schema", "cdataset/1"},
                {"m", c.m},
                {"n", c.n},
                {"values", std::move(values)}};
}

inline CDataset cdataset_from_json(const json& j) {
    check_schema(j, "cdataset/1");
    try {
        CDataset c;
        c.m = j.at("m").get<int>();
        c.n = j.at("n").get<int>();
        c.values.assign(static_cast<std::size_t>(c.m) * (c.m - 1) / 2, 0.0);
        for (const auto& [key, value] : j.at("values").items()) {
            auto dash = key.find('-');
            if (dash == std::string::npos) {
                throw FormatError("bad correlator key: " + key);
            }
            int a = std::stoi(key.substr(0, dash));
            int b = std::stoi(key.substr(dash + 1));
            c.values[CDataset::pair_index(a, b, c.m)] = value.get<double>();
        }
        return c;
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad cdataset file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("bad cdataset file: ") + e.what());
    }
}

inline json feature_vector_to_json(const FeatureVector& f) {
    json j = json::object();
    for (int k = 0; k < kStatCount; ++k) {
        j[kStatNames[static_cast<std::size_t>(k)]] = f.at(k);
    }
    if (f.degenerate_mask != 0) {
        json degenerate = json::array();
        for (int k = 0; k < kStatCount; ++k) {
            if (f.is_degenerate(static_cast<Stat>(k))) {
                degenerate.push_back(kStatNames[static_cast<std::size_t>(k)]);
            }
        }
        j["degenerate"] = std::move(degenerate);
    }
    if (f.hm_excluded > 0) {
        j["hm_excluded"] = f.hm_excluded;
    }
    return j;
}

inline FeatureVector feature_vector_from_json(const json& j) {
    try {
        FeatureVector f;
        for (int k = 0; k < kStatCount; ++k) {
            f.values[static_cast<std::size_t>(k)] =
                j.at(kStatNames[static_cast<std::size_t>(k)]).get<double>();
        }
        if (j.contains("degenerate")) {
            for (const auto& name : j["degenerate"]) {
                f.degenerate_mask |= static_cast<std::uint16_t>(
                    1u << stat_index(name.get<std::string>()));
            }
        }
        if (j.contains("hm_excluded")) {
            f.hm_excluded = j["hm_excluded"].get<int>();
        }
        return f;
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad feature vector: ") + e.what());
    }
}

// --------------------------------------------------------------------------
// Cloud

inline json cloud_to_json(const Cloud& cloud) {
    json points = json::array();
    for (const auto& p : cloud.points) {
        points.push_back(feature_vector_to_json(p));
    }
    return json{{"schema", "cloud/1"},   {"label", cloud.label}, {"ensemble", cloud.ensemble},
                {"n", cloud.n},          {"m", cloud.m},         {"seed", cloud.seed},
                {"points", std::move(points)}};
}

inline Cloud cloud_from_json(const json& j) {
    check_schema(j, "cloud/1");
    try {
        Cloud cloud;
        cloud.label = j.at("label").get<std::string>();
        cloud.ensemble = j.at("ensemble").get<std::string>();
        cloud.n = j.at("n").get<int>();
        cloud.m = j.at("m").get<int>();
        cloud.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& p : j.at("points")) {
            cloud.points.push_back(feature_vector_from_json(p));
        }
        return cloud;
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad cloud file: ") + e.what());
    }
}

// --------------------------------------------------------------------------
// Classifier models

inline json standardizer_to_json(const Standardizer& s) {
    json features = json::array();
    for (int f : s.features) {
        features.push_back(kStatNames[static_cast<std::size_t>(f)]);
    }
    return json{{"features", std::move(features)}, {"mean", s.mean}, {"std", s.stdev}};
}

inline Standardizer standardizer_from_json(const json& j) {
    Standardizer s;
    for (const auto& name : j.at("features")) {
        s.features.push_back(stat_index(name.get<std::string>()));
    }
    s.mean = j.at("mean").get<std::vector<double>>();
    s.stdev = j.at("std").get<std::vector<double>>();
    return s;
}

inline json centroid_model_to_json(const NearestCentroidModel& m) {
    return json{{"schema", "model/1"},
                {"kind", "centroid"},
                {"standardizer", standardizer_to_json(m.standardizer)},
                {"labels", m.labels},
                {"centroids", m.centroids}};
}

inline json knn_model_to_json(const KnnModel& m) {
    return json{{"schema", "model/1"},
                {"kind", "knn"},
                {"standardizer", standardizer_to_json(m.standardizer)},
                {"labels", m.labels},
                {"k", m.k},
                {"points", m.points},
                {"point_labels", m.point_label}};
}

inline json svm_model_to_json(const LinearSvmModel& m) {
    return json{{"schema", "model/1"},
                {"kind", "svm"},
                {"standardizer", standardizer_to_json(m.standardizer)},
                {"labels", m.labels},
                {"weights", m.weights},
                {"bias", m.bias}};
}

inline json rf_model_to_json(const RandomForestModel& m) {
    json features = json::array();
    for (int f : m.features) {
        features.push_back(kStatNames[static_cast<std::size_t>(f)]);
    }
    json trees = json::array();
    for (const auto& tree : m.trees) {
        json nodes = json::array();
        for (const auto& node : tree.nodes) {
            nodes.push_back(json::array({node.feature, node.threshold, node.left, node.right,
                                         node.label, node.sample_count, node.impurity_decrease}));
        }
        trees.push_back(json{{"nodes", std::move(nodes)}, {"bag", tree.bag}});
    }
    return json{{"schema", "model/1"},    {"kind", "rf"},
                {"features", features},  {"labels", m.labels},
                {"bag_fraction", m.bag_fraction}, {"features_per_split", m.features_per_split},
                {"seed", m.seed},        {"trees", std::move(trees)}};
}

inline RandomForestModel rf_model_from_json(const json& j) {
    check_schema(j, "model/1");
    try {
        RandomForestModel m;
        for (const auto& name : j.at("features")) {
            m.features.push_back(stat_index(name.get<std::string>()));
        }
        m.labels = j.at("labels").get<std::vector<std::string>>();
        m.bag_fraction = j.at("bag_fraction").get<double>();
        m.features_per_split = j.at("features_per_split").get<int>();
        m.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& tj : j.at("trees")) {
            DecisionTree tree;
            for (const auto& nj : tj.at("nodes")) {
                TreeNode node;
                node.feature = nj.at(0).get<int>();
                node.threshold = nj.at(1).get<double>();
                node.left = nj.at(2).get<std::int32_t>();
                node.right = nj.at(3).get<std::int32_t>();
                node.label = nj.at(4).get<std::int32_t>();
                node.sample_count = nj.at(5).get<std::int32_t>();
                node.impurity_decrease = nj.at(6).get<double>();
                tree.nodes.push_back(node);
            }
            tree.bag = tj.at("bag").get<std::vector<std::uint32_t>>();
            m.trees.push_back(std::move(tree));
        }
        return m;
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad forest model: ") + e.what());
    }
}

}  // namespace io
}  // namespace bosonstat

#endif
