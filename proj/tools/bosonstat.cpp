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
//
// bosonstat command-line tool: simulation, detection and classification
// pipeline for multi-photon interference statistics.
//
// Exit codes: 0 success, 2 usage/config error, 3 data/format error,
// 4 internal invariant violation.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bosonstat/classify/classifiers.hpp"
#include "bosonstat/classify/cloud.hpp"
#include "bosonstat/classify/cloud_metrics.hpp"
#include "bosonstat/classify/forest.hpp"
#include "bosonstat/classify/transition.hpp"
#include "bosonstat/correlators/cdataset.hpp"
#include "bosonstat/correlators/features.hpp"
#include "bosonstat/correlators/resource.hpp"
#include "bosonstat/detector/cascade.hpp"
#include "bosonstat/detector/events.hpp"
#include "bosonstat/io/csv_io.hpp"
#include "bosonstat/io/json_io.hpp"
#include "bosonstat/io/manifest.hpp"
#include "bosonstat/linear_optics/haar.hpp"
#include "bosonstat/linear_optics/mesh.hpp"
#include "bosonstat/linear_optics/photon_laws.hpp"

namespace fs = std::filesystem;
using bosonstat::io::json;

namespace bosonstat::cli {

// Config-level problem: wrong flag values, malformed layout, bad model
// parameters. Maps to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct GlobalOptions {
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string out_dir = ".";
    std::string format = "json";
};

std::string out_path(const GlobalOptions& global, const std::string& name) {
    fs::create_directories(global.out_dir);
    return (fs::path(global.out_dir) / name).string();
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::string token;
    for (char c : text + ",") {
        if (c == ',') {
            if (!token.empty()) {
                out.push_back(std::stoi(token));
                token.clear();
            }
        } else {
            token += c;
        }
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::string token;
    for (char c : text + ",") {
        if (c == ',') {
            if (!token.empty()) {
                out.push_back(std::stod(token));
                token.clear();
            }
        } else {
            token += c;
        }
    }
    return out;
}

// "a:b:step" inclusive grid, or a plain comma list.
std::vector<double> parse_grid(const std::string& text) {
    if (text.find(':') == std::string::npos) {
        return parse_double_list(text);
    }
    auto first = text.find(':');
    auto second = text.find(':', first + 1);
    if (second == std::string::npos) {
        throw ConfigError("grid must be start:stop:step or a comma list");
    }
    double start = std::stod(text.substr(0, first));
    double stop = std::stod(text.substr(first + 1, second - first - 1));
    double step = std::stod(text.substr(second + 1));
    if (step <= 0.0) {
        throw ConfigError("grid step must be positive");
    }
    std::vector<double> out;
    for (double v = start; v <= stop + 1e-12; v += step) {
        out.push_back(std::min(v, stop));
    }
    return out;
}

MeshLayout load_layout(const std::string& spec) {
    if (spec == "default7" || spec.empty()) {
        return MeshLayout::default_7mode();
    }
    try {
        return io::layout_from_json(io::load_json_file(spec));
    } catch (const FormatError& e) {
        // A layout is configuration, not data: report it as a config error.
        throw ConfigError(e.what());
    }
}

EnsembleSpec make_ensemble(const std::string& kind, const std::string& layout_spec, int m,
                           std::optional<bool> vary_input) {
    if (kind == "haar") {
        EnsembleSpec e = EnsembleSpec::haar(m);
        e.vary_input = vary_input.value_or(false);
        return e;
    }
    if (kind == "structured") {
        EnsembleSpec e = EnsembleSpec::structured(load_layout(layout_spec));
        e.vary_input = vary_input.value_or(true);
        return e;
    }
    throw ConfigError("unknown ensemble: " + kind);
}

struct ModelFlags {
    std::string model = "indistinguishable";
    std::string grouping;
    std::string delta;
    double beta = -1.0;

    DistinguishabilityModel build(int n) const {
        if (model == "indistinguishable") {
            return Indistinguishable{};
        }
        if (model == "distinguishable") {
            return Distinguishable{};
        }
        if (model == "grouping") {
            if (grouping.empty()) {
                throw ConfigError("--model grouping requires --grouping \"1,3;2\"");
            }
            return Grouping{parse_partition(grouping)};
        }
        if (model == "delta") {
            if (delta.empty()) {
                throw ConfigError("--model delta requires --delta (scalar or comma list)");
            }
            auto values = parse_double_list(delta);
            if (values.size() == 1) {
                values.assign(static_cast<std::size_t>(n), values[0]);
            }
            return DeltaMixture{values};
        }
        if (model == "beta") {
            if (beta < 0.0) {
                throw ConfigError("--model beta requires --beta");
            }
            Partition part = grouping.empty() ? Partition{{1, 3}, {2}} : parse_partition(grouping);
            return BetaMixture{beta, part};
        }
        throw ConfigError("unknown model: " + model);
    }

    json to_json() const {
        json j{{"model", model}};
        if (!grouping.empty()) {
            j["grouping"] = grouping;
        }
        if (!delta.empty()) {
            j["delta"] = delta;
        }
        if (beta >= 0.0) {
            j["beta"] = beta;
        }
        return j;
    }
};

EventSample load_events(const std::string& path, int n, int m) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
        if (n < 1 || m < 1) {
            throw ConfigError("CSV event files need --n and --m");
        }
        std::ifstream in(path);
        if (!in) {
            throw FormatError("cannot open file: " + path);
        }
        return io::events_from_csv(in, n, m);
    }
    return io::events_from_json(io::load_json_file(path));
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_gen_unitary(const GlobalOptions& global, const std::string& ensemble, int m,
                    const std::string& layout_spec, const std::string& out_name) {
    UnitaryMatrix u;
    json config{{"command", "gen-unitary"}, {"ensemble", ensemble}, {"seed", global.seed}};
    if (ensemble == "haar") {
        if (m < 2) {
            throw ConfigError("--m must be >= 2");
        }
        u = haar_random_unitary(m, global.seed);
        config["m"] = m;
    } else if (ensemble == "structured") {
        MeshLayout layout = load_layout(layout_spec);
        u = structured_random_unitary(layout, global.seed);
        config["layout"] = io::layout_to_json(layout);
    } else {
        throw ConfigError("unknown ensemble: " + ensemble);
    }
    if (!u.is_unitary()) {
        throw std::logic_error("generated matrix failed the unitarity check");
    }
    std::string path = out_path(global, out_name);
    io::write_json_file(path, io::unitary_to_json(u));
    io::ManifestWriter manifest("gen-unitary", config);
    manifest.add_output(path);
    manifest.write(path + ".manifest.json");
    std::cout << "wrote " << path << " (dim " << u.dim() << ", unitarity error "
              << u.unitarity_error() << ")\n";
    return 0;
}

int cmd_simulate(const GlobalOptions& global, const std::string& unitary_path,
                 const std::string& input_spec, const ModelFlags& model_flags,
                 bool collision_free_only, const std::string& out_name) {
    UnitaryMatrix u = io::unitary_from_json(io::load_json_file(unitary_path));
    std::vector<int> modes = parse_int_list(input_spec);
    InputState input = InputState::of(modes, u.dim());
    DistinguishabilityModel model = model_flags.build(input.n());
    OutputDistribution dist = mixture_distribution(u, input, model);

    std::cout << dist.size() << " configurations (n=" << dist.n() << ", m=" << dist.m() << ")\n";
    std::cout << "normalization residual " << dist.normalization_residual() << "\n";

    json dist_json;
    if (collision_free_only) {
        std::size_t kept = 0;
        double mass = 0.0;
        std::vector<double> probs(dist.size(), 0.0);
        for (std::size_t i = 0; i < dist.size(); ++i) {
            if (is_collision_free(dist.space->config(i))) {
                probs[i] = dist.probs[i];
                mass += dist.probs[i];
                ++kept;
            }
        }
        std::cout << kept << " collision-free configurations (of " << dist.size() << ")\n";
        if (mass <= 0.0) {
            throw std::logic_error("no probability mass on collision-free configurations");
        }
        for (double& p : probs) {
            p /= mass;
        }
        OutputDistribution restricted{dist.space, std::move(probs)};
        dist_json = io::distribution_to_json(restricted);
        dist_json["postselection"] = "collision-free";
    } else {
        dist_json = io::distribution_to_json(dist);
    }

    std::string path = out_path(global, out_name);
    io::write_json_file(path, dist_json);
    json config{{"command", "simulate"},
                {"unitary", unitary_path},
                {"input", input_spec},
                {"model", model_flags.to_json()},
                {"collision_free_only", collision_free_only}};
    io::ManifestWriter manifest("simulate", config);
    manifest.add_input(unitary_path);
    manifest.add_output(path);
    manifest.write(path + ".manifest.json");
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_sample(const GlobalOptions& global, const std::string& dist_path, std::int64_t count,
               const std::string& out_name) {
    OutputDistribution dist = io::distribution_from_json(io::load_json_file(dist_path));
    EventSample events = sample_events(dist, count, global.seed);
    std::string path = out_path(global, out_name);
    if (global.format == "csv") {
        io::write_text_file(path, io::events_to_csv(events));
    } else {
        io::write_json_file(path, io::events_to_json(events));
    }
    json config{{"command", "sample"},
                {"dist", dist_path},
                {"count", count},
                {"seed", global.seed},
                {"format", global.format}};
    io::ManifestWriter manifest("sample", config);
    manifest.add_input(dist_path);
    manifest.add_output(path);
    manifest.write(path + ".manifest.json");
    std::cout << "wrote " << path << " (" << events.total() << " events)\n";
    return 0;
}

CascadeSpec load_cascade_spec(const std::string& spec_path) {
    if (spec_path.empty()) {
        return CascadeSpec{};
    }
    return io::cascade_from_json(io::load_json_file(spec_path));
}

int cmd_cascade(const GlobalOptions& global, const std::string& events_path,
                const std::string& spec_path, double trigger_override, int n, int m,
                const std::string& out_name) {
    EventSample events = load_events(events_path, n, m);
    CascadeSpec spec = load_cascade_spec(spec_path);
    if (trigger_override >= 0.0) {
        spec.trigger_efficiency = trigger_override;
    }
    auto p = spec.port_probabilities();
    std::cout << "cascade: r1=" << spec.first_layer_reflectivity
              << ", r2=" << spec.second_layer_reflectivity << ", port probabilities (" << p[0]
              << ", " << p[1] << ", " << p[2] << ")\n";
    auto records = route_through_cascade(events, spec, global.seed);
    std::string path = out_path(global, out_name);
    io::write_text_file(path, io::click_records_to_ndjson(records));
    json config{{"command", "cascade"},
                {"events", events_path},
                {"spec", spec_path.empty() ? "defaults" : spec_path},
                {"seed", global.seed}};
    io::ManifestWriter manifest("cascade", config);
    manifest.add_input(events_path);
    if (!spec_path.empty()) {
        manifest.add_input(spec_path);
    }
    manifest.add_output(path);
    manifest.write(path + ".manifest.json");
    std::cout << "wrote " << path << " (" << records.size() << " click records)\n";
    return 0;
}

int cmd_reconstruct(const GlobalOptions& global, const std::string& clicks_path,
                    const std::string& spec_path, int n, int m, const std::string& out_name) {
    if (n < 1 || m < 1) {
        throw ConfigError("reconstruct needs --n and --m");
    }
    std::ifstream in(clicks_path);
    if (!in) {
        throw FormatError("cannot open file: " + clicks_path);
    }
    auto records = io::click_records_from_ndjson(in);
    CascadeSpec spec = load_cascade_spec(spec_path);
    ReconstructionReport report;
    EventSample corrected = reconstruct_counts(records, spec, n, m, &report);
    std::cout << "accepted " << report.accepted << " records, dropped "
              << report.dropped_no_trigger << " without trigger, "
              << report.dropped_wrong_multiplicity << " with wrong click multiplicity\n";
    if (report.accepted == 0) {
        std::cout << "warning: zero postselected events\n";
    }
    std::string path = out_path(global, out_name);
    io::write_json_file(path, io::events_to_json(corrected));
    json config{{"command", "reconstruct"},
                {"clicks", clicks_path},
                {"spec", spec_path.empty() ? "defaults" : spec_path},
                {"n", n},
                {"m", m}};
    io::ManifestWriter manifest("reconstruct", config);
    manifest.add_input(clicks_path);
    if (!spec_path.empty()) {
        manifest.add_input(spec_path);
    }
    manifest.add_output(path);
    manifest.write(path + ".manifest.json");
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_analyze(const GlobalOptions& global, const std::string& events_path,
                const std::string& dist_path, const std::string& against_path, int bootstrap,
                const std::string& subset_scan, const std::string& size_scan, int n, int m) {
    io::ManifestWriter manifest("analyze", json{{"command", "analyze"},
                                                {"events", events_path},
                                                {"dist", dist_path},
                                                {"against", against_path},
                                                {"bootstrap", bootstrap},
                                                {"subset_scan", subset_scan},
                                                {"size_scan", size_scan},
                                                {"seed", global.seed}});
    std::optional<EventSample> events;
    CDataset cdataset;
    if (!events_path.empty()) {
        events = load_events(events_path, n, m);
        manifest.add_input(events_path);
        cdataset = cdataset_estimate(*events);
    } else if (!dist_path.empty()) {
        OutputDistribution dist = io::distribution_from_json(io::load_json_file(dist_path));
        manifest.add_input(dist_path);
        cdataset = cdataset_exact(dist);
    } else {
        throw ConfigError("analyze needs --events or --dist");
    }
    FeatureVector features = summary_statistics(cdataset);
    std::cout << cdataset.size() << " correlators (m=" << cdataset.m << ")\n";

    std::string cdataset_path = out_path(global, "cdataset.json");
    io::write_json_file(cdataset_path, io::cdataset_to_json(cdataset));
    manifest.add_output(cdataset_path);
    std::string features_path = out_path(global, "features.json");
    io::write_json_file(features_path, io::feature_vector_to_json(features));
    manifest.add_output(features_path);

    if (!against_path.empty()) {
        OutputDistribution reference =
            io::distribution_from_json(io::load_json_file(against_path));
        manifest.add_input(against_path);
        if (!events) {
            throw ConfigError("--against requires --events");
        }
        std::cout << "TVD against reference distribution: "
                  << total_variation_distance(*events, reference) << "\n";
    }

    if (bootstrap > 0) {
        if (!events) {
            throw ConfigError("--bootstrap requires --events");
        }
        auto replicates = bootstrap_resample(*events, bootstrap, global.seed);
        std::vector<double> c_mean(cdataset.size(), 0.0), c_sq(cdataset.size(), 0.0);
        std::array<double, kStatCount> f_mean{}, f_sq{};
        for (const auto& rep : replicates) {
            CDataset rc = cdataset_estimate(rep);
            FeatureVector rf = summary_statistics(rc);
            for (std::size_t i = 0; i < rc.values.size(); ++i) {
                c_mean[i] += rc.values[i];
                c_sq[i] += rc.values[i] * rc.values[i];
            }
            for (int k = 0; k < kStatCount; ++k) {
                f_mean[static_cast<std::size_t>(k)] += rf.at(k);
                f_sq[static_cast<std::size_t>(k)] += rf.at(k) * rf.at(k);
            }
        }
        json c_err = json::object();
        std::size_t idx = 0;
        for (int i = 1; i <= cdataset.m; ++i) {
            for (int j = i + 1; j <= cdataset.m; ++j, ++idx) {
                double mean = c_mean[idx] / bootstrap;
                double var = c_sq[idx] / bootstrap - mean * mean;
                c_err[std::to_string(i) + "-" + std::to_string(j)] =
                    std::sqrt(std::max(0.0, var));
            }
        }
        json f_err = json::object();
        for (int k = 0; k < kStatCount; ++k) {
            double mean = f_mean[static_cast<std::size_t>(k)] / bootstrap;
            double var = f_sq[static_cast<std::size_t>(k)] / bootstrap - mean * mean;
            f_err[kStatNames[static_cast<std::size_t>(k)]] = std::sqrt(std::max(0.0, var));
        }
        std::string bootstrap_path = out_path(global, "bootstrap.json");
        io::write_json_file(bootstrap_path, json{{"schema", "bootstrap/1"},
                                                 {"replicates", bootstrap},
                                                 {"correlator_std", c_err},
                                                 {"feature_std", f_err}});
        manifest.add_output(bootstrap_path);
        std::cout << "bootstrap error bars over " << bootstrap << " replicates written\n";
    }

    if (!subset_scan.empty()) {
        if (!events) {
            throw ConfigError("--subset-scan requires --events");
        }
        auto analysis = mode_subset_analysis(*events, parse_int_list(subset_scan));
        std::string path = out_path(global, "subsets.csv");
        io::write_text_file(path, io::subsets_to_csv(analysis));
        manifest.add_output(path);
        std::cout << "wrote " << path << "\n";
    }

    if (!size_scan.empty()) {
        if (!events) {
            throw ConfigError("--size-scan requires --events");
        }
        auto x = size_scan.find('x');
        if (x == std::string::npos) {
            throw ConfigError("--size-scan expects STEPxEXTRACTIONS, e.g. 200x300");
        }
        int step = std::stoi(size_scan.substr(0, x));
        int extractions = std::stoi(size_scan.substr(x + 1));
        auto rows = sample_size_scan(*events, step, extractions, global.seed);
        std::string path = out_path(global, "size_scan.csv");
        io::write_text_file(path, io::scan_to_csv(rows));
        manifest.add_output(path);
        std::cout << "wrote " << path << "\n";
    }

    manifest.write(out_path(global, "analyze.manifest.json"));
    return 0;
}

int cmd_cloud(const GlobalOptions& global, const std::string& ensemble_kind,
              const std::string& layout_spec, int m, const std::string& input_spec,
              const ModelFlags& model_flags, int count, const std::string& label,
              std::optional<bool> vary_input, const std::string& out_name) {
    EnsembleSpec ensemble = make_ensemble(ensemble_kind, layout_spec, m, vary_input);
    std::vector<int> modes = parse_int_list(input_spec);
    InputState input = InputState::of(modes, ensemble.modes());
    DistinguishabilityModel model = model_flags.build(input.n());
    Cloud cloud = generate_cloud(ensemble, model, input, count, global.seed,
                                 label.empty() ? model_tag(model) : label, global.jobs);
    std::string path = out_path(global, out_name);
    io::write_json_file(path, io::cloud_to_json(cloud));
    json config{{"command", "cloud"},  {"ensemble", ensemble.id()},
                {"input", input_spec}, {"model", model_flags.to_json()},
                {"count", count},      {"label", cloud.label},
                {"seed", global.seed}};
    io::ManifestWriter manifest("cloud", config);
    manifest.add_output(path);
    manifest.write(path + ".manifest.json");
    std::cout << "wrote " << path << " (" << cloud.count() << " points, label " << cloud.label
              << ")\n";
    return 0;
}

std::vector<std::string> parse_name_list(const std::string& text) {
    std::vector<std::string> names;
    std::string token;
    for (char c : text + ",") {
        if (c == ',') {
            if (!token.empty()) {
                names.push_back(token);
                token.clear();
            }
        } else {
            token += c;
        }
    }
    return names;
}

int cmd_classify(const GlobalOptions& global, const std::string& method,
                 const std::vector<std::string>& train_paths,
                 const std::vector<std::string>& test_paths, const std::string& features_spec,
                 int k, double svm_c, int epochs, int trees, double bag_fraction,
                 int features_per_split) {
    if (train_paths.size() < 2) {
        throw ConfigError("classify needs at least two --train cloud files");
    }
    std::vector<Cloud> train;
    for (const auto& path : train_paths) {
        train.push_back(io::cloud_from_json(io::load_json_file(path)));
    }
    FeatureSubset features;
    if (features_spec == "all" || (features_spec.empty() && method == "rf")) {
        features = all_features();
    } else if (features_spec.empty()) {
        features = nm_cv_plane();
    } else {
        for (const auto& name : parse_name_list(features_spec)) {
            features.push_back(stat_index(name));
        }
    }

    ClassifierFn classifier;
    json model_json;
    if (method == "centroid") {
        auto model = nearest_centroid_train(train, features);
        model_json = io::centroid_model_to_json(model);
        classifier = [model](const FeatureVector& p) { return model.classify(p); };
    } else if (method == "knn") {
        auto model = knn_train(train, k, features);
        model_json = io::knn_model_to_json(model);
        classifier = [model](const FeatureVector& p) { return model.classify(p); };
    } else if (method == "svm") {
        auto model = svm_train_linear(train, features, svm_c, epochs, global.seed);
        model_json = io::svm_model_to_json(model);
        classifier = [model](const FeatureVector& p) { return model.classify(p); };
    } else if (method == "rf") {
        auto model =
            rf_train(train, trees, bag_fraction, features_per_split, global.seed, features);
        model_json = io::rf_model_to_json(model);
        std::cout << "out-of-bag error: " << rf_oob_error(model, train) << "\n";
        classifier = [model](const FeatureVector& p) { return model.classify(p); };
    } else {
        throw ConfigError("unknown method: " + method);
    }

    std::string model_path = out_path(global, "model.json");
    io::write_json_file(model_path, model_json);
    io::ManifestWriter manifest("classify", json{{"command", "classify"},
                                                 {"method", method},
                                                 {"train", train_paths},
                                                 {"test", test_paths},
                                                 {"seed", global.seed}});
    for (const auto& path : train_paths) {
        manifest.add_input(path);
    }
    manifest.add_output(model_path);

    if (!test_paths.empty()) {
        std::vector<Cloud> tests;
        for (const auto& path : test_paths) {
            tests.push_back(io::cloud_from_json(io::load_json_file(path)));
            manifest.add_input(path);
        }
        std::string assign_csv = "cloud,index,label,assigned\n";
        for (std::size_t c = 0; c < tests.size(); ++c) {
            for (std::size_t i = 0; i < tests[c].points.size(); ++i) {
                assign_csv += std::to_string(c) + ',' + std::to_string(i) + ',' + tests[c].label +
                              ',' + classifier(tests[c].points[i]) + '\n';
            }
        }
        std::string assign_path = out_path(global, "assignments.csv");
        io::write_text_file(assign_path, assign_csv);
        manifest.add_output(assign_path);
        std::cout << "wrote " << assign_path << "\n";
        if (tests.size() == 2 && tests[0].label != tests[1].label) {
            std::cout << "P_err = " << error_probability(classifier, tests[0], tests[1]) << "\n";
        }
    }
    manifest.write(model_path + ".manifest.json");
    std::cout << "wrote " << model_path << "\n";
    return 0;
}

int cmd_importance(const GlobalOptions& global, const std::vector<std::string>& train_paths,
                   int extractions, int train_size, int trees, double bag_fraction,
                   int features_per_split) {
    if (train_paths.size() != 2) {
        throw ConfigError("importance needs exactly two --train cloud files");
    }
    std::vector<Cloud> clouds;
    for (const auto& path : train_paths) {
        clouds.push_back(io::cloud_from_json(io::load_json_file(path)));
    }
    std::vector<double> mean_scores(kStatCount, 0.0);
    for (int r = 0; r < extractions; ++r) {
        std::vector<Cloud> extraction;
        for (const auto& cloud : clouds) {
            if (train_size >= cloud.count()) {
                extraction.push_back(cloud);
                continue;
            }
            std::vector<std::uint32_t> index(cloud.points.size());
            std::iota(index.begin(), index.end(), 0u);
            Rng rng(derive_seed(global.seed, "importance-extraction",
                                (static_cast<std::uint64_t>(r) << 8) ^ fnv1a64(cloud.label)));
            rng.partial_shuffle(index, static_cast<std::size_t>(train_size));
            Cloud sub = cloud;
            sub.points.clear();
            for (int i = 0; i < train_size; ++i) {
                sub.points.push_back(cloud.points[index[static_cast<std::size_t>(i)]]);
            }
            extraction.push_back(std::move(sub));
        }
        auto model =
            rf_train(extraction, trees, bag_fraction, features_per_split,
                     derive_seed(global.seed, "importance-forest", static_cast<std::uint64_t>(r)));
        auto scores = rf_feature_importance(model);
        for (std::size_t i = 0; i < scores.size(); ++i) {
            mean_scores[i] += scores[i];
        }
    }
    for (double& s : mean_scores) {
        s /= extractions;
    }
    std::vector<std::pair<int, double>> ranking;
    for (int f = 0; f < kStatCount; ++f) {
        ranking.emplace_back(f, mean_scores[static_cast<std::size_t>(f)]);
    }
    std::stable_sort(ranking.begin(), ranking.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::string path = out_path(global, "importance.csv");
    io::write_text_file(path, io::importance_to_csv(ranking));
    io::ManifestWriter manifest("importance", json{{"command", "importance"},
                                                   {"train", train_paths},
                                                   {"extractions", extractions},
                                                   {"train_size", train_size},
                                                   {"trees", trees},
                                                   {"seed", global.seed}});
    for (const auto& p : train_paths) {
        manifest.add_input(p);
    }
    manifest.add_output(path);
    manifest.write(path + ".manifest.json");
    for (const auto& [feature, score] : ranking) {
        std::cout << kStatNames[static_cast<std::size_t>(feature)] << " " << score << "\n";
    }
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_transition(const GlobalOptions& global, const std::string& ensemble_kind,
                   const std::string& layout_spec, int m, const std::string& input_spec,
                   const std::string& grid_spec, int count, int bins, int tuned_photon) {
    EnsembleSpec ensemble = make_ensemble(ensemble_kind, layout_spec, m, std::nullopt);
    InputState input = InputState::of(parse_int_list(input_spec), ensemble.modes());
    TransitionOptions options;
    options.count = count;
    options.bins = bins;
    options.tuned_photon = tuned_photon;
    options.jobs = global.jobs;
    auto points =
        transition_analysis(ensemble, input, parse_grid(grid_spec), options, global.seed);
    std::string path = out_path(global, "transition.csv");
    io::write_text_file(path, io::transition_to_csv(points));
    io::ManifestWriter manifest("transition", json{{"command", "transition"},
                                                   {"ensemble", ensemble.id()},
                                                   {"input", input_spec},
                                                   {"grid", grid_spec},
                                                   {"count", count},
                                                   {"bins", bins},
                                                   {"tuned_photon", tuned_photon},
                                                   {"seed", global.seed}});
    manifest.add_output(path);
    manifest.write(path + ".manifest.json");
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_misassignment(const GlobalOptions& global, const std::string& pairing,
                      const std::string& layout_spec, int m, const std::string& input_spec,
                      const std::string& grid_spec, int training_sets, int training_size,
                      int samples, const std::string& grouping_spec) {
    EnsembleSpec train_ens, sample_ens;
    if (pairing == "haar-haar") {
        train_ens = EnsembleSpec::haar(m);
        sample_ens = EnsembleSpec::haar(m);
    } else if (pairing == "structured-haar") {
        // samples from the structured circuit, training drawn Haar
        train_ens = EnsembleSpec::haar(m);
        sample_ens = make_ensemble("structured", layout_spec, m, std::nullopt);
    } else if (pairing == "structured-structured") {
        train_ens = make_ensemble("structured", layout_spec, m, std::nullopt);
        sample_ens = train_ens;
    } else {
        throw ConfigError("unknown pairing: " + pairing +
                          " (expected haar-haar | structured-haar | structured-structured)");
    }
    InputState input = InputState::of(parse_int_list(input_spec), m);
    MisassignmentOptions options;
    options.training_sets = training_sets;
    options.training_size = training_size;
    options.samples = samples;
    if (!grouping_spec.empty()) {
        options.grouping = parse_partition(grouping_spec);
    }
    options.jobs = global.jobs;
    auto curve = misassignment_curve(train_ens, sample_ens, input, parse_grid(grid_spec), options,
                                     global.seed);
    std::string path = out_path(global, "misassignment.csv");
    io::write_text_file(path, io::misassignment_to_csv(curve));
    io::ManifestWriter manifest("misassignment", json{{"command", "misassignment"},
                                                      {"pairing", pairing},
                                                      {"input", input_spec},
                                                      {"grid", grid_spec},
                                                      {"training_sets", training_sets},
                                                      {"training_size", training_size},
                                                      {"samples", samples},
                                                      {"seed", global.seed}});
    manifest.add_output(path);
    manifest.write(path + ".manifest.json");
    std::cout << "wrote " << path << "\n";
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"Simulation and statistical classification of multi-photon interference"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--seed", global.seed, "master seed; all randomness derives from it");
    app.add_option("--jobs", global.jobs, "worker threads (never changes results)");
    app.add_option("--out-dir", global.out_dir, "output directory");
    app.add_option("--format", global.format, "event-sample output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // gen-unitary
    auto* gen = app.add_subcommand("gen-unitary", "draw an interferometer unitary");
    std::string gen_ensemble = "haar", gen_layout = "default7", gen_out = "unitary.json";
    int gen_m = 7;
    gen->add_option("--m", gen_m, "mode count (haar)");
    gen->add_option("--ensemble", gen_ensemble, "haar | structured");
    gen->add_option("--layout", gen_layout, "layout JSON path or default7");
    gen->add_option("-o,--out", gen_out, "output file name");

    // simulate
    auto* sim = app.add_subcommand("simulate", "exact output distribution of a unitary");
    std::string sim_unitary, sim_input = "1,4,5", sim_out = "dist.json";
    ModelFlags sim_model;
    bool sim_cf_only = false;
    sim->add_option("--unitary", sim_unitary, "unitary JSON")->required();
    sim->add_option("--input", sim_input, "input modes, e.g. 1,4,5");
    sim->add_option("--model", sim_model.model,
                    "indistinguishable | distinguishable | grouping | delta | beta");
    sim->add_option("--grouping", sim_model.grouping, "photon partition, e.g. \"1,3;2\"");
    sim->add_option("--delta", sim_model.delta, "delta (scalar or per-photon list)");
    sim->add_option("--beta", sim_model.beta, "beta mixture weight");
    sim->add_flag("--collision-free-only", sim_cf_only,
                  "restrict to collision-free configurations");
    sim->add_option("-o,--out", sim_out, "output file name");

    // sample
    auto* smp = app.add_subcommand("sample", "draw a finite event sample");
    std::string smp_dist, smp_out = "events.json";
    std::int64_t smp_count = 10000;
    smp->add_option("--dist", smp_dist, "distribution JSON")->required();
    smp->add_option("--count", smp_count, "number of events");
    smp->add_option("-o,--out", smp_out, "output file name");

    // cascade
    auto* cas = app.add_subcommand("cascade", "route events through the detector cascade");
    std::string cas_events, cas_spec, cas_out = "clicks.ndjson";
    int cas_n = 0, cas_m = 0;
    double cas_trigger = -1.0;
    cas->add_option("--events", cas_events, "event sample (JSON or CSV)")->required();
    cas->add_option("--spec", cas_spec, "cascade spec JSON (defaults r1=0.66, r2=0.50)");
    cas->add_option("--trigger-efficiency", cas_trigger, "override the trigger efficiency");
    cas->add_option("--n", cas_n, "photon count (CSV input only)");
    cas->add_option("--m", cas_m, "mode count (CSV input only)");
    cas->add_option("-o,--out", cas_out, "output file name");

    // reconstruct
    auto* rec = app.add_subcommand("reconstruct", "bias-corrected counts from click records");
    std::string rec_clicks, rec_spec, rec_out = "corrected.json";
    int rec_n = 0, rec_m = 0;
    rec->add_option("--clicks", rec_clicks, "click record NDJSON")->required();
    rec->add_option("--spec", rec_spec, "cascade spec JSON");
    rec->add_option("--n", rec_n, "photon count")->required();
    rec->add_option("--m", rec_m, "mode count")->required();
    rec->add_option("-o,--out", rec_out, "output file name");

    // analyze
    auto* ana = app.add_subcommand("analyze", "C-dataset, summary statistics and scans");
    std::string ana_events, ana_dist, ana_against, ana_subsets, ana_scan;
    int ana_bootstrap = 0, ana_n = 0, ana_m = 0;
    ana->add_option("--events", ana_events, "event sample (JSON or CSV)");
    ana->add_option("--dist", ana_dist, "exact distribution JSON");
    ana->add_option("--against", ana_against, "distribution to compare against (TVD)");
    ana->add_option("--bootstrap", ana_bootstrap, "Monte Carlo error-bar replicates");
    ana->add_option("--subset-scan", ana_subsets, "mode-subset sizes, e.g. 4,5,6");
    ana->add_option("--size-scan", ana_scan, "sample-size scan STEPxEXTRACTIONS, e.g. 200x300");
    ana->add_option("--n", ana_n, "photon count (CSV input only)");
    ana->add_option("--m", ana_m, "mode count (CSV input only)");

    // cloud
    auto* cld = app.add_subcommand("cloud", "feature-vector cloud over a unitary ensemble");
    std::string cld_ensemble = "haar", cld_layout = "default7", cld_input = "1,4,5";
    std::string cld_label, cld_out = "cloud.json";
    ModelFlags cld_model;
    int cld_m = 7, cld_count = 1000;
    bool cld_vary_flag = false, cld_fixed_flag = false;
    cld->add_option("--ensemble", cld_ensemble, "haar | structured");
    cld->add_option("--layout", cld_layout, "layout JSON path or default7");
    cld->add_option("--m", cld_m, "mode count (haar)");
    cld->add_option("--input", cld_input, "input modes");
    cld->add_option("--model", cld_model.model, "hypothesis");
    cld->add_option("--grouping", cld_model.grouping, "photon partition");
    cld->add_option("--delta", cld_model.delta, "delta parameter(s)");
    cld->add_option("--beta", cld_model.beta, "beta parameter");
    cld->add_option("--count", cld_count, "ensemble draws");
    cld->add_option("--label", cld_label, "cloud label (defaults to the model tag)");
    cld->add_flag("--vary-input", cld_vary_flag, "redraw the input modes per matrix");
    cld->add_flag("--fixed-input", cld_fixed_flag, "keep the input modes fixed");
    cld->add_option("-o,--out", cld_out, "output file name");

    // classify
    auto* cls = app.add_subcommand("classify", "train a classifier and assign test clouds");
    std::string cls_method = "svm", cls_features;
    std::vector<std::string> cls_train, cls_test;
    int cls_k = 5, cls_epochs = 200, cls_trees = 200, cls_f = 3;
    double cls_c = 1.0, cls_bag = 0.63;
    cls->add_option("--method", cls_method, "centroid | knn | svm | rf");
    cls->add_option("--train", cls_train, "labeled training cloud files")->required();
    cls->add_option("--test", cls_test, "labeled test cloud files");
    cls->add_option("--features", cls_features, "feature names or \"all\" (default nm,cv)");
    cls->add_option("--k", cls_k, "k for knn (odd)");
    cls->add_option("--svm-c", cls_c, "SVM regularization C");
    cls->add_option("--epochs", cls_epochs, "SVM training epochs");
    cls->add_option("--trees", cls_trees, "forest size");
    cls->add_option("--bag-fraction", cls_bag, "bootstrap bag fraction");
    cls->add_option("--f", cls_f, "features per split");

    // importance
    auto* imp = app.add_subcommand("importance", "random-forest MDI feature ranking");
    std::vector<std::string> imp_train;
    int imp_extractions = 200, imp_train_size = 1000, imp_trees = 200, imp_f = 3;
    double imp_bag = 0.63;
    imp->add_option("--train", imp_train, "two labeled cloud files")->required();
    imp->add_option("--extractions", imp_extractions, "training-set extractions");
    imp->add_option("--train-size", imp_train_size, "points per class per extraction");
    imp->add_option("--trees", imp_trees, "forest size");
    imp->add_option("--bag-fraction", imp_bag, "bootstrap bag fraction");
    imp->add_option("--f", imp_f, "features per split");

    // transition
    auto* trn = app.add_subcommand("transition", "indistinguishability transition analysis");
    std::string trn_ensemble = "haar", trn_layout = "default7", trn_input = "1,2,3";
    std::string trn_grid = "0:1:0.1";
    int trn_m = 7, trn_count = 2000, trn_bins = 60, trn_photon = 0;
    trn->add_option("--ensemble", trn_ensemble, "haar | structured");
    trn->add_option("--layout", trn_layout, "layout JSON path or default7");
    trn->add_option("--m", trn_m, "mode count (haar)");
    trn->add_option("--input", trn_input, "input modes");
    trn->add_option("--delta-grid", trn_grid, "delta grid start:stop:step or comma list");
    trn->add_option("--count", trn_count, "matrices per delta");
    trn->add_option("--bins", trn_bins, "histogram bins per axis");
    trn->add_option("--tuned-photon", trn_photon, "tune only this photon (0 = all)");

    // misassignment
    auto* mis = app.add_subcommand("misassignment", "P(partial -> I) against beta");
    std::string mis_pairing = "haar-haar", mis_layout = "default7", mis_input = "1,2,3";
    std::string mis_grid = "0:1:0.1", mis_grouping;
    int mis_m = 7, mis_sets = 100, mis_size = 1000, mis_samples = 1000;
    mis->add_option("--pairing", mis_pairing,
                    "haar-haar | structured-haar | structured-structured");
    mis->add_option("--layout", mis_layout, "layout JSON path or default7");
    mis->add_option("--m", mis_m, "mode count");
    mis->add_option("--input", mis_input, "input modes");
    mis->add_option("--beta-grid", mis_grid, "beta grid start:stop:step or comma list");
    mis->add_option("--training-sets", mis_sets, "number of training sets");
    mis->add_option("--training-size", mis_size, "points per class per training set");
    mis->add_option("--samples", mis_samples, "sample matrices per training set");
    mis->add_option("--grouping", mis_grouping, "partial-state partition (default \"1,3;2\")");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);  // --help
        }
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) {
            return cmd_gen_unitary(global, gen_ensemble, gen_m, gen_layout, gen_out);
        }
        if (sim->parsed()) {
            return cmd_simulate(global, sim_unitary, sim_input, sim_model, sim_cf_only, sim_out);
        }
        if (smp->parsed()) {
            return cmd_sample(global, smp_dist, smp_count, smp_out);
        }
        if (cas->parsed()) {
            return cmd_cascade(global, cas_events, cas_spec, cas_trigger, cas_n, cas_m, cas_out);
        }
        if (rec->parsed()) {
            return cmd_reconstruct(global, rec_clicks, rec_spec, rec_n, rec_m, rec_out);
        }
        if (ana->parsed()) {
            return cmd_analyze(global, ana_events, ana_dist, ana_against, ana_bootstrap,
                               ana_subsets, ana_scan, ana_n, ana_m);
        }
        if (cld->parsed()) {
            if (cld_vary_flag && cld_fixed_flag) {
                throw ConfigError("--vary-input and --fixed-input are mutually exclusive");
            }
            std::optional<bool> vary;
            if (cld_vary_flag) {
                vary = true;
            }
            if (cld_fixed_flag) {
                vary = false;
            }
            return cmd_cloud(global, cld_ensemble, cld_layout, cld_m, cld_input, cld_model,
                             cld_count, cld_label, vary, cld_out);
        }
        if (cls->parsed()) {
            return cmd_classify(global, cls_method, cls_train, cls_test, cls_features, cls_k,
                                cls_c, cls_epochs, cls_trees, cls_bag, cls_f);
        }
        if (imp->parsed()) {
            return cmd_importance(global, imp_train, imp_extractions, imp_train_size, imp_trees,
                                  imp_bag, imp_f);
        }
        if (trn->parsed()) {
            return cmd_transition(global, trn_ensemble, trn_layout, trn_m, trn_input, trn_grid,
                                  trn_count, trn_bins, trn_photon);
        }
        if (mis->parsed()) {
            return cmd_misassignment(global, mis_pairing, mis_layout, mis_m, mis_input, mis_grid,
                                     mis_sets, mis_size, mis_samples, mis_grouping);
        }
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::length_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const FormatError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace bosonstat::cli

int main(int argc, char** argv) { return bosonstat::cli::run(argc, argv); }
