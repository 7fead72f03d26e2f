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

#ifndef BOSONSTAT_IO_MANIFEST_HPP
#define BOSONSTAT_IO_MANIFEST_HPP

#include <chrono>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bosonstat/core/rng.hpp"
#include "bosonstat/io/json_io.hpp"

namespace bosonstat::io {

inline constexpr const char* kToolVersion = "bosonstat 0.1.0";

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

inline std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open file for digest: " + path);
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return hex64(fnv1a64(bytes));
}

// Provenance record written next to every command's outputs. Re-running the
// recorded command and config reproduces the analysis outputs byte for byte;
// the manifest itself carries the wall clock and is not part of that
// guarantee.
class ManifestWriter {
  public:
    ManifestWriter(std::string command, json config)
        : command_(std::move(command)),
          config_(std::move(config)),
          start_(std::chrono::steady_clock::now()) {}

    void add_input(const std::string& path) {
        inputs_[path] = file_digest(path);
    }

    void add_output(const std::string& path) { outputs_.push_back(path); }

    void write(const std::string& path) const {
        auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_);
        json j{{"schema", "manifest/1"},
               {"tool", kToolVersion},
               {"command", command_},
               {"config", config_},
               {"config_hash", hex64(fnv1a64(config_.dump()))},
               {"inputs", inputs_},
               {"outputs", outputs_},
               {"wall_clock_s", elapsed.count()}};
        write_json_file(path, j);
    }

  private:
    std::string command_;
    json config_;
    json inputs_ = json::object();
    std::vector<std::string> outputs_;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace bosonstat::io

#endif
