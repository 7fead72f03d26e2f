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

#ifndef BOSONSTAT_CORE_CONFIG_SPACE_HPP
#define BOSONSTAT_CORE_CONFIG_SPACE_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace bosonstat {

// Photon occupation per output mode, n_1 ... n_m.
using Occupation = std::vector<int>;

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

inline bool is_collision_free(const Occupation& occ) {
    for (int c : occ) {
        if (c > 1) {
            return false;
        }
    }
    return true;
}

// The set of all C(m+n-1, n) n-photon configurations over m modes, in a fixed
// canonical order (first mode count descending). Shared immutable instances
// are cached per (n, m) so distributions over the same space can reuse the
// index table.
class ConfigurationSpace {
  public:
    ConfigurationSpace(int n, int m) : n_(n), m_(m) {
        if (n < 0 || m < 1) {
            throw std::invalid_argument("ConfigurationSpace: need n >= 0, m >= 1");
        }
        Occupation occ(static_cast<std::size_t>(m), 0);
        emit(occ, 0, n);
        for (std::size_t i = 0; i < configs_.size(); ++i) {
            index_.emplace(key(configs_[i]), i);
        }
    }

    static std::shared_ptr<const ConfigurationSpace> get(int n, int m) {
        static std::mutex mu;
        static std::map<std::pair<int, int>, std::shared_ptr<const ConfigurationSpace>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto& slot = cache[{n, m}];
        if (!slot) {
            slot = std::make_shared<const ConfigurationSpace>(n, m);
        }
        return slot;
    }

    int n() const { return n_; }
    int m() const { return m_; }
    std::size_t size() const { return configs_.size(); }
    const std::vector<Occupation>& configs() const { return configs_; }
    const Occupation& config(std::size_t i) const { return configs_[i]; }

    std::size_t index_of(const Occupation& occ) const {
        auto it = index_.find(key(occ));
        if (it == index_.end()) {
            throw std::invalid_argument("ConfigurationSpace: occupation not in space");
        }
        return it->second;
    }

    std::size_t collision_free_count() const {
        std::size_t c = 0;
        for (const auto& occ : configs_) {
            c += is_collision_free(occ) ? 1 : 0;
        }
        return c;
    }

  private:
    static std::string key(const Occupation& occ) {
        std::string k(occ.size(), '\0');
        for (std::size_t i = 0; i < occ.size(); ++i) {
            k[i] = static_cast<char>(occ[i]);
        }
        return k;
    }

    void emit(Occupation& occ, int mode, int left) {
        if (mode == m_ - 1) {
            occ[static_cast<std::size_t>(mode)] = left;
            configs_.push_back(occ);
            return;
        }
        for (int c = left; c >= 0; --c) {
            occ[static_cast<std::size_t>(mode)] = c;
            emit(occ, mode + 1, left - c);
        }
        occ[static_cast<std::size_t>(mode)] = 0;
    }

    int n_;
    int m_;
    std::vector<Occupation> configs_;
    std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace bosonstat

#endif
