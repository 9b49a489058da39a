// Copyright 2026 The fockdist Authors
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

#include "fockdist/modes.hpp"

#include <array>
#include <map>
#include <mutex>

#include "fockdist/errors.hpp"

namespace fockdist {

namespace {

constexpr std::array<std::string_view, kPathCount> kPathNames = {
    "In",      "InOpen", "Ch1",    "Ch2",      "Port3",  "Port4",  "Open3",   "Long",   "Short",
    "X",       "Y",      "XOpen",  "DetD",     "DetDbar", "YOpen", "DetYH",   "DetYV",  "Open4",
    "Long4",   "Short4", "X4",     "Y4",       "XOpen4", "DetD4",  "DetDbar4", "YOpen4", "DetYH4",
    "DetYV4",  "Loss1",  "Loss2",  "Pdc",      "PdcOpen", "SrcShort", "SrcLong", "SrcDump", "Aux0",
    "Aux1",    "Aux2",   "Aux3",   "Aux4",     "Aux5",   "Aux6",   "Aux7",
};

std::size_t slot(const ModeLabel& m, int max_timebin) {
    return (static_cast<std::size_t>(m.path) * 2 + static_cast<std::size_t>(m.pol)) *
               static_cast<std::size_t>(max_timebin + 1) +
           static_cast<std::size_t>(m.timebin);
}

}  // namespace

std::string_view to_string(Path path) { return kPathNames.at(static_cast<std::size_t>(path)); }

std::string_view to_string(Pol pol) { return pol == Pol::H ? "H" : "V"; }

std::optional<Path> parse_path(std::string_view name) {
    for (int i = 0; i < kPathCount; ++i) {
        if (kPathNames[static_cast<std::size_t>(i)] == name) {
            return static_cast<Path>(i);
        }
    }
    return std::nullopt;
}

std::string to_string(const ModeLabel& mode) {
    return std::string(to_string(mode.path)) + ":" + std::string(to_string(mode.pol)) + "@" +
           std::to_string(mode.timebin);
}

ModeRegistry::ModeRegistry(std::vector<ModeLabel> modes, int max_timebin, int photon_cutoff)
    : modes_(std::move(modes)), max_timebin_(max_timebin), cutoff_(photon_cutoff) {
    if (max_timebin_ < 0) {
        throw ValidationError("max_timebin must be non-negative");
    }
    if (cutoff_ < 1 || cutoff_ > kMaxCutoff) {
        throw ValidationError("photon cutoff must lie in [1, " + std::to_string(kMaxCutoff) + "]");
    }
    if (modes_.size() > 0xFFFF) {
        throw ValidationError("too many modes");
    }
    table_.assign(static_cast<std::size_t>(kPathCount) * 2 * static_cast<std::size_t>(max_timebin_ + 1), -1);
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        const auto& m = modes_[i];
        if (m.timebin < 0 || m.timebin > max_timebin_) {
            throw ValidationError("time bin out of registry range for mode " + to_string(m));
        }
        if (static_cast<int>(m.path) >= kPathCount) {
            throw ValidationError("unknown path in mode registry");
        }
        auto& entry = table_[slot(m, max_timebin_)];
        if (entry != -1) {
            throw ValidationError("duplicate mode " + to_string(m));
        }
        entry = static_cast<int>(i);
    }
}

std::shared_ptr<const ModeRegistry> ModeRegistry::standard(int max_timebin, int photon_cutoff) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const ModeRegistry>> cache;
    std::lock_guard lock(mutex);
    auto& entry = cache[{max_timebin, photon_cutoff}];
    if (!entry) {
        std::vector<ModeLabel> modes;
        modes.reserve(static_cast<std::size_t>(kPathCount) * 2 * static_cast<std::size_t>(max_timebin + 1));
        for (int p = 0; p < kPathCount; ++p) {
            for (Pol pol : {Pol::H, Pol::V}) {
                for (int t = 0; t <= max_timebin; ++t) {
                    modes.push_back({static_cast<Path>(p), pol, t});
                }
            }
        }
        entry = std::make_shared<const ModeRegistry>(std::move(modes), max_timebin, photon_cutoff);
    }
    return entry;
}

std::optional<ModeIndex> ModeRegistry::find(const ModeLabel& mode) const {
    if (mode.timebin < 0 || mode.timebin > max_timebin_ || static_cast<int>(mode.path) >= kPathCount) {
        return std::nullopt;
    }
    int i = table_[slot(mode, max_timebin_)];
    if (i < 0) {
        return std::nullopt;
    }
    return static_cast<ModeIndex>(i);
}

ModeIndex ModeRegistry::index(const ModeLabel& mode) const {
    if (auto i = find(mode)) {
        return *i;
    }
    throw ConfigurationError("mode " + to_string(mode) + " is not registered");
}

bool ModeRegistry::operator==(const ModeRegistry& other) const {
    return cutoff_ == other.cutoff_ && max_timebin_ == other.max_timebin_ && modes_ == other.modes_;
}

bool same_registry(const RegistryPtr& a, const RegistryPtr& b) {
    return a == b || (a && b && *a == *b);
}

}  // namespace fockdist
