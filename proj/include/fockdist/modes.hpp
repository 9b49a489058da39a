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

#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fockdist {

enum class Pol : std::uint8_t { H = 0, V = 1 };

/// Spatial ports of the encoder, the two quantum channels, the decoders, the
/// detectors and the PDC source arrangement. Aux0..Aux7 are free ports for
/// ad-hoc circuits.
enum class Path : std::uint8_t {
    In,        // Alice's output mode (reference and signal share it)
    InOpen,    // unused input port of Alice's PBS
    Ch1,       // quantum channel 1 (carries H)
    Ch2,       // quantum channel 2 (carries V)
    Port3,
    Port4,
    // port-3 decoder
    Open3,
    Long,
    Short,
    X,
    Y,
    XOpen,
    DetD,
    DetDbar,
    YOpen,
    DetYH,
    DetYV,
    // port-4 decoder
    Open4,
    Long4,
    Short4,
    X4,
    Y4,
    XOpen4,
    DetD4,
    DetDbar4,
    YOpen4,
    DetYH4,
    DetYV4,
    // loss ancillas
    Loss1,
    Loss2,
    // PDC source arrangement
    Pdc,
    PdcOpen,
    SrcShort,
    SrcLong,
    SrcDump,
    Aux0,
    Aux1,
    Aux2,
    Aux3,
    Aux4,
    Aux5,
    Aux6,
    Aux7,
    Count_
};

inline constexpr int kPathCount = static_cast<int>(Path::Count_);

std::string_view to_string(Path path);
std::string_view to_string(Pol pol);
std::optional<Path> parse_path(std::string_view name);

struct ModeLabel {
    Path path = Path::In;
    Pol pol = Pol::H;
    int timebin = 0;

    auto operator<=>(const ModeLabel&) const = default;
};

std::string to_string(const ModeLabel& mode);

using ModeIndex = std::uint16_t;

/// Set of modes a FockState may reference, plus the total photon-number
/// cutoff. Registries are immutable and shared between states.
class ModeRegistry {
   public:
    static constexpr int kDefaultMaxTimebin = 3;
    static constexpr int kDefaultCutoff = 4;
    static constexpr int kMaxCutoff = 8;

    /// Throws ValidationError on duplicate labels or out-of-range time bins.
    ModeRegistry(std::vector<ModeLabel> modes, int max_timebin = kDefaultMaxTimebin,
                 int photon_cutoff = kDefaultCutoff);

    /// Every path x {H, V} x [0, max_timebin]. Cached per argument pair.
    static std::shared_ptr<const ModeRegistry> standard(int max_timebin = kDefaultMaxTimebin,
                                                        int photon_cutoff = kDefaultCutoff);

    std::optional<ModeIndex> find(const ModeLabel& mode) const;
    /// Throws ConfigurationError if the mode is not registered.
    ModeIndex index(const ModeLabel& mode) const;
    ModeIndex index(Path path, Pol pol, int timebin) const { return index(ModeLabel{path, pol, timebin}); }
    const ModeLabel& label(ModeIndex index) const { return modes_[index]; }

    std::size_t size() const { return modes_.size(); }
    int max_timebin() const { return max_timebin_; }
    int cutoff() const { return cutoff_; }
    const std::vector<ModeLabel>& modes() const { return modes_; }

    bool operator==(const ModeRegistry& other) const;

   private:
    std::vector<ModeLabel> modes_;
    std::vector<int> table_;  // (path, pol, timebin) -> index or -1
    int max_timebin_;
    int cutoff_;
};

using RegistryPtr = std::shared_ptr<const ModeRegistry>;

/// True when both pointers refer to the same registry or to equal ones.
bool same_registry(const RegistryPtr& a, const RegistryPtr& b);

}  // namespace fockdist
