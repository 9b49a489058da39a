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

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fockdist/fock_state.hpp"
#include "fockdist/transform.hpp"

namespace fockdist {

/// Collective phase shifts of the two channels, reduced to [0, 2pi).
struct DephasingParams {
    double phi_h = 0.0;  // channel 1
    double phi_v = 0.0;  // channel 2

    DephasingParams reduced() const;
};

/// Collective polarization rotations of the two channels:
///   channel 1:  H -> delta1 H + gamma1 V
///   channel 2:  V -> delta2 H + gamma2 V
/// Channel 2 is undisturbed at delta2 = 0, gamma2 = 1.
struct RotationParams {
    Complex delta1 = 1.0;
    Complex gamma1 = 0.0;
    Complex delta2 = 0.0;
    Complex gamma2 = 1.0;

    /// Throws ValidationError unless |delta_i|^2 + |gamma_i|^2 = 1 to 1e-12.
    void validate() const;
    static RotationParams from_dephasing(const DephasingParams& p);
    static RotationParams identity() { return {}; }

    /// SU(2) of each channel; columns are the images of H and V.
    Eigen::Matrix2cd channel1_matrix() const;
    Eigen::Matrix2cd channel2_matrix() const;
};

/// Extra polarization unitaries hitting only the later time bins (bin >= 1)
/// of each channel: breaks the collective assumption.
struct JitterDraw {
    Eigen::Matrix2cd channel1 = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd channel2 = Eigen::Matrix2cd::Identity();
};

struct NoiseDraw {
    std::variant<DephasingParams, RotationParams> params = RotationParams::identity();
    std::optional<JitterDraw> jitter;

    RotationParams as_rotation() const;
};

enum class NoiseKind { None, Dephasing, HaarRotation, ProductSU2 };

std::string_view to_string(NoiseKind kind);
/// Accepts none, dephasing, haar-rotation (or haar), product-su2. Throws
/// ConfigurationError otherwise.
NoiseKind parse_noise_kind(std::string_view name);

struct SamplerSpec {
    NoiseKind kind = NoiseKind::HaarRotation;
    std::uint64_t seed = 0;
    /// Standard deviation (radians) of the per-axis rotation angle applied to
    /// the later time bins only. 0 disables jitter.
    double jitter_sigma = 0.0;
};

/// Multiplies every photon in channel 1 by e^{i phi_h} and in channel 2 by
/// e^{i phi_v}, identically in every time bin.
FockState apply_dephasing(const FockState& state, const DephasingParams& p);

/// Applies each channel's SU(2) to all time bins of that channel.
FockState apply_rotation(const FockState& state, const RotationParams& p);

/// Dispatches on the draw and applies the jitter if present.
FockState apply_noise(const FockState& state, const NoiseDraw& draw);

ModeTransform rotation_transform(const RegistryPtr& registry, const RotationParams& p,
                                 const std::optional<JitterDraw>& jitter = std::nullopt);

/// One draw for trial `index`; identical to sample_noise(spec, n)[index].
NoiseDraw sample_noise_at(const SamplerSpec& spec, std::uint64_t index);

/// Draw one set of parameters from an existing generator.
NoiseDraw draw_noise(NoiseKind kind, double jitter_sigma, std::mt19937_64& rng);

/// n draws, deterministic in spec.seed. Throws ConfigurationError for n == 0.
std::vector<NoiseDraw> sample_noise(const SamplerSpec& spec, std::size_t n);

/// Haar-random SU(2) first column (delta, gamma): |delta|^2 ~ U[0, 1] and
/// independent uniform phases.
std::pair<Complex, Complex> haar_su2_column(std::mt19937_64& rng);

}  // namespace fockdist
