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

#include <optional>
#include <vector>

#include "fockdist/transform.hpp"

namespace fockdist {

enum class ElementKind { BS, PBS, HWP, PS, DELAY, LOSS };

/// Reflection-phase convention for BS and PBS. Real is the default
/// ([[1,1],[1,-1]]/sqrt2 and an unphased PBS); Imaginary uses
/// [[1,i],[i,1]]/sqrt2 and an i on every PBS reflection.
enum class PhaseConvention { Real, Imaginary };

/// One optical element and its port wiring. Which fields matter depends on
/// kind:
///   BS, PBS: inputs {a, b}, outputs {c, d}
///   HWP, PS: inputs {p}; acts in place
///   DELAY:   inputs {p}; shifts every time bin of p by `delay`
///   LOSS:    inputs {p, ancilla}; ancilla must start empty
/// By default an element acts on every time bin; `timebin` restricts it to
/// one bin (used for source preparation where the pulses are addressed
/// separately).
struct ElementSpec {
    ElementKind kind = ElementKind::BS;
    double angle_deg = 0.0;  // HWP polarization rotation, [0, 180)
    double phase_rad = 0.0;  // PS phase on V, [0, 2pi)
    int delay = 0;           // DELAY, in time bins
    double transmissivity = 1.0;
    std::vector<Path> inputs;
    std::vector<Path> outputs;
    PhaseConvention convention = PhaseConvention::Real;
    std::optional<int> timebin;
};

/// Throws ConfigurationError for wrong port arity or unregistered ports and
/// ValidationError for parameters out of range.
ModeTransform build_element(const RegistryPtr& registry, const ElementSpec& spec);

// Shorthands for the common wirings.

/// a -> (c + d)/sqrt2, b -> (c - d)/sqrt2 on both polarizations (Real).
ModeTransform beam_splitter(const RegistryPtr& registry, Path a, Path b, Path c, Path d,
                            PhaseConvention convention = PhaseConvention::Real);
/// Transmits H, reflects V: a:H -> c, a:V -> d, b:H -> d, b:V -> c.
ModeTransform polarizing_beam_splitter(const RegistryPtr& registry, Path a, Path b, Path c, Path d,
                                       PhaseConvention convention = PhaseConvention::Real);
/// Rotates polarization by angle_deg: H -> cos H + sin V, V -> sin H - cos V.
ModeTransform half_wave_plate(const RegistryPtr& registry, Path port, double angle_deg,
                              std::optional<int> timebin = std::nullopt);
/// V -> e^{i phase} V.
ModeTransform phase_shifter(const RegistryPtr& registry, Path port, double phase_rad,
                            std::optional<int> timebin = std::nullopt);
ModeTransform delay_line(const RegistryPtr& registry, Path port, int bins);
ModeTransform loss(const RegistryPtr& registry, Path port, Path ancilla, double transmissivity);

/// 2x2 polarization matrix of an HWP rotating by angle_deg (columns: images
/// of H and V).
Eigen::Matrix2cd half_wave_plate_matrix(double angle_deg);

/// Applies a 2x2 polarization unitary (columns: images of H and V) to one
/// port, on every bin or on a single bin.
ModeTransform polarization_unitary(const RegistryPtr& registry, Path port, const Eigen::Matrix2cd& u,
                                   std::optional<int> timebin = std::nullopt);

}  // namespace fockdist
