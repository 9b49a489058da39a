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

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "fockdist/fock_state.hpp"

namespace fockdist {

/// A passive linear-optical map: a unitary over an ordered subset of modes
/// followed by a relabeling of modes (routing, delay).
///
/// The matrix uses the column convention: matrix(k, j) is the amplitude for a
/// photon entering modes()[j] to leave in modes()[k], so a creation operator
/// transforms as a_j^dag -> sum_k matrix(k, j) a_k^dag and single-photon
/// amplitude vectors transform as psi -> matrix * psi.
///
/// Relabel targets need not be registered; landing a photon on an
/// unregistered target is a ConfigurationError at apply time (e.g. delaying a
/// photon past the last time bin).
class ModeTransform {
   public:
    static constexpr double kUnitarityTolerance = 1e-12;

    /// Throws ConfigurationError for unregistered or repeated modes and
    /// ValidationError for a non-unitary matrix or non-injective relabel.
    ModeTransform(RegistryPtr registry, std::vector<ModeLabel> modes, Eigen::MatrixXcd matrix,
                  std::vector<std::pair<ModeLabel, ModeLabel>> relabel = {});

    static ModeTransform identity(RegistryPtr registry);

    const RegistryPtr& registry() const { return registry_; }
    const std::vector<ModeLabel>& modes() const { return modes_; }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    const std::vector<std::pair<ModeLabel, ModeLabel>>& relabel() const { return relabel_; }

    /// Transform that undoes this one on every state it can be applied to.
    ModeTransform inverse() const;

   private:
    friend FockState apply_transform(const FockState& state, const ModeTransform& transform);

    static constexpr int kKeep = -1;
    static constexpr int kUnregistered = -2;

    RegistryPtr registry_;
    std::vector<ModeLabel> modes_;
    Eigen::MatrixXcd matrix_;
    std::vector<std::pair<ModeLabel, ModeLabel>> relabel_;

    std::vector<int> local_;   // registry index -> column in matrix_, or -1
    std::vector<int> rename_;  // registry index -> target index, kKeep, or kUnregistered
    std::vector<std::vector<std::pair<ModeIndex, Complex>>> columns_;
};

/// Substitutes each creation operator on the transform's modes, then renames
/// modes. Preserves the norm up to pruning. Throws ValidationError on registry
/// mismatch or relabel collisions and ConfigurationError when a photon is sent
/// to an unregistered mode.
FockState apply_transform(const FockState& state, const ModeTransform& transform);

/// Applies the transforms in order.
FockState apply_circuit(const FockState& state, std::span<const ModeTransform> circuit);

/// max |(U^dag U - I)_ij|.
double unitarity_error(const Eigen::MatrixXcd& matrix);

}  // namespace fockdist
