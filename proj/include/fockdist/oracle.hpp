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

#include <complex>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace fockdist::oracle {

using Complex = std::complex<double>;

/// Dense reference state over m modes: photon counts per mode -> amplitude.
using DenseState = std::map<std::vector<int>, Complex>;

/// Permanent by direct expansion over permutations (n <= 8 is practical).
Complex permanent(const Eigen::MatrixXcd& m);

/// <t|U|s> for occupation lists s and t: perm(U[t, s]) / sqrt(prod s! t!).
/// u(k, j) is the amplitude from mode j into mode k.
Complex transition_amplitude(const Eigen::MatrixXcd& u, const std::vector<int>& s, const std::vector<int>& t);

/// Applies u to every term by enumerating all output occupations.
DenseState apply(const Eigen::MatrixXcd& u, const DenseState& state);

/// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng);

/// All occupation lists of n photons over m modes.
std::vector<std::vector<int>> occupations(int modes, int photons);

}  // namespace fockdist::oracle
