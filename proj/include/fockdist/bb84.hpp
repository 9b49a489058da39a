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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "fockdist/protocol.hpp"

namespace fockdist {

enum class Bb84State { H, V, D, Dbar };
enum class Basis { Rectilinear, Diagonal };

std::string_view to_string(Bb84State s);
std::string_view to_string(Basis b);
Basis basis_of(Bb84State s);
/// H, D -> 0; V, Dbar -> 1.
int bit_of(Bb84State s);
SignalState signal_of(Bb84State s);

/// Bob's polarization measurement on the decoded photon: HWP(45) first for
/// the diagonal basis, then a PBS from (Y, YOpen) to (DetYH, DetYV). DetYH
/// is bit 0 in both bases.
std::vector<ModeTransform> y_measurement_circuit(const RegistryPtr& registry, Basis basis,
                                                 PhaseConvention convention = PhaseConvention::Real);

struct Bb84Config {
    std::size_t rounds = 1;
    /// Noise kind and jitter; the seed drives everything in the session.
    SamplerSpec noise;
    DetectorModel detector;
    Acceptance acceptance = Acceptance::DOnly;
    Variant variant = Variant::Port3;
    DoubleClickPolicy double_click = DoubleClickPolicy::Abort;
    PhaseConvention convention = PhaseConvention::Real;
    bool keep_rounds = false;

    void validate() const;
};

struct Bb84Round {
    std::size_t index = 0;
    Bb84State alice_state = Bb84State::H;
    Basis alice_basis = Basis::Rectilinear;
    Basis bob_basis = Basis::Rectilinear;
    bool accepted = false;
    std::optional<int> bob_bit;
    /// Probability that this round is accepted and, given the state and draw,
    /// that Bob's bit is wrong (both unconditional).
    double accept_probability = 0.0;
    double error_probability = 0.0;
    NoiseDraw noise_draw;
};

struct Bb84Report {
    std::size_t rounds = 0;
    std::size_t accepted = 0;
    std::size_t sifted = 0;
    std::size_t errors = 0;
    /// errors / sifted; empty without sifted rounds.
    std::optional<double> qber;
    /// Same ratio from the per-round outcome probabilities of sifted rounds,
    /// free of sampling noise in the bit values.
    std::optional<double> qber_expected;
    std::optional<double> qber_rectilinear;
    std::optional<double> qber_diagonal;
    double acceptance_rate = 0.0;
    /// sifted / accepted; empty without accepted rounds.
    std::optional<double> sift_fraction;
    std::uint64_t seed = 0;
    std::vector<Bb84Round> log;  // filled when keep_rounds
};

/// Round i draws Alice's state, Bob's basis, the noise and the outcome from
/// trial_rng(seed, i). Throws ConfigurationError for zero rounds.
Bb84Report run_bb84_session(const Bb84Config& cfg);

/// Outcome of one structural check.
struct CheckReport {
    std::string name;
    bool passed = false;
    double residual = 0.0;
    double tolerance = 0.0;
    std::vector<double> constants;
    std::string detail;
};

/// Two-photon space of port 3 over {H, V} x {bin 0, bin 1}: the ten
/// occupation vectors in a fixed order.
std::vector<FockState> port3_two_photon_basis(const RegistryPtr& registry);

/// Bob's POVM element (10 x 10 over port3_two_photon_basis) for analyzer D
/// in the window together with a Y click of the given bit in the window,
/// with ideal detectors.
Eigen::MatrixXcd bob_povm(const RegistryPtr& registry, Basis basis, int bit,
                          PhaseConvention convention = PhaseConvention::Real);

/// |h> = |V>_r|H>_s + |HV>_r|vac>_s and |v> = |H>_r|V>_s + |vac>_r|HV>_s on
/// port 3 (unnormalized), in the port3_two_photon_basis coordinates.
Eigen::VectorXcd h_vector(const RegistryPtr& registry);
Eigen::VectorXcd v_vector(const RegistryPtr& registry);

/// Each of the four D-accepted outcomes against the projector on |h>, |v>,
/// |h>+|v>, |h>-|v>. Constants are the proportionality factors for the
/// normalized vectors. Also checks zero acceptance for a state orthogonal to
/// both |h> and |v>.
std::vector<CheckReport> verify_projection_equivalence(PhaseConvention convention = PhaseConvention::Real);

/// Virtual AB basis |ab> (index 2a + b) in port3_two_photon_basis
/// coordinates.
std::array<Eigen::VectorXcd, 4> virtual_basis(const RegistryPtr& registry);

/// Orthonormality of the AB basis, the encoder factorization
/// A (x) (sqrt3|0> + |1>)/2 for all four BB84 states, and the factorization of
/// Bob's D-accepted POVM as P_A (x) P_{(sqrt3|0> - |1>)/2} with one constant.
std::vector<CheckReport> verify_virtual_qubits();

}  // namespace fockdist
