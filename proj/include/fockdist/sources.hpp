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

#include <string_view>
#include <vector>

#include "fockdist/optics.hpp"

namespace fockdist {

/// Signal polarization alpha|H> + beta|V>.
struct SignalState {
    Complex alpha = 1.0;
    Complex beta = 0.0;

    /// Throws ValidationError unless |alpha|^2 + |beta|^2 = 1 to 1e-12.
    void validate() const;
    /// Normalizes (alpha, beta); throws ValidationError for (0, 0).
    static SignalState normalized(Complex alpha, Complex beta);
    /// Polarization unitary taking H to this state.
    Eigen::Matrix2cd preparation_matrix() const;
};

enum class SourceKind { Ideal, PdcFig3, CoherentPair, TriggeredPlusCoherent, FockPair };

std::string_view to_string(SourceKind kind);
/// ideal, pdc-fig3 (or pdc), coherent-pair (or coherent), triggered-plus-coherent
/// (or triggered), fock-pair. Throws ConfigurationError otherwise.
SourceKind parse_source_kind(std::string_view name);

struct SourceSpec {
    SourceKind kind = SourceKind::Ideal;
    SignalState signal;
    double nu = 0.0;            // mean photons, signal pulse (coherent kinds)
    double mu = 0.0;            // mean photons, reference pulse (coherent kinds)
    double pair_mean = 0.0;     // mean pair number per pulse (pdc-fig3)
    double trigger_p1 = 1.0;    // triggered signal: P(one photon)
    double trigger_pmul = 0.0;  // triggered signal: P(two or more), modelled as two
    int n_ref = 1;              // fock-pair
    int n_sig = 1;              // fock-pair
    int cutoff = 2;             // photons kept per pulse

    /// Throws ValidationError for out-of-range parameters.
    void validate() const;
};

/// Reference |D> in bin 0 and the signal in bin 1, both on Path::In.
FockState encoder_state(const RegistryPtr& registry, const SignalState& signal);

/// n_ref photons in |D> (bin 0) and n_sig photons in the signal polarization
/// (bin 1), on Path::In.
FockState number_state(const RegistryPtr& registry, int n_ref, int n_sig, const SignalState& signal);

/// Settings of HWP_s and PS_s that turn |V> into the signal up to a global
/// phase: HWP_s at atan2(|alpha|, |beta|), PS_s at pi + arg(beta) - arg(alpha).
struct SignalOptics {
    double hwp_deg = 0.0;
    double ps_rad = 0.0;
};
SignalOptics signal_optics(const SignalState& signal);

/// PBS split of the |H>|V> pair, delay of the V arm, HWP_r(45) on the H arm,
/// HWP_s + PS_s on the V arm, BS merge onto Path::In / Path::SrcDump.
std::vector<ModeTransform> pdc_circuit(const RegistryPtr& registry, const SignalState& signal,
                                       PhaseConvention convention = PhaseConvention::Real);

/// |n pairs> = (a_H^dag a_V^dag)^n / n! on Path::Pdc, bin 0.
FockState pdc_pairs(const RegistryPtr& registry, int pairs);

struct PdcPreparation {
    /// Probability both photons leave through Path::In.
    double probability = 0.0;
    /// Normalized conditional state; equals encoder_state up to global phase.
    FockState state;
};
PdcPreparation pdc_source_state(const RegistryPtr& registry, const SignalState& signal,
                                PhaseConvention convention = PhaseConvention::Real);

struct CoherentPairState {
    FockState state;
    /// Probability discarded by truncation before renormalization.
    double truncation_error = 0.0;
};

/// Truncated product of coherent states: mean mu in |D> (bin 0) and mean nu in
/// the signal polarization (bin 1), zero phase reference. Each pulse keeps up
/// to spec.cutoff photons and the total stays within the registry cutoff.
/// Throws ConfigurationError if spec.cutoff exceeds the registry cutoff or is
/// below 2.
CoherentPairState coherent_pair_state(const RegistryPtr& registry, const SourceSpec& spec);

/// One photon-number configuration of a source with its probability weight.
struct Trajectory {
    double weight = 0.0;
    int n_ref = 0;  // photons in the reference pulse (for PDC: pairs emitted)
    int n_sig = 0;
    FockState state;
};

struct SourceTrajectories {
    std::vector<Trajectory> trajectories;
    double truncation_error = 0.0;
};

/// The source as a mixture over photon numbers: independent (phase-randomized)
/// pulses, each configuration a pure state. PDC pair counts are Poisson in
/// pair_mean, each propagated through pdc_circuit.
SourceTrajectories photon_number_trajectories(const RegistryPtr& registry, const SourceSpec& spec);

/// e^{-m} m^n / n!
double poisson_pmf(int n, double mean);

}  // namespace fockdist
