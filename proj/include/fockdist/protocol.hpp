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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fockdist/detection.hpp"
#include "fockdist/noise.hpp"
#include "fockdist/sources.hpp"

namespace fockdist {

/// Which outputs of Bob's merging PBS get a decoder.
enum class Variant { Port3, Port3And4 };
/// Which analyzer results Bob keeps.
enum class Acceptance { Both, DOnly };
/// Both D and Dbar clicking in the window: drop the event, or keep it and
/// assign D or Dbar with probability 1/2 each.
enum class DoubleClickPolicy { Abort, RandomAssign };

std::string_view to_string(Variant v);
std::string_view to_string(Acceptance a);
std::string_view to_string(DoubleClickPolicy p);
Variant parse_variant(std::string_view name);
Acceptance parse_acceptance(std::string_view name);
DoubleClickPolicy parse_double_click(std::string_view name);

/// Time bin in which the reference (long path) and the signal (short path)
/// meet at the decoder PBS.
inline constexpr int kCoincidenceWindow = 1;

struct ProtocolConfig {
    SignalState signal;
    NoiseDraw noise;
    DetectorModel detector;
    Variant variant = Variant::Port3;
    Acceptance acceptance = Acceptance::Both;
    DoubleClickPolicy double_click = DoubleClickPolicy::Abort;
    PhaseConvention convention = PhaseConvention::Real;

    void validate() const;
};

/// Wiring of one decoder: BS from (input, open) to (long, short), delay and
/// HWP(90) on the long arm, PBS from (long, short) to (y, x). The port-4
/// decoder adds an HWP(90) on y so both decoders hand out the signal in the
/// same basis.
struct DecoderPorts {
    Path input = Path::Port3;
    Path open = Path::Open3;
    Path long_arm = Path::Long;
    Path short_arm = Path::Short;
    Path y = Path::Y;
    std::string y_id = "Y";
    bool flip_y = false;
    AnalyzerPorts analyzer;
    std::string name = "port3";
};

DecoderPorts port3_decoder();
DecoderPorts port4_decoder();

/// Alice's PBS: In:H -> Ch1, In:V -> Ch2.
ModeTransform alice_split(const RegistryPtr& registry, PhaseConvention convention = PhaseConvention::Real);
/// Bob's PBS: Ch1:H, Ch2:V -> Port3; Ch1:V, Ch2:H -> Port4.
ModeTransform bob_merge(const RegistryPtr& registry, PhaseConvention convention = PhaseConvention::Real);
std::vector<ModeTransform> decoder_circuit(const RegistryPtr& registry, const DecoderPorts& ports,
                                           PhaseConvention convention = PhaseConvention::Real);

/// Alice's output state after the split, the noisy channels and Bob's merge.
FockState received_state(const FockState& input, const NoiseDraw& noise,
                         PhaseConvention convention = PhaseConvention::Real);

/// True when `port` holds exactly one photon in bin 0 and one in bin 1 with
/// opposite polarizations (the component that passes the parity check).
bool parity_good(const ModeRegistry& registry, const OccupationVector& occupation, Path port);

/// Probability of the parity-good component on port 3 (plus port 4 for the
/// two-decoder variant).
double parity_factor(const FockState& received, Variant variant);

/// One accepted coincidence after correction.
struct AcceptedBranch {
    std::string label;  // e.g. "port3:D"
    AnalyzerResult result = AnalyzerResult::D;
    double probability = 0.0;
    double fidelity = 0.0;
    bool double_click = false;
    /// Photons that actually hit each detector (includes multi-photon cases).
    std::map<DetectorKey, int> photons;
    /// Conditional state after correction; the output photon sits on the
    /// decoder's y port in the coincidence window.
    FockState state;
    Path y = Path::Y;
};

/// Runs the decoders and detectors on a received state and returns the
/// accepted, corrected branches. Fidelity is measured against `target`.
std::vector<AcceptedBranch> decode_and_postselect(const FockState& received, const ProtocolConfig& cfg,
                                                  const DetectorModel& detector, const SignalState& target);

struct OutcomeRecord {
    std::string label;
    double probability = 0.0;
    double fidelity = 0.0;
};

struct RunReport {
    /// Total accepted coincidence probability.
    double success_probability = 0.0;
    /// Parity-check projection factor (1/2 under dephasing, |d1 g2|^2/2 under rotation).
    double parity_factor = 0.0;
    /// Decoder path selection factor (1/4), i.e. success at eta = 1 over the
    /// parity factor. Empty when the parity factor is 0.
    std::optional<double> routing_factor;
    /// Detector factor (eta^2), i.e. success over success at eta = 1. Empty
    /// when nothing is accepted at eta = 1.
    std::optional<double> detection_factor;
    /// Probability-weighted fidelity of the corrected output. Empty when
    /// success_probability is 0.
    std::optional<double> fidelity;
    std::vector<OutcomeRecord> outcomes;
    double double_click_probability = 0.0;
    NoiseDraw noise_draw;
    std::optional<std::uint64_t> seed;
};

/// Full encoder -> channel -> decoder -> post-selection run for fixed noise.
RunReport run_distribution(const ProtocolConfig& cfg);

struct MonteCarloConfig {
    ProtocolConfig base;
    SamplerSpec sampler;
    std::size_t trials = 1;
    /// 0 = hardware concurrency.
    unsigned threads = 0;
    bool keep_trials = false;
    /// false: only the channel and parity projection are simulated (success
    /// and fidelity stay empty). Much cheaper for large parity averages.
    bool decode = true;
};

struct TrialRow {
    std::size_t index = 0;
    double success_probability = 0.0;
    double parity_factor = 0.0;
    std::optional<double> fidelity;
    NoiseDraw noise_draw;
};

struct MonteCarloReport {
    std::size_t trials = 0;
    bool decoded = true;
    std::size_t accepted_trials = 0;  // trials with success > 0
    double mean_success = 0.0;
    double se_success = 0.0;
    double mean_parity = 0.0;
    double se_parity = 0.0;
    /// Mean over trials with success > 0.
    std::optional<double> mean_fidelity;
    double se_fidelity = 0.0;
    std::optional<double> min_fidelity;
    std::uint64_t seed = 0;
    std::vector<TrialRow> rows;  // filled when keep_trials
};

/// Trial i draws its noise from (seed, i); results do not depend on thread
/// count. Throws ConfigurationError for zero trials.
MonteCarloReport run_monte_carlo(const MonteCarloConfig& cfg);

struct TrajectoryRecord {
    int n_ref = 0;
    int n_sig = 0;
    double weight = 0.0;
    double accepted = 0.0;      // weight * acceptance
    double false_accept = 0.0;  // accepted with fidelity below 1
    double error = 0.0;         // weight * sum p (1 - F)
};

struct MultiphotonReport {
    SourceKind source = SourceKind::Ideal;
    /// Source photon statistics on Alice's output (one photon per pulse / more
    /// than one in either pulse).
    double p11_input = 0.0;
    double pmul_input = 0.0;
    double truncation_error = 0.0;
    double accepted_probability = 0.0;
    /// Accepted from configurations with one photon per pulse.
    double accepted_single = 0.0;
    /// Accepted from configurations with more than one photon in either pulse
    /// (more than one pair for PDC).
    double accepted_multiphoton = 0.0;
    /// Accepted with output fidelity below 1 - 1e-9.
    double false_accept_probability = 0.0;
    /// Expected output error given acceptance: sum p (1 - F) / sum p.
    std::optional<double> error_rate;
    std::vector<TrajectoryRecord> trajectories;
};

/// Sends every photon-number configuration of the source through the
/// protocol. Needs a registry cutoff of at least 3 (ConfigurationError).
MultiphotonReport run_multiphoton_error(const SourceSpec& source, const ProtocolConfig& cfg,
                                        const RegistryPtr& registry = ModeRegistry::standard());

}  // namespace fockdist
