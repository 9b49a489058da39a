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
#include <map>
#include <string>
#include <vector>

#include "fockdist/optics.hpp"

namespace fockdist {

enum class Resolving { Threshold, NumberResolving };

struct DetectorModel {
    double efficiency = 1.0;
    Resolving resolving = Resolving::Threshold;

    void validate() const;
};

/// Threshold click probability 1 - (1 - eta)^n. No dark counts.
double click_probability(int photons, const DetectorModel& model);

/// P(k registered | n photons) = Binomial(n, eta) at k, for k = 0..n.
std::vector<double> count_distribution(int photons, const DetectorModel& model);

struct DetectorKey {
    std::string id;
    int timebin = 0;

    auto operator<=>(const DetectorKey&) const = default;
};

/// A detector resolving one time bin of a set of modes (both polarizations of
/// a port, typically). Absorbing detectors remove the photons from the
/// conditional state. Non-absorbing ones only condition on the count, which
/// models a polarization-blind detector whose photon is analysed afterwards.
struct Detector {
    DetectorKey key;
    std::vector<ModeLabel> modes;
    bool absorbing = true;
};

/// One fine-grained measurement branch. `photons` is the actual number of
/// photons that reached each detector (not observable), `pattern` what the
/// detectors report (click = 1 for threshold detectors, counts otherwise).
/// Zero entries are omitted from both maps.
struct DetectionOutcome {
    std::map<DetectorKey, int> pattern;
    std::map<DetectorKey, int> photons;
    double probability = 0.0;
    FockState conditional;

    int clicks(const std::string& id, int timebin) const;
};

/// Complete measurement of the given detectors on a normalized state.
/// Outcome probabilities sum to the state's squared norm.
std::vector<DetectionOutcome> measure(const FockState& state, const std::vector<Detector>& detectors,
                                      const DetectorModel& model);

/// Measures further detectors on every outcome's conditional state and
/// merges the patterns.
std::vector<DetectionOutcome> refine(const std::vector<DetectionOutcome>& outcomes,
                                     const std::vector<Detector>& detectors, const DetectorModel& model);

/// Port wiring of one D_X analyzer: HWP(45) on x, then a PBS from (x, open)
/// to (det_d, det_dbar). Photons in |D>_x reach det_d.
struct AnalyzerPorts {
    Path x = Path::X;
    Path open = Path::XOpen;
    Path det_d = Path::DetD;
    Path det_dbar = Path::DetDbar;
    std::string d_id = "D";
    std::string dbar_id = "Dbar";
};

inline AnalyzerPorts port4_analyzer() {
    return {Path::X4, Path::XOpen4, Path::DetD4, Path::DetDbar4, "D4", "Dbar4"};
}

/// The HWP(45) + PBS transforms of the analyzer.
std::vector<ModeTransform> analyzer_circuit(const RegistryPtr& registry, const AnalyzerPorts& ports,
                                            PhaseConvention convention = PhaseConvention::Real);

/// Projects mode X onto {|D>, |Dbar>} and measures both detectors in every
/// time bin. Conditionals keep every other mode.
std::vector<DetectionOutcome> measure_analyzer_X(const FockState& state, const DetectorModel& model,
                                                 const AnalyzerPorts& ports = {},
                                                 PhaseConvention convention = PhaseConvention::Real);

/// Polarization-blind count of `port` per time bin, non-absorbing.
std::vector<Detector> bucket_detectors(const RegistryPtr& registry, Path port, const std::string& id);

struct Coincidence {
    DetectionOutcome outcome;
    /// True when both the D and Dbar detectors clicked in the window.
    bool double_click = false;
    /// Which analyzer detector clicked (d_id or dbar_id); with a double
    /// click, d_id.
    std::string x_detector;
};

struct PostSelection {
    double accepted_probability = 0.0;
    std::vector<Coincidence> accepted;
};

/// Keeps outcomes with at least one X click and at least one Y click, both in
/// `window`. Clicks in other bins do not veto an outcome.
PostSelection postselect_coincidence(const std::vector<DetectionOutcome>& outcomes, int window,
                                     const AnalyzerPorts& x_ports = {}, const std::string& y_id = "Y");

enum class AnalyzerResult { D, Dbar };

/// Identity for D; PS(pi) on the V component of `port` for Dbar. Throws
/// ValidationError unless every term has exactly one photon on `port`.
FockState correct_phase(const FockState& state, AnalyzerResult outcome, Path port = Path::Y);

/// Fidelity of the photons on (port, timebin) with the polarization
/// alpha|H> + beta|V>, tracing out every other mode: the expectation of
/// n_signal / n_total over sectors with at least one photon there. Equals
/// |<signal|psi>|^2 for a single photon. Returns 0 when no photon is present.
double polarization_fidelity(const FockState& state, Path port, int timebin, Complex alpha, Complex beta);

}  // namespace fockdist
