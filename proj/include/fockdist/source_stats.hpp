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
#include <string>
#include <vector>

namespace fockdist {

inline constexpr double kDefaultThreshold = 20.0;

/// Photon statistics of a source on Alice's two pulses.
struct StatsResult {
    /// Exactly one photon in the signal and one in the reference.
    double p11 = 0.0;
    /// Two or more photons in the signal or in the reference (union event).
    double pmul = 0.0;
    /// p11 / pmul; empty when pmul is 0.
    std::optional<double> ratio;
    double threshold = kDefaultThreshold;
    /// p11 >= threshold * pmul and p11 > 0.
    bool condition_met = false;
    /// Coherent pair: the leading-order lower bound e^{-(nu+mu)} (nu^2 + mu^2)/2.
    std::optional<double> bound;
    /// PDC: pmul / p11^2 (the implementation-derived constant).
    std::optional<double> pmul_over_p11_sq;
    /// Triggered + coherent: the mu interval where the condition holds.
    std::optional<double> mu_window_low;
    std::optional<double> mu_window_high;
};

/// Two independent coherent pulses with means nu (signal) and mu (reference).
/// Throws ConfigurationError for negative or non-finite means.
StatsResult coherent_stats(double nu, double mu, double threshold = kDefaultThreshold);

/// Pair source of the two-pulse preparation circuit with Poisson pair number
/// of mean p. Each emitted pair leaves one H photon heading for the reference
/// pulse and one V photon heading for the signal pulse, and each reaches the
/// output with probability 1/2. Throws ConfigurationError unless 0 <= p <= 0.2.
StatsResult pdc_stats(double pair_prob, double threshold = kDefaultThreshold);

/// Triggered single photons on the signal pulse ({0: 1 - p1 - pm, 1: p1,
/// 2+: pm}) and a coherent reference of mean mu. Throws ConfigurationError
/// unless p1, pm >= 0 and p1 + pm <= 1.
StatsResult triggered_plus_coherent_stats(double trigger_p1, double trigger_pmul, double mu,
                                          double threshold = kDefaultThreshold);

}  // namespace fockdist
