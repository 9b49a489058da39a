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

#include "fockdist/detection.hpp"

#include <cmath>
#include <numbers>

#include "fockdist/errors.hpp"

namespace fockdist {

void DetectorModel::validate() const {
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
        throw ValidationError("detector efficiency must lie in [0, 1]");
    }
}

double click_probability(int photons, const DetectorModel& model) {
    model.validate();
    if (photons <= 0) {
        return 0.0;
    }
    return 1.0 - std::pow(1.0 - model.efficiency, photons);
}

std::vector<double> count_distribution(int photons, const DetectorModel& model) {
    model.validate();
    if (photons < 0) {
        throw ValidationError("photon number must be non-negative");
    }
    const double eta = model.efficiency;
    std::vector<double> p(static_cast<std::size_t>(photons) + 1);
    double binom = 1.0;
    for (int k = 0; k <= photons; ++k) {
        p[static_cast<std::size_t>(k)] = binom * std::pow(eta, k) * std::pow(1.0 - eta, photons - k);
        binom = binom * (photons - k) / (k + 1);
    }
    return p;
}

int DetectionOutcome::clicks(const std::string& id, int timebin) const {
    auto it = pattern.find(DetectorKey{id, timebin});
    return it == pattern.end() ? 0 : it->second;
}

namespace {

struct Group {
    std::vector<FockState::Term> terms;
};

void enumerate_patterns(const std::vector<int>& photons, const DetectorModel& model, std::size_t i, double p,
                        std::vector<int>& pattern, std::map<std::vector<int>, double>& out) {
    if (p == 0.0) {
        return;
    }
    if (i == photons.size()) {
        out[pattern] += p;
        return;
    }
    if (photons[i] == 0) {
        pattern[i] = 0;
        enumerate_patterns(photons, model, i + 1, p, pattern, out);
        return;
    }
    auto dist = count_distribution(photons[i], model);
    for (int k = 0; k <= photons[i]; ++k) {
        pattern[i] = model.resolving == Resolving::Threshold ? (k > 0 ? 1 : 0) : k;
        enumerate_patterns(photons, model, i + 1, p * dist[static_cast<std::size_t>(k)], pattern, out);
    }
}

}  // namespace

std::vector<DetectionOutcome> measure(const FockState& state, const std::vector<Detector>& detectors,
                                      const DetectorModel& model) {
    model.validate();
    const auto& reg = state.registry();
    std::vector<int> owner(reg->size(), -1);
    for (std::size_t d = 0; d < detectors.size(); ++d) {
        for (const auto& m : detectors[d].modes) {
            ModeIndex idx = reg->index(m);
            if (owner[idx] != -1) {
                throw ConfigurationError("mode " + to_string(m) + " is watched by two detectors");
            }
            owner[idx] = static_cast<int>(d);
        }
    }

    std::map<std::vector<int>, Group> groups;
    std::vector<int> counts(detectors.size());
    std::vector<ModeIndex> rest;
    for (const auto& term : state.terms()) {
        std::fill(counts.begin(), counts.end(), 0);
        rest.clear();
        for (ModeIndex m : term.occupation.photons()) {
            int d = owner[m];
            if (d >= 0) {
                ++counts[static_cast<std::size_t>(d)];
                if (detectors[static_cast<std::size_t>(d)].absorbing) {
                    continue;
                }
            }
            rest.push_back(m);
        }
        groups[counts].terms.push_back({OccupationVector::from_photons(rest), term.amplitude});
    }

    std::vector<DetectionOutcome> outcomes;
    std::vector<int> pattern(detectors.size());
    for (auto& [photons, group] : groups) {
        FockState cond = FockState::from_terms(reg, std::move(group.terms));
        double w = cond.norm_squared();
        if (w <= 0.0) {
            continue;
        }
        cond = cond.normalized();
        std::map<std::vector<int>, double> patterns;
        enumerate_patterns(photons, model, 0, 1.0, pattern, patterns);
        for (const auto& [pat, p] : patterns) {
            DetectionOutcome o{{}, {}, w * p, cond};
            for (std::size_t d = 0; d < detectors.size(); ++d) {
                if (pat[d] != 0) {
                    o.pattern[detectors[d].key] = pat[d];
                }
                if (photons[d] != 0) {
                    o.photons[detectors[d].key] = photons[d];
                }
            }
            outcomes.push_back(std::move(o));
        }
    }
    return outcomes;
}

std::vector<DetectionOutcome> refine(const std::vector<DetectionOutcome>& outcomes,
                                     const std::vector<Detector>& detectors, const DetectorModel& model) {
    std::vector<DetectionOutcome> out;
    for (const auto& o : outcomes) {
        for (auto& sub : measure(o.conditional, detectors, model)) {
            sub.probability *= o.probability;
            sub.pattern.insert(o.pattern.begin(), o.pattern.end());
            sub.photons.insert(o.photons.begin(), o.photons.end());
            out.push_back(std::move(sub));
        }
    }
    return out;
}

std::vector<ModeTransform> analyzer_circuit(const RegistryPtr& registry, const AnalyzerPorts& ports,
                                            PhaseConvention convention) {
    std::vector<ModeTransform> c;
    c.push_back(half_wave_plate(registry, ports.x, 45.0));
    c.push_back(polarizing_beam_splitter(registry, ports.x, ports.open, ports.det_d, ports.det_dbar, convention));
    return c;
}

std::vector<DetectionOutcome> measure_analyzer_X(const FockState& state, const DetectorModel& model,
                                                 const AnalyzerPorts& ports, PhaseConvention convention) {
    const auto& reg = state.registry();
    FockState s = apply_circuit(state, analyzer_circuit(reg, ports, convention));
    std::vector<Detector> detectors;
    for (int t = 0; t <= reg->max_timebin(); ++t) {
        detectors.push_back({{ports.d_id, t}, {{ports.det_d, Pol::H, t}, {ports.det_d, Pol::V, t}}, true});
        detectors.push_back({{ports.dbar_id, t}, {{ports.det_dbar, Pol::H, t}, {ports.det_dbar, Pol::V, t}}, true});
    }
    return measure(s, detectors, model);
}

std::vector<Detector> bucket_detectors(const RegistryPtr& registry, Path port, const std::string& id) {
    std::vector<Detector> detectors;
    for (int t = 0; t <= registry->max_timebin(); ++t) {
        detectors.push_back({{id, t}, {{port, Pol::H, t}, {port, Pol::V, t}}, false});
    }
    return detectors;
}

PostSelection postselect_coincidence(const std::vector<DetectionOutcome>& outcomes, int window,
                                     const AnalyzerPorts& x_ports, const std::string& y_id) {
    PostSelection ps;
    for (const auto& o : outcomes) {
        bool d = o.clicks(x_ports.d_id, window) > 0;
        bool dbar = o.clicks(x_ports.dbar_id, window) > 0;
        bool y = o.clicks(y_id, window) > 0;
        if ((d || dbar) && y) {
            ps.accepted_probability += o.probability;
            ps.accepted.push_back({o, d && dbar, d ? x_ports.d_id : x_ports.dbar_id});
        }
    }
    return ps;
}

FockState correct_phase(const FockState& state, AnalyzerResult outcome, Path port) {
    const auto& reg = *state.registry();
    for (const auto& t : state.terms()) {
        int n = 0;
        for (ModeIndex m : t.occupation.photons()) {
            n += reg.label(m).path == port ? 1 : 0;
        }
        if (n != 1) {
            throw ValidationError("phase correction needs exactly one photon on " + std::string(to_string(port)) +
                                  ", found " + std::to_string(n));
        }
    }
    if (outcome == AnalyzerResult::D) {
        return state;
    }
    return apply_transform(state, phase_shifter(state.registry(), port, std::numbers::pi));
}

double polarization_fidelity(const FockState& state, Path port, int timebin, Complex alpha, Complex beta) {
    const auto& reg = state.registry();
    const ModeIndex h = reg->index(port, Pol::H, timebin);
    const ModeIndex v = reg->index(port, Pol::V, timebin);
    // a_s = conj(alpha) a_H + conj(beta) a_V, applied sector by sector
    std::map<int, std::vector<FockState::Term>> lowered;
    std::map<int, double> weight;
    for (const auto& t : state.terms()) {
        int nh = t.occupation.count(h);
        int nv = t.occupation.count(v);
        int n = nh + nv;
        if (n == 0) {
            continue;
        }
        weight[n] += std::norm(t.amplitude);
        auto remove_one = [&](ModeIndex mode) {
            std::vector<ModeIndex> photons(t.occupation.photons().begin(), t.occupation.photons().end());
            photons.erase(std::find(photons.begin(), photons.end(), mode));
            return OccupationVector::from_photons(photons);
        };
        if (nh > 0) {
            lowered[n].push_back({remove_one(h), std::conj(alpha) * std::sqrt(double(nh)) * t.amplitude});
        }
        if (nv > 0) {
            lowered[n].push_back({remove_one(v), std::conj(beta) * std::sqrt(double(nv)) * t.amplitude});
        }
    }
    double total = 0.0;
    double signal = 0.0;
    for (const auto& [n, w] : weight) {
        total += w;
    }
    if (total <= 0.0) {
        return 0.0;
    }
    for (auto& [n, terms] : lowered) {
        signal += FockState::from_terms(reg, std::move(terms)).norm_squared() / n;
    }
    double norm = std::norm(alpha) + std::norm(beta);
    return std::clamp(signal / (total * norm), 0.0, 1.0);
}

}  // namespace fockdist
