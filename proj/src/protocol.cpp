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

#include "fockdist/protocol.hpp"

#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>
#include <tuple>

#include "fockdist/errors.hpp"

namespace fockdist {

std::string_view to_string(Variant v) { return v == Variant::Port3 ? "port3" : "port3+port4"; }
std::string_view to_string(Acceptance a) { return a == Acceptance::Both ? "both" : "d-only"; }
std::string_view to_string(DoubleClickPolicy p) { return p == DoubleClickPolicy::Abort ? "abort" : "random"; }

Variant parse_variant(std::string_view name) {
    if (name == "port3") return Variant::Port3;
    if (name == "port3+port4" || name == "port34" || name == "both") return Variant::Port3And4;
    throw ConfigurationError("unknown variant '" + std::string(name) + "' (port3 | port3+port4)");
}

Acceptance parse_acceptance(std::string_view name) {
    if (name == "both") return Acceptance::Both;
    if (name == "d-only" || name == "d") return Acceptance::DOnly;
    throw ConfigurationError("unknown acceptance '" + std::string(name) + "' (both | d-only)");
}

DoubleClickPolicy parse_double_click(std::string_view name) {
    if (name == "abort") return DoubleClickPolicy::Abort;
    if (name == "random") return DoubleClickPolicy::RandomAssign;
    throw ConfigurationError("unknown double-click policy '" + std::string(name) + "' (abort | random)");
}

void ProtocolConfig::validate() const {
    signal.validate();
    detector.validate();
    if (const auto* r = std::get_if<RotationParams>(&noise.params)) {
        r->validate();
    }
}

DecoderPorts port3_decoder() { return {}; }

DecoderPorts port4_decoder() {
    DecoderPorts d;
    d.input = Path::Port4;
    d.open = Path::Open4;
    d.long_arm = Path::Long4;
    d.short_arm = Path::Short4;
    d.y = Path::Y4;
    d.y_id = "Y4";
    d.flip_y = true;
    d.analyzer = port4_analyzer();
    d.name = "port4";
    return d;
}

ModeTransform alice_split(const RegistryPtr& registry, PhaseConvention convention) {
    return polarizing_beam_splitter(registry, Path::In, Path::InOpen, Path::Ch1, Path::Ch2, convention);
}

ModeTransform bob_merge(const RegistryPtr& registry, PhaseConvention convention) {
    return polarizing_beam_splitter(registry, Path::Ch1, Path::Ch2, Path::Port3, Path::Port4, convention);
}

std::vector<ModeTransform> decoder_circuit(const RegistryPtr& registry, const DecoderPorts& ports,
                                           PhaseConvention convention) {
    std::vector<ModeTransform> c;
    c.push_back(beam_splitter(registry, ports.input, ports.open, ports.long_arm, ports.short_arm, convention));
    c.push_back(delay_line(registry, ports.long_arm, 1));
    c.push_back(half_wave_plate(registry, ports.long_arm, 90.0));
    c.push_back(polarizing_beam_splitter(registry, ports.long_arm, ports.short_arm, ports.y, ports.analyzer.x, convention));
    if (ports.flip_y) {
        c.push_back(half_wave_plate(registry, ports.y, 90.0));
    }
    return c;
}

namespace {

/// Decoder + analyzer transforms and detector layout per (registry, convention, variant).
struct DecoderSetup {
    std::vector<DecoderPorts> decoders;
    std::vector<ModeTransform> circuit;
    std::vector<Detector> detectors;
    ModeTransform split;
    ModeTransform merge;
};

const DecoderSetup& decoder_setup(const RegistryPtr& registry, PhaseConvention convention, Variant variant) {
    static std::mutex mutex;
    static std::map<std::tuple<const ModeRegistry*, int, int>, std::pair<RegistryPtr, std::unique_ptr<DecoderSetup>>>
        cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{registry.get(), static_cast<int>(convention), static_cast<int>(variant)}];
    if (!slot.second) {
        std::vector<DecoderPorts> decoders{port3_decoder()};
        if (variant == Variant::Port3And4) {
            decoders.push_back(port4_decoder());
        }
        std::vector<ModeTransform> circuit;
        std::vector<Detector> detectors;
        for (const auto& d : decoders) {
            for (auto& t : decoder_circuit(registry, d, convention)) {
                circuit.push_back(std::move(t));
            }
            for (auto& t : analyzer_circuit(registry, d.analyzer, convention)) {
                circuit.push_back(std::move(t));
            }
            for (int t = 0; t <= registry->max_timebin(); ++t) {
                const auto& a = d.analyzer;
                detectors.push_back({{a.d_id, t}, {{a.det_d, Pol::H, t}, {a.det_d, Pol::V, t}}, true});
                detectors.push_back({{a.dbar_id, t}, {{a.det_dbar, Pol::H, t}, {a.det_dbar, Pol::V, t}}, true});
            }
            for (auto& b : bucket_detectors(registry, d.y, d.y_id)) {
                detectors.push_back(std::move(b));
            }
        }
        slot.first = registry;
        slot.second = std::make_unique<DecoderSetup>(DecoderSetup{std::move(decoders), std::move(circuit),
                                                                  std::move(detectors), alice_split(registry, convention),
                                                                  bob_merge(registry, convention)});
    }
    return *slot.second;
}

bool coincident(const DetectionOutcome& o, const DecoderPorts& d) {
    return (o.clicks(d.analyzer.d_id, kCoincidenceWindow) > 0 || o.clicks(d.analyzer.dbar_id, kCoincidenceWindow) > 0) &&
           o.clicks(d.y_id, kCoincidenceWindow) > 0;
}

int photons_on(const FockState& state, Path port) {
    const auto& reg = *state.registry();
    int most = 0;
    int least = OccupationVector::kMaxPhotons + 1;
    for (const auto& t : state.terms()) {
        int n = 0;
        for (ModeIndex m : t.occupation.photons()) {
            n += reg.label(m).path == port ? 1 : 0;
        }
        most = std::max(most, n);
        least = std::min(least, n);
    }
    return most == least ? most : -1;
}

std::vector<AcceptedBranch> postselect_branches(const std::vector<DetectionOutcome>& outcomes,
                                                const DecoderSetup& setup, const ProtocolConfig& cfg,
                                                const SignalState& target) {
    std::vector<AcceptedBranch> branches;
    std::vector<DetectionOutcome> remaining = outcomes;
    for (const auto& dec : setup.decoders) {
        auto ps = postselect_coincidence(remaining, kCoincidenceWindow, dec.analyzer, dec.y_id);
        std::erase_if(remaining, [&dec](const DetectionOutcome& o) { return coincident(o, dec); });
        for (const auto& c : ps.accepted) {
            std::vector<std::pair<AnalyzerResult, double>> results;
            if (c.double_click) {
                if (cfg.double_click == DoubleClickPolicy::RandomAssign) {
                    results = {{AnalyzerResult::D, 0.5}, {AnalyzerResult::Dbar, 0.5}};
                }
            } else {
                results = {{c.x_detector == dec.analyzer.d_id ? AnalyzerResult::D : AnalyzerResult::Dbar, 1.0}};
            }
            for (auto [result, share] : results) {
                if (cfg.acceptance == Acceptance::DOnly && result == AnalyzerResult::Dbar) {
                    continue;
                }
                FockState corrected = c.outcome.conditional;
                // With the imaginary convention the decoder's reflections
                // leave a fixed sign on V at Y, so that frame flips the
                // correction.
                const bool flip = (result == AnalyzerResult::Dbar) != (cfg.convention == PhaseConvention::Imaginary);
                if (photons_on(corrected, dec.y) == 1) {
                    corrected = correct_phase(corrected, flip ? AnalyzerResult::Dbar : AnalyzerResult::D, dec.y);
                } else if (flip) {
                    corrected = apply_transform(corrected, phase_shifter(corrected.registry(), dec.y, std::numbers::pi));
                }
                double fidelity =
                    polarization_fidelity(corrected, dec.y, kCoincidenceWindow, target.alpha, target.beta);
                AcceptedBranch b{dec.name + (result == AnalyzerResult::D ? ":D" : ":Dbar"),
                                 result,
                                 c.outcome.probability * share,
                                 fidelity,
                                 c.double_click,
                                 c.outcome.photons,
                                 std::move(corrected),
                                 dec.y};
                branches.push_back(std::move(b));
            }
        }
    }
    return branches;
}

}  // namespace

FockState received_state(const FockState& input, const NoiseDraw& noise, PhaseConvention convention) {
    const auto& setup = decoder_setup(input.registry(), convention, Variant::Port3);
    FockState s = apply_transform(input, setup.split);
    s = apply_noise(s, noise);
    return apply_transform(s, setup.merge);
}

bool parity_good(const ModeRegistry& registry, const OccupationVector& occupation, Path port) {
    int n0 = 0;
    int n1 = 0;
    Pol p0 = Pol::H;
    Pol p1 = Pol::H;
    for (ModeIndex m : occupation.photons()) {
        const auto& l = registry.label(m);
        if (l.path != port) {
            continue;
        }
        if (l.timebin == 0) {
            ++n0;
            p0 = l.pol;
        } else if (l.timebin == 1) {
            ++n1;
            p1 = l.pol;
        }
    }
    return n0 == 1 && n1 == 1 && p0 != p1;
}

double parity_factor(const FockState& received, Variant variant) {
    const ModeRegistry& reg = *received.registry();
    return project(received, [&](const OccupationVector& occ) {
               return parity_good(reg, occ, Path::Port3) ||
                      (variant == Variant::Port3And4 && parity_good(reg, occ, Path::Port4));
           })
        .probability;
}

std::vector<AcceptedBranch> decode_and_postselect(const FockState& received, const ProtocolConfig& cfg,
                                                  const DetectorModel& detector, const SignalState& target) {
    const auto& setup = decoder_setup(received.registry(), cfg.convention, cfg.variant);
    FockState decoded = apply_circuit(received, setup.circuit);
    return postselect_branches(measure(decoded, setup.detectors, detector), setup, cfg, target);
}

RunReport run_distribution(const ProtocolConfig& cfg) {
    cfg.validate();
    const auto registry = ModeRegistry::standard();
    const auto& setup = decoder_setup(registry, cfg.convention, cfg.variant);

    FockState received = received_state(encoder_state(registry, cfg.signal), cfg.noise, cfg.convention);
    FockState decoded = apply_circuit(received, setup.circuit);

    RunReport report;
    report.noise_draw = cfg.noise;
    report.parity_factor = parity_factor(received, cfg.variant);

    auto branches = postselect_branches(measure(decoded, setup.detectors, cfg.detector), setup, cfg, cfg.signal);
    double success_ideal = 0.0;
    if (cfg.detector.efficiency == 1.0) {
        for (const auto& b : branches) success_ideal += b.probability;
    } else {
        DetectorModel ideal{1.0, cfg.detector.resolving};
        for (const auto& b : postselect_branches(measure(decoded, setup.detectors, ideal), setup, cfg, cfg.signal)) {
            success_ideal += b.probability;
        }
    }

    std::map<std::string, OutcomeRecord> by_label;
    double weighted_fidelity = 0.0;
    for (const auto& b : branches) {
        report.success_probability += b.probability;
        weighted_fidelity += b.probability * b.fidelity;
        if (b.double_click) {
            report.double_click_probability += b.probability;
        }
        auto& rec = by_label[b.label];
        rec.label = b.label;
        rec.probability += b.probability;
        rec.fidelity += b.probability * b.fidelity;
    }
    for (auto& [label, rec] : by_label) {
        if (rec.probability > 0.0) {
            rec.fidelity /= rec.probability;
        }
        report.outcomes.push_back(rec);
    }
    if (report.success_probability > 0.0) {
        report.fidelity = std::min(1.0, weighted_fidelity / report.success_probability);
    }
    if (report.parity_factor > 0.0) {
        report.routing_factor = success_ideal / report.parity_factor;
    }
    if (success_ideal > 0.0) {
        report.detection_factor = report.success_probability / success_ideal;
    }
    return report;
}

MonteCarloReport run_monte_carlo(const MonteCarloConfig& cfg) {
    if (cfg.trials == 0) {
        throw ConfigurationError("Monte Carlo needs at least one trial");
    }
    cfg.base.validate();
    std::vector<TrialRow> rows(cfg.trials);
    const FockState encoded = encoder_state(ModeRegistry::standard(), cfg.base.signal);
    unsigned threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, cfg.trials));

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            ProtocolConfig trial = cfg.base;
            trial.noise = sample_noise_at(cfg.sampler, i);
            if (!cfg.decode) {
                double parity = parity_factor(received_state(encoded, trial.noise, trial.convention), trial.variant);
                rows[i] = {i, 0.0, parity, std::nullopt, std::move(trial.noise)};
                continue;
            }
            RunReport r = run_distribution(trial);
            rows[i] = {i, r.success_probability, r.parity_factor, r.fidelity, std::move(trial.noise)};
        }
    };
    if (threads <= 1) {
        work(0, cfg.trials);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        std::size_t chunk = (cfg.trials + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            std::size_t begin = t * chunk;
            std::size_t end = std::min(cfg.trials, begin + chunk);
            pool.emplace_back([&, t, begin, end] {
                try {
                    work(begin, end);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    MonteCarloReport rep;
    rep.trials = cfg.trials;
    rep.seed = cfg.sampler.seed;
    rep.decoded = cfg.decode;
    double s1 = 0, s2 = 0, p1 = 0, p2 = 0, f1 = 0, f2 = 0;
    double fmin = 1.0;
    for (const auto& r : rows) {
        s1 += r.success_probability;
        s2 += r.success_probability * r.success_probability;
        p1 += r.parity_factor;
        p2 += r.parity_factor * r.parity_factor;
        if (r.fidelity) {
            ++rep.accepted_trials;
            f1 += *r.fidelity;
            f2 += *r.fidelity * *r.fidelity;
            fmin = std::min(fmin, *r.fidelity);
        }
    }
    auto mean_se = [](double sum, double sq, std::size_t n) {
        double m = sum / static_cast<double>(n);
        if (n < 2) return std::pair{m, 0.0};
        double var = std::max(0.0, (sq - sum * m) / static_cast<double>(n - 1));
        return std::pair{m, std::sqrt(var / static_cast<double>(n))};
    };
    std::tie(rep.mean_success, rep.se_success) = mean_se(s1, s2, rep.trials);
    std::tie(rep.mean_parity, rep.se_parity) = mean_se(p1, p2, rep.trials);
    if (rep.accepted_trials > 0) {
        auto [m, se] = mean_se(f1, f2, rep.accepted_trials);
        rep.mean_fidelity = m;
        rep.se_fidelity = se;
        rep.min_fidelity = fmin;
    }
    if (cfg.keep_trials) {
        rep.rows = std::move(rows);
    }
    return rep;
}

MultiphotonReport run_multiphoton_error(const SourceSpec& source, const ProtocolConfig& cfg,
                                        const RegistryPtr& registry) {
    cfg.validate();
    if (registry->cutoff() < 3) {
        throw ConfigurationError("multi-photon analysis needs a registry cutoff of at least 3, got " +
                                 std::to_string(registry->cutoff()));
    }
    auto src = photon_number_trajectories(registry, source);
    MultiphotonReport rep;
    rep.source = source.kind;
    rep.truncation_error = src.truncation_error;

    const ModeRegistry& reg = *registry;
    double error_sum = 0.0;
    for (const auto& traj : src.trajectories) {
        auto pulse_counts = [&reg](const OccupationVector& occ) {
            std::pair<int, int> n{0, 0};
            for (ModeIndex m : occ.photons()) {
                const auto& l = reg.label(m);
                if (l.path == Path::In) {
                    (l.timebin == 0 ? n.first : n.second) += 1;
                }
            }
            return n;
        };
        rep.p11_input += traj.weight * project(traj.state, [&](const OccupationVector& occ) {
                                           auto n = pulse_counts(occ);
                                           return n.first == 1 && n.second == 1;
                                       }).probability;
        rep.pmul_input += traj.weight * project(traj.state, [&](const OccupationVector& occ) {
                                            auto n = pulse_counts(occ);
                                            return n.first >= 2 || n.second >= 2;
                                        }).probability;

        FockState received = received_state(traj.state, cfg.noise, cfg.convention);
        TrajectoryRecord rec{traj.n_ref, traj.n_sig, traj.weight};
        for (const auto& b : decode_and_postselect(received, cfg, cfg.detector, source.signal)) {
            double p = traj.weight * b.probability;
            rec.accepted += p;
            rec.error += p * (1.0 - b.fidelity);
            if (b.fidelity < 1.0 - 1e-9) {
                rec.false_accept += p;
            }
        }
        rep.accepted_probability += rec.accepted;
        rep.false_accept_probability += rec.false_accept;
        error_sum += rec.error;
        if (traj.n_ref > 1 || traj.n_sig > 1) {
            rep.accepted_multiphoton += rec.accepted;
        } else if (traj.n_ref == 1 && traj.n_sig == 1) {
            rep.accepted_single += rec.accepted;
        }
        rep.trajectories.push_back(rec);
    }
    if (rep.accepted_probability > 0.0) {
        rep.error_rate = error_sum / rep.accepted_probability;
    }
    return rep;
}

}  // namespace fockdist
