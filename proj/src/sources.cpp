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

#include "fockdist/sources.hpp"

#include <cmath>
#include <numbers>

#include "fockdist/errors.hpp"

namespace fockdist {

namespace {

using std::numbers::pi;

double wrap(double phi) {
    double r = std::fmod(phi, 2.0 * pi);
    return r < 0.0 ? r + 2.0 * pi : r;
}

void require_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError(std::string(name) + " must lie in [0, 1]");
    }
}

}  // namespace

void SignalState::validate() const {
    double n = std::norm(alpha) + std::norm(beta);
    if (!(std::abs(n - 1.0) <= 1e-12)) {
        throw ValidationError("signal state is not normalized: |alpha|^2 + |beta|^2 = " + std::to_string(n));
    }
}

SignalState SignalState::normalized(Complex alpha, Complex beta) {
    double n = std::sqrt(std::norm(alpha) + std::norm(beta));
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw ValidationError("signal amplitudes must not both be zero");
    }
    return {alpha / n, beta / n};
}

Eigen::Matrix2cd SignalState::preparation_matrix() const {
    Eigen::Matrix2cd u;
    u << alpha, -std::conj(beta), beta, std::conj(alpha);
    return u;
}

std::string_view to_string(SourceKind kind) {
    switch (kind) {
        case SourceKind::Ideal:
            return "ideal";
        case SourceKind::PdcFig3:
            return "pdc-fig3";
        case SourceKind::CoherentPair:
            return "coherent-pair";
        case SourceKind::TriggeredPlusCoherent:
            return "triggered-plus-coherent";
        case SourceKind::FockPair:
            return "fock-pair";
    }
    return "?";
}

SourceKind parse_source_kind(std::string_view name) {
    if (name == "ideal") return SourceKind::Ideal;
    if (name == "pdc-fig3" || name == "pdc") return SourceKind::PdcFig3;
    if (name == "coherent-pair" || name == "coherent") return SourceKind::CoherentPair;
    if (name == "triggered-plus-coherent" || name == "triggered") return SourceKind::TriggeredPlusCoherent;
    if (name == "fock-pair") return SourceKind::FockPair;
    throw ConfigurationError("unknown source kind '" + std::string(name) + "'");
}

void SourceSpec::validate() const {
    signal.validate();
    if (!(nu >= 0.0) || !(mu >= 0.0) || !std::isfinite(nu) || !std::isfinite(mu)) {
        throw ValidationError("mean photon numbers must be non-negative");
    }
    if (!(pair_mean >= 0.0) || !std::isfinite(pair_mean)) {
        throw ValidationError("pair mean must be non-negative");
    }
    require_probability(trigger_p1, "trigger_p1");
    require_probability(trigger_pmul, "trigger_pmul");
    if (trigger_p1 + trigger_pmul > 1.0 + 1e-12) {
        throw ValidationError("trigger_p1 + trigger_pmul exceeds 1");
    }
    if (n_ref < 0 || n_sig < 0) {
        throw ValidationError("photon numbers must be non-negative");
    }
    if (cutoff < 0) {
        throw ValidationError("cutoff must be non-negative");
    }
}

double poisson_pmf(int n, double mean) {
    if (n < 0) {
        return 0.0;
    }
    if (mean == 0.0) {
        return n == 0 ? 1.0 : 0.0;
    }
    return std::exp(n * std::log(mean) - mean - std::lgamma(n + 1.0));
}

FockState number_state(const RegistryPtr& registry, int n_ref, int n_sig, const SignalState& signal) {
    signal.validate();
    if (n_ref < 0 || n_sig < 0) {
        throw ValidationError("photon numbers must be non-negative");
    }
    std::vector<ModeLabel> photons;
    photons.insert(photons.end(), static_cast<std::size_t>(n_ref), ModeLabel{Path::In, Pol::H, 0});
    photons.insert(photons.end(), static_cast<std::size_t>(n_sig), ModeLabel{Path::In, Pol::H, 1});
    FockState s = FockState::basis(registry, photons);
    s = apply_transform(s, half_wave_plate(registry, Path::In, 45.0, 0));
    s = apply_transform(s, polarization_unitary(registry, Path::In, signal.preparation_matrix(), 1));
    return s;
}

FockState encoder_state(const RegistryPtr& registry, const SignalState& signal) {
    signal.validate();
    const double r = std::sqrt(0.5);
    std::vector<FockState::Term> terms;
    for (Pol ref : {Pol::H, Pol::V}) {
        for (Pol sig : {Pol::H, Pol::V}) {
            Complex amp = r * (sig == Pol::H ? signal.alpha : signal.beta);
            std::array<ModeIndex, 2> photons{registry->index(Path::In, ref, 0), registry->index(Path::In, sig, 1)};
            terms.push_back({OccupationVector::from_photons(photons), amp});
        }
    }
    return FockState::from_terms(registry, std::move(terms));
}

SignalOptics signal_optics(const SignalState& signal) {
    signal.validate();
    double a = std::abs(signal.alpha);
    double b = std::abs(signal.beta);
    double hwp = std::atan2(a, b) * 180.0 / pi;
    // |V> -> |alpha| H - |beta| V; the PS restores the relative phase (and sign)
    double ps = wrap(pi + std::arg(signal.beta) - std::arg(signal.alpha));
    return {hwp, ps};
}

std::vector<ModeTransform> pdc_circuit(const RegistryPtr& registry, const SignalState& signal,
                                       PhaseConvention convention) {
    auto optics = signal_optics(signal);
    std::vector<ModeTransform> c;
    c.push_back(polarizing_beam_splitter(registry, Path::Pdc, Path::PdcOpen, Path::SrcShort, Path::SrcLong, convention));
    c.push_back(delay_line(registry, Path::SrcLong, 1));
    c.push_back(half_wave_plate(registry, Path::SrcShort, 45.0));
    c.push_back(half_wave_plate(registry, Path::SrcLong, optics.hwp_deg));
    c.push_back(phase_shifter(registry, Path::SrcLong, optics.ps_rad));
    c.push_back(beam_splitter(registry, Path::SrcShort, Path::SrcLong, Path::In, Path::SrcDump, convention));
    return c;
}

FockState pdc_pairs(const RegistryPtr& registry, int pairs) {
    std::vector<ModeLabel> photons;
    photons.insert(photons.end(), static_cast<std::size_t>(pairs), ModeLabel{Path::Pdc, Pol::H, 0});
    photons.insert(photons.end(), static_cast<std::size_t>(pairs), ModeLabel{Path::Pdc, Pol::V, 0});
    return FockState::basis(registry, photons);
}

PdcPreparation pdc_source_state(const RegistryPtr& registry, const SignalState& signal, PhaseConvention convention) {
    auto circuit = pdc_circuit(registry, signal, convention);
    FockState out = apply_circuit(pdc_pairs(registry, 1), circuit);
    const ModeRegistry& reg = *registry;
    auto proj = project(out, [&reg](const OccupationVector& occ) {
        for (ModeIndex m : occ.photons()) {
            if (reg.label(m).path != Path::In) {
                return false;
            }
        }
        return true;
    });
    return {proj.probability, proj.state};
}

CoherentPairState coherent_pair_state(const RegistryPtr& registry, const SourceSpec& spec) {
    spec.validate();
    if (spec.cutoff < 2) {
        throw ConfigurationError("coherent-pair source needs a per-pulse cutoff of at least 2");
    }
    if (spec.cutoff > registry->cutoff()) {
        throw ConfigurationError("source cutoff " + std::to_string(spec.cutoff) + " exceeds the registry cutoff " +
                                 std::to_string(registry->cutoff()));
    }
    FockState sum(registry);
    double kept = 0.0;
    for (int n = 0; n <= spec.cutoff; ++n) {
        for (int m = 0; m <= spec.cutoff && n + m <= registry->cutoff(); ++m) {
            double p = poisson_pmf(n, spec.mu) * poisson_pmf(m, spec.nu);
            if (p == 0.0) {
                continue;
            }
            kept += p;
            sum = sum + number_state(registry, n, m, spec.signal).scaled(std::sqrt(p));
        }
    }
    return {sum.normalized(), std::max(0.0, 1.0 - kept)};
}

SourceTrajectories photon_number_trajectories(const RegistryPtr& registry, const SourceSpec& spec) {
    spec.validate();
    SourceTrajectories out;
    const int total_cutoff = registry->cutoff();
    auto add = [&](double w, int nr, int ns, FockState s) {
        if (w > 0.0) {
            out.trajectories.push_back({w, nr, ns, std::move(s)});
        }
    };
    double kept = 0.0;
    switch (spec.kind) {
        case SourceKind::Ideal:
            add(1.0, 1, 1, encoder_state(registry, spec.signal));
            kept = 1.0;
            break;
        case SourceKind::FockPair:
            if (spec.n_ref + spec.n_sig > total_cutoff) {
                throw ConfigurationError("fock-pair input exceeds the registry cutoff");
            }
            add(1.0, spec.n_ref, spec.n_sig, number_state(registry, spec.n_ref, spec.n_sig, spec.signal));
            kept = 1.0;
            break;
        case SourceKind::CoherentPair:
        case SourceKind::TriggeredPlusCoherent: {
            if (spec.cutoff > total_cutoff) {
                throw ConfigurationError("source cutoff exceeds the registry cutoff");
            }
            auto signal_p = [&](int n) {
                if (spec.kind == SourceKind::CoherentPair) {
                    return poisson_pmf(n, spec.nu);
                }
                double p0 = std::max(0.0, 1.0 - spec.trigger_p1 - spec.trigger_pmul);
                return n == 0 ? p0 : n == 1 ? spec.trigger_p1 : n == 2 ? spec.trigger_pmul : 0.0;
            };
            for (int nr = 0; nr <= spec.cutoff; ++nr) {
                for (int ns = 0; ns <= spec.cutoff && nr + ns <= total_cutoff; ++ns) {
                    double w = poisson_pmf(nr, spec.mu) * signal_p(ns);
                    kept += w;
                    if (w > 0.0) {
                        add(w, nr, ns, number_state(registry, nr, ns, spec.signal));
                    }
                }
            }
            break;
        }
        case SourceKind::PdcFig3: {
            auto circuit = pdc_circuit(registry, spec.signal);
            for (int n = 0; n <= spec.cutoff && 2 * n <= total_cutoff; ++n) {
                double w = poisson_pmf(n, spec.pair_mean);
                kept += w;
                if (w > 0.0) {
                    add(w, n, n, apply_circuit(pdc_pairs(registry, n), circuit));
                }
            }
            break;
        }
    }
    out.truncation_error = std::max(0.0, 1.0 - kept);
    return out;
}

}  // namespace fockdist
