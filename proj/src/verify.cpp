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

#include "fockdist/verify.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fockdist/bb84.hpp"
#include "fockdist/oracle.hpp"
#include "fockdist/protocol.hpp"
#include "fockdist/rng.hpp"
#include "fockdist/source_stats.hpp"

namespace fockdist {

namespace {

using Clock = std::chrono::steady_clock;

SignalState random_signal(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    return SignalState::normalized({g(rng), g(rng)}, {g(rng), g(rng)});
}

DephasingParams random_dephasing(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    return {u(rng), u(rng)};
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(4);
    os << x;
    return os.str();
}

ProtocolConfig ideal_config(const SignalState& signal, NoiseDraw noise) {
    ProtocolConfig c;
    c.signal = signal;
    c.noise = std::move(noise);
    c.detector = {1.0, Resolving::Threshold};
    return c;
}

void criterion_dephasing(CriterionResult& r, const VerifyOptions& o) {
    auto rng = trial_rng(o.seed, 1);
    std::vector<SignalState> signals;
    std::vector<DephasingParams> phases;
    for (int i = 0; i < 100; ++i) signals.push_back(random_signal(rng));
    for (int i = 0; i < 100; ++i) phases.push_back(random_dephasing(rng));
    double worst_f = 0.0;
    double worst_p = 0.0;
    for (const auto& s : signals) {
        for (const auto& p : phases) {
            NoiseDraw n;
            n.params = p;
            RunReport rep = run_distribution(ideal_config(s, n));
            worst_f = std::max(worst_f, rep.fidelity ? std::abs(1.0 - *rep.fidelity) : 1.0);
            worst_p = std::max(worst_p, std::abs(rep.parity_factor - 0.5));
        }
    }
    r.passed = worst_f <= 1e-10 && worst_p <= 1e-10;
    r.detail = "10000 runs; max |1-F| = " + fmt(worst_f) + ", max |parity-0.5| = " + fmt(worst_p);
}

void criterion_dephasing_amplitudes(CriterionResult& r, const VerifyOptions& o) {
    auto rng = trial_rng(o.seed, 2);
    const auto reg = ModeRegistry::standard();
    const double k = 1.0 / std::numbers::sqrt2;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        SignalState s = random_signal(rng);
        DephasingParams p = random_dephasing(rng);
        NoiseDraw n;
        n.params = p;
        FockState got = received_state(encoder_state(reg, s), n);
        auto ket = [&](Pol r, Pol sp, Complex c) {
            return FockState::basis(reg, {ModeLabel{Path::Port3, r, 0}, ModeLabel{Path::Port3, sp, 1}}, c);
        };
        const Complex eh = std::polar(1.0, p.phi_h);
        const Complex ev = std::polar(1.0, p.phi_v);
        FockState want = ket(Pol::H, Pol::H, k * s.alpha * eh * eh) + ket(Pol::V, Pol::V, k * s.beta * ev * ev) +
                         ket(Pol::V, Pol::H, k * s.alpha * eh * ev) + ket(Pol::H, Pol::V, k * s.beta * eh * ev);
        worst = std::max(worst, max_amplitude_difference(got, want));
    }
    r.passed = worst <= 1e-12;
    r.detail = "20 parameter sets; max amplitude deviation = " + fmt(worst);
}

void criterion_rotation_amplitudes(CriterionResult& r, const VerifyOptions& o) {
    auto rng = trial_rng(o.seed, 3);
    const auto reg = ModeRegistry::standard();
    const double k = 1.0 / std::numbers::sqrt2;
    double worst = 0.0;
    double worst3 = 0.0;
    for (int i = 0; i < 20; ++i) {
        SignalState s = random_signal(rng);
        NoiseDraw n = draw_noise(NoiseKind::HaarRotation, 0.0, rng);
        const RotationParams q = std::get<RotationParams>(n.params);
        FockState got = received_state(encoder_state(reg, s), n);

        auto ket = [&](Pol pr, Path r, Pol ps, Path sp, Complex c) {
            return FockState::basis(reg, {ModeLabel{r, pr, 0}, ModeLabel{sp, ps, 1}}, k * c);
        };
        const Path P3 = Path::Port3, P4 = Path::Port4;
        const Pol H = Pol::H, V = Pol::V;
        const Complex a = s.alpha, b = s.beta, d1 = q.delta1, g1 = q.gamma1, d2 = q.delta2, g2 = q.gamma2;
        std::vector<FockState> terms{
            ket(H, P3, H, P3, a * d1 * d1), ket(H, P3, V, P4, a * d1 * g1), ket(V, P4, H, P3, a * d1 * g1),
            ket(V, P4, V, P4, a * g1 * g1), ket(H, P4, H, P4, b * d2 * d2), ket(H, P4, V, P3, b * d2 * g2),
            ket(V, P3, H, P4, b * d2 * g2), ket(V, P3, V, P3, b * g2 * g2), ket(H, P4, H, P3, a * d1 * d2),
            ket(H, P4, V, P4, a * g1 * d2), ket(V, P3, H, P3, a * d1 * g2), ket(V, P3, V, P4, a * g1 * g2),
            ket(H, P3, H, P4, b * d1 * d2), ket(H, P3, V, P3, b * d1 * g2), ket(V, P4, H, P4, b * d2 * g1),
            ket(V, P4, V, P3, b * g1 * g2)};
        FockState want(reg);
        for (const auto& t : terms) want = want + t;
        worst = std::max(worst, max_amplitude_difference(got, want));

        const ModeRegistry& rr = *reg;
        FockState port3 = got.filtered([&](const OccupationVector& occ) {
            for (ModeIndex m : occ.photons()) {
                if (rr.label(m).path != P3) return false;
            }
            return true;
        });
        FockState want3 = ket(H, P3, H, P3, a * d1 * d1) + ket(V, P3, V, P3, b * g2 * g2) +
                          ket(V, P3, H, P3, d1 * g2 * a) + ket(H, P3, V, P3, d1 * g2 * b);
        worst3 = std::max(worst3, max_amplitude_difference(port3, want3));
    }
    r.passed = worst <= 1e-12 && worst3 <= 1e-12;
    r.detail = "20 SU(2) pairs; max deviation 16 terms = " + fmt(worst) + ", port-3 component = " + fmt(worst3);
}

void criterion_success_law(CriterionResult& r, const VerifyOptions& o) {
    auto rng = trial_rng(o.seed, 4);
    double worst = 0.0;
    double worst_f = 0.0;
    for (int i = 0; i < 20; ++i) {
        SignalState s = random_signal(rng);
        NoiseDraw n = draw_noise(NoiseKind::HaarRotation, 0.0, rng);
        const RotationParams q = std::get<RotationParams>(n.params);
        for (double eta : {0.3, 0.6, 1.0}) {
            ProtocolConfig c = ideal_config(s, n);
            c.detector.efficiency = eta;
            RunReport rep = run_distribution(c);
            double want = std::norm(q.delta1 * q.gamma2) / 2.0 * eta * eta / 4.0;
            worst = std::max(worst, std::abs(rep.success_probability - want));
            if (rep.fidelity) worst_f = std::max(worst_f, std::abs(1.0 - *rep.fidelity));
        }
    }
    r.passed = worst <= 1e-10 && worst_f <= 1e-10;
    r.detail = "60 runs; max |S - |d1 g2|^2/2 eta^2/4| = " + fmt(worst) + ", max |1-F| = " + fmt(worst_f);
}

void criterion_haar(CriterionResult& r, const VerifyOptions& o) {
    MonteCarloConfig mc;
    mc.base = ideal_config(SignalState::normalized({0.6, 0.0}, {0.0, 0.8}), {});
    mc.sampler = {NoiseKind::HaarRotation, o.seed, 0.0};
    mc.trials = o.haar_trials;
    mc.threads = o.threads;
    mc.decode = false;
    MonteCarloReport p3 = run_monte_carlo(mc);
    mc.base.variant = Variant::Port3And4;
    MonteCarloReport p34 = run_monte_carlo(mc);

    // Full pipeline on a subset: success = parity / 4 at eta = 1, fidelity 1.
    mc.base.variant = Variant::Port3;
    mc.trials = std::min<std::size_t>(o.haar_trials, 2000);
    mc.decode = true;
    mc.keep_trials = true;
    MonteCarloReport full = run_monte_carlo(mc);
    double worst = 0.0;
    for (const auto& row : full.rows) {
        worst = std::max(worst, std::abs(row.success_probability - row.parity_factor / 4.0));
    }
    double min_f = full.min_fidelity.value_or(0.0);

    r.passed = std::abs(p3.mean_parity - 0.125) <= 0.005 && std::abs(p34.mean_parity - 0.25) <= 0.01 &&
               worst <= 1e-12 && min_f >= 1.0 - 1e-10;
    r.detail = std::to_string(o.haar_trials) + " trials; port3 " + fmt(p3.mean_parity) + " +- " +
               fmt(p3.se_parity) + ", port3+4 " + fmt(p34.mean_parity) + " +- " + fmt(p34.se_parity) + "; " +
               std::to_string(full.trials) + " decoded: min F = " + fmt(min_f);
}

void criterion_bb84(CriterionResult& r, const VerifyOptions& o) {
    Bb84Config c;
    c.rounds = o.bb84_rounds;
    c.noise = {NoiseKind::HaarRotation, o.seed, 0.0};
    c.detector = {1.0, Resolving::Threshold};
    Bb84Report rep = run_bb84_session(c);
    bool session_ok = rep.sifted > 0 && rep.errors == 0 && rep.qber_expected.value_or(1.0) <= 1e-12;

    bool proj_ok = true;
    double proj_res = 0.0;
    for (const auto& chk : verify_projection_equivalence()) {
        proj_ok = proj_ok && chk.passed;
        proj_res = std::max(proj_res, chk.residual);
    }
    bool virt_ok = true;
    double virt_res = 0.0;
    for (const auto& chk : verify_virtual_qubits()) {
        virt_ok = virt_ok && chk.passed;
        virt_res = std::max(virt_res, chk.residual);
    }
    r.passed = session_ok && proj_ok && virt_ok;
    r.detail = std::to_string(rep.rounds) + " rounds, " + std::to_string(rep.sifted) + " sifted, QBER " +
               fmt(rep.qber.value_or(-1.0)) + "; projection residual " + fmt(proj_res) + "; virtual-qubit residual " +
               fmt(virt_res);
}

void criterion_sources(CriterionResult& r, const VerifyOptions&) {
    constexpr int kGrid = 50;
    int p11_violations = 0;
    int bound_violations = 0;
    for (int i = 0; i < kGrid; ++i) {
        for (int j = 0; j < kGrid; ++j) {
            double nu = static_cast<double>(i) / (kGrid - 1);
            double mu = static_cast<double>(j) / (kGrid - 1);
            StatsResult s = coherent_stats(nu, mu);
            p11_violations += s.p11 > s.pmul ? 1 : 0;
            bound_violations += s.pmul < *s.bound ? 1 : 0;
        }
    }
    double sup = 0.0;
    double last = 0.0;
    for (double p : {0.2, 0.1, 0.03, 0.01, 3e-3, 1e-3, 1e-4, 1e-5, 1e-6}) {
        last = *pdc_stats(p).pmul_over_p11_sq;
        sup = std::max(sup, last);
    }
    bool pdc_ok = std::isfinite(sup) && sup < 10.0 && std::abs(last - 3.5) < 1e-3;
    r.passed = p11_violations == 0 && bound_violations == 0 && pdc_ok;
    r.detail = "50x50 grid: " + std::to_string(p11_violations) + " p11>pmul, " + std::to_string(bound_violations) +
               " pmul<bound; pdc pmul/p11^2 sup " + fmt(sup) + ", at p=1e-6 " + fmt(last);
}

void criterion_multiphoton(CriterionResult& r, const VerifyOptions&) {
    ProtocolConfig c = ideal_config(SignalState::normalized({0.6, 0.0}, {0.0, 0.8}), {});
    SourceSpec two_ref;
    two_ref.kind = SourceKind::FockPair;
    two_ref.signal = c.signal;
    two_ref.n_ref = 2;
    two_ref.n_sig = 0;
    MultiphotonReport bad = run_multiphoton_error(two_ref, c);
    SourceSpec ideal;
    ideal.kind = SourceKind::Ideal;
    ideal.signal = c.signal;
    MultiphotonReport good = run_multiphoton_error(ideal, c);
    r.passed = bad.false_accept_probability > 0.0 && good.false_accept_probability == 0.0;
    r.detail = "two-photon reference, no signal: false accept " + fmt(bad.false_accept_probability) +
               "; ideal source: " + fmt(good.false_accept_probability);
}

void criterion_properties(CriterionResult& r, const VerifyOptions& o, double elapsed_before, Clock::time_point t0) {
    auto rng = trial_rng(o.seed, 9);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const auto reg = ModeRegistry::standard();

    // Unitarity of every element kind.
    double unit = 0.0;
    for (int i = 0; i < 200; ++i) {
        auto conv = i % 2 ? PhaseConvention::Imaginary : PhaseConvention::Real;
        unit = std::max(unit, unitarity_error(beam_splitter(reg, Path::Port3, Path::Open3, Path::Long, Path::Short, conv).matrix()));
        unit = std::max(unit, unitarity_error(polarizing_beam_splitter(reg, Path::Long, Path::Short, Path::Y, Path::X, conv).matrix()));
        unit = std::max(unit, unitarity_error(half_wave_plate(reg, Path::Y, 180.0 * u01(rng)).matrix()));
        unit = std::max(unit, unitarity_error(phase_shifter(reg, Path::Y, 2.0 * std::numbers::pi * u01(rng)).matrix()));
        unit = std::max(unit, unitarity_error(loss(reg, Path::Ch1, Path::Loss1, u01(rng)).matrix()));
        NoiseDraw n = draw_noise(NoiseKind::HaarRotation, 0.3, rng);
        unit = std::max(unit, unitarity_error(rotation_transform(reg, n.as_rotation(), n.jitter).matrix()));
    }

    // Norm preservation and inverse round trip on 1000 random states.
    std::vector<ModeLabel> pool;
    for (Path p : {Path::Port3, Path::Open3, Path::Port4, Path::Open4}) {
        for (Pol pol : {Pol::H, Pol::V}) {
            for (int t = 0; t <= 2; ++t) pool.push_back({p, pol, t});
        }
    }
    std::vector<ModeTransform> circuit;
    for (const DecoderPorts& d : {port3_decoder(), port4_decoder()}) {
        for (auto& t : decoder_circuit(reg, d)) circuit.push_back(std::move(t));
        for (auto& t : analyzer_circuit(reg, d.analyzer)) circuit.push_back(std::move(t));
    }
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    double norm_err = 0.0;
    double inverse_err = 0.0;
    for (int i = 0; i < 1000; ++i) {
        FockState s(reg);
        int terms = 1 + static_cast<int>(u01(rng) * 5);
        for (int k = 0; k < terms; ++k) {
            int n = 1 + static_cast<int>(u01(rng) * 3);
            std::vector<ModeLabel> photons;
            for (int q = 0; q < n; ++q) photons.push_back(pool[pick(rng)]);
            s = s + FockState::basis(reg, photons, Complex(g(rng), g(rng)));
        }
        s = s.normalized();
        FockState out = apply_circuit(s, circuit);
        norm_err = std::max(norm_err, std::abs(out.norm_squared() - 1.0));
        FockState back = out;
        for (auto it = circuit.rbegin(); it != circuit.rend(); ++it) back = apply_transform(back, it->inverse());
        inverse_err = std::max(inverse_err, max_amplitude_difference(back, s));
    }

    // Brute-force permanent oracle on up to four modes and three photons.
    double oracle_err = 0.0;
    for (int i = 0; i < 200; ++i) {
        int m = 2 + i % 3;
        std::vector<ModeLabel> modes;
        for (int k = 0; k < m; ++k) modes.push_back({static_cast<Path>(static_cast<int>(Path::Aux0) + k), Pol::H, 0});
        Eigen::MatrixXcd uu = oracle::random_unitary(m, rng);
        ModeTransform t(reg, modes, uu);
        oracle::DenseState dense;
        FockState s(reg);
        int n = 1 + i % 3;
        for (const auto& occ : oracle::occupations(m, n)) {
            Complex a(g(rng), g(rng));
            dense[occ] = a;
            std::vector<ModeLabel> photons;
            for (int k = 0; k < m; ++k) photons.insert(photons.end(), occ[k], modes[k]);
            s = s + FockState::basis(reg, photons, a);
        }
        oracle::DenseState want = oracle::apply(uu, dense);
        FockState got = apply_transform(s, t);
        FockState want_state(reg);
        for (const auto& [occ, a] : want) {
            std::vector<ModeLabel> photons;
            for (int k = 0; k < m; ++k) photons.insert(photons.end(), occ[k], modes[k]);
            want_state = want_state + FockState::basis(reg, photons, a);
        }
        oracle_err = std::max(oracle_err, max_amplitude_difference(got, want_state));
    }

    // Phase-convention independence of post-selected probabilities.
    double conv_err = 0.0;
    for (int i = 0; i < 40; ++i) {
        ProtocolConfig c = ideal_config(random_signal(rng), draw_noise(NoiseKind::HaarRotation, i % 2 ? 0.2 : 0.0, rng));
        c.detector.efficiency = 0.3 + 0.7 * u01(rng);
        c.variant = i % 4 < 2 ? Variant::Port3 : Variant::Port3And4;
        c.double_click = i % 3 ? DoubleClickPolicy::Abort : DoubleClickPolicy::RandomAssign;
        RunReport a = run_distribution(c);
        c.convention = PhaseConvention::Imaginary;
        RunReport b = run_distribution(c);
        conv_err = std::max({conv_err, std::abs(a.success_probability - b.success_probability),
                             std::abs(a.parity_factor - b.parity_factor),
                             std::abs(a.double_click_probability - b.double_click_probability)});
        if (a.outcomes.size() != b.outcomes.size()) {
            conv_err = 1.0;
            continue;
        }
        for (std::size_t k = 0; k < a.outcomes.size(); ++k) {
            conv_err = std::max(conv_err, std::abs(a.outcomes[k].probability - b.outcomes[k].probability));
        }
    }

    double total = elapsed_before + std::chrono::duration<double>(Clock::now() - t0).count();
    r.passed = unit <= 1e-12 && norm_err <= 1e-12 && inverse_err <= 1e-12 && oracle_err <= 1e-12 &&
               conv_err <= 1e-12 && total < 120.0;
    r.detail = "unitarity " + fmt(unit) + ", norm " + fmt(norm_err) + ", inverse " + fmt(inverse_err) + ", oracle " +
               fmt(oracle_err) + ", convention " + fmt(conv_err) + "; suite " + fmt(total) + " s";
}

}  // namespace

CriterionResult run_criterion(int id, const VerifyOptions& options, double elapsed_before) {
    static const char* const kNames[kCriterionCount] = {
        "exact recovery under collective dephasing",
        "post-channel amplitudes under dephasing",
        "post-channel amplitudes under collective rotation",
        "rotation success law",
        "Haar averaging of the parity factor",
        "BB84 through the scheme",
        "source statistics",
        "multi-photon false coincidences",
        "property suite",
    };
    CriterionResult r;
    r.id = id;
    if (id < 1 || id > kCriterionCount) {
        r.detail = "unknown criterion";
        return r;
    }
    r.name = kNames[id - 1];
    r.time_limit = id == 1 ? 5.0 : id == 5 ? 60.0 : id == 9 ? 120.0 : 0.0;
    auto t0 = Clock::now();
    try {
        switch (id) {
            case 1:
                criterion_dephasing(r, options);
                break;
            case 2:
                criterion_dephasing_amplitudes(r, options);
                break;
            case 3:
                criterion_rotation_amplitudes(r, options);
                break;
            case 4:
                criterion_success_law(r, options);
                break;
            case 5:
                criterion_haar(r, options);
                break;
            case 6:
                criterion_bb84(r, options);
                break;
            case 7:
                criterion_sources(r, options);
                break;
            case 8:
                criterion_multiphoton(r, options);
                break;
            case 9:
                criterion_properties(r, options, elapsed_before, t0);
                break;
        }
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (r.time_limit > 0.0 && id != 9 && r.seconds >= r.time_limit) {
        r.passed = false;
        r.detail += "; over the " + fmt(r.time_limit) + " s budget";
    }
    return r;
}

std::vector<CriterionResult> run_verify(const VerifyOptions& options,
                                        const std::function<void(const CriterionResult&)>& progress) {
    std::vector<CriterionResult> out;
    double elapsed = 0.0;
    for (int id = 1; id <= kCriterionCount; ++id) {
        out.push_back(run_criterion(id, options, elapsed));
        elapsed += out.back().seconds;
        if (progress) progress(out.back());
    }
    return out;
}

}  // namespace fockdist
