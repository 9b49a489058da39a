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

#include "fockdist/bb84.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "fockdist/errors.hpp"
#include "fockdist/rng.hpp"

namespace fockdist {

std::string_view to_string(Bb84State s) {
    switch (s) {
        case Bb84State::H:
            return "H";
        case Bb84State::V:
            return "V";
        case Bb84State::D:
            return "D";
        case Bb84State::Dbar:
            return "Dbar";
    }
    return "?";
}

std::string_view to_string(Basis b) { return b == Basis::Rectilinear ? "rectilinear" : "diagonal"; }

Basis basis_of(Bb84State s) {
    return (s == Bb84State::H || s == Bb84State::V) ? Basis::Rectilinear : Basis::Diagonal;
}

int bit_of(Bb84State s) { return (s == Bb84State::H || s == Bb84State::D) ? 0 : 1; }

SignalState signal_of(Bb84State s) {
    const double r = std::numbers::sqrt2 / 2.0;
    switch (s) {
        case Bb84State::H:
            return {1.0, 0.0};
        case Bb84State::V:
            return {0.0, 1.0};
        case Bb84State::D:
            return {r, r};
        case Bb84State::Dbar:
            return {r, -r};
    }
    return {};
}

namespace {

struct YPorts {
    Path y, open, det_h, det_v;
};

YPorts y_ports(Path y) {
    if (y == Path::Y4) {
        return {Path::Y4, Path::YOpen4, Path::DetYH4, Path::DetYV4};
    }
    return {Path::Y, Path::YOpen, Path::DetYH, Path::DetYV};
}

std::vector<ModeTransform> y_circuit(const RegistryPtr& registry, Basis basis, PhaseConvention convention,
                                     const YPorts& p) {
    std::vector<ModeTransform> c;
    if (basis == Basis::Diagonal) {
        c.push_back(half_wave_plate(registry, p.y, 45.0));
    }
    c.push_back(polarizing_beam_splitter(registry, p.y, p.open, p.det_h, p.det_v, convention));
    return c;
}

/// Photons on `path` in `bin` for one occupation vector.
int photons_at(const ModeRegistry& reg, const OccupationVector& occ, Path path, int bin) {
    int n = 0;
    for (ModeIndex m : occ.photons()) {
        const auto& l = reg.label(m);
        n += (l.path == path && l.timebin == bin) ? 1 : 0;
    }
    return n;
}

}  // namespace

std::vector<ModeTransform> y_measurement_circuit(const RegistryPtr& registry, Basis basis,
                                                 PhaseConvention convention) {
    return y_circuit(registry, basis, convention, y_ports(Path::Y));
}

void Bb84Config::validate() const {
    detector.validate();
    if (noise.jitter_sigma < 0.0 || !std::isfinite(noise.jitter_sigma)) {
        throw ConfigurationError("jitter sigma must be finite and non-negative");
    }
}

Bb84Report run_bb84_session(const Bb84Config& cfg) {
    if (cfg.rounds == 0) {
        throw ConfigurationError("a BB84 session needs at least one round");
    }
    cfg.validate();
    const auto registry = ModeRegistry::standard();
    const ModeRegistry& reg = *registry;

    // [port][basis]
    std::map<Path, std::array<std::vector<ModeTransform>, 2>> circuits;
    for (Path y : {Path::Y, Path::Y4}) {
        for (Basis b : {Basis::Rectilinear, Basis::Diagonal}) {
            circuits[y][static_cast<int>(b)] = y_circuit(registry, b, cfg.convention, y_ports(y));
        }
    }

    Bb84Report rep;
    rep.rounds = cfg.rounds;
    rep.seed = cfg.noise.seed;
    std::array<std::size_t, 2> sifted_by_basis{0, 0};
    std::array<std::size_t, 2> errors_by_basis{0, 0};
    double sifted_accept = 0.0;
    double sifted_error = 0.0;

    for (std::size_t i = 0; i < cfg.rounds; ++i) {
        auto rng = trial_rng(cfg.noise.seed, i);
        Bb84Round round;
        round.index = i;
        round.alice_state = static_cast<Bb84State>(std::uniform_int_distribution<int>(0, 3)(rng));
        round.alice_basis = basis_of(round.alice_state);
        round.bob_basis = std::bernoulli_distribution(0.5)(rng) ? Basis::Diagonal : Basis::Rectilinear;
        round.noise_draw = draw_noise(cfg.noise.kind, cfg.noise.jitter_sigma, rng);

        ProtocolConfig pc;
        pc.signal = signal_of(round.alice_state);
        pc.noise = round.noise_draw;
        pc.detector = cfg.detector;
        pc.variant = cfg.variant;
        pc.acceptance = cfg.acceptance;
        pc.double_click = cfg.double_click;
        pc.convention = cfg.convention;

        FockState received = received_state(encoder_state(registry, pc.signal), pc.noise, pc.convention);
        std::array<double, 2> p_bit{0.0, 0.0};
        for (const auto& b : decode_and_postselect(received, pc, cfg.detector, pc.signal)) {
            const YPorts ports = y_ports(b.y);
            FockState out = apply_circuit(b.state, circuits[b.y][static_cast<int>(round.bob_basis)]);
            double norm = out.norm_squared();
            double h_only = 0.0;
            double v_only = 0.0;
            double both = 0.0;
            for (const auto& t : out.terms()) {
                bool h = photons_at(reg, t.occupation, ports.det_h, kCoincidenceWindow) > 0;
                bool v = photons_at(reg, t.occupation, ports.det_v, kCoincidenceWindow) > 0;
                double w = std::norm(t.amplitude) / norm;
                if (h && v) {
                    both += w;
                } else if (h) {
                    h_only += w;
                } else if (v) {
                    v_only += w;
                }
            }
            p_bit[0] += b.probability * (h_only + 0.5 * both);
            p_bit[1] += b.probability * (v_only + 0.5 * both);
        }
        round.accept_probability = p_bit[0] + p_bit[1];
        round.error_probability = p_bit[1 - bit_of(round.alice_state)];

        double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        if (u < p_bit[0]) {
            round.bob_bit = 0;
        } else if (u < p_bit[0] + p_bit[1]) {
            round.bob_bit = 1;
        }
        round.accepted = round.bob_bit.has_value();

        if (round.accepted) {
            ++rep.accepted;
            if (round.alice_basis == round.bob_basis) {
                int k = static_cast<int>(round.bob_basis);
                ++rep.sifted;
                ++sifted_by_basis[k];
                if (*round.bob_bit != bit_of(round.alice_state)) {
                    ++rep.errors;
                    ++errors_by_basis[k];
                }
            }
        }
        if (round.alice_basis == round.bob_basis) {
            sifted_accept += round.accept_probability;
            sifted_error += round.error_probability;
        }
        if (cfg.keep_rounds) {
            rep.log.push_back(std::move(round));
        }
    }

    rep.acceptance_rate = static_cast<double>(rep.accepted) / static_cast<double>(rep.rounds);
    if (rep.accepted > 0) {
        rep.sift_fraction = static_cast<double>(rep.sifted) / static_cast<double>(rep.accepted);
    }
    if (rep.sifted > 0) {
        rep.qber = static_cast<double>(rep.errors) / static_cast<double>(rep.sifted);
    }
    if (sifted_accept > 0.0) {
        rep.qber_expected = sifted_error / sifted_accept;
    }
    if (sifted_by_basis[0] > 0) {
        rep.qber_rectilinear = static_cast<double>(errors_by_basis[0]) / static_cast<double>(sifted_by_basis[0]);
    }
    if (sifted_by_basis[1] > 0) {
        rep.qber_diagonal = static_cast<double>(errors_by_basis[1]) / static_cast<double>(sifted_by_basis[1]);
    }
    return rep;
}

namespace {

std::array<ModeLabel, 4> port3_modes() {
    return {ModeLabel{Path::Port3, Pol::H, 0}, ModeLabel{Path::Port3, Pol::V, 0}, ModeLabel{Path::Port3, Pol::H, 1},
            ModeLabel{Path::Port3, Pol::V, 1}};
}

/// Coordinate of the two-photon basis vector with photons on modes i <= j
/// (indices into port3_modes).
int pair_index(int i, int j) {
    if (i > j) std::swap(i, j);
    // Row-major over the upper triangle of a 4 x 4 grid.
    static constexpr int offset[4] = {0, 4, 7, 9};
    return offset[i] + (j - i);
}

constexpr int H0 = 0, V0 = 1, H1 = 2, V1 = 3;

Eigen::VectorXcd coordinates(std::initializer_list<std::tuple<int, int, double>> entries) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(10);
    for (auto [i, j, c] : entries) {
        v(pair_index(i, j)) += c;
    }
    return v;
}

Eigen::VectorXcd to_coordinates(const FockState& s) {
    auto basis = port3_two_photon_basis(s.registry());
    Eigen::VectorXcd v(10);
    for (int k = 0; k < 10; ++k) {
        v(k) = inner_product(basis[k], s);
    }
    return v;
}

CheckReport make_check(std::string name, double residual, double tolerance) {
    CheckReport r;
    r.name = std::move(name);
    r.residual = residual;
    r.tolerance = tolerance;
    r.passed = std::isfinite(residual) && residual <= tolerance;
    return r;
}

}  // namespace

std::vector<FockState> port3_two_photon_basis(const RegistryPtr& registry) {
    auto modes = port3_modes();
    std::vector<FockState> out;
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            out.push_back(FockState::basis(registry, {modes[i], modes[j]}));
        }
    }
    return out;
}

Eigen::MatrixXcd bob_povm(const RegistryPtr& registry, Basis basis, int bit, PhaseConvention convention) {
    const ModeRegistry& reg = *registry;
    const DecoderPorts dec = port3_decoder();
    std::vector<ModeTransform> circuit = decoder_circuit(registry, dec, convention);
    for (auto& t : analyzer_circuit(registry, dec.analyzer, convention)) circuit.push_back(std::move(t));
    for (auto& t : y_circuit(registry, basis, convention, y_ports(dec.y))) circuit.push_back(std::move(t));
    const Path y_det = bit == 0 ? Path::DetYH : Path::DetYV;

    auto inputs = port3_two_photon_basis(registry);
    std::map<OccupationVector, Eigen::VectorXcd> amplitudes;
    for (int k = 0; k < 10; ++k) {
        FockState out = apply_circuit(inputs[k], circuit);
        for (const auto& t : out.terms()) {
            if (photons_at(reg, t.occupation, dec.analyzer.det_d, kCoincidenceWindow) > 0 &&
                photons_at(reg, t.occupation, y_det, kCoincidenceWindow) > 0) {
                auto [it, fresh] = amplitudes.try_emplace(t.occupation, Eigen::VectorXcd::Zero(10));
                it->second(k) = t.amplitude;
            }
        }
    }
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(10, 10);
    for (const auto& [occ, a] : amplitudes) {
        e += a.conjugate() * a.transpose();
    }
    return e;
}

Eigen::VectorXcd h_vector(const RegistryPtr&) { return coordinates({{V0, H1, 1.0}, {H0, V0, 1.0}}); }

Eigen::VectorXcd v_vector(const RegistryPtr&) { return coordinates({{H0, V1, 1.0}, {H1, V1, 1.0}}); }

std::vector<CheckReport> verify_projection_equivalence(PhaseConvention convention) {
    constexpr double kTol = 1e-9;
    const auto registry = ModeRegistry::standard();
    const Eigen::VectorXcd h = h_vector(registry);
    const Eigen::VectorXcd v = v_vector(registry);
    struct Case {
        const char* name;
        Basis basis;
        int bit;
        Eigen::VectorXcd target;
    };
    const std::array<Case, 4> cases{Case{"H_Y D_X ~ |h>", Basis::Rectilinear, 0, h},
                                    Case{"V_Y D_X ~ |v>", Basis::Rectilinear, 1, v},
                                    Case{"D_Y D_X ~ |h>+|v>", Basis::Diagonal, 0, h + v},
                                    Case{"Dbar_Y D_X ~ |h>-|v>", Basis::Diagonal, 1, h - v}};

    std::vector<CheckReport> out;
    std::vector<double> constants;
    Eigen::MatrixXcd total_rect = Eigen::MatrixXcd::Zero(10, 10);
    Eigen::MatrixXcd total_diag = Eigen::MatrixXcd::Zero(10, 10);
    for (const auto& c : cases) {
        Eigen::MatrixXcd e = bob_povm(registry, c.basis, c.bit, convention);
        (c.basis == Basis::Rectilinear ? total_rect : total_diag) += e;
        Eigen::VectorXcd t = c.target.normalized();
        double k = (t.adjoint() * e * t)(0, 0).real();
        double residual = (e - k * t * t.adjoint()).cwiseAbs().maxCoeff();
        auto r = make_check(c.name, residual, kTol);
        r.constants = {k};
        r.passed = r.passed && k > kTol;
        constants.push_back(k);
        out.push_back(std::move(r));
    }

    double spread = 0.0;
    for (double k : constants) spread = std::max(spread, std::abs(k - constants.front()));
    auto equal = make_check("equal proportionality constants", spread, kTol);
    equal.constants = constants;
    out.push_back(std::move(equal));

    // Vectors outside the span of |h>, |v>: the parity-discarded terms and the
    // combination |0>_A (|0>_B + sqrt3 |1>_B)/2 in the virtual coordinates.
    const std::array<std::pair<const char*, Eigen::VectorXcd>, 3> outside{
        std::pair{"|H>_r|H>_s", coordinates({{H0, H1, 1.0}})},
        std::pair{"|V>_r|V>_s", coordinates({{V0, V1, 1.0}})},
        std::pair{"(|V>_r|H>_s + 2|H>_r|H>_s - |HV>_r)/sqrt6",
                  coordinates({{V0, H1, 1.0}, {H0, H1, 2.0}, {H0, V0, -1.0}}).normalized()}};
    double worst = 0.0;
    std::string detail;
    for (const auto& [name, psi] : outside) {
        double overlap = std::max(std::abs(h.dot(psi)), std::abs(v.dot(psi)));
        double p = std::max((psi.adjoint() * total_rect * psi)(0, 0).real(),
                            (psi.adjoint() * total_diag * psi)(0, 0).real());
        worst = std::max({worst, overlap, std::abs(p)});
        detail += std::string(name) + ": acceptance " + std::to_string(p) + "; ";
    }
    auto zero = make_check("zero acceptance off the |h>, |v> span", worst, kTol);
    zero.detail = detail;
    out.push_back(std::move(zero));
    return out;
}

std::array<Eigen::VectorXcd, 4> virtual_basis(const RegistryPtr&) {
    const double s6 = std::sqrt(6.0);
    const double s2 = std::numbers::sqrt2;
    return {coordinates({{V0, H1, 2.0 / s6}, {H0, H1, 1.0 / s6}, {H0, V0, 1.0 / s6}}),
            coordinates({{H0, H1, 1.0 / s2}, {H0, V0, -1.0 / s2}}),
            coordinates({{H0, V1, 2.0 / s6}, {V0, V1, 1.0 / s6}, {H1, V1, 1.0 / s6}}),
            coordinates({{V0, V1, 1.0 / s2}, {H1, V1, -1.0 / s2}})};
}

std::vector<CheckReport> verify_virtual_qubits() {
    constexpr double kTol = 1e-10;
    const auto registry = ModeRegistry::standard();
    const auto ab = virtual_basis(registry);
    Eigen::MatrixXcd w(10, 4);  // columns: |ab>
    for (int k = 0; k < 4; ++k) w.col(k) = ab[k];

    std::vector<CheckReport> out;
    double ortho = (w.adjoint() * w - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff();
    out.push_back(make_check("AB basis orthonormal", ortho, kTol));

    const double s3 = std::sqrt(3.0);
    Eigen::Vector2cd b_prep(s3 / 2.0, 0.5);
    Eigen::Vector2cd b_filter(s3 / 2.0, -0.5);

    double prep = 0.0;
    std::string detail;
    for (Bb84State st : {Bb84State::H, Bb84State::V, Bb84State::D, Bb84State::Dbar}) {
        SignalState sig = signal_of(st);
        FockState received = received_state(encoder_state(registry, sig), NoiseDraw{});
        Eigen::VectorXcd x = to_coordinates(received);
        // Received port-3 state must lie in the AB span.
        double outside = (received.norm_squared() - x.squaredNorm());
        Eigen::VectorXcd coeff = w.adjoint() * x;
        Eigen::Vector4cd expected;
        Eigen::Vector2cd a(sig.alpha, sig.beta);
        for (int ia = 0; ia < 2; ++ia) {
            for (int ib = 0; ib < 2; ++ib) expected(2 * ia + ib) = a(ia) * b_prep(ib);
        }
        double r = std::max({(coeff - expected).cwiseAbs().maxCoeff(), (w * coeff - x).cwiseAbs().maxCoeff(),
                             std::abs(outside)});
        prep = std::max(prep, r);
        detail += std::string(to_string(st)) + ": " + std::to_string(r) + "; ";
    }
    auto prep_check = make_check("encoder state = A (x) (sqrt3|0> + |1>)/2", prep, kTol);
    prep_check.detail = detail;
    out.push_back(std::move(prep_check));

    // Bob's D-accepted POVM in AB coordinates.
    const double r2 = std::numbers::sqrt2 / 2.0;
    struct Case {
        Basis basis;
        int bit;
        Eigen::Vector2cd a;
    };
    const std::array<Case, 4> cases{Case{Basis::Rectilinear, 0, {1.0, 0.0}}, Case{Basis::Rectilinear, 1, {0.0, 1.0}},
                                    Case{Basis::Diagonal, 0, {r2, r2}}, Case{Basis::Diagonal, 1, {r2, -r2}}};
    Eigen::MatrixXcd span = w * w.adjoint();
    double fact = 0.0;
    std::vector<double> constants;
    for (const auto& c : cases) {
        Eigen::MatrixXcd e = bob_povm(registry, c.basis, c.bit);
        Eigen::MatrixXcd m = w.adjoint() * e * w;
        Eigen::Vector4cd t;
        for (int ia = 0; ia < 2; ++ia) {
            for (int ib = 0; ib < 2; ++ib) t(2 * ia + ib) = c.a(ia) * b_filter(ib);
        }
        double k = (t.adjoint() * m * t)(0, 0).real();
        constants.push_back(k);
        double r = (m - k * t * t.adjoint()).cwiseAbs().maxCoeff();
        // Support must stay inside the AB span.
        r = std::max(r, (e - span * e * span).cwiseAbs().maxCoeff());
        fact = std::max(fact, r);
    }
    for (double k : constants) fact = std::max(fact, std::abs(k - constants.front()));
    auto filter = make_check("D-accepted POVM = c P_A (x) P_(sqrt3|0> - |1>)/2", fact, kTol);
    filter.constants = constants;
    filter.passed = filter.passed && constants.front() > kTol;
    out.push_back(std::move(filter));
    return out;
}

}  // namespace fockdist
