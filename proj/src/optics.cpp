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

#include "fockdist/optics.hpp"

#include <cmath>
#include <numbers>

#include "fockdist/errors.hpp"

namespace fockdist {

namespace {

using std::numbers::pi;

std::vector<int> bins_of(const RegistryPtr& registry, std::optional<int> timebin) {
    if (timebin) {
        if (*timebin < 0 || *timebin > registry->max_timebin()) {
            throw ConfigurationError("element time bin " + std::to_string(*timebin) + " outside registry range");
        }
        return {*timebin};
    }
    std::vector<int> bins;
    for (int t = 0; t <= registry->max_timebin(); ++t) {
        bins.push_back(t);
    }
    return bins;
}

void require_ports(const ElementSpec& spec, std::size_t inputs, std::size_t outputs, const char* name) {
    if (spec.inputs.size() != inputs || spec.outputs.size() > outputs) {
        throw ConfigurationError(std::string(name) + " needs " + std::to_string(inputs) + " input port(s) and up to " +
                                 std::to_string(outputs) + " output port(s)");
    }
}

/// Two-port element acting on (a, b) per polarization and bin with the 2x2
/// block given per polarization, then renaming a -> c, b -> d.
ModeTransform two_port(const RegistryPtr& registry, const ElementSpec& spec,
                       const std::array<Eigen::Matrix2cd, 2>& block_per_pol) {
    Path a = spec.inputs[0];
    Path b = spec.inputs[1];
    Path c = spec.outputs.size() > 0 ? spec.outputs[0] : a;
    Path d = spec.outputs.size() > 1 ? spec.outputs[1] : b;
    if (a == b || c == d) {
        throw ConfigurationError("two-port element needs distinct ports");
    }
    std::vector<ModeLabel> modes;
    std::vector<std::pair<ModeLabel, ModeLabel>> relabel;
    auto bins = bins_of(registry, spec.timebin);
    for (int t : bins) {
        for (Pol pol : {Pol::H, Pol::V}) {
            modes.push_back({a, pol, t});
            modes.push_back({b, pol, t});
            if (a != c) {
                relabel.push_back({{a, pol, t}, {c, pol, t}});
            }
            if (b != d) {
                relabel.push_back({{b, pol, t}, {d, pol, t}});
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(modes.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index base = 0; base < n; base += 2) {
        int pol = static_cast<int>((base / 2) % 2);
        m.block<2, 2>(base, base) = block_per_pol[static_cast<std::size_t>(pol)];
    }
    return ModeTransform(registry, std::move(modes), std::move(m), std::move(relabel));
}

ModeTransform one_port(const RegistryPtr& registry, Path port, const Eigen::Matrix2cd& u, std::optional<int> timebin) {
    std::vector<ModeLabel> modes;
    auto bins = bins_of(registry, timebin);
    for (int t : bins) {
        modes.push_back({port, Pol::H, t});
        modes.push_back({port, Pol::V, t});
    }
    const auto n = static_cast<Eigen::Index>(modes.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index base = 0; base < n; base += 2) {
        m.block<2, 2>(base, base) = u;
    }
    return ModeTransform(registry, std::move(modes), std::move(m));
}

}  // namespace

Eigen::Matrix2cd half_wave_plate_matrix(double angle_deg) {
    double th = angle_deg * pi / 180.0;
    // exact values at the angles the decoder uses
    double c = std::cos(th);
    double s = std::sin(th);
    if (angle_deg == 90.0) {
        c = 0.0;
        s = 1.0;
    } else if (angle_deg == 45.0) {
        c = s = std::sqrt(0.5);
    } else if (angle_deg == 0.0) {
        c = 1.0;
        s = 0.0;
    }
    Eigen::Matrix2cd u;
    u << c, s, s, -c;
    return u;
}

ModeTransform build_element(const RegistryPtr& registry, const ElementSpec& spec) {
    const double r = std::sqrt(0.5);
    const Complex i(0.0, 1.0);
    switch (spec.kind) {
        case ElementKind::BS: {
            require_ports(spec, 2, 2, "BS");
            Eigen::Matrix2cd u;
            if (spec.convention == PhaseConvention::Real) {
                u << r, r, r, -r;
            } else {
                u << r, i * r, i * r, r;
            }
            return two_port(registry, spec, {u, u});
        }
        case ElementKind::PBS: {
            require_ports(spec, 2, 2, "PBS");
            Complex refl = spec.convention == PhaseConvention::Real ? Complex(1.0) : i;
            Eigen::Matrix2cd transmit = Eigen::Matrix2cd::Identity();
            Eigen::Matrix2cd reflect;
            reflect << 0.0, refl, refl, 0.0;
            return two_port(registry, spec, {transmit, reflect});
        }
        case ElementKind::HWP: {
            require_ports(spec, 1, 1, "HWP");
            if (!(spec.angle_deg >= 0.0 && spec.angle_deg < 180.0)) {
                throw ValidationError("HWP angle must lie in [0, 180) degrees");
            }
            return one_port(registry, spec.inputs[0], half_wave_plate_matrix(spec.angle_deg), spec.timebin);
        }
        case ElementKind::PS: {
            require_ports(spec, 1, 1, "PS");
            if (!(spec.phase_rad >= 0.0 && spec.phase_rad < 2.0 * pi)) {
                throw ValidationError("PS phase must lie in [0, 2pi)");
            }
            Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
            u(1, 1) = spec.phase_rad == pi ? Complex(-1.0) : std::polar(1.0, spec.phase_rad);
            return one_port(registry, spec.inputs[0], u, spec.timebin);
        }
        case ElementKind::DELAY: {
            require_ports(spec, 1, 1, "DELAY");
            Path p = spec.inputs[0];
            std::vector<std::pair<ModeLabel, ModeLabel>> relabel;
            if (spec.delay != 0) {
                for (int t = 0; t <= registry->max_timebin(); ++t) {
                    for (Pol pol : {Pol::H, Pol::V}) {
                        relabel.push_back({{p, pol, t}, {p, pol, t + spec.delay}});
                    }
                }
            } else {
                for (Pol pol : {Pol::H, Pol::V}) {
                    registry->index(p, pol, 0);
                }
            }
            return ModeTransform(registry, {}, Eigen::MatrixXcd(0, 0), std::move(relabel));
        }
        case ElementKind::LOSS: {
            require_ports(spec, 2, 0, "LOSS");
            double tr = spec.transmissivity;
            if (!(tr >= 0.0 && tr <= 1.0)) {
                throw ValidationError("transmissivity must lie in [0, 1]");
            }
            Eigen::Matrix2cd u;
            double t = std::sqrt(tr);
            double l = std::sqrt(1.0 - tr);
            u << t, -l, l, t;
            return two_port(registry, spec, {u, u});
        }
    }
    throw ConfigurationError("unknown element kind");
}

ModeTransform beam_splitter(const RegistryPtr& registry, Path a, Path b, Path c, Path d, PhaseConvention convention) {
    ElementSpec s;
    s.kind = ElementKind::BS;
    s.inputs = {a, b};
    s.outputs = {c, d};
    s.convention = convention;
    return build_element(registry, s);
}

ModeTransform polarizing_beam_splitter(const RegistryPtr& registry, Path a, Path b, Path c, Path d,
                                       PhaseConvention convention) {
    ElementSpec s;
    s.kind = ElementKind::PBS;
    s.inputs = {a, b};
    s.outputs = {c, d};
    s.convention = convention;
    return build_element(registry, s);
}

ModeTransform half_wave_plate(const RegistryPtr& registry, Path port, double angle_deg, std::optional<int> timebin) {
    ElementSpec s;
    s.kind = ElementKind::HWP;
    s.angle_deg = angle_deg;
    s.inputs = {port};
    s.timebin = timebin;
    return build_element(registry, s);
}

ModeTransform phase_shifter(const RegistryPtr& registry, Path port, double phase_rad, std::optional<int> timebin) {
    ElementSpec s;
    s.kind = ElementKind::PS;
    s.phase_rad = phase_rad;
    s.inputs = {port};
    s.timebin = timebin;
    return build_element(registry, s);
}

ModeTransform delay_line(const RegistryPtr& registry, Path port, int bins) {
    ElementSpec s;
    s.kind = ElementKind::DELAY;
    s.delay = bins;
    s.inputs = {port};
    return build_element(registry, s);
}

ModeTransform loss(const RegistryPtr& registry, Path port, Path ancilla, double transmissivity) {
    ElementSpec s;
    s.kind = ElementKind::LOSS;
    s.transmissivity = transmissivity;
    s.inputs = {port, ancilla};
    return build_element(registry, s);
}

ModeTransform polarization_unitary(const RegistryPtr& registry, Path port, const Eigen::Matrix2cd& u,
                                   std::optional<int> timebin) {
    return one_port(registry, port, u, timebin);
}

}  // namespace fockdist
