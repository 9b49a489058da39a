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

#include "fockdist/noise.hpp"

#include <cmath>
#include <numbers>

#include "fockdist/errors.hpp"
#include "fockdist/rng.hpp"

namespace fockdist {

namespace {

using std::numbers::pi;

double wrap(double phi) {
    double r = std::fmod(phi, 2.0 * pi);
    return r < 0.0 ? r + 2.0 * pi : r;
}

Eigen::Matrix2cd small_rotation(double sigma, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, sigma);
    double ex = normal(rng);
    double ey = normal(rng);
    double ez = normal(rng);
    double theta = std::sqrt(ex * ex + ey * ey + ez * ez);
    if (theta == 0.0) {
        return Eigen::Matrix2cd::Identity();
    }
    const Complex i(0.0, 1.0);
    double c = std::cos(theta / 2.0);
    double s = std::sin(theta / 2.0) / theta;
    // exp(-i/2 (ex X + ey Y + ez Z))
    Eigen::Matrix2cd u;
    u << c - i * s * ez, (-i * ex - ey) * s, (-i * ex + ey) * s, c + i * s * ez;
    return u;
}

std::pair<Complex, Complex> euler_column(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    double a = angle(rng);
    double b = angle(rng);
    double c = angle(rng);
    // first column of Rz(a) Ry(b) Rz(c)
    Complex delta = std::cos(b / 2.0) * std::polar(1.0, -(a + c) / 2.0);
    Complex gamma = std::sin(b / 2.0) * std::polar(1.0, (a - c) / 2.0);
    return {delta, gamma};
}

}  // namespace

DephasingParams DephasingParams::reduced() const { return {wrap(phi_h), wrap(phi_v)}; }

void RotationParams::validate() const {
    auto check = [](Complex d, Complex g, const char* channel) {
        double n = std::norm(d) + std::norm(g);
        if (!(std::abs(n - 1.0) <= 1e-12)) {
            throw ValidationError(std::string("rotation parameters of ") + channel +
                                  " are not normalized: |delta|^2 + |gamma|^2 = " + std::to_string(n));
        }
    };
    check(delta1, gamma1, "channel 1");
    check(delta2, gamma2, "channel 2");
}

RotationParams RotationParams::from_dephasing(const DephasingParams& p) {
    return {std::polar(1.0, p.phi_h), 0.0, 0.0, std::polar(1.0, p.phi_v)};
}

Eigen::Matrix2cd RotationParams::channel1_matrix() const {
    Eigen::Matrix2cd u;
    u << delta1, -std::conj(gamma1), gamma1, std::conj(delta1);
    return u;
}

Eigen::Matrix2cd RotationParams::channel2_matrix() const {
    Eigen::Matrix2cd u;
    u << std::conj(gamma2), delta2, -std::conj(delta2), gamma2;
    return u;
}

RotationParams NoiseDraw::as_rotation() const {
    if (const auto* d = std::get_if<DephasingParams>(&params)) {
        return RotationParams::from_dephasing(*d);
    }
    return std::get<RotationParams>(params);
}

std::string_view to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::None:
            return "none";
        case NoiseKind::Dephasing:
            return "dephasing";
        case NoiseKind::HaarRotation:
            return "haar-rotation";
        case NoiseKind::ProductSU2:
            return "product-su2";
    }
    return "?";
}

NoiseKind parse_noise_kind(std::string_view name) {
    if (name == "none") return NoiseKind::None;
    if (name == "dephasing") return NoiseKind::Dephasing;
    if (name == "haar-rotation" || name == "haar") return NoiseKind::HaarRotation;
    if (name == "product-su2") return NoiseKind::ProductSU2;
    throw ConfigurationError("unknown noise kind '" + std::string(name) + "'");
}

FockState apply_dephasing(const FockState& state, const DephasingParams& p) {
    const auto& reg = state.registry();
    std::vector<ModeLabel> modes;
    std::vector<Complex> phases;
    for (int t = 0; t <= reg->max_timebin(); ++t) {
        for (Pol pol : {Pol::H, Pol::V}) {
            modes.push_back({Path::Ch1, pol, t});
            phases.push_back(std::polar(1.0, p.phi_h));
            modes.push_back({Path::Ch2, pol, t});
            phases.push_back(std::polar(1.0, p.phi_v));
        }
    }
    Eigen::VectorXcd diag(static_cast<Eigen::Index>(phases.size()));
    for (std::size_t k = 0; k < phases.size(); ++k) {
        diag(static_cast<Eigen::Index>(k)) = phases[k];
    }
    ModeTransform t(reg, std::move(modes), diag.asDiagonal().toDenseMatrix());
    return apply_transform(state, t);
}

ModeTransform rotation_transform(const RegistryPtr& registry, const RotationParams& p,
                                 const std::optional<JitterDraw>& jitter) {
    p.validate();
    std::vector<ModeLabel> modes;
    for (int t = 0; t <= registry->max_timebin(); ++t) {
        for (Path ch : {Path::Ch1, Path::Ch2}) {
            modes.push_back({ch, Pol::H, t});
            modes.push_back({ch, Pol::V, t});
        }
    }
    const auto n = static_cast<Eigen::Index>(modes.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    const Eigen::Matrix2cd u1 = p.channel1_matrix();
    const Eigen::Matrix2cd u2 = p.channel2_matrix();
    for (int t = 0; t <= registry->max_timebin(); ++t) {
        Eigen::Matrix2cd a = u1;
        Eigen::Matrix2cd b = u2;
        if (jitter && t >= 1) {
            a = jitter->channel1 * u1;
            b = jitter->channel2 * u2;
        }
        Eigen::Index base = 4 * t;
        m.block<2, 2>(base, base) = a;
        m.block<2, 2>(base + 2, base + 2) = b;
    }
    return ModeTransform(registry, std::move(modes), std::move(m));
}

FockState apply_rotation(const FockState& state, const RotationParams& p) {
    return apply_transform(state, rotation_transform(state.registry(), p));
}

FockState apply_noise(const FockState& state, const NoiseDraw& draw) {
    if (!draw.jitter) {
        if (const auto* d = std::get_if<DephasingParams>(&draw.params)) {
            return apply_dephasing(state, *d);
        }
    }
    return apply_transform(state, rotation_transform(state.registry(), draw.as_rotation(), draw.jitter));
}

std::pair<Complex, Complex> haar_su2_column(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    double u = unit(rng);
    double a = angle(rng);
    double b = angle(rng);
    return {std::polar(std::sqrt(u), a), std::polar(std::sqrt(1.0 - u), b)};
}

NoiseDraw draw_noise(NoiseKind kind, double jitter_sigma, std::mt19937_64& rng) {
    NoiseDraw draw;
    switch (kind) {
        case NoiseKind::None:
            draw.params = RotationParams::identity();
            break;
        case NoiseKind::Dephasing: {
            std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
            double h = angle(rng);
            double v = angle(rng);
            draw.params = DephasingParams{h, v};
            break;
        }
        case NoiseKind::HaarRotation: {
            auto [d1, g1] = haar_su2_column(rng);
            auto [d2, g2] = haar_su2_column(rng);
            draw.params = RotationParams{d1, g1, d2, g2};
            break;
        }
        case NoiseKind::ProductSU2: {
            auto [d1, g1] = euler_column(rng);
            auto [d2, g2] = euler_column(rng);
            draw.params = RotationParams{d1, g1, d2, g2};
            break;
        }
    }
    if (jitter_sigma < 0.0) {
        throw ValidationError("jitter sigma must be non-negative");
    }
    if (jitter_sigma > 0.0) {
        draw.jitter = JitterDraw{small_rotation(jitter_sigma, rng), small_rotation(jitter_sigma, rng)};
    }
    return draw;
}

NoiseDraw sample_noise_at(const SamplerSpec& spec, std::uint64_t index) {
    auto rng = trial_rng(spec.seed, index);
    return draw_noise(spec.kind, spec.jitter_sigma, rng);
}

std::vector<NoiseDraw> sample_noise(const SamplerSpec& spec, std::size_t n) {
    if (n == 0) {
        throw ConfigurationError("sample_noise needs n >= 1");
    }
    std::vector<NoiseDraw> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(sample_noise_at(spec, i));
    }
    return out;
}

}  // namespace fockdist
