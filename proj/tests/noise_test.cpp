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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fockdist/errors.hpp"
#include "fockdist/noise.hpp"
#include "fockdist/protocol.hpp"
#include "test_support.hpp"

using namespace fockdist;
using fockdist::testing::L;

namespace {

RegistryPtr reg() { return ModeRegistry::standard(); }

// Reference H on channel 1 in bin 0, signal V on channel 2 in bin 1.
FockState valid_pair() { return FockState::basis(reg(), {L(Path::Ch1, Pol::H, 0), L(Path::Ch2, Pol::V, 1)}); }

}  // namespace

TEST(Dephasing, MultipliesPhasePerChannel) {
    DephasingParams p{0.3, 1.1};
    FockState out = apply_dephasing(valid_pair(), p);
    ASSERT_EQ(out.terms().size(), 1u);
    EXPECT_LT(std::abs(out.terms()[0].amplitude - std::polar(1.0, 1.4)), 1e-15);
    FockState two = FockState::basis(reg(), {L(Path::Ch1, Pol::H, 0), L(Path::Ch1, Pol::V, 2)});
    EXPECT_LT(std::abs(apply_dephasing(two, p).terms()[0].amplitude - std::polar(1.0, 0.6)), 1e-15);
}

TEST(Dephasing, ReducedWrapsIntoRange) {
    auto r = DephasingParams{-0.5, 7.0}.reduced();
    EXPECT_NEAR(r.phi_h, 2 * std::numbers::pi - 0.5, 1e-15);
    EXPECT_NEAR(r.phi_v, 7.0 - 2 * std::numbers::pi, 1e-15);
}

TEST(Rotation, ChannelImages) {
    const Complex d1(0.6, 0.0), g1(0.0, 0.8), d2(0.0, 0.6), g2(-0.8, 0.0);
    RotationParams p{d1, g1, d2, g2};
    FockState h1 = FockState::basis(reg(), {L(Path::Ch1, Pol::H, 1)});
    FockState want1 = FockState::basis(reg(), {L(Path::Ch1, Pol::H, 1)}, d1) +
                      FockState::basis(reg(), {L(Path::Ch1, Pol::V, 1)}, g1);
    EXPECT_LT(max_amplitude_difference(apply_rotation(h1, p), want1), 1e-15);
    FockState v2 = FockState::basis(reg(), {L(Path::Ch2, Pol::V, 0)});
    FockState want2 = FockState::basis(reg(), {L(Path::Ch2, Pol::H, 0)}, d2) +
                      FockState::basis(reg(), {L(Path::Ch2, Pol::V, 0)}, g2);
    EXPECT_LT(max_amplitude_difference(apply_rotation(v2, p), want2), 1e-15);
}

TEST(Rotation, IdentityParameters) {
    std::mt19937_64 rng(3);
    std::vector<ModeLabel> pool{L(Path::Ch1, Pol::H), L(Path::Ch1, Pol::V, 1), L(Path::Ch2, Pol::H, 2),
                                L(Path::Ch2, Pol::V, 1)};
    FockState s = fockdist::testing::random_state(reg(), pool, rng);
    EXPECT_LT(max_amplitude_difference(apply_rotation(s, RotationParams::identity()), s), 1e-15);
}

TEST(Rotation, RejectsUnnormalized) {
    RotationParams p{1.0, 0.1, 0.0, 1.0};
    EXPECT_THROW(p.validate(), ValidationError);
    EXPECT_THROW(apply_rotation(valid_pair(), p), ValidationError);
}

TEST(Rotation, FromDephasingMatchesOnValidStates) {
    // Valid: channel 1 carries only H and channel 2 only V, as after Alice's PBS.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi);
    for (int i = 0; i < 50; ++i) {
        DephasingParams d{ang(rng), ang(rng)};
        SignalState sig = fockdist::testing::random_signal(rng);
        FockState s = apply_transform(encoder_state(reg(), sig), alice_split(reg()));
        EXPECT_LT(max_amplitude_difference(apply_dephasing(s, d), apply_rotation(s, RotationParams::from_dephasing(d))),
                  1e-14);
    }
}

TEST(Sampler, DeterministicPerSeedAndIndex) {
    SamplerSpec spec{NoiseKind::HaarRotation, 42, 0.0};
    auto a = sample_noise(spec, 5);
    auto b = sample_noise(spec, 5);
    for (std::size_t i = 0; i < 5; ++i) {
        auto ra = a[i].as_rotation();
        auto rb = b[i].as_rotation();
        EXPECT_EQ(ra.delta1, rb.delta1);
        EXPECT_EQ(ra.gamma2, rb.gamma2);
        auto at = sample_noise_at(spec, i).as_rotation();
        EXPECT_EQ(at.delta1, ra.delta1);
    }
    auto other = sample_noise(SamplerSpec{NoiseKind::HaarRotation, 43, 0.0}, 1);
    EXPECT_NE(other[0].as_rotation().delta1, a[0].as_rotation().delta1);
}

TEST(Sampler, KindsProduceValidDraws) {
    for (auto kind : {NoiseKind::None, NoiseKind::Dephasing, NoiseKind::HaarRotation, NoiseKind::ProductSU2}) {
        for (const auto& d : sample_noise(SamplerSpec{kind, 9, 0.1}, 20)) {
            EXPECT_NO_THROW(d.as_rotation().validate());
            ASSERT_TRUE(d.jitter.has_value());
            EXPECT_LT(unitarity_error(d.jitter->channel1), 1e-12);
        }
    }
    auto none = sample_noise(SamplerSpec{NoiseKind::None, 1, 0.0}, 1)[0];
    EXPECT_EQ(none.as_rotation().delta1, Complex(1.0));
    EXPECT_FALSE(none.jitter.has_value());
}

TEST(Sampler, HaarMomentsAndErrors) {
    // E|delta|^2 = 1/2 and E|delta|^4 = 1/3 for a Haar SU(2) column.
    auto draws = sample_noise(SamplerSpec{NoiseKind::HaarRotation, 5, 0.0}, 20000);
    double m2 = 0.0, m4 = 0.0;
    for (const auto& d : draws) {
        double n = std::norm(d.as_rotation().delta1);
        m2 += n;
        m4 += n * n;
    }
    m2 /= draws.size();
    m4 /= draws.size();
    EXPECT_NEAR(m2, 0.5, 0.01);
    EXPECT_NEAR(m4, 1.0 / 3.0, 0.01);
    EXPECT_THROW(sample_noise(SamplerSpec{}, 0), ConfigurationError);
    EXPECT_THROW(sample_noise(SamplerSpec{NoiseKind::Dephasing, 1, -0.1}, 1), ValidationError);
    EXPECT_EQ(parse_noise_kind("haar"), NoiseKind::HaarRotation);
    EXPECT_THROW(parse_noise_kind("pink"), ConfigurationError);
}

TEST(Jitter, OnlyTouchesLaterBins) {
    NoiseDraw d;
    d.jitter = JitterDraw{half_wave_plate_matrix(90.0) * Complex(0.0, 1.0), Eigen::Matrix2cd::Identity()};
    FockState bin0 = FockState::basis(reg(), {L(Path::Ch1, Pol::H, 0)});
    EXPECT_LT(max_amplitude_difference(apply_noise(bin0, d), bin0), 1e-15);
    FockState bin1 = FockState::basis(reg(), {L(Path::Ch1, Pol::H, 1)});
    FockState want = FockState::basis(reg(), {L(Path::Ch1, Pol::V, 1)}, Complex(0.0, 1.0));
    EXPECT_LT(max_amplitude_difference(apply_noise(bin1, d), want), 1e-15);
}
