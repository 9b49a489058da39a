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
#include "fockdist/optics.hpp"
#include "test_support.hpp"

using namespace fockdist;
using fockdist::testing::L;

namespace {

const double kR = 1.0 / std::numbers::sqrt2;
const Complex kI(0.0, 1.0);

RegistryPtr reg() { return ModeRegistry::standard(); }

FockState one(Path p, Pol pol, int t = 0, Complex a = 1.0) { return FockState::basis(reg(), {L(p, pol, t)}, a); }

void expect_state(const FockState& got, const FockState& want) {
    EXPECT_LT(max_amplitude_difference(got, want), 1e-15) << describe(got) << " vs " << describe(want);
}

}  // namespace

TEST(BeamSplitter, RealConvention) {
    auto bs = beam_splitter(reg(), Path::Aux0, Path::Aux1, Path::Aux2, Path::Aux3);
    expect_state(apply_transform(one(Path::Aux0, Pol::V), bs),
                 one(Path::Aux2, Pol::V, 0, kR) + one(Path::Aux3, Pol::V, 0, kR));
    expect_state(apply_transform(one(Path::Aux1, Pol::H, 2), bs),
                 one(Path::Aux2, Pol::H, 2, kR) - one(Path::Aux3, Pol::H, 2, kR));
}

TEST(BeamSplitter, ImaginaryConvention) {
    auto bs = beam_splitter(reg(), Path::Aux0, Path::Aux1, Path::Aux2, Path::Aux3, PhaseConvention::Imaginary);
    expect_state(apply_transform(one(Path::Aux0, Pol::H), bs),
                 one(Path::Aux2, Pol::H, 0, kR) + one(Path::Aux3, Pol::H, 0, kI * kR));
    expect_state(apply_transform(one(Path::Aux1, Pol::H), bs),
                 one(Path::Aux2, Pol::H, 0, kI * kR) + one(Path::Aux3, Pol::H, 0, kR));
}

TEST(PolarizingBeamSplitter, TransmitsHReflectsV) {
    for (auto conv : {PhaseConvention::Real, PhaseConvention::Imaginary}) {
        Complex refl = conv == PhaseConvention::Real ? Complex(1.0) : kI;
        auto pbs = polarizing_beam_splitter(reg(), Path::Aux0, Path::Aux1, Path::Aux2, Path::Aux3, conv);
        expect_state(apply_transform(one(Path::Aux0, Pol::H), pbs), one(Path::Aux2, Pol::H));
        expect_state(apply_transform(one(Path::Aux1, Pol::H, 1), pbs), one(Path::Aux3, Pol::H, 1));
        expect_state(apply_transform(one(Path::Aux0, Pol::V), pbs), one(Path::Aux3, Pol::V, 0, refl));
        expect_state(apply_transform(one(Path::Aux1, Pol::V), pbs), one(Path::Aux2, Pol::V, 0, refl));
    }
}

TEST(HalfWavePlate, ExactMatrices) {
    Eigen::Matrix2cd u45 = half_wave_plate_matrix(45.0);
    EXPECT_EQ(u45(0, 0), Complex(std::sqrt(0.5)));
    EXPECT_EQ(u45(1, 1), Complex(-std::sqrt(0.5)));
    Eigen::Matrix2cd u90 = half_wave_plate_matrix(90.0);
    EXPECT_EQ(u90(0, 0), Complex(0.0));
    EXPECT_EQ(u90(0, 1), Complex(1.0));
    EXPECT_EQ(u90(1, 0), Complex(1.0));
    Eigen::Matrix2cd u30 = half_wave_plate_matrix(30.0);
    EXPECT_NEAR(u30(0, 0).real(), std::sqrt(3.0) / 2.0, 1e-15);
    EXPECT_NEAR(u30(1, 0).real(), 0.5, 1e-15);
    EXPECT_LT(unitarity_error(u30), 1e-15);
}

TEST(HalfWavePlate, FortyFiveTakesHToDiagonal) {
    auto hwp = half_wave_plate(reg(), Path::X, 45.0);
    expect_state(apply_transform(one(Path::X, Pol::H), hwp), one(Path::X, Pol::H, 0, kR) + one(Path::X, Pol::V, 0, kR));
    expect_state(apply_transform(one(Path::X, Pol::V), hwp), one(Path::X, Pol::H, 0, kR) - one(Path::X, Pol::V, 0, kR));
}

TEST(HalfWavePlate, TimebinRestriction) {
    auto hwp = half_wave_plate(reg(), Path::Y, 90.0, 1);
    expect_state(apply_transform(one(Path::Y, Pol::H, 1), hwp), one(Path::Y, Pol::V, 1));
    expect_state(apply_transform(one(Path::Y, Pol::H, 0), hwp), one(Path::Y, Pol::H, 0));
    EXPECT_THROW(half_wave_plate(reg(), Path::Y, 90.0, 7), ConfigurationError);
}

TEST(PhaseShifter, ActsOnV) {
    auto ps = phase_shifter(reg(), Path::Y, std::numbers::pi / 2);
    expect_state(apply_transform(one(Path::Y, Pol::V), ps), one(Path::Y, Pol::V, 0, kI));
    expect_state(apply_transform(one(Path::Y, Pol::H), ps), one(Path::Y, Pol::H));
    auto flip = phase_shifter(reg(), Path::Y, std::numbers::pi);
    EXPECT_EQ(apply_transform(one(Path::Y, Pol::V), flip).terms()[0].amplitude, Complex(-1.0));
}

TEST(Delay, ShiftsTimebin) {
    auto d = delay_line(reg(), Path::Long, 1);
    expect_state(apply_transform(one(Path::Long, Pol::V, 0), d), one(Path::Long, Pol::V, 1));
    expect_state(apply_transform(one(Path::Short, Pol::V, 0), d), one(Path::Short, Pol::V, 0));
    EXPECT_THROW(apply_transform(one(Path::Long, Pol::H, 3), d), ConfigurationError);
}

TEST(Loss, SplitsAmplitude) {
    auto l = loss(reg(), Path::Ch1, Path::Loss1, 0.25);
    expect_state(apply_transform(one(Path::Ch1, Pol::H), l), one(Path::Ch1, Pol::H, 0, 0.5) +
                                                                 one(Path::Loss1, Pol::H, 0, std::sqrt(0.75)));
    auto full = loss(reg(), Path::Ch1, Path::Loss1, 1.0);
    expect_state(apply_transform(one(Path::Ch1, Pol::V), full), one(Path::Ch1, Pol::V));
}

TEST(BuildElement, ValidatesArityAndRanges) {
    ElementSpec s;
    s.kind = ElementKind::BS;
    s.inputs = {Path::Aux0};
    EXPECT_THROW(build_element(reg(), s), ConfigurationError);
    s.inputs = {Path::Aux0, Path::Aux0};
    EXPECT_THROW(build_element(reg(), s), ConfigurationError);
    s.kind = ElementKind::HWP;
    s.inputs = {Path::Aux0};
    s.angle_deg = 180.0;
    EXPECT_THROW(build_element(reg(), s), ValidationError);
    s.kind = ElementKind::PS;
    s.phase_rad = -0.1;
    EXPECT_THROW(build_element(reg(), s), ValidationError);
    EXPECT_THROW(loss(reg(), Path::Ch1, Path::Loss1, 1.5), ValidationError);
}

TEST(Elements, AreUnitaryInBothConventions) {
    for (auto conv : {PhaseConvention::Real, PhaseConvention::Imaginary}) {
        EXPECT_LT(unitarity_error(beam_splitter(reg(), Path::Aux0, Path::Aux1, Path::Aux0, Path::Aux1, conv).matrix()),
                  1e-15);
        EXPECT_LT(unitarity_error(
                      polarizing_beam_splitter(reg(), Path::Aux0, Path::Aux1, Path::Aux0, Path::Aux1, conv).matrix()),
                  1e-15);
    }
    EXPECT_LT(unitarity_error(loss(reg(), Path::Ch1, Path::Loss1, 0.3).matrix()), 1e-15);
}
