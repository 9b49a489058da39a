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
#include "fockdist/protocol.hpp"
#include "test_support.hpp"

using namespace fockdist;

namespace {

using std::numbers::pi;

ProtocolConfig dephasing_cfg(SignalState s, double ph, double pv) {
    ProtocolConfig c;
    c.signal = s;
    c.noise.params = DephasingParams{ph, pv};
    return c;
}

ProtocolConfig rotation_cfg(SignalState s, RotationParams r) {
    ProtocolConfig c;
    c.signal = s;
    c.noise.params = r;
    return c;
}

RotationParams haar(std::mt19937_64& rng) {
    auto [d1, g1] = haar_su2_column(rng);
    auto [d2, g2] = haar_su2_column(rng);
    return {d1, g1, d2, g2};
}

}  // namespace

TEST(Protocol, DephasingExample) {
    SignalState s = SignalState::normalized(0.6, Complex(0.0, 0.8));
    RunReport r = run_distribution(dephasing_cfg(s, 0.7, 2.9));
    EXPECT_NEAR(r.success_probability, 0.125, 1e-12);
    EXPECT_NEAR(r.parity_factor, 0.5, 1e-12);
    ASSERT_TRUE(r.routing_factor && r.detection_factor && r.fidelity);
    EXPECT_NEAR(*r.routing_factor, 0.25, 1e-12);
    EXPECT_NEAR(*r.detection_factor, 1.0, 1e-12);
    EXPECT_NEAR(*r.fidelity, 1.0, 1e-12);
    // Both analyzer outcomes are equally likely.
    ASSERT_EQ(r.outcomes.size(), 2u);
    EXPECT_NEAR(r.outcomes[0].probability, r.outcomes[1].probability, 1e-12);
}

TEST(Protocol, DetectorEfficiencySquared) {
    ProtocolConfig c = dephasing_cfg(SignalState{}, 0.1, 0.2);
    c.detector.efficiency = 0.5;
    RunReport r = run_distribution(c);
    EXPECT_NEAR(r.success_probability, 0.03125, 1e-12);
    EXPECT_NEAR(*r.detection_factor, 0.25, 1e-12);
    EXPECT_NEAR(*r.fidelity, 1.0, 1e-12);
}

TEST(Protocol, RotationSuccessLaw) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 20; ++i) {
        RotationParams p = haar(rng);
        SignalState s = fockdist::testing::random_signal(rng);
        RunReport r = run_distribution(rotation_cfg(s, p));
        double want = std::norm(p.delta1 * p.gamma2) / 8.0;
        EXPECT_NEAR(r.success_probability, want, 1e-12);
        EXPECT_NEAR(r.parity_factor, std::norm(p.delta1 * p.gamma2) / 2.0, 1e-12);
        if (want > 1e-6) EXPECT_NEAR(*r.fidelity, 1.0, 1e-10);
    }
}

TEST(Protocol, ZeroDeltaGivesNothing) {
    RotationParams p{0.0, 1.0, 0.0, 1.0};
    RunReport r = run_distribution(rotation_cfg(SignalState{}, p));
    EXPECT_EQ(r.success_probability, 0.0);
    EXPECT_FALSE(r.fidelity.has_value());
    EXPECT_FALSE(r.routing_factor.has_value());
}

TEST(Protocol, Port4UsesSwappedProduct) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 10; ++i) {
        RotationParams p = haar(rng);
        ProtocolConfig c = rotation_cfg(fockdist::testing::random_signal(rng), p);
        c.variant = Variant::Port3And4;
        RunReport both = run_distribution(c);
        double want = (std::norm(p.delta1 * p.gamma2) + std::norm(p.gamma1 * p.delta2)) / 8.0;
        EXPECT_NEAR(both.success_probability, want, 1e-12);
        EXPECT_NEAR(*both.fidelity, 1.0, 1e-10);
    }
}

TEST(Protocol, DOnlyHalvesSuccess) {
    ProtocolConfig c = dephasing_cfg(SignalState{}, 1.0, 2.0);
    c.acceptance = Acceptance::DOnly;
    RunReport r = run_distribution(c);
    EXPECT_NEAR(r.success_probability, 0.0625, 1e-12);
    ASSERT_EQ(r.outcomes.size(), 1u);
}

TEST(Protocol, GlobalPhaseAndSwapSymmetry) {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 10; ++i) {
        RotationParams p = haar(rng);
        SignalState s = fockdist::testing::random_signal(rng);
        double base = run_distribution(rotation_cfg(s, p)).success_probability;
        Complex ph = std::polar(1.0, 1.234);
        double phased = run_distribution(rotation_cfg(SignalState{s.alpha * ph, s.beta * ph}, p)).success_probability;
        double swapped = run_distribution(rotation_cfg(SignalState{s.beta, s.alpha}, p)).success_probability;
        EXPECT_NEAR(base, phased, 1e-12);
        EXPECT_NEAR(base, swapped, 1e-12);
    }
}

TEST(Protocol, DephasingMatchesEquivalentRotation) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ang(0.0, 2 * pi);
    for (int i = 0; i < 10; ++i) {
        DephasingParams d{ang(rng), ang(rng)};
        SignalState s = fockdist::testing::random_signal(rng);
        RunReport a = run_distribution(dephasing_cfg(s, d.phi_h, d.phi_v));
        RunReport b = run_distribution(rotation_cfg(s, RotationParams::from_dephasing(d)));
        EXPECT_NEAR(a.success_probability, b.success_probability, 1e-13);
        EXPECT_NEAR(*a.fidelity, *b.fidelity, 1e-12);
    }
}

TEST(Protocol, ConventionsAgreeOnProbabilities) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 10; ++i) {
        ProtocolConfig c = rotation_cfg(fockdist::testing::random_signal(rng), haar(rng));
        c.variant = Variant::Port3And4;
        RunReport real = run_distribution(c);
        c.convention = PhaseConvention::Imaginary;
        RunReport imag = run_distribution(c);
        EXPECT_NEAR(real.success_probability, imag.success_probability, 1e-12);
        EXPECT_NEAR(real.fidelity.value_or(0), imag.fidelity.value_or(0), 1e-10);
    }
}

TEST(Protocol, ReceivedStateKeepsNorm) {
    std::mt19937_64 rng(2);
    NoiseDraw d;
    d.params = haar(rng);
    FockState in = encoder_state(ModeRegistry::standard(), fockdist::testing::random_signal(rng));
    EXPECT_NEAR(received_state(in, d).norm_squared(), 1.0, 1e-13);
    EXPECT_NEAR(parity_factor(received_state(in, d), Variant::Port3),
                std::norm(d.as_rotation().delta1 * d.as_rotation().gamma2) / 2.0, 1e-12);
}

TEST(Protocol, ParsingAndValidation) {
    EXPECT_EQ(parse_variant("port3+port4"), Variant::Port3And4);
    EXPECT_EQ(parse_acceptance("d-only"), Acceptance::DOnly);
    EXPECT_EQ(parse_double_click("random"), DoubleClickPolicy::RandomAssign);
    EXPECT_THROW(parse_variant("port5"), ConfigurationError);
    ProtocolConfig c;
    c.detector.efficiency = 2.0;
    EXPECT_THROW(run_distribution(c), ValidationError);
    c = ProtocolConfig{};
    c.signal = SignalState{1.0, 1.0};
    EXPECT_THROW(run_distribution(c), ValidationError);
}

TEST(MonteCarlo, ThreadCountDoesNotChangeResults) {
    MonteCarloConfig mc;
    mc.sampler = SamplerSpec{NoiseKind::HaarRotation, 99, 0.0};
    mc.trials = 64;
    mc.keep_trials = true;
    mc.threads = 1;
    auto one = run_monte_carlo(mc);
    mc.threads = 4;
    auto four = run_monte_carlo(mc);
    EXPECT_EQ(one.mean_success, four.mean_success);
    EXPECT_EQ(one.mean_parity, four.mean_parity);
    ASSERT_EQ(one.rows.size(), 64u);
    for (std::size_t i = 0; i < 64; ++i) EXPECT_EQ(one.rows[i].success_probability, four.rows[i].success_probability);
}

TEST(MonteCarlo, DephasingSpreadWithinStandardError) {
    MonteCarloConfig mc;
    mc.sampler = SamplerSpec{NoiseKind::Dephasing, 7, 0.0};
    mc.trials = 100;
    auto r = run_monte_carlo(mc);
    EXPECT_NEAR(r.mean_success, 0.125, 1e-12);
    EXPECT_LE(std::abs(r.mean_success - 0.125), 3 * r.se_success + 1e-12);
    EXPECT_NEAR(*r.min_fidelity, 1.0, 1e-12);
}

TEST(MonteCarlo, HaarParityAverage) {
    // E|d1 g2|^2 / 2 = 1/8 for independent Haar columns.
    MonteCarloConfig mc;
    mc.sampler = SamplerSpec{NoiseKind::HaarRotation, 1, 0.0};
    mc.trials = 20000;
    mc.decode = false;
    auto r = run_monte_carlo(mc);
    EXPECT_FALSE(r.decoded);
    EXPECT_NEAR(r.mean_parity, 0.125, 4 * r.se_parity);
    EXPECT_THROW(run_monte_carlo(MonteCarloConfig{.trials = 0}), ConfigurationError);
}

TEST(Multiphoton, IdealSourceHasNoFalseAccepts) {
    SourceSpec src;
    src.signal = SignalState::normalized(1.0, Complex(0.0, 1.0));
    ProtocolConfig c = dephasing_cfg(src.signal, 0.3, 0.4);
    auto r = run_multiphoton_error(src, c);
    EXPECT_NEAR(r.accepted_probability, 0.125, 1e-12);
    EXPECT_EQ(r.false_accept_probability, 0.0);
    EXPECT_NEAR(r.p11_input, 1.0, 1e-12);
}

TEST(Multiphoton, TwoReferencePhotonsGetAccepted) {
    SourceSpec src;
    src.kind = SourceKind::FockPair;
    src.n_ref = 2;
    src.n_sig = 0;
    src.signal = SignalState::normalized(0.6, 0.8);
    ProtocolConfig c = dephasing_cfg(src.signal, 0.0, 0.0);
    auto r = run_multiphoton_error(src, c);
    EXPECT_NEAR(r.false_accept_probability, 0.125, 1e-12);
    EXPECT_NEAR(r.pmul_input, 1.0, 1e-12);
    auto small = ModeRegistry::standard(3, 2);
    EXPECT_THROW(run_multiphoton_error(src, c, small), ConfigurationError);
}

TEST(MonteCarlo, DephasingMeanIndependentOfSignal) {
    std::mt19937_64 rng(19);
    std::vector<double> means;
    double se = 0.0;
    for (int i = 0; i < 10; ++i) {
        MonteCarloConfig mc;
        mc.base.signal = fockdist::testing::random_signal(rng);
        mc.sampler = SamplerSpec{NoiseKind::Dephasing, 100 + static_cast<std::uint64_t>(i), 0.0};
        mc.trials = 50;
        auto r = run_monte_carlo(mc);
        means.push_back(r.mean_success);
        se = std::max(se, r.se_success);
    }
    auto [lo, hi] = std::minmax_element(means.begin(), means.end());
    EXPECT_LE(*hi - *lo, 3 * se + 1e-12);
}

TEST(Multiphoton, CoherentPairFalseAcceptsComparableToSignal) {
    SourceSpec src;
    src.kind = SourceKind::CoherentPair;
    src.nu = 0.1;
    src.mu = 0.1;
    src.signal = SignalState::normalized(0.6, Complex(0.0, 0.8));
    ProtocolConfig c = dephasing_cfg(src.signal, 0.2, 0.9);
    auto r = run_multiphoton_error(src, c);
    ASSERT_GT(r.accepted_single, 0.0);
    EXPECT_NEAR(r.accepted_single + r.accepted_multiphoton, r.accepted_probability, 1e-15);
    double ratio = r.false_accept_probability / r.accepted_single;
    EXPECT_GT(ratio, 0.1);
    EXPECT_LT(ratio, 10.0);
    ASSERT_TRUE(r.error_rate);
    EXPECT_GT(*r.error_rate, 0.0);
}
