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

#include <gtest/gtest.h>

#include "fockdist/errors.hpp"
#include "fockdist/protocol.hpp"
#include "fockdist/source_stats.hpp"

using namespace fockdist;

// Reference values computed with 40-digit mpmath from the closed-form
// Poisson and thermal photon-number distributions.

namespace {

void expect_rel(double got, double want, double rel = 1e-12) { EXPECT_NEAR(got, want, std::abs(want) * rel); }

}  // namespace

TEST(CoherentStats, FrozenValues) {
    auto r = coherent_stats(0.1, 0.1);
    expect_rel(r.p11, 0.00818730753077981858669935508619);
    expect_rel(r.pmul, 0.00933578877564195100937803457087);
    ASSERT_TRUE(r.ratio && r.bound);
    EXPECT_LT(*r.ratio, 1.0);
    EXPECT_FALSE(r.condition_met);
    EXPECT_LE(*r.bound, r.pmul);
    EXPECT_NEAR(*r.bound, r.p11, 1e-18);
}

TEST(CoherentStats, ZeroMeanAndGridOrdering) {
    EXPECT_EQ(coherent_stats(0.0, 0.3).p11, 0.0);
    EXPECT_EQ(coherent_stats(0.3, 0.0).p11, 0.0);
    for (int i = 0; i < 50; ++i) {
        for (int j = 0; j < 50; ++j) {
            auto r = coherent_stats(i / 49.0, j / 49.0);
            EXPECT_LE(r.p11, r.pmul);
            EXPECT_LE(*r.bound, r.pmul * (1 + 1e-15));
        }
    }
    EXPECT_THROW(coherent_stats(-0.1, 0.1), ValidationError);
}

TEST(CoherentStats, NeverMeetsThresholdOnGrid) {
    for (int i = 1; i <= 50; ++i) {
        for (int j = 1; j <= 50; ++j) {
            auto r = coherent_stats(i * 0.04, j * 0.04);
            EXPECT_FALSE(r.condition_met);
            EXPECT_LT(r.p11, 20.0 * r.pmul);
        }
    }
}

TEST(CoherentStats, SmallMeanCancellation) {
    auto r = coherent_stats(1e-8, 1e-8);
    // pmul ~ (nu^2 + mu^2)/2 to leading order.
    expect_rel(r.pmul, 1e-16, 1e-7);
    expect_rel(r.p11, 1e-16, 1e-7);
    // Straddles the switch between the series and log1p branches.
    expect_rel(coherent_stats(0.005, 0.02).pmul, 0.0002098091797561813904762169494923112488433);
}

TEST(PdcStats, FrozenValues) {
    auto a = pdc_stats(0.01);
    expect_rel(a.p11, 0.00248752343739046569149458937469);
    expect_rel(a.pmul, 0.0000217814693754116343658309476936);
    expect_rel(*a.pmul_over_p11_sq, 3.52008224896233781842841920077);
    auto b = pdc_stats(0.1);
    expect_rel(b.p11, 0.0237734268371691678630540383363);
    expect_rel(b.pmul, 0.00209591251785029530936585422587);
    expect_rel(*b.pmul_over_p11_sq, 3.70842564454693468510954308942);
    EXPECT_LT(a.pmul / a.p11, 0.05);
    EXPECT_TRUE(a.condition_met);
    auto zero = pdc_stats(0.0);
    EXPECT_EQ(zero.p11, 0.0);
    EXPECT_EQ(zero.pmul, 0.0);
}

TEST(PdcStats, AgreesWithFockSimulation) {
    SourceSpec src;
    src.kind = SourceKind::PdcFig3;
    src.pair_mean = 0.01;
    auto sim = run_multiphoton_error(src, ProtocolConfig{});
    EXPECT_NEAR(sim.p11_input, pdc_stats(0.01).p11, 0.1 * pdc_stats(0.01).p11);
}

TEST(PdcStats, ConstantTendsToSevenHalves) {
    EXPECT_NEAR(*pdc_stats(1e-6).pmul_over_p11_sq, 3.5, 1e-3);
    EXPECT_TRUE(pdc_stats(1e-3).condition_met);
    EXPECT_THROW(pdc_stats(0.3), ValidationError);
    EXPECT_THROW(pdc_stats(-0.1), ValidationError);
}

TEST(TriggeredStats, FrozenValuesAndWindow) {
    auto r = triggered_plus_coherent_stats(1.0, 0.0, 0.05, 10.0);
    expect_rel(r.p11, 0.047561471225035700454571265989);
    expect_rel(r.pmul, 0.00120910427425029045400341423138);
    expect_rel(*r.ratio, 39.3361203313306996366713464587);
    EXPECT_TRUE(r.condition_met);
    ASSERT_TRUE(r.mu_window_low && r.mu_window_high);
    EXPECT_NEAR(*r.mu_window_high, 0.18769, 1e-5);
    EXPECT_LT(*r.mu_window_low, 1e-8);
    EXPECT_EQ(triggered_plus_coherent_stats(1.0, 0.0, 0.0).p11, 0.0);
}

TEST(TriggeredStats, TriggerMultiphotonDominatesAtSmallMu) {
    auto r = triggered_plus_coherent_stats(0.9, 0.01, 1e-6, 10.0);
    EXPECT_FALSE(r.condition_met);
    EXPECT_NEAR(r.pmul, 0.01, 1e-5);
}

TEST(TriggeredStats, ImperfectTriggerShrinksWindow) {
    auto r = triggered_plus_coherent_stats(0.9, 0.001, 0.05, 10.0);
    auto ideal = triggered_plus_coherent_stats(1.0, 0.0, 0.05, 10.0);
    ASSERT_TRUE(r.mu_window_high && r.mu_window_low);
    EXPECT_LT(*r.mu_window_high, *ideal.mu_window_high);
    EXPECT_GT(*r.mu_window_low, *ideal.mu_window_low);
    EXPECT_THROW(triggered_plus_coherent_stats(0.9, 0.2, 0.05), ValidationError);
}
