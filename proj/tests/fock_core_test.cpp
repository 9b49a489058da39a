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
#include "fockdist/oracle.hpp"
#include "fockdist/transform.hpp"
#include "test_support.hpp"

using namespace fockdist;
using fockdist::testing::L;

namespace {

const double kR = 1.0 / std::numbers::sqrt2;

RegistryPtr reg() { return ModeRegistry::standard(); }

ModeTransform bs_ab() { return beam_splitter(reg(), Path::Aux0, Path::Aux1, Path::Aux0, Path::Aux1); }

std::vector<ModeLabel> pool() {
    std::vector<ModeLabel> p;
    for (Path path : {Path::Aux0, Path::Aux1, Path::Aux2, Path::Aux3}) {
        for (Pol pol : {Pol::H, Pol::V}) p.push_back({path, pol, 0});
    }
    return p;
}

}  // namespace

TEST(ModeRegistry, StandardIsCachedAndComplete) {
    auto a = ModeRegistry::standard();
    EXPECT_EQ(a.get(), ModeRegistry::standard().get());
    EXPECT_EQ(a->size(), static_cast<std::size_t>(kPathCount) * 2 * 4);
    EXPECT_EQ(a->cutoff(), 4);
    EXPECT_EQ(a->label(a->index(Path::Y, Pol::V, 2)), (ModeLabel{Path::Y, Pol::V, 2}));
}

TEST(ModeRegistry, RejectsDuplicatesAndBadBins) {
    EXPECT_THROW(ModeRegistry({L(Path::In, Pol::H), L(Path::In, Pol::H)}), ValidationError);
    EXPECT_THROW(ModeRegistry({L(Path::In, Pol::H, 4)}), ValidationError);
    EXPECT_THROW(ModeRegistry({L(Path::In, Pol::H)}, 3, 9), ValidationError);
    ModeRegistry small({L(Path::In, Pol::H)});
    EXPECT_THROW(small.index(Path::In, Pol::V, 0), ConfigurationError);
}

TEST(FockState, FromTermsMergesAndPrunes) {
    auto r = reg();
    auto a = OccupationVector::from_counts(std::vector<std::pair<ModeIndex, int>>{{r->index(Path::In, Pol::H, 0), 1}});
    FockState s = FockState::from_terms(r, {{a, 0.5}, {a, 0.25}, {OccupationVector{}, 1e-16}});
    ASSERT_EQ(s.terms().size(), 1u);
    EXPECT_DOUBLE_EQ(s.terms()[0].amplitude.real(), 0.75);
}

TEST(FockState, RejectsAboveCutoff) {
    auto r = reg();
    std::vector<ModeLabel> five(5, L(Path::In, Pol::H));
    EXPECT_THROW(FockState::basis(r, five), ValidationError);
}

TEST(FockState, NormalizeZeroThrows) { EXPECT_THROW(FockState(reg()).normalized(), ValidationError); }

TEST(FockState, InnerProductConjugatesFirstArgument) {
    auto r = reg();
    FockState a = FockState::basis(r, {L(Path::In, Pol::H)}, Complex(0.0, 1.0));
    FockState b = FockState::basis(r, {L(Path::In, Pol::H)}, 1.0);
    EXPECT_NEAR(std::abs(inner_product(a, b) - Complex(0.0, -1.0)), 0.0, 1e-15);
    FockState c = FockState::basis(r, {L(Path::In, Pol::V)});
    EXPECT_EQ(inner_product(b, c), Complex(0.0));
}

TEST(FockState, InnerProductRegistryMismatch) {
    auto other = std::make_shared<const ModeRegistry>(std::vector<ModeLabel>{L(Path::In, Pol::H)});
    FockState a = FockState::basis(reg(), {L(Path::In, Pol::H)});
    FockState b = FockState::basis(other, {L(Path::In, Pol::H)});
    EXPECT_THROW(inner_product(a, b), ValidationError);
}

TEST(Project, ProbabilityAndRenormalization) {
    auto r = reg();
    FockState s = (FockState::basis(r, {L(Path::In, Pol::H)}, 0.6) + FockState::basis(r, {L(Path::In, Pol::V)}, 0.8));
    auto h = r->index(Path::In, Pol::H, 0);
    Projection p = project(s, [h](const OccupationVector& o) { return o.count(h) == 1; });
    EXPECT_NEAR(p.probability, 0.36, 1e-15);
    EXPECT_FALSE(p.empty);
    EXPECT_NEAR(p.state.norm_squared(), 1.0, 1e-15);
    Projection none = project(s, [](const OccupationVector& o) { return o.total() == 2; });
    EXPECT_TRUE(none.empty);
    EXPECT_EQ(none.probability, 0.0);
}

TEST(ApplyTransform, IdentityLeavesStateUnchanged) {
    std::mt19937_64 rng(1);
    FockState s = fockdist::testing::random_state(reg(), pool(), rng);
    EXPECT_EQ(max_amplitude_difference(apply_transform(s, ModeTransform::identity(reg())), s), 0.0);
}

TEST(ApplyTransform, BeamSplitterOnOnePhoton) {
    // Hand substitution: a^dag -> (a^dag + b^dag)/sqrt2.
    auto r = reg();
    FockState out = apply_transform(FockState::basis(r, {L(Path::Aux0, Pol::H)}), bs_ab());
    FockState want = FockState::basis(r, {L(Path::Aux0, Pol::H)}, kR) + FockState::basis(r, {L(Path::Aux1, Pol::H)}, kR);
    EXPECT_LT(max_amplitude_difference(out, want), 1e-15);
}

TEST(ApplyTransform, HongOuMandel) {
    // (a^dag + b^dag)(a^dag - b^dag)/2 |0> = (|2,0> - |0,2>)/sqrt2.
    auto r = reg();
    FockState in = FockState::basis(r, {L(Path::Aux0, Pol::H), L(Path::Aux1, Pol::H)});
    FockState out = apply_transform(in, bs_ab());
    FockState want = FockState::basis(r, {L(Path::Aux0, Pol::H), L(Path::Aux0, Pol::H)}, kR) -
                     FockState::basis(r, {L(Path::Aux1, Pol::H), L(Path::Aux1, Pol::H)}, kR);
    EXPECT_LT(max_amplitude_difference(out, want), 1e-15);
    EXPECT_EQ(out.terms().size(), 2u);
}

TEST(ApplyTransform, RejectsNonUnitaryAndUnknownModes) {
    auto r = reg();
    Eigen::MatrixXcd m(2, 2);
    m << 1, 1, 0, 1;
    EXPECT_THROW(ModeTransform(r, {L(Path::Aux0, Pol::H), L(Path::Aux1, Pol::H)}, m), ValidationError);
    auto small = std::make_shared<const ModeRegistry>(std::vector<ModeLabel>{L(Path::Aux0, Pol::H)});
    EXPECT_THROW(ModeTransform(small, {L(Path::Aux1, Pol::H)}, Eigen::MatrixXcd::Identity(1, 1)),
                 ConfigurationError);
    EXPECT_THROW(ModeTransform(r, {L(Path::Aux0, Pol::H), L(Path::Aux0, Pol::H)}, Eigen::MatrixXcd::Identity(2, 2)),
                 ConfigurationError);
}

TEST(ApplyTransform, RelabelCollisionIsRejected) {
    auto r = reg();
    EXPECT_THROW(ModeTransform(r, {}, Eigen::MatrixXcd(0, 0),
                               {{L(Path::Aux0, Pol::H), L(Path::Aux2, Pol::H)},
                                {L(Path::Aux1, Pol::H), L(Path::Aux2, Pol::H)}}),
                 ValidationError);
}

TEST(ApplyTransform, NormPreservedOnThousandRandomStates) {
    std::mt19937_64 rng(2024);
    auto r = reg();
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        Eigen::MatrixXcd u = oracle::random_unitary(4, rng);
        std::vector<ModeLabel> modes{L(Path::Aux0, Pol::H), L(Path::Aux1, Pol::H), L(Path::Aux2, Pol::V),
                                     L(Path::Aux3, Pol::V)};
        ModeTransform t(r, modes, u);
        FockState s = fockdist::testing::random_state(r, pool(), rng, 4);
        worst = std::max(worst, std::abs(apply_transform(s, t).norm_squared() - 1.0));
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(ApplyTransform, InverseRoundTrip) {
    std::mt19937_64 rng(77);
    auto r = reg();
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        Eigen::MatrixXcd u = oracle::random_unitary(3, rng);
        ModeTransform t(r, {L(Path::Aux0, Pol::H), L(Path::Aux1, Pol::V), L(Path::Aux3, Pol::H)}, u,
                        {{L(Path::Aux0, Pol::H), L(Path::Aux2, Pol::H)}, {L(Path::Aux2, Pol::H), L(Path::Aux0, Pol::H)}});
        FockState s = fockdist::testing::random_state(r, pool(), rng);
        worst = std::max(worst, max_amplitude_difference(apply_transform(apply_transform(s, t), t.inverse()), s));
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(ApplyTransform, MatchesPermanentOracle) {
    std::mt19937_64 rng(5);
    auto r = reg();
    std::normal_distribution<double> g(0.0, 1.0);
    double worst = 0.0;
    for (int m = 1; m <= 4; ++m) {
        std::vector<ModeLabel> modes;
        for (int k = 0; k < m; ++k) modes.push_back({static_cast<Path>(static_cast<int>(Path::Aux0) + k), Pol::H, 0});
        for (int n = 1; n <= 3; ++n) {
            for (int rep = 0; rep < 20; ++rep) {
                Eigen::MatrixXcd u = oracle::random_unitary(m, rng);
                oracle::DenseState dense;
                FockState s(r);
                for (const auto& occ : oracle::occupations(m, n)) {
                    Complex a(g(rng), g(rng));
                    dense[occ] = a;
                    std::vector<ModeLabel> ph;
                    for (int k = 0; k < m; ++k) ph.insert(ph.end(), occ[k], modes[k]);
                    s = s + FockState::basis(r, ph, a);
                }
                FockState got = apply_transform(s, ModeTransform(r, modes, u));
                for (const auto& [occ, a] : oracle::apply(u, dense)) {
                    std::vector<ModeLabel> ph;
                    for (int k = 0; k < m; ++k) ph.insert(ph.end(), occ[k], modes[k]);
                    FockState b = FockState::basis(r, ph);
                    worst = std::max(worst, std::abs(inner_product(b, got) - a));
                }
            }
        }
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(Oracle, PermanentOfSmallMatrices) {
    Eigen::MatrixXcd m(2, 2);
    m << 1, 2, 3, 4;
    EXPECT_EQ(oracle::permanent(m), Complex(10.0));
    Eigen::MatrixXcd ones = Eigen::MatrixXcd::Ones(3, 3);
    EXPECT_EQ(oracle::permanent(ones), Complex(6.0));
}

TEST(Describe, ListsModes) {
    auto r = reg();
    std::string d = describe(FockState::basis(r, {L(Path::In, Pol::H, 0), L(Path::In, Pol::V, 1)}));
    EXPECT_NE(d.find("In:H@0"), std::string::npos);
    EXPECT_NE(d.find("In:V@1"), std::string::npos);
}
