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

#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "fockdist/modes.hpp"

namespace fockdist {

using Complex = std::complex<double>;

/// Occupation numbers over registered modes, stored as the sorted multiset of
/// mode indices (one entry per photon). Zero counts are implicit, so the form
/// is canonical.
class OccupationVector {
   public:
    static constexpr int kMaxPhotons = ModeRegistry::kMaxCutoff;

    OccupationVector() = default;
    /// Throws ValidationError above kMaxPhotons photons.
    static OccupationVector from_counts(std::span<const std::pair<ModeIndex, int>> counts);
    static OccupationVector from_photons(std::span<const ModeIndex> photons);

    int total() const { return size_; }
    int count(ModeIndex mode) const;
    std::span<const ModeIndex> photons() const { return {photons_.data(), size_}; }
    /// Distinct occupied modes with their counts, ascending by index.
    std::vector<std::pair<ModeIndex, int>> counts() const;

    void add(ModeIndex mode);
    /// Product of sqrt(n_k!) over occupied modes.
    double factorial_root() const;

    friend bool operator==(const OccupationVector& a, const OccupationVector& b) {
        return a.size_ == b.size_ && std::equal(a.photons_.begin(), a.photons_.begin() + a.size_, b.photons_.begin());
    }
    friend bool operator<(const OccupationVector& a, const OccupationVector& b) {
        return std::lexicographical_compare(a.photons_.begin(), a.photons_.begin() + a.size_, b.photons_.begin(),
                                            b.photons_.begin() + b.size_);
    }

   private:
    std::uint8_t size_ = 0;
    std::array<ModeIndex, kMaxPhotons> photons_{};
};

/// Sparse superposition of occupation vectors. Immutable; every operation
/// returns a new state. Terms are sorted by occupation vector, duplicate
/// vectors merged, and amplitudes with modulus below kPruneTolerance dropped.
class FockState {
   public:
    static constexpr double kPruneTolerance = 1e-14;

    struct Term {
        OccupationVector occupation;
        Complex amplitude;
    };

    /// The zero vector (no terms) over the registry.
    explicit FockState(RegistryPtr registry);

    static FockState vacuum(RegistryPtr registry);
    /// Merges duplicates and prunes. Throws ValidationError when a term
    /// exceeds the registry photon cutoff or references an unknown index.
    static FockState from_terms(RegistryPtr registry, std::vector<Term> terms);
    /// Single term built from labelled modes (repeat a label for n > 1).
    static FockState basis(RegistryPtr registry, std::span<const ModeLabel> photons, Complex amplitude = 1.0);
    static FockState basis(RegistryPtr registry, std::initializer_list<ModeLabel> photons, Complex amplitude = 1.0) {
        return basis(std::move(registry), std::span<const ModeLabel>(photons.begin(), photons.size()), amplitude);
    }

    const RegistryPtr& registry() const { return registry_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    double norm_squared() const;
    /// Largest photon number over all terms.
    int max_photons() const;
    Complex amplitude(const OccupationVector& occupation) const;

    /// Throws ValidationError for the zero state.
    FockState normalized() const;
    FockState scaled(Complex factor) const;
    FockState filtered(const std::function<bool(const OccupationVector&)>& keep) const;

    friend FockState operator+(const FockState& a, const FockState& b);
    friend FockState operator-(const FockState& a, const FockState& b);

   private:
    FockState(RegistryPtr registry, std::vector<Term> canonical_terms);
    RegistryPtr registry_;
    std::vector<Term> terms_;
};

/// <a|b>, conjugate-linear in a. Throws ValidationError on registry mismatch.
Complex inner_product(const FockState& a, const FockState& b);

/// max |a_k - b_k| over the union of occupation vectors.
double max_amplitude_difference(const FockState& a, const FockState& b);

/// Fidelity |<a|b>|^2 of the normalized states.
double state_overlap(const FockState& a, const FockState& b);

struct Projection {
    double probability = 0.0;
    /// Renormalized matching component; the zero state when empty.
    FockState state;
    /// Set when no amplitude matched (probability 0).
    bool empty = true;
};

/// Keeps terms whose occupation satisfies the pattern. Zero probability is a
/// valid, flagged result.
Projection project(const FockState& state, const std::function<bool(const OccupationVector&)>& pattern);

/// Human-readable ket listing, e.g. "(0.5+0i)|In:H@0, In:V@1>".
std::string describe(const FockState& state);

}  // namespace fockdist
