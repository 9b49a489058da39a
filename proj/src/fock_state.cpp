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

#include "fockdist/fock_state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fockdist/errors.hpp"

namespace fockdist {

OccupationVector OccupationVector::from_counts(std::span<const std::pair<ModeIndex, int>> counts) {
    OccupationVector occ;
    for (const auto& [mode, n] : counts) {
        if (n < 0) {
            throw ValidationError("negative photon count");
        }
        for (int i = 0; i < n; ++i) {
            occ.add(mode);
        }
    }
    return occ;
}

OccupationVector OccupationVector::from_photons(std::span<const ModeIndex> photons) {
    OccupationVector occ;
    for (ModeIndex m : photons) {
        occ.add(m);
    }
    return occ;
}

int OccupationVector::count(ModeIndex mode) const {
    auto p = photons();
    auto [lo, hi] = std::equal_range(p.begin(), p.end(), mode);
    return static_cast<int>(hi - lo);
}

std::vector<std::pair<ModeIndex, int>> OccupationVector::counts() const {
    std::vector<std::pair<ModeIndex, int>> out;
    for (ModeIndex m : photons()) {
        if (!out.empty() && out.back().first == m) {
            ++out.back().second;
        } else {
            out.emplace_back(m, 1);
        }
    }
    return out;
}

void OccupationVector::add(ModeIndex mode) {
    if (size_ >= kMaxPhotons) {
        throw ValidationError("occupation vector exceeds " + std::to_string(kMaxPhotons) + " photons");
    }
    auto* end = photons_.begin() + size_;
    auto* pos = std::upper_bound(photons_.begin(), end, mode);
    std::move_backward(pos, end, end + 1);
    *pos = mode;
    ++size_;
}

double OccupationVector::factorial_root() const {
    // sqrt(prod n_k!) = prod over photons of sqrt(rank within its mode)
    double f = 1.0;
    int run = 0;
    for (int i = 0; i < size_; ++i) {
        run = (i > 0 && photons_[i] == photons_[i - 1]) ? run + 1 : 1;
        if (run > 1) {
            f *= std::sqrt(static_cast<double>(run));
        }
    }
    return f;
}

namespace {

std::vector<FockState::Term> canonicalize(std::vector<FockState::Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const FockState::Term& a, const FockState::Term& b) { return a.occupation < b.occupation; });
    std::vector<FockState::Term> out;
    out.reserve(terms.size());
    for (auto& t : terms) {
        if (!out.empty() && out.back().occupation == t.occupation) {
            out.back().amplitude += t.amplitude;
        } else {
            out.push_back(std::move(t));
        }
    }
    std::erase_if(out, [](const FockState::Term& t) { return std::abs(t.amplitude) < FockState::kPruneTolerance; });
    return out;
}

}  // namespace

FockState::FockState(RegistryPtr registry) : registry_(std::move(registry)) {
    if (!registry_) {
        throw ConfigurationError("FockState requires a mode registry");
    }
}

FockState::FockState(RegistryPtr registry, std::vector<Term> canonical_terms)
    : registry_(std::move(registry)), terms_(std::move(canonical_terms)) {}

FockState FockState::vacuum(RegistryPtr registry) {
    std::vector<Term> terms{{OccupationVector{}, 1.0}};
    return FockState(std::move(registry), std::move(terms));
}

FockState FockState::from_terms(RegistryPtr registry, std::vector<Term> terms) {
    if (!registry) {
        throw ConfigurationError("FockState requires a mode registry");
    }
    for (const auto& t : terms) {
        if (t.occupation.total() > registry->cutoff()) {
            throw ValidationError("state has " + std::to_string(t.occupation.total()) +
                                  " photons, above the registry cutoff of " + std::to_string(registry->cutoff()));
        }
        for (ModeIndex m : t.occupation.photons()) {
            if (m >= registry->size()) {
                throw ValidationError("occupation references unregistered mode index " + std::to_string(m));
            }
        }
        if (!std::isfinite(t.amplitude.real()) || !std::isfinite(t.amplitude.imag())) {
            throw ValidationError("non-finite amplitude");
        }
    }
    return FockState(std::move(registry), canonicalize(std::move(terms)));
}

FockState FockState::basis(RegistryPtr registry, std::span<const ModeLabel> photons, Complex amplitude) {
    OccupationVector occ;
    for (const auto& m : photons) {
        occ.add(registry->index(m));
    }
    return from_terms(std::move(registry), {{occ, amplitude}});
}

double FockState::norm_squared() const {
    double s = 0.0;
    for (const auto& t : terms_) {
        s += std::norm(t.amplitude);
    }
    return s;
}

int FockState::max_photons() const {
    int n = 0;
    for (const auto& t : terms_) {
        n = std::max(n, t.occupation.total());
    }
    return n;
}

Complex FockState::amplitude(const OccupationVector& occupation) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), occupation,
                               [](const Term& t, const OccupationVector& o) { return t.occupation < o; });
    if (it != terms_.end() && it->occupation == occupation) {
        return it->amplitude;
    }
    return 0.0;
}

FockState FockState::normalized() const {
    double n2 = norm_squared();
    if (n2 <= 0.0) {
        throw ValidationError("cannot normalize the zero state");
    }
    return scaled(1.0 / std::sqrt(n2));
}

FockState FockState::scaled(Complex factor) const {
    std::vector<Term> terms = terms_;
    for (auto& t : terms) {
        t.amplitude *= factor;
    }
    std::erase_if(terms, [](const Term& t) { return std::abs(t.amplitude) < kPruneTolerance; });
    return FockState(registry_, std::move(terms));
}

FockState FockState::filtered(const std::function<bool(const OccupationVector&)>& keep) const {
    std::vector<Term> terms;
    for (const auto& t : terms_) {
        if (keep(t.occupation)) {
            terms.push_back(t);
        }
    }
    return FockState(registry_, std::move(terms));
}

FockState operator+(const FockState& a, const FockState& b) {
    if (!same_registry(a.registry_, b.registry_)) {
        throw ValidationError("cannot add states over different registries");
    }
    std::vector<FockState::Term> terms = a.terms_;
    terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
    return FockState(a.registry_, canonicalize(std::move(terms)));
}

FockState operator-(const FockState& a, const FockState& b) { return a + b.scaled(-1.0); }

Complex inner_product(const FockState& a, const FockState& b) {
    if (!same_registry(a.registry(), b.registry())) {
        throw ValidationError("inner product of states over different registries");
    }
    Complex s = 0.0;
    auto ia = a.terms().begin();
    auto ib = b.terms().begin();
    while (ia != a.terms().end() && ib != b.terms().end()) {
        if (ia->occupation < ib->occupation) {
            ++ia;
        } else if (ib->occupation < ia->occupation) {
            ++ib;
        } else {
            s += std::conj(ia->amplitude) * ib->amplitude;
            ++ia;
            ++ib;
        }
    }
    return s;
}

double max_amplitude_difference(const FockState& a, const FockState& b) {
    double worst = 0.0;
    for (const auto& t : (a - b).terms()) {
        worst = std::max(worst, std::abs(t.amplitude));
    }
    return worst;
}

double state_overlap(const FockState& a, const FockState& b) {
    double na = a.norm_squared();
    double nb = b.norm_squared();
    if (na <= 0.0 || nb <= 0.0) {
        return 0.0;
    }
    return std::norm(inner_product(a, b)) / (na * nb);
}

Projection project(const FockState& state, const std::function<bool(const OccupationVector&)>& pattern) {
    FockState kept = state.filtered(pattern);
    double p = kept.norm_squared();
    double total = state.norm_squared();
    if (total > 0.0) {
        p /= total;
    }
    if (kept.empty() || p <= 0.0) {
        return {0.0, FockState(state.registry()), true};
    }
    return {p, kept.normalized(), false};
}

std::string describe(const FockState& state) {
    std::ostringstream out;
    bool first = true;
    for (const auto& t : state.terms()) {
        if (!first) {
            out << " + ";
        }
        first = false;
        out << "(" << t.amplitude.real() << (t.amplitude.imag() < 0 ? "" : "+") << t.amplitude.imag() << "i)|";
        bool inner = true;
        for (const auto& [m, n] : t.occupation.counts()) {
            if (!inner) {
                out << ", ";
            }
            inner = false;
            out << to_string(state.registry()->label(m));
            if (n > 1) {
                out << "^" << n;
            }
        }
        out << ">";
    }
    if (first) {
        out << "0";
    }
    return out.str();
}

}  // namespace fockdist
