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

#include "fockdist/transform.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "fockdist/errors.hpp"

namespace fockdist {

double unitarity_error(const Eigen::MatrixXcd& matrix) {
    if (matrix.rows() != matrix.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    if (matrix.size() == 0) {
        return 0.0;
    }
    Eigen::MatrixXcd d = matrix.adjoint() * matrix - Eigen::MatrixXcd::Identity(matrix.rows(), matrix.cols());
    return d.cwiseAbs().maxCoeff();
}

ModeTransform::ModeTransform(RegistryPtr registry, std::vector<ModeLabel> modes, Eigen::MatrixXcd matrix,
                             std::vector<std::pair<ModeLabel, ModeLabel>> relabel)
    : registry_(std::move(registry)), modes_(std::move(modes)), matrix_(std::move(matrix)), relabel_(std::move(relabel)) {
    if (!registry_) {
        throw ConfigurationError("ModeTransform requires a mode registry");
    }
    const auto n = static_cast<Eigen::Index>(modes_.size());
    if (matrix_.rows() != n || matrix_.cols() != n) {
        throw ValidationError("transform matrix is " + std::to_string(matrix_.rows()) + "x" +
                              std::to_string(matrix_.cols()) + " but acts on " + std::to_string(n) + " modes");
    }
    if (unitarity_error(matrix_) >= kUnitarityTolerance) {
        throw ValidationError("transform matrix is not unitary (max |U^dag U - I| = " +
                              std::to_string(unitarity_error(matrix_)) + ")");
    }

    local_.assign(registry_->size(), -1);
    for (std::size_t j = 0; j < modes_.size(); ++j) {
        ModeIndex idx = registry_->index(modes_[j]);
        if (local_[idx] != -1) {
            throw ConfigurationError("mode " + to_string(modes_[j]) + " listed twice in transform");
        }
        local_[idx] = static_cast<int>(j);
    }
    columns_.resize(modes_.size());
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            Complex u = matrix_(k, j);
            if (std::abs(u) > 0.0) {
                columns_[static_cast<std::size_t>(j)].emplace_back(registry_->index(modes_[static_cast<std::size_t>(k)]), u);
            }
        }
    }

    rename_.assign(registry_->size(), kKeep);
    std::set<ModeLabel> targets;
    for (const auto& [from, to] : relabel_) {
        ModeIndex src = registry_->index(from);
        if (rename_[src] != kKeep) {
            throw ValidationError("mode " + to_string(from) + " relabeled twice");
        }
        if (!targets.insert(to).second) {
            throw ValidationError("relabel is not injective: two modes map to " + to_string(to));
        }
        auto dst = registry_->find(to);
        rename_[src] = dst ? static_cast<int>(*dst) : kUnregistered;
    }
}

ModeTransform ModeTransform::identity(RegistryPtr registry) {
    return ModeTransform(std::move(registry), {}, Eigen::MatrixXcd(0, 0));
}

ModeTransform ModeTransform::inverse() const {
    // Forward: a_j -> sum_k U_kj a_sigma(k). Inverse: U^dag on sigma(modes), then sigma^-1.
    std::map<ModeLabel, ModeLabel> forward(relabel_.begin(), relabel_.end());
    std::vector<ModeLabel> moved;
    moved.reserve(modes_.size());
    for (const auto& m : modes_) {
        auto it = forward.find(m);
        moved.push_back(it == forward.end() ? m : it->second);
    }
    std::vector<std::pair<ModeLabel, ModeLabel>> back;
    for (const auto& [from, to] : relabel_) {
        if (registry_->find(to)) {
            back.emplace_back(to, from);
        }
    }
    return ModeTransform(registry_, std::move(moved), matrix_.adjoint(), std::move(back));
}

namespace {

struct Expansion {
    const std::vector<std::vector<std::pair<ModeIndex, Complex>>>* columns;
    const std::vector<int>* rename;
    const ModeRegistry* registry;
    std::vector<int> moving;  // local column per moving photon
    std::vector<ModeIndex> fixed;
    std::vector<ModeIndex> chosen;
    std::vector<FockState::Term>* out;

    void emit(Complex coefficient) {
        std::array<ModeIndex, OccupationVector::kMaxPhotons> photons{};
        std::size_t n = 0;
        for (ModeIndex m : fixed) {
            photons[n++] = m;
        }
        for (ModeIndex m : chosen) {
            photons[n++] = m;
        }
        auto before = OccupationVector::from_photons(std::span<const ModeIndex>(photons.data(), n));
        Complex amp = coefficient * before.factorial_root();

        std::size_t distinct_before = before.counts().size();
        for (std::size_t i = 0; i < n; ++i) {
            int r = (*rename)[photons[i]];
            if (r == -2) {
                throw ConfigurationError("transform sends a photon from " + to_string(registry->label(photons[i])) +
                                         " to a mode outside the registry");
            }
            if (r >= 0) {
                photons[i] = static_cast<ModeIndex>(r);
            }
        }
        auto after = OccupationVector::from_photons(std::span<const ModeIndex>(photons.data(), n));
        if (after.counts().size() != distinct_before) {
            throw ValidationError("relabel collides with an occupied mode");
        }
        out->push_back({after, amp});
    }

    void expand(std::size_t photon, Complex coefficient) {
        if (photon == moving.size()) {
            emit(coefficient);
            return;
        }
        for (const auto& [target, u] : (*columns)[static_cast<std::size_t>(moving[photon])]) {
            chosen.push_back(target);
            expand(photon + 1, coefficient * u);
            chosen.pop_back();
        }
    }
};

}  // namespace

FockState apply_transform(const FockState& state, const ModeTransform& transform) {
    if (!same_registry(state.registry(), transform.registry_)) {
        throw ValidationError("state and transform use different mode registries");
    }
    if (state.max_photons() > state.registry()->cutoff()) {
        throw ValidationError("state exceeds the registry photon cutoff");
    }
    std::vector<FockState::Term> out;
    out.reserve(state.terms().size() * 2);
    Expansion ex{&transform.columns_, &transform.rename_, state.registry().get(), {}, {}, {}, &out};
    for (const auto& term : state.terms()) {
        ex.moving.clear();
        ex.fixed.clear();
        ex.chosen.clear();
        for (ModeIndex m : term.occupation.photons()) {
            int j = transform.local_[m];
            if (j >= 0) {
                ex.moving.push_back(j);
            } else {
                ex.fixed.push_back(m);
            }
        }
        // |n> = prod (a^dag)^n / sqrt(n!); emit() restores sqrt(m!) of the output monomial
        ex.expand(0, term.amplitude / term.occupation.factorial_root());
    }
    return FockState::from_terms(state.registry(), std::move(out));
}

FockState apply_circuit(const FockState& state, std::span<const ModeTransform> circuit) {
    FockState s = state;
    for (const auto& t : circuit) {
        s = apply_transform(s, t);
    }
    return s;
}

}  // namespace fockdist
