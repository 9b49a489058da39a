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

#include "fockdist/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fockdist::oracle {

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

std::vector<int> expand(const std::vector<int>& counts) {
    std::vector<int> photons;
    for (int mode = 0; mode < static_cast<int>(counts.size()); ++mode) {
        photons.insert(photons.end(), counts[mode], mode);
    }
    return photons;
}

void fill(int mode, int left, std::vector<int>& current, std::vector<std::vector<int>>& out) {
    if (mode + 1 == static_cast<int>(current.size())) {
        current[mode] = left;
        out.push_back(current);
        return;
    }
    for (int k = left; k >= 0; --k) {
        current[mode] = k;
        fill(mode + 1, left - k, current, out);
    }
}

}  // namespace

Complex permanent(const Eigen::MatrixXcd& m) {
    const int n = static_cast<int>(m.rows());
    if (n == 0) return 1.0;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Complex sum = 0.0;
    do {
        Complex prod = 1.0;
        for (int i = 0; i < n; ++i) prod *= m(i, perm[i]);
        sum += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum;
}

Complex transition_amplitude(const Eigen::MatrixXcd& u, const std::vector<int>& s, const std::vector<int>& t) {
    auto in = expand(s);
    auto out = expand(t);
    if (in.size() != out.size()) return 0.0;
    const int n = static_cast<int>(in.size());
    Eigen::MatrixXcd sub(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) sub(a, b) = u(out[a], in[b]);
    }
    double norm = 1.0;
    for (int c : s) norm *= factorial(c);
    for (int c : t) norm *= factorial(c);
    return permanent(sub) / std::sqrt(norm);
}

std::vector<std::vector<int>> occupations(int modes, int photons) {
    std::vector<std::vector<int>> out;
    if (modes <= 0) return out;
    std::vector<int> current(modes, 0);
    fill(0, photons, current, out);
    return out;
}

DenseState apply(const Eigen::MatrixXcd& u, const DenseState& state) {
    const int m = static_cast<int>(u.rows());
    DenseState out;
    for (const auto& [s, amp] : state) {
        int n = std::accumulate(s.begin(), s.end(), 0);
        for (const auto& t : occupations(m, n)) {
            Complex a = transition_amplitude(u, s, t);
            if (a != Complex(0.0)) out[t] += amp * a;
        }
    }
    return out;
}

Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXcd z(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) z(i, j) = Complex(g(rng), g(rng));
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        Complex d = r(j, j);
        q.col(j) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0);
    }
    return q;
}

}  // namespace fockdist::oracle
