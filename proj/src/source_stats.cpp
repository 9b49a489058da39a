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

#include "fockdist/source_stats.hpp"

#include <cmath>
#include <string>

#include "fockdist/errors.hpp"

namespace fockdist {

namespace {

void require_mean(double value, const char* name) {
    if (!std::isfinite(value) || value < 0.0) {
        throw ValidationError(std::string(name) + " must be finite and non-negative, got " + std::to_string(value));
    }
}

void require_threshold(double threshold) {
    if (!std::isfinite(threshold) || threshold <= 0.0) {
        throw ValidationError("threshold must be positive, got " + std::to_string(threshold));
    }
}

void finish(StatsResult& r) {
    if (r.pmul > 0.0) {
        r.ratio = r.p11 / r.pmul;
    }
    r.condition_met = r.p11 > 0.0 && r.p11 >= r.threshold * r.pmul;
}

/// log P(N <= 1) = log1p(m) - m for a Poisson mean m. The series avoids the
/// cancellation for small m.
double log_at_most_one(double m) {
    if (m >= 0.01) {
        return std::log1p(m) - m;
    }
    double sum = 0.0;
    double term = m;  // (-1)^(k+1) m^k
    for (int k = 2; k < 40; ++k) {
        term *= -m;
        sum += term / k;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

/// P(N >= 2) for a Poisson mean m.
double at_least_two(double m) { return -std::expm1(log_at_most_one(m)); }

}  // namespace

StatsResult coherent_stats(double nu, double mu, double threshold) {
    require_mean(nu, "nu");
    require_mean(mu, "mu");
    require_threshold(threshold);
    StatsResult r;
    r.threshold = threshold;
    r.p11 = std::exp(-(nu + mu)) * nu * mu;
    // 1 - P(signal <= 1) P(reference <= 1), written to keep precision for
    // small means.
    r.pmul = -std::expm1(log_at_most_one(nu) + log_at_most_one(mu));
    r.bound = std::exp(-(nu + mu)) * (nu * nu + mu * mu) / 2.0;
    finish(r);
    return r;
}

StatsResult pdc_stats(double p, double threshold) {
    if (!std::isfinite(p) || p < 0.0 || p > 0.2) {
        throw ValidationError("pair probability must lie in [0, 0.2], got " + std::to_string(p));
    }
    require_threshold(threshold);
    StatsResult r;
    r.threshold = threshold;
    if (p > 0.0) {
        // N pairs: reference and signal counts are independent Binomial(N, 1/2).
        double pois = std::exp(-p);
        for (int n = 1; n < 60; ++n) {
            pois *= p / n;
            double half_n = std::ldexp(1.0, -n);
            double one = n * half_n;
            double le_one = (1.0 + n) * half_n;
            r.p11 += pois * one * one;
            r.pmul += pois * (1.0 - le_one * le_one);
            if (pois < 1e-300) break;
        }
        r.pmul_over_p11_sq = r.pmul / (r.p11 * r.p11);
    }
    finish(r);
    return r;
}

StatsResult triggered_plus_coherent_stats(double p1, double pm, double mu, double threshold) {
    if (!std::isfinite(p1) || !std::isfinite(pm) || p1 < 0.0 || pm < 0.0 || p1 + pm > 1.0 + 1e-12) {
        throw ValidationError("trigger probabilities need p1, pmul >= 0 and p1 + pmul <= 1, got p1=" +
                                 std::to_string(p1) + " pmul=" + std::to_string(pm));
    }
    require_mean(mu, "mu");
    require_threshold(threshold);

    auto eval = [&](double m) {
        StatsResult r;
        r.threshold = threshold;
        r.p11 = p1 * m * std::exp(-m);
        r.pmul = pm + (1.0 - pm) * at_least_two(m);
        finish(r);
        return r;
    };
    StatsResult r = eval(mu);

    // Scan a log grid for the mu interval where the condition holds and
    // refine both edges by bisection.
    auto margin = [&](double m) {
        StatsResult s = eval(m);
        return s.p11 - threshold * s.pmul;
    };
    constexpr int kGrid = 2000;
    const double lo = 1e-9, hi = 20.0;
    auto grid = [&](int k) { return lo * std::pow(hi / lo, static_cast<double>(k) / (kGrid - 1)); };
    auto refine = [&](double a, double b) {
        for (int it = 0; it < 200; ++it) {
            double m = 0.5 * (a + b);
            ((margin(a) > 0) == (margin(m) > 0) ? a : b) = m;
        }
        return 0.5 * (a + b);
    };
    for (int k = 0; k < kGrid; ++k) {
        double m = grid(k);
        if (margin(m) <= 0.0) continue;
        r.mu_window_low = k == 0 ? 0.0 : refine(grid(k - 1), m);
        int j = k;
        while (j + 1 < kGrid && margin(grid(j + 1)) > 0.0) ++j;
        r.mu_window_high = j + 1 == kGrid ? grid(j) : refine(grid(j), grid(j + 1));
        break;
    }
    return r;
}

}  // namespace fockdist
