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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fockdist {

struct VerifyOptions {
    std::uint64_t seed = 20260101;
    std::size_t haar_trials = 100000;
    std::size_t bb84_rounds = 10000;
    /// Monte Carlo worker threads; 0 = hardware concurrency.
    unsigned threads = 0;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    /// Wall-clock budget in seconds; 0 = none.
    double time_limit = 0.0;
};

inline constexpr int kCriterionCount = 9;

/// Runs one acceptance check (1..9). Criterion 9 also enforces the budget
/// for the whole suite using `elapsed_before`, the time already spent on the
/// other checks.
CriterionResult run_criterion(int id, const VerifyOptions& options, double elapsed_before = 0.0);

/// Runs all checks in order; `progress` is called after each one.
std::vector<CriterionResult> run_verify(const VerifyOptions& options,
                                        const std::function<void(const CriterionResult&)>& progress = {});

}  // namespace fockdist
