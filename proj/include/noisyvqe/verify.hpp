// Copyright 2026 The noisyvqe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// Self-checks of the simulator's exact identities. Every check builds its own
// seeded instances and reports the worst value it measured next to the
// threshold it was held to.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace noisyvqe {

struct SuiteResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool all_passed() const;
};

// Pushed coherent errors reproduce the interleaved noisy state (max entry).
SuiteResult check_coherent_push(std::uint64_t seed, int instances = 20);
// Pushed channels reproduce the interleaved noisy state (max entry).
SuiteResult check_channel_push(std::uint64_t seed, int instances = 20);
// Noisy cost equals (1 - p)(nominal + eps * perturbation term).
SuiteResult check_incoherent_cost(std::uint64_t seed, int thetas_per_instance = 20);
// First-order residual shrinks by 4 when all angles are halved.
SuiteResult check_first_order_ratio(std::uint64_t seed);
// Analytic gradients against central differences, clean and noisy.
SuiteResult check_gradients(std::uint64_t seed, int problems = 20);
// Depolarizing noise scales the gradient by (1 - p).
SuiteResult check_depolarizing_gradient(std::uint64_t seed, int thetas = 50);
// Training under depolarizing noise with step s / (1 - p) retraces the clean run.
SuiteResult check_depolarizing_traces(std::uint64_t seed);
// Control errors on cos(theta) + 1 move the optimum to pi / (1 + eta).
SuiteResult check_control_errors();
// Fixed small steps never increase the cost.
SuiteResult check_descent_monotone(std::uint64_t seed);
SuiteResult check_surjectivity_rank(std::uint64_t seed);
// perturbation_level_for_depth and bit_flip_prob_for_epsilon invert each other.
SuiteResult check_depth_scaling();
// Pushing an error through the circuit keeps its spectrum.
SuiteResult check_spectrum_preserved(std::uint64_t seed);

struct VerifyOptions {
  std::uint64_t seed = 2024;
  // Adds a suite that builds a channel with weights summing to 0.9 and
  // expects it to be accepted; used to check that failures are reported.
  bool inject_corrupt_channel = false;
};

VerifyReport verify_all(const VerifyOptions &options = {});
void print_report(std::ostream &os, const VerifyReport &report);

}  // namespace noisyvqe
