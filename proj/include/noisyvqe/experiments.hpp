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

// Robustness experiments: train a clean problem and its noisy counterparts
// from one shared initialization and record how far the noisy optimum moves
// as the perturbation level grows.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "noisyvqe/engine.hpp"

namespace noisyvqe {

inline constexpr int kMaxProblemQubits = 5;

// Random Hermitian observable, |0...0> input, Gell-Mann SU(N) ansatz.
VQEProblem make_random_vqe(int n, std::size_t depth, std::uint64_t seed);
// Observable sum_{(a,b)} Z_a Z_b, |+...+> input, QAOA ansatz of the graph.
VQEProblem make_qaoa_maxcut(const Graph &graph, std::size_t depth);
// O = Z, generator Y/2, |0> input: cost(theta) = cos(theta) + 1.
VQEProblem make_single_qubit_rotation();

// Uniform in [-pi, pi) from a seeded mt19937_64.
ParameterVector initial_parameters(std::size_t count, std::uint64_t seed);

// Seeded random instances for property checks: product layers with two
// random generators each, or SU(N) layers with three random traceless ones.
Circuit random_circuit(int n, std::size_t depth, std::uint64_t seed, bool sun_layers);
// Random full-rank mixed state (Wishart-type, normalized).
DensityMatrix random_density_matrix(int n, std::uint64_t seed);

enum class ProblemKind { random_vqe, qaoa_maxcut, single_qubit_rotation };
enum class NoiseKind { coherent_z, bit_flip, control };
enum class Placement { per_layer, per_gate };

std::string to_string(ProblemKind k);
std::string to_string(NoiseKind k);
std::string to_string(Placement p);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::random_vqe;
  int n = 2;
  std::size_t depth = 2;
  std::uint64_t seed = 0;
  Graph graph;

  VQEProblem build() const;
  std::string id() const;
};

struct SweepConfig {
  ProblemSpec problem;
  NoiseKind noise_kind = NoiseKind::coherent_z;
  Placement placement = Placement::per_layer;
  int noise_qubit = 0;
  std::vector<double> epsilons;
  OptimizerConfig optimizer;
  // Pick the step by halving search instead of optimizer.step_size.
  bool auto_step = false;
  std::uint64_t shared_init_seed = 0;
  std::string output_path;
  // 0 selects std::thread::hardware_concurrency().
  unsigned workers = 1;

  void validate() const;
};

// n log-spaced levels from 10^lo to 10^hi inclusive.
std::vector<double> log_spaced(double lo_exp, double hi_exp, std::size_t count);

// Noise at level eps on every layer of `circuit`:
//   coherent_z  e^{-i eps Z_q / 2} after each layer,
//   bit_flip    X_q with p = 1 - (1 + eps)^{-1/L} after each layer,
//   control     eta = eps on every parameter.
NoiseModel make_sweep_noise(const Circuit &circuit, NoiseKind kind, double epsilon,
                            int qubit);

struct SweepRecord {
  std::string problem_id;
  std::string noise_kind;
  double epsilon = 0.0;
  double distance_l2 = 0.0;
  double distance_linf = 0.0;
  double final_cost_noisy = 0.0;
  double final_cost_clean = 0.0;
  std::size_t iterations = 0;
  // "ok", "zero_distance" (below kDegenerateDistance) or "diverged".
  std::string flag = "ok";
};

inline constexpr double kDegenerateDistance = 1e-12;

std::vector<SweepRecord> run_sweep(const SweepConfig &config);

inline constexpr const char *kSweepCsvHeader =
    "problem_id,noise_kind,epsilon,distance_l2,distance_linf,final_cost_noisy,"
    "final_cost_clean,iterations,flag";

void write_sweep_csv(std::ostream &os, const std::vector<SweepRecord> &records);
std::vector<SweepRecord> read_sweep_csv(std::istream &is);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t n_points = 0;
  // Rows left out because their distance was degenerate or flagged.
  std::size_t excluded = 0;
};

// Least squares on (log eps, log distance). Needs at least 3 usable rows.
SlopeFit fit_loglog_slope(const std::vector<SweepRecord> &records);

}  // namespace noisyvqe
