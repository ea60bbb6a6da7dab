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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "noisyvqe/ansatz.hpp"
#include "noisyvqe/core.hpp"
#include "noisyvqe/noise.hpp"

namespace noisyvqe {

struct VQEProblem {
  HermitianOperator observable;
  DensityMatrix input_state;
  Circuit circuit;
  std::optional<NoiseModel> noise;
  // Subtracted from Tr[O rho]; the clean ground energy unless overridden.
  double cost_shift = 0.0;

  static VQEProblem make(HermitianOperator observable, DensityMatrix input_state,
                         Circuit circuit,
                         std::optional<NoiseModel> noise = std::nullopt,
                         std::optional<double> cost_shift = std::nullopt);

  bool noisy() const { return noise && !noise->empty(); }
  // Same problem with a different (or no) noise model.
  VQEProblem with_noise(std::optional<NoiseModel> model) const;
};

struct OptimizerConfig {
  double step_size = 0.05;
  std::size_t max_iters = 1000;
  // Early stop once ||grad||_inf < grad_tol.
  double grad_tol = 1e-9;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class StopReason { max_iters, grad_tol };
std::string to_string(StopReason r);

struct TrainingTrace {
  // Entry 0 is the starting point; entry k follows the k-th update.
  std::vector<ParameterVector> thetas;
  std::vector<double> costs;
  ParameterVector final_theta;
  double final_cost = 0.0;
  std::size_t iterations_run = 0;
  StopReason stop_reason = StopReason::max_iters;
};

// Unshifted Tr[O E_theta(rho0)] (noisy when the problem carries noise).
double expectation_value(const VQEProblem &problem, const ParameterVector &theta);
// expectation_value - cost_shift.
double cost(const VQEProblem &problem, const ParameterVector &theta);

// Noise-free gradient as d/dtheta_j = Re <[U^dagger O U, rho0], Omega_j>.
RealVector riemannian_gradient(const VQEProblem &problem, const ParameterVector &theta);

// Gradient through the interleaved noisy circuit. The observable is carried
// backwards through the adjoint channels and error unitaries (the perturbed
// observable seen from each layer), and each parameter contributes
// 2 Re Tr[O_j dU_j sigma_j U_j^dagger], scaled by (1 + eta) under control
// errors.
RealVector adjoint_gradient(const VQEProblem &problem, const ParameterVector &theta);

// Dispatches: riemannian_gradient for clean problems, adjoint_gradient for
// noisy ones, central differences when a channel depends on theta.
RealVector gradient(const VQEProblem &problem, const ParameterVector &theta);

RealVector fd_gradient(const VQEProblem &problem, const ParameterVector &theta,
                       double step = 1e-5);

// Plain fixed-step gradient descent theta <- theta - s grad. Throws
// DivergenceError on a non-finite cost or gradient.
TrainingTrace train(const VQEProblem &problem, const ParameterVector &theta0,
                    const OptimizerConfig &config);

// Largest step, halving from `initial`, whose first `probe_iters` updates give
// a non-increasing cost sequence.
double tune_step_size(const VQEProblem &problem, const ParameterVector &theta0,
                      double initial = 1.0, std::size_t probe_iters = 50,
                      std::size_t max_halvings = 30);

// One line per recorded entry: "<index>\t<cost>", with "\t<theta csv>"
// appended every `snapshot_every` entries and on the last one
// (snapshot_every = 0 disables snapshots).
void write_trace(std::ostream &os, const TrainingTrace &trace,
                 std::size_t snapshot_every = 0);

struct TraceLine {
  std::size_t index = 0;
  double cost = 0.0;
  std::optional<ParameterVector> theta;
};
std::vector<TraceLine> read_trace(std::istream &is);

}  // namespace noisyvqe
