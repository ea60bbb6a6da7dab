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

// Noise models attached to circuit layers.
//
// Per layer j the noisy circuit applies, in order: the gate U_j(theta_j), the
// coherent error unitaries registered on j (in registration order), then the
// Kraus channel on j, if any.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "noisyvqe/ansatz.hpp"
#include "noisyvqe/core.hpp"

namespace noisyvqe {

// e^{-i angle H_e} inserted after `layer`.
struct CoherentError {
  std::size_t layer = 0;
  HermitianOperator generator;
  double angle = 0.0;

  Matrix unitary() const;
};

// Multiplicative parameter errors: each gate e^{-i t H} becomes
// e^{-i (1 + eta) t H}.
class ControlErrorSpec {
 public:
  explicit ControlErrorSpec(RealVector relative_errors);

  const RealVector &relative_errors() const noexcept { return eta_; }

 private:
  RealVector eta_;
};

// (1 + eta_j) * theta_j componentwise.
ParameterVector control_error_cost_map(const ParameterVector &theta,
                                       const ControlErrorSpec &spec);

// Quantum channel in mixture form
//     rho -> (1 - p) rho + p sum_k w_k E_k rho E_k^dagger
// with sum_k w_k = 1 and ||E_k|| <= 1, or in standard Kraus form
//     rho -> sum_k K_k rho K_k^dagger,
// which is stored as p = 1 with unit weights. Every channel is checked for
// trace preservation (sum of weighted E^dagger E equals I within 1e-8) when
// it is built; theta-dependent channels are checked whenever they are
// evaluated.
class KrausChannel {
 public:
  enum class Form { mixture, standard };
  using OperatorFn = std::function<std::vector<Matrix>(const ParameterVector &)>;

  static KrausChannel mixture(double error_prob, std::vector<double> weights,
                              std::vector<Matrix> operators);
  static KrausChannel standard(std::vector<Matrix> kraus);
  // Mixture-form channel whose operators depend on the circuit parameters.
  static KrausChannel parameterized(double error_prob, std::vector<double> weights,
                                    OperatorFn operators, Eigen::Index dim);

  static KrausChannel bit_flip(QubitCount n, int qubit, double p);
  static KrausChannel phase_flip(QubitCount n, int qubit, double p);
  // rho -> (1 - p) rho + p Tr[rho] I / N, as a uniform Pauli twirl.
  static KrausChannel depolarizing(QubitCount n, double p);
  static KrausChannel amplitude_damping(QubitCount n, int qubit, double gamma);

  Form form() const noexcept { return form_; }
  const std::string &name() const noexcept { return name_; }
  double error_prob() const noexcept { return p_; }
  const std::vector<double> &weights() const noexcept { return weights_; }
  Eigen::Index dim() const noexcept { return dim_; }
  bool depends_on_theta() const noexcept { return static_cast<bool>(fn_); }

  // Fixed operators; throws for theta-dependent channels.
  const std::vector<Matrix> &operators() const;
  std::vector<Matrix> operators_at(const ParameterVector &theta) const;

  Matrix apply(const Matrix &rho, const ParameterVector &theta = {}) const;
  // Heisenberg picture: (1 - p) O + p sum_k w_k E_k^dagger O E_k.
  Matrix apply_adjoint(const Matrix &observable,
                       const ParameterVector &theta = {}) const;

 private:
  KrausChannel() = default;
  void validate_operators(const std::vector<Matrix> &ops) const;
  Matrix apply_with(const Matrix &rho, const std::vector<Matrix> &ops) const;

  Form form_ = Form::mixture;
  std::string name_ = "kraus";
  double p_ = 0.0;
  std::vector<double> weights_;
  std::vector<Matrix> ops_;
  OperatorFn fn_;
  Eigen::Index dim_ = 0;
  bool depolarizing_ = false;
};

DensityMatrix apply_channel(const KrausChannel &channel, const DensityMatrix &rho);

class NoiseModel {
 public:
  NoiseModel() = default;
  NoiseModel(std::vector<CoherentError> coherent,
             std::map<std::size_t, KrausChannel> channels,
             std::optional<ControlErrorSpec> control = std::nullopt,
             bool allow_mixed_control = false);

  const std::vector<CoherentError> &coherent() const noexcept { return coherent_; }
  const std::map<std::size_t, KrausChannel> &channels() const noexcept {
    return channels_;
  }
  const std::optional<ControlErrorSpec> &control() const noexcept { return control_; }
  bool empty() const noexcept {
    return coherent_.empty() && channels_.empty() && !control_;
  }
  bool has_theta_dependent_channel() const;

  const KrausChannel *channel_on(std::size_t layer) const;

  // Index, dimension and control-error compatibility checks.
  void validate_for(const Circuit &circuit) const;

 private:
  std::vector<CoherentError> coherent_;
  std::map<std::size_t, KrausChannel> channels_;
  std::optional<ControlErrorSpec> control_;
};

// Interleaved propagation of rho0 through the noisy circuit.
Matrix noisy_propagate(const Circuit &circuit, const ParameterVector &theta,
                       const NoiseModel &noise, const Matrix &rho0);
DensityMatrix noisy_apply(const Circuit &circuit, const ParameterVector &theta,
                          const NoiseModel &noise, const DensityMatrix &rho0);

// Per-layer bit-flip probability p = 1 - (1 / (1 + eps))^(1 / L) that makes
// L stacked channels reach perturbation level eps.
double bit_flip_prob_for_epsilon(double epsilon, std::size_t depth);

// Copy of `circuit` with every product layer split into one layer per
// generator; same unitary, same parameter order. Used for per-gate noise.
Circuit split_into_gates(const Circuit &circuit);

}  // namespace noisyvqe
