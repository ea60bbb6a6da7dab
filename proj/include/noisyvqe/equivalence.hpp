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

// Rewrites of a noisy circuit as a clean circuit followed by noise acting on
// its output, and of output noise as a perturbation of the observable.
//
// Layer indices are 0-based. An error registered on layer j acts after U_j,
// so moving it to the output conjugates it by the layers that follow:
//     V_j = U_{L-1} ... U_{j+1},   H_hat = V_j H V_j^dagger.

#include <cstddef>
#include <functional>
#include <vector>

#include "noisyvqe/ansatz.hpp"
#include "noisyvqe/noise.hpp"

namespace noisyvqe {

// U_{L-1} ... U_j for 0 <= j < L; suffix_unitary(c, t, 0) is U(theta).
UnitaryOperator suffix_unitary(const Circuit &circuit, const ParameterVector &theta,
                               std::size_t j);
// Layers strictly after j: U_{L-1} ... U_{j+1} (identity for the last layer).
Matrix suffix_after(const Circuit &circuit, const ParameterVector &theta,
                    std::size_t j);

// Effective output-side generators V_j H_{e,j} V_j^dagger, in input order.
std::vector<HermitianOperator> push_coherent_to_last(
    const Circuit &circuit, const ParameterVector &theta,
    const std::vector<CoherentError> &errors);

// prod_j e^{-i eta_j H_hat_j}, ordered so that applying it after the clean
// circuit reproduces the interleaved noisy circuit exactly.
Matrix pushed_error_unitary(const Circuit &circuit, const ParameterVector &theta,
                            const std::vector<CoherentError> &errors);

// Cost model scale * Tr[(O + level * O_tilde(theta)) rho(theta)].
struct PerturbedObservableForm {
  HermitianOperator base;
  std::function<HermitianOperator(const ParameterVector &)> perturbation;
  double level = 0.0;
  double scale = 1.0;

  // Evaluated on the clean state rho(theta) = U(theta) rho0 U(theta)^dagger.
  double cost(const Circuit &circuit, const ParameterVector &theta,
              const DensityMatrix &rho0) const;
  // Tr[O_tilde(theta) rho(theta)].
  double perturbation_term(const Circuit &circuit, const ParameterVector &theta,
                           const DensityMatrix &rho0) const;
};

// First-order coherent rewrite: level = ||eta||_inf and
//     O_tilde(theta) = i sum_j (eta_j / ||eta||_inf) [H_hat_j(theta), O],
// which is Hermitian and matches U_e^dagger O U_e = O + i eta [H_e, O] + O(eta^2).
PerturbedObservableForm first_order_observable(const HermitianOperator &observable,
                                               const Circuit &circuit,
                                               std::vector<CoherentError> errors);

// Exact rewrite of a mixture channel acting on the output:
//     level = p / (1 - p),  O_tilde = sum_k w_k E_k^dagger O E_k,  scale = 1 - p.
PerturbedObservableForm incoherent_to_observable(const HermitianOperator &observable,
                                                 const KrausChannel &channel);

inline constexpr std::size_t kMaxPushedOperators = 4096;

// All per-layer channels of a noise model moved to the circuit output and
// composed into one mixture (1 - p) rho + p sum_k w_k E_k rho E_k^dagger with
// p = 1 - prod_j (1 - p_j).
struct PushedChannel {
  double error_prob = 0.0;
  std::vector<double> weights;
  std::vector<Matrix> operators;
  bool standard_form = false;

  Matrix apply(const Matrix &rho) const;
  KrausChannel as_channel() const;
};

// Operators equal up to a global phase are merged (their action on rho is
// identical); more than kMaxPushedOperators distinct terms is an error.
PushedChannel push_channel_to_last(const Circuit &circuit,
                                   const ParameterVector &theta,
                                   const NoiseModel &noise);

// eps(L) = (1 - p)^{-L} - 1.
double perturbation_level_for_depth(double p, std::size_t depth);

}  // namespace noisyvqe
