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

// Parameterized circuit families.
//
// A circuit is an ordered list of layers; layer 0 acts first, so
// U(theta) = U_{L-1} ... U_1 U_0. Within a ProductLayer the same holds for
// its generators: U_j = e^{-i t_{p-1} H_{p-1}} ... e^{-i t_0 H_0}. A SunLayer
// is the single exponential e^{-i sum_k t_k H_k}. Parameters are flattened
// layer by layer in that order.

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "noisyvqe/core.hpp"

namespace noisyvqe {

using ParameterVector = RealVector;

namespace detail {
// A generator together with its cached eigendecomposition.
struct SpectralGenerator {
  explicit SpectralGenerator(HermitianOperator h);

  HermitianOperator op;
  Matrix eigvecs;
  RealVector eigvals;

  // e^{-i t H}
  Matrix exp(double t) const;
};
}  // namespace detail

class ProductLayer {
 public:
  explicit ProductLayer(std::vector<HermitianOperator> generators);

  std::size_t param_count() const noexcept { return gens_.size(); }
  Eigen::Index dim() const;
  const HermitianOperator &generator(std::size_t k) const { return gens_[k].op; }
  std::vector<HermitianOperator> generators() const;
  Matrix exp_generator(std::size_t k, double t) const { return gens_[k].exp(t); }

 private:
  std::vector<detail::SpectralGenerator> gens_;
};

class SunLayer {
 public:
  // Generators must be traceless within kStructuralTol.
  explicit SunLayer(std::vector<HermitianOperator> generators);

  std::size_t param_count() const noexcept { return gens_.size(); }
  Eigen::Index dim() const;
  const HermitianOperator &generator(std::size_t k) const { return gens_[k]; }
  const std::vector<HermitianOperator> &generators() const { return gens_; }

 private:
  std::vector<HermitianOperator> gens_;
};

using Layer = std::variant<ProductLayer, SunLayer>;

class Circuit {
 public:
  Circuit(QubitCount n, std::vector<Layer> layers);

  QubitCount qubits() const noexcept { return n_; }
  Eigen::Index dim() const noexcept { return n_.dim(); }
  std::size_t depth() const noexcept { return layers_.size(); }
  std::size_t total_params() const noexcept { return total_; }
  const std::vector<Layer> &layers() const noexcept { return layers_; }
  const Layer &layer(std::size_t j) const { return layers_.at(j); }
  std::size_t param_count(std::size_t j) const;
  // Index of the first parameter of layer j in the flattened vector.
  std::size_t param_offset(std::size_t j) const { return offsets_.at(j); }
  // Layer that owns flattened parameter `index`.
  std::size_t layer_of_param(std::size_t index) const;

 private:
  QubitCount n_;
  std::vector<Layer> layers_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
};

// Throws ValidationError on length mismatch or non-finite entries.
void check_parameters(const Circuit &circuit, const ParameterVector &theta);

// Layer unitary U_j(theta_j) given the layer's own parameter slice.
Matrix layer_unitary(const Layer &layer, const RealVector &layer_theta);

struct LayerJacobian {
  Matrix unitary;
  // d U_j / d theta_{j,k}, one per layer parameter.
  std::vector<Matrix> partials;
};

// Product layers insert (-i H_k) at the gate position; SU(N) layers use the
// Daleckii-Krein divided-difference formula on the eigenbasis of A_j(theta).
LayerJacobian layer_jacobian(const Layer &layer, const RealVector &layer_theta);

UnitaryOperator unitary(const Circuit &circuit, const ParameterVector &theta);
Matrix unitary_matrix(const Circuit &circuit, const ParameterVector &theta);

// rho(theta) = U(theta) rho0 U(theta)^dagger.
DensityMatrix apply(const Circuit &circuit, const ParameterVector &theta,
                    const DensityMatrix &rho0);

// Omega_j = U^dagger dU/dtheta_j (anti-Hermitian).
Matrix omega(const Circuit &circuit, const ParameterVector &theta,
             std::size_t index);
// All Omega_j in parameter order, sharing one forward pass.
std::vector<Matrix> omegas(const Circuit &circuit, const ParameterVector &theta);

// Singular values below this fraction of the largest count as zero.
inline constexpr double kRankRelTol = 1e-8;

// Dimension of the real span of the traceless parts of {Omega_j}. The
// circuit is locally surjective at theta iff this equals N^2 - 1.
std::size_t local_surjectivity_rank(const Circuit &circuit,
                                    const ParameterVector &theta);
bool is_locally_surjective(const Circuit &circuit, const ParameterVector &theta);

struct Graph {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;
};

// Throws on self-loops, duplicate edges or out-of-range vertices.
void validate_graph(const Graph &g);

// Traceless Hermitian basis of su(N): symmetric, antisymmetric and diagonal
// generalized Gell-Mann matrices, normalized to Tr[g_a g_b] = 2 delta_ab.
std::vector<HermitianOperator> gell_mann_basis(Eigen::Index dim);
// All non-identity Pauli strings, each scaled by 1/2.
std::vector<HermitianOperator> pauli_basis(QubitCount n);

inline constexpr std::size_t kMaxDepth = 1000;

// Per layer: RY (Y_q/2) on every qubit, RZ (Z_q/2) on every qubit, then a
// ZZ coupling (Z_q Z_{q+1}/2) on each neighbouring pair, all applied in that
// order. 3n - 1 parameters per layer.
Circuit build_hardware_efficient(int n, std::size_t depth);
// Cost Hamiltonian sum_{(a,b)} Z_a Z_b.
HermitianOperator maxcut_hamiltonian(const Graph &g);
// Mixer sum_q X_q.
HermitianOperator transverse_mixer(QubitCount n);
// One product layer per round: e^{-i beta B} e^{-i gamma C}; 2 * depth params.
Circuit build_qaoa(const Graph &g, std::size_t depth);
// SU(N) layers over the Pauli basis.
Circuit build_sun(int n, std::size_t depth);
// SU(N) layers over the generalized Gell-Mann basis (N^2 - 1 per layer).
Circuit build_locally_surjective(int n, std::size_t depth);

}  // namespace noisyvqe
