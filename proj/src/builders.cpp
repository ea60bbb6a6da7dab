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

#include <cmath>
#include <set>

#include "noisyvqe/ansatz.hpp"
#include "noisyvqe/errors.hpp"

namespace noisyvqe {

namespace {

void check_depth(std::size_t depth) {
  if (depth < 1 || depth > kMaxDepth) {
    throw ValidationError("circuit depth must be in [1, " +
                          std::to_string(kMaxDepth) + "], got " +
                          std::to_string(depth));
  }
}

Circuit repeat_sun(QubitCount n, std::size_t depth,
                   const std::vector<HermitianOperator> &basis) {
  check_depth(depth);
  std::vector<Layer> layers;
  layers.reserve(depth);
  for (std::size_t j = 0; j < depth; ++j) layers.emplace_back(SunLayer(basis));
  return Circuit(n, std::move(layers));
}

}  // namespace

void validate_graph(const Graph &g) {
  if (g.vertices < 1 || g.vertices > kMaxQubits) {
    throw ValidationError("graph must have between 1 and " +
                          std::to_string(kMaxQubits) + " vertices");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto &[a, b] : g.edges) {
    if (a < 0 || b < 0 || a >= g.vertices || b >= g.vertices) {
      throw ValidationError("edge (" + std::to_string(a) + "," +
                            std::to_string(b) + ") references a missing vertex");
    }
    if (a == b) {
      throw ValidationError("self-loop on vertex " + std::to_string(a));
    }
    if (!seen.insert(std::minmax(a, b)).second) {
      throw ValidationError("duplicate edge (" + std::to_string(a) + "," +
                            std::to_string(b) + ")");
    }
  }
}

std::vector<HermitianOperator> gell_mann_basis(Eigen::Index dim) {
  if (dim < 2) throw ValidationError("Gell-Mann basis needs dimension >= 2");
  std::vector<HermitianOperator> out;
  out.reserve(static_cast<std::size_t>(dim * dim - 1));
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = j + 1; k < dim; ++k) {
      Matrix s = Matrix::Zero(dim, dim);
      s(j, k) = 1.0;
      s(k, j) = 1.0;
      out.emplace_back(std::move(s));
      Matrix a = Matrix::Zero(dim, dim);
      a(j, k) = Complex(0.0, -1.0);
      a(k, j) = Complex(0.0, 1.0);
      out.emplace_back(std::move(a));
    }
  }
  for (Eigen::Index l = 1; l < dim; ++l) {
    const double norm = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    Matrix diag = Matrix::Zero(dim, dim);
    for (Eigen::Index m = 0; m < l; ++m) diag(m, m) = norm;
    diag(l, l) = -static_cast<double>(l) * norm;
    out.emplace_back(std::move(diag));
  }
  return out;
}

std::vector<HermitianOperator> pauli_basis(QubitCount n) {
  static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  std::vector<HermitianOperator> out;
  const std::size_t total = std::size_t{1} << (2 * n.qubits());
  std::string letters(static_cast<std::size_t>(n.qubits()), 'I');
  for (std::size_t code = 1; code < total; ++code) {
    std::size_t c = code;
    for (int q = n.qubits() - 1; q >= 0; --q) {
      letters[static_cast<std::size_t>(q)] = kLetters[c & 3];
      c >>= 2;
    }
    out.push_back(pauli_operator({letters, 0.5}));
  }
  return out;
}

Circuit build_hardware_efficient(int n, std::size_t depth) {
  const QubitCount qc(n);
  check_depth(depth);
  std::vector<HermitianOperator> gens;
  for (int q = 0; q < n; ++q) gens.push_back(pauli_operator({pauli_on(qc, q, 'Y'), 0.5}));
  for (int q = 0; q < n; ++q) gens.push_back(pauli_operator({pauli_on(qc, q, 'Z'), 0.5}));
  for (int q = 0; q + 1 < n; ++q) {
    std::string zz = pauli_on(qc, q, 'Z');
    zz[static_cast<std::size_t>(q + 1)] = 'Z';
    gens.push_back(pauli_operator({zz, 0.5}));
  }
  std::vector<Layer> layers;
  for (std::size_t j = 0; j < depth; ++j) layers.emplace_back(ProductLayer(gens));
  return Circuit(qc, std::move(layers));
}

HermitianOperator maxcut_hamiltonian(const Graph &g) {
  validate_graph(g);
  const QubitCount qc(g.vertices);
  Matrix h = Matrix::Zero(qc.dim(), qc.dim());
  for (const auto &[a, b] : g.edges) {
    std::string zz = pauli_on(qc, a, 'Z');
    zz[static_cast<std::size_t>(b)] = 'Z';
    h += pauli_matrix(zz);
  }
  return HermitianOperator(std::move(h));
}

HermitianOperator transverse_mixer(QubitCount n) {
  Matrix h = Matrix::Zero(n.dim(), n.dim());
  for (int q = 0; q < n.qubits(); ++q) h += pauli_matrix(pauli_on(n, q, 'X'));
  return HermitianOperator(std::move(h));
}

Circuit build_qaoa(const Graph &g, std::size_t depth) {
  check_depth(depth);
  const QubitCount qc(g.vertices);
  const HermitianOperator cost = maxcut_hamiltonian(g);
  const HermitianOperator mixer = transverse_mixer(qc);
  std::vector<Layer> layers;
  for (std::size_t j = 0; j < depth; ++j) {
    layers.emplace_back(ProductLayer({cost, mixer}));
  }
  return Circuit(qc, std::move(layers));
}

Circuit build_sun(int n, std::size_t depth) {
  const QubitCount qc(n);
  return repeat_sun(qc, depth, pauli_basis(qc));
}

Circuit build_locally_surjective(int n, std::size_t depth) {
  const QubitCount qc(n);
  return repeat_sun(qc, depth, gell_mann_basis(qc.dim()));
}

}  // namespace noisyvqe
