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

// Dense complex linear algebra for small n-qubit systems.
//
// Operators are plain Eigen matrices wrapped in role types that check their
// invariant once, at construction. Qubit 0 is the leftmost tensor factor, so
// the basis state |b_0 b_1 ... b_{n-1}> has index sum_q b_q 2^{n-1-q}.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace noisyvqe {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Absolute max-entry tolerance used by every structural check.
inline constexpr double kStructuralTol = 1e-10;
// Lower bound accepted for the smallest eigenvalue of a density matrix.
inline constexpr double kPositivityTol = 1e-8;
inline constexpr int kMaxQubits = 10;

class QubitCount {
 public:
  explicit QubitCount(int n);

  int qubits() const noexcept { return n_; }
  Eigen::Index dim() const noexcept { return Eigen::Index{1} << n_; }

  friend bool operator==(QubitCount, QubitCount) = default;

 private:
  int n_;
};

// Number of qubits for a 2^n dimensional matrix; throws otherwise.
QubitCount qubits_for_dim(Eigen::Index dim);

class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix m);

  const Matrix &matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

 private:
  Matrix m_;
};

class UnitaryOperator {
 public:
  explicit UnitaryOperator(Matrix m);
  static UnitaryOperator identity(Eigen::Index dim);

  const Matrix &matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }
  UnitaryOperator adjoint() const;

 private:
  struct Unchecked {};
  UnitaryOperator(Matrix m, Unchecked) : m_(std::move(m)) {}
  Matrix m_;
};

class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m);

  // |psi><psi| for a normalized state vector.
  static DensityMatrix pure(const Eigen::VectorXcd &psi);
  static DensityMatrix basis_state(QubitCount n, Eigen::Index index);
  static DensityMatrix maximally_mixed(QubitCount n);

  const Matrix &matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

 private:
  Matrix m_;
};

// A scaled tensor product of Pauli letters, e.g. {"XZ", 0.5} = 0.5 X (x) Z.
struct PauliString {
  std::string letters;
  double coefficient = 1.0;
};

Matrix pauli_matrix(std::string_view letters);
HermitianOperator pauli_operator(const PauliString &spec);
// Letters for a single-qubit Pauli `letter` on `qubit` of an n-qubit register.
std::string pauli_on(QubitCount n, int qubit, char letter);
// Real coefficients c_P with H = sum_P c_P P (terms with |c_P| <= cutoff are
// dropped). Exact inverse of building H from the returned strings.
std::vector<PauliString> pauli_decompose(const HermitianOperator &h,
                                         double cutoff = 1e-14);

Matrix kron(const Matrix &a, const Matrix &b);
// U A U^dagger.
Matrix conjugate(const Matrix &u, const Matrix &a);
double max_abs(const Matrix &m);
double spectral_norm(const Matrix &m);

// e^{-i scale H}, computed from the eigendecomposition of H.
UnitaryOperator hermitian_exp(const HermitianOperator &h, double scale);

// Tr[O rho] with the (rounding-level) imaginary part discarded.
double expectation(const HermitianOperator &observable, const DensityMatrix &rho);
double expectation(const Matrix &observable, const Matrix &rho);

Matrix commutator(const Matrix &a, const Matrix &b);

// Hilbert-Schmidt inner product Tr[A^dagger B].
Complex hs_inner(const Matrix &a, const Matrix &b);

// (A + A^dagger) / 2 for A with i.i.d. standard normal real and imaginary
// parts drawn from a seeded mt19937_64.
HermitianOperator random_hermitian(QubitCount n, std::uint64_t seed);

double ground_energy(const HermitianOperator &observable);
RealVector eigenvalues(const HermitianOperator &h);

}  // namespace noisyvqe
