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

#include "noisyvqe/core.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "noisyvqe/errors.hpp"

namespace noisyvqe {

namespace {

void require_square(const Matrix &m, const char *what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows()
       << "x" << m.cols();
    throw ValidationError(os.str());
  }
}

void require_same_dim(const Matrix &a, const Matrix &b, const char *what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << what << ": dimension mismatch " << a.rows() << "x" << a.cols()
       << " vs " << b.rows() << "x" << b.cols();
    throw ValidationError(os.str());
  }
}

void require_hermitian(const Matrix &m, const char *what) {
  require_square(m, what);
  double worst = 0.0;
  Eigen::Index wi = 0, wj = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      double d = std::abs(m(i, j) - std::conj(m(j, i)));
      if (d > worst) {
        worst = d;
        wi = i;
        wj = j;
      }
    }
  }
  if (worst > kStructuralTol) {
    std::ostringstream os;
    os << what << ": matrix is not Hermitian, |A(" << wi << "," << wj
       << ") - conj(A(" << wj << "," << wi << "))| = " << worst;
    throw ValidationError(os.str());
  }
}

Matrix pauli_letter(char c) {
  Matrix p(2, 2);
  switch (c) {
    case 'I':
      p << 1, 0, 0, 1;
      break;
    case 'X':
      p << 0, 1, 1, 0;
      break;
    case 'Y':
      p << 0, Complex(0, -1), Complex(0, 1), 0;
      break;
    case 'Z':
      p << 1, 0, 0, -1;
      break;
    default:
      throw ValidationError(std::string("unknown Pauli letter '") + c + "'");
  }
  return p;
}

}  // namespace

QubitCount::QubitCount(int n) : n_(n) {
  if (n < 1 || n > kMaxQubits) {
    throw ValidationError("qubit count must be in [1, " +
                          std::to_string(kMaxQubits) + "], got " +
                          std::to_string(n));
  }
}

QubitCount qubits_for_dim(Eigen::Index dim) {
  for (int n = 1; n <= kMaxQubits; ++n) {
    if ((Eigen::Index{1} << n) == dim) return QubitCount(n);
  }
  throw ValidationError("dimension " + std::to_string(dim) +
                        " is not 2^n for a supported qubit count");
}

HermitianOperator::HermitianOperator(Matrix m) : m_(std::move(m)) {
  require_hermitian(m_, "HermitianOperator");
}

UnitaryOperator::UnitaryOperator(Matrix m) : m_(std::move(m)) {
  require_square(m_, "UnitaryOperator");
  const Matrix defect =
      m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols());
  const double err = max_abs(defect);
  if (err > kStructuralTol) {
    std::ostringstream os;
    os << "UnitaryOperator: max |U^dagger U - I| = " << err;
    throw ValidationError(os.str());
  }
}

UnitaryOperator UnitaryOperator::identity(Eigen::Index dim) {
  return UnitaryOperator(Matrix::Identity(dim, dim), Unchecked{});
}

UnitaryOperator UnitaryOperator::adjoint() const {
  return UnitaryOperator(m_.adjoint(), Unchecked{});
}

DensityMatrix::DensityMatrix(Matrix m) : m_(std::move(m)) {
  require_hermitian(m_, "DensityMatrix");
  const double tr_err = std::abs(m_.trace() - Complex(1.0, 0.0));
  if (tr_err > kStructuralTol) {
    std::ostringstream os;
    os << "DensityMatrix: |Tr[rho] - 1| = " << tr_err;
    throw ValidationError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  if (lo < -kPositivityTol) {
    std::ostringstream os;
    os << "DensityMatrix: smallest eigenvalue " << lo << " is negative";
    throw ValidationError(os.str());
  }
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd &psi) {
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::basis_state(QubitCount n, Eigen::Index index) {
  if (index < 0 || index >= n.dim()) {
    throw ValidationError("basis index out of range");
  }
  Matrix m = Matrix::Zero(n.dim(), n.dim());
  m(index, index) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(QubitCount n) {
  const auto d = n.dim();
  return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
}

Matrix pauli_matrix(std::string_view letters) {
  if (letters.empty()) throw ValidationError("empty Pauli string");
  Matrix out = pauli_letter(letters.front());
  for (std::size_t q = 1; q < letters.size(); ++q) {
    out = kron(out, pauli_letter(letters[q]));
  }
  return out;
}

HermitianOperator pauli_operator(const PauliString &spec) {
  return HermitianOperator(spec.coefficient * pauli_matrix(spec.letters));
}

std::string pauli_on(QubitCount n, int qubit, char letter) {
  if (qubit < 0 || qubit >= n.qubits()) {
    throw ValidationError("qubit index " + std::to_string(qubit) +
                          " out of range");
  }
  std::string s(static_cast<std::size_t>(n.qubits()), 'I');
  s[static_cast<std::size_t>(qubit)] = letter;
  return s;
}

std::vector<PauliString> pauli_decompose(const HermitianOperator &h,
                                         double cutoff) {
  const QubitCount n = qubits_for_dim(h.dim());
  static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  std::vector<PauliString> out;
  const std::size_t total = std::size_t{1} << (2 * n.qubits());
  std::string letters(static_cast<std::size_t>(n.qubits()), 'I');
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (int q = n.qubits() - 1; q >= 0; --q) {
      letters[static_cast<std::size_t>(q)] = kLetters[c & 3];
      c >>= 2;
    }
    // Pauli strings are orthogonal with Tr[P P] = N.
    const double coeff = hs_inner(pauli_matrix(letters), h.matrix()).real() /
                         static_cast<double>(h.dim());
    if (std::abs(coeff) > cutoff) out.push_back({letters, coeff});
  }
  return out;
}

Matrix kron(const Matrix &a, const Matrix &b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix conjugate(const Matrix &u, const Matrix &a) {
  return u * a * u.adjoint();
}

double max_abs(const Matrix &m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double spectral_norm(const Matrix &m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

UnitaryOperator hermitian_exp(const HermitianOperator &h, double scale) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  const Matrix &v = es.eigenvectors();
  Eigen::VectorXcd phases(h.dim());
  for (Eigen::Index k = 0; k < h.dim(); ++k) {
    phases(k) = std::exp(Complex(0.0, -scale * es.eigenvalues()(k)));
  }
  return UnitaryOperator(v * phases.asDiagonal() * v.adjoint());
}

double expectation(const HermitianOperator &observable,
                   const DensityMatrix &rho) {
  return expectation(observable.matrix(), rho.matrix());
}

double expectation(const Matrix &observable, const Matrix &rho) {
  require_same_dim(observable, rho, "expectation");
  // Tr[O rho] = sum_ij O_ij rho_ji
  return (observable.transpose().cwiseProduct(rho)).sum().real();
}

Matrix commutator(const Matrix &a, const Matrix &b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

Complex hs_inner(const Matrix &a, const Matrix &b) {
  require_same_dim(a, b, "hs_inner");
  return a.conjugate().cwiseProduct(b).sum();
}

HermitianOperator random_hermitian(QubitCount n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto d = n.dim();
  Matrix a(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      a(i, j) = Complex(re, im);
    }
  }
  Matrix h = 0.5 * (a + a.adjoint());
  // Exact symmetry; the diagonal is real by construction.
  for (Eigen::Index i = 0; i < d; ++i) h(i, i) = h(i, i).real();
  return HermitianOperator(std::move(h));
}

RealVector eigenvalues(const HermitianOperator &h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double ground_energy(const HermitianOperator &observable) {
  return eigenvalues(observable).minCoeff();
}

}  // namespace noisyvqe
