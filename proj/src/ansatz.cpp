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

#include "noisyvqe/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "noisyvqe/errors.hpp"

namespace noisyvqe {

namespace detail {

SpectralGenerator::SpectralGenerator(HermitianOperator h) : op(std::move(h)) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix());
  eigvecs = es.eigenvectors();
  eigvals = es.eigenvalues();
}

Matrix SpectralGenerator::exp(double t) const {
  Eigen::VectorXcd phases(eigvals.size());
  for (Eigen::Index k = 0; k < eigvals.size(); ++k) {
    phases(k) = std::exp(Complex(0.0, -t * eigvals(k)));
  }
  return eigvecs * phases.asDiagonal() * eigvecs.adjoint();
}

}  // namespace detail

namespace {

Eigen::Index common_dim(const std::vector<HermitianOperator> &gens,
                        const char *what) {
  if (gens.empty()) return 0;
  const Eigen::Index d = gens.front().dim();
  for (const auto &g : gens) {
    if (g.dim() != d) {
      throw ValidationError(std::string(what) +
                            ": generators have different dimensions");
    }
  }
  return d;
}

// (e^{-ia} - e^{-ib}) / (a - b), continuous through a == b.
Complex exp_divided_difference(double a, double b) {
  const double half = 0.5 * (a - b);
  const double sinc =
      std::abs(half) < 1e-4 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
  return Complex(0.0, -1.0) * std::exp(Complex(0.0, -0.5 * (a + b))) * sinc;
}

}  // namespace

ProductLayer::ProductLayer(std::vector<HermitianOperator> generators) {
  common_dim(generators, "ProductLayer");
  gens_.reserve(generators.size());
  for (auto &g : generators) gens_.emplace_back(std::move(g));
}

Eigen::Index ProductLayer::dim() const {
  return gens_.empty() ? 0 : gens_.front().op.dim();
}

std::vector<HermitianOperator> ProductLayer::generators() const {
  std::vector<HermitianOperator> out;
  out.reserve(gens_.size());
  for (const auto &g : gens_) out.push_back(g.op);
  return out;
}

SunLayer::SunLayer(std::vector<HermitianOperator> generators)
    : gens_(std::move(generators)) {
  common_dim(gens_, "SunLayer");
  for (std::size_t k = 0; k < gens_.size(); ++k) {
    const double tr = std::abs(gens_[k].matrix().trace());
    if (tr > kStructuralTol) {
      std::ostringstream os;
      os << "SunLayer: generator " << k << " is not traceless (|Tr| = " << tr
         << ")";
      throw ValidationError(os.str());
    }
  }
}

Eigen::Index SunLayer::dim() const {
  return gens_.empty() ? 0 : gens_.front().dim();
}

Circuit::Circuit(QubitCount n, std::vector<Layer> layers)
    : n_(n), layers_(std::move(layers)) {
  offsets_.reserve(layers_.size());
  for (std::size_t j = 0; j < layers_.size(); ++j) {
    const auto [count, d] = std::visit(
        [](const auto &l) { return std::pair{l.param_count(), l.dim()}; },
        layers_[j]);
    if (count == 0) {
      throw ValidationError("layer " + std::to_string(j) +
                            " has no generators");
    }
    if (d != n_.dim()) {
      throw ValidationError("layer " + std::to_string(j) + " has dimension " +
                            std::to_string(d) + ", circuit expects " +
                            std::to_string(n_.dim()));
    }
    offsets_.push_back(total_);
    total_ += count;
  }
}

std::size_t Circuit::param_count(std::size_t j) const {
  return std::visit([](const auto &l) { return l.param_count(); },
                    layers_.at(j));
}

std::size_t Circuit::layer_of_param(std::size_t index) const {
  if (index >= total_) {
    throw ValidationError("parameter index " + std::to_string(index) +
                          " out of range (circuit has " +
                          std::to_string(total_) + ")");
  }
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

void check_parameters(const Circuit &circuit, const ParameterVector &theta) {
  if (static_cast<std::size_t>(theta.size()) != circuit.total_params()) {
    throw ValidationError("parameter vector has length " +
                          std::to_string(theta.size()) + ", circuit expects " +
                          std::to_string(circuit.total_params()));
  }
  if (!theta.allFinite()) {
    throw ValidationError("parameter vector has non-finite entries");
  }
}

Matrix layer_unitary(const Layer &layer, const RealVector &t) {
  if (const auto *prod = std::get_if<ProductLayer>(&layer)) {
    Matrix u = prod->exp_generator(0, t(0));
    for (std::size_t k = 1; k < prod->param_count(); ++k) {
      u = prod->exp_generator(k, t(static_cast<Eigen::Index>(k))) * u;
    }
    return u;
  }
  const auto &sun = std::get<SunLayer>(layer);
  Matrix a = Matrix::Zero(sun.dim(), sun.dim());
  for (std::size_t k = 0; k < sun.param_count(); ++k) {
    a += t(static_cast<Eigen::Index>(k)) * sun.generator(k).matrix();
  }
  return hermitian_exp(HermitianOperator(std::move(a)), 1.0).matrix();
}

LayerJacobian layer_jacobian(const Layer &layer, const RealVector &t) {
  LayerJacobian out;
  if (const auto *prod = std::get_if<ProductLayer>(&layer)) {
    const std::size_t p = prod->param_count();
    std::vector<Matrix> gates(p);
    for (std::size_t k = 0; k < p; ++k) {
      gates[k] = prod->exp_generator(k, t(static_cast<Eigen::Index>(k)));
    }
    // before[k] = G_{k-1} ... G_0, after[k] = G_{p-1} ... G_{k+1}
    const Eigen::Index d = prod->dim();
    std::vector<Matrix> before(p), after(p);
    Matrix acc = Matrix::Identity(d, d);
    for (std::size_t k = 0; k < p; ++k) {
      before[k] = acc;
      acc = gates[k] * acc;
    }
    out.unitary = acc;
    acc = Matrix::Identity(d, d);
    for (std::size_t k = p; k-- > 0;) {
      after[k] = acc;
      acc = acc * gates[k];
    }
    out.partials.reserve(p);
    const Complex minus_i(0.0, -1.0);
    for (std::size_t k = 0; k < p; ++k) {
      out.partials.push_back(after[k] *
                             (minus_i * prod->generator(k).matrix()) *
                             gates[k] * before[k]);
    }
    return out;
  }

  const auto &sun = std::get<SunLayer>(layer);
  const Eigen::Index d = sun.dim();
  Matrix a = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < sun.param_count(); ++k) {
    a += t(static_cast<Eigen::Index>(k)) * sun.generator(k).matrix();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  const Matrix &v = es.eigenvectors();
  const RealVector &lam = es.eigenvalues();
  Eigen::VectorXcd phases(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    phases(i) = std::exp(Complex(0.0, -lam(i)));
  }
  out.unitary = v * phases.asDiagonal() * v.adjoint();
  Matrix gamma(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      gamma(i, j) = exp_divided_difference(lam(i), lam(j));
    }
  }
  out.partials.reserve(sun.param_count());
  for (std::size_t k = 0; k < sun.param_count(); ++k) {
    const Matrix hk = v.adjoint() * sun.generator(k).matrix() * v;
    out.partials.push_back(v * gamma.cwiseProduct(hk) * v.adjoint());
  }
  return out;
}

namespace {

RealVector layer_slice(const Circuit &c, const ParameterVector &theta,
                       std::size_t j) {
  return theta.segment(static_cast<Eigen::Index>(c.param_offset(j)),
                       static_cast<Eigen::Index>(c.param_count(j)));
}

}  // namespace

Matrix unitary_matrix(const Circuit &circuit, const ParameterVector &theta) {
  check_parameters(circuit, theta);
  Matrix u = Matrix::Identity(circuit.dim(), circuit.dim());
  for (std::size_t j = 0; j < circuit.depth(); ++j) {
    u = layer_unitary(circuit.layer(j), layer_slice(circuit, theta, j)) * u;
  }
  return u;
}

UnitaryOperator unitary(const Circuit &circuit, const ParameterVector &theta) {
  return UnitaryOperator(unitary_matrix(circuit, theta));
}

DensityMatrix apply(const Circuit &circuit, const ParameterVector &theta,
                    const DensityMatrix &rho0) {
  if (rho0.dim() != circuit.dim()) {
    throw ValidationError("apply: input state dimension " +
                          std::to_string(rho0.dim()) + " vs circuit " +
                          std::to_string(circuit.dim()));
  }
  const Matrix u = unitary_matrix(circuit, theta);
  return DensityMatrix(conjugate(u, rho0.matrix()));
}

std::vector<Matrix> omegas(const Circuit &circuit,
                           const ParameterVector &theta) {
  check_parameters(circuit, theta);
  std::vector<Matrix> out;
  out.reserve(circuit.total_params());
  // prefix = U_{j-1} ... U_0; Omega = prefix^dagger U_j^dagger dU_j prefix.
  Matrix prefix = Matrix::Identity(circuit.dim(), circuit.dim());
  for (std::size_t j = 0; j < circuit.depth(); ++j) {
    const auto jac =
        layer_jacobian(circuit.layer(j), layer_slice(circuit, theta, j));
    const Matrix left = prefix.adjoint() * jac.unitary.adjoint();
    for (const auto &partial : jac.partials) {
      out.push_back(left * partial * prefix);
    }
    prefix = jac.unitary * prefix;
  }
  return out;
}

Matrix omega(const Circuit &circuit, const ParameterVector &theta,
             std::size_t index) {
  check_parameters(circuit, theta);
  const std::size_t j = circuit.layer_of_param(index);
  Matrix prefix = Matrix::Identity(circuit.dim(), circuit.dim());
  for (std::size_t m = 0; m < j; ++m) {
    prefix = layer_unitary(circuit.layer(m), layer_slice(circuit, theta, m)) *
             prefix;
  }
  const auto jac =
      layer_jacobian(circuit.layer(j), layer_slice(circuit, theta, j));
  const Matrix &partial = jac.partials[index - circuit.param_offset(j)];
  return prefix.adjoint() * jac.unitary.adjoint() * partial * prefix;
}

std::size_t local_surjectivity_rank(const Circuit &circuit,
                                    const ParameterVector &theta) {
  const auto om = omegas(circuit, theta);
  if (om.empty()) return 0;
  const Eigen::Index d = circuit.dim();
  const Eigen::Index n2 = d * d;
  Eigen::MatrixXd stack(static_cast<Eigen::Index>(om.size()), 2 * n2);
  for (std::size_t r = 0; r < om.size(); ++r) {
    Matrix w = om[r];
    w -= (w.trace() / static_cast<double>(d)) * Matrix::Identity(d, d);
    const auto row = static_cast<Eigen::Index>(r);
    for (Eigen::Index e = 0; e < n2; ++e) {
      stack(row, e) = w.data()[e].real();
      stack(row, n2 + e) = w.data()[e].imag();
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack);
  const auto &sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = kRankRelTol * sv(0);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++rank;
  }
  return rank;
}

bool is_locally_surjective(const Circuit &circuit,
                           const ParameterVector &theta) {
  const auto d = static_cast<std::size_t>(circuit.dim());
  return local_surjectivity_rank(circuit, theta) == d * d - 1;
}

}  // namespace noisyvqe
