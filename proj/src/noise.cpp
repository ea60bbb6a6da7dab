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

#include "noisyvqe/noise.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "noisyvqe/errors.hpp"

namespace noisyvqe {

namespace {

constexpr double kTraceTol = 1e-8;

void check_probability(double p, const char *what) {
  if (!(p >= 0.0 && p < 1.0)) {
    std::ostringstream os;
    os << what << ": probability must lie in [0, 1), got " << p;
    throw ValidationError(os.str());
  }
}

RealVector layer_params(const Circuit &c, const ParameterVector &theta,
                        std::size_t j) {
  return theta.segment(static_cast<Eigen::Index>(c.param_offset(j)),
                       static_cast<Eigen::Index>(c.param_count(j)));
}

}  // namespace

Matrix CoherentError::unitary() const {
  return hermitian_exp(generator, angle).matrix();
}

ControlErrorSpec::ControlErrorSpec(RealVector relative_errors)
    : eta_(std::move(relative_errors)) {
  for (Eigen::Index k = 0; k < eta_.size(); ++k) {
    if (!std::isfinite(eta_(k)) || eta_(k) <= -1.0) {
      std::ostringstream os;
      os << "control error " << k << " must be finite and > -1, got "
         << eta_(k);
      throw ValidationError(os.str());
    }
  }
}

ParameterVector control_error_cost_map(const ParameterVector &theta,
                                       const ControlErrorSpec &spec) {
  if (theta.size() != spec.relative_errors().size()) {
    throw ValidationError("control error spec has length " +
                          std::to_string(spec.relative_errors().size()) +
                          ", parameter vector has " +
                          std::to_string(theta.size()));
  }
  return theta.cwiseProduct(
      (RealVector::Ones(theta.size()) + spec.relative_errors()));
}

KrausChannel KrausChannel::mixture(double error_prob,
                                   std::vector<double> weights,
                                   std::vector<Matrix> operators) {
  check_probability(error_prob, "KrausChannel");
  if (operators.empty()) throw ValidationError("KrausChannel: no operators");
  if (weights.size() != operators.size()) {
    throw ValidationError("KrausChannel: weights and operators differ in count");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ValidationError("KrausChannel: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kStructuralTol) {
    std::ostringstream os;
    os << "KrausChannel: weights sum to " << total << ", expected 1";
    throw ValidationError(os.str());
  }
  KrausChannel ch;
  ch.form_ = Form::mixture;
  ch.p_ = error_prob;
  ch.weights_ = std::move(weights);
  ch.dim_ = operators.front().rows();
  ch.validate_operators(operators);
  ch.ops_ = std::move(operators);
  return ch;
}

KrausChannel KrausChannel::standard(std::vector<Matrix> kraus) {
  if (kraus.empty()) throw ValidationError("KrausChannel: no operators");
  KrausChannel ch;
  ch.form_ = Form::standard;
  ch.p_ = 1.0;
  ch.weights_.assign(kraus.size(), 1.0);
  ch.dim_ = kraus.front().rows();
  ch.validate_operators(kraus);
  ch.ops_ = std::move(kraus);
  return ch;
}

KrausChannel KrausChannel::parameterized(double error_prob,
                                         std::vector<double> weights,
                                         OperatorFn operators,
                                         Eigen::Index dim) {
  if (!operators) throw ValidationError("KrausChannel: empty operator function");
  std::vector<Matrix> placeholder(weights.size(), Matrix::Identity(dim, dim));
  KrausChannel ch = mixture(error_prob, std::move(weights), std::move(placeholder));
  ch.ops_.clear();
  ch.fn_ = std::move(operators);
  ch.name_ = "parameterized";
  return ch;
}

void KrausChannel::validate_operators(const std::vector<Matrix> &ops) const {
  if (ops.size() != weights_.size()) {
    throw ValidationError("KrausChannel: operator count changed");
  }
  Matrix completeness = Matrix::Zero(dim_, dim_);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const Matrix &e = ops[k];
    if (e.rows() != dim_ || e.cols() != dim_) {
      throw ValidationError("KrausChannel: operator " + std::to_string(k) +
                            " has the wrong shape");
    }
    if (form_ == Form::mixture) {
      const double norm = spectral_norm(e);
      if (norm > 1.0 + kStructuralTol) {
        std::ostringstream os;
        os << "KrausChannel: operator " << k << " has spectral norm " << norm
           << " > 1";
        throw ValidationError(os.str());
      }
    }
    completeness += weights_[k] * (e.adjoint() * e);
  }
  if (form_ == Form::mixture) {
    completeness = (1.0 - p_) * Matrix::Identity(dim_, dim_) + p_ * completeness;
  }
  const double err = max_abs(completeness - Matrix::Identity(dim_, dim_));
  if (err > kTraceTol) {
    std::ostringstream os;
    os << "KrausChannel: not trace preserving, max |sum E^dagger E - I| = "
       << err;
    throw ValidationError(os.str());
  }
}

KrausChannel KrausChannel::bit_flip(QubitCount n, int qubit, double p) {
  auto ch = mixture(p, {1.0}, {pauli_matrix(pauli_on(n, qubit, 'X'))});
  ch.name_ = "bit_flip";
  return ch;
}

KrausChannel KrausChannel::phase_flip(QubitCount n, int qubit, double p) {
  auto ch = mixture(p, {1.0}, {pauli_matrix(pauli_on(n, qubit, 'Z'))});
  ch.name_ = "phase_flip";
  return ch;
}

KrausChannel KrausChannel::depolarizing(QubitCount n, double p) {
  static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  const std::size_t total = std::size_t{1} << (2 * n.qubits());
  std::vector<Matrix> ops;
  ops.reserve(total);
  std::string letters(static_cast<std::size_t>(n.qubits()), 'I');
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (int q = n.qubits() - 1; q >= 0; --q) {
      letters[static_cast<std::size_t>(q)] = kLetters[c & 3];
      c >>= 2;
    }
    ops.push_back(pauli_matrix(letters));
  }
  std::vector<double> w(total, 1.0 / static_cast<double>(total));
  auto ch = mixture(p, std::move(w), std::move(ops));
  ch.name_ = "depolarizing";
  ch.depolarizing_ = true;
  return ch;
}

KrausChannel KrausChannel::amplitude_damping(QubitCount n, int qubit,
                                             double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw ValidationError("amplitude damping: gamma must lie in [0, 1]");
  }
  Matrix k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  const int rest = n.qubits() - qubit - 1;
  if (qubit < 0 || rest < 0) {
    throw ValidationError("amplitude damping: qubit out of range");
  }
  Matrix left = Matrix::Identity(Eigen::Index{1} << qubit, Eigen::Index{1} << qubit);
  Matrix right = Matrix::Identity(Eigen::Index{1} << rest, Eigen::Index{1} << rest);
  auto ch = standard({kron(kron(left, k0), right), kron(kron(left, k1), right)});
  ch.name_ = "amplitude_damping";
  return ch;
}

const std::vector<Matrix> &KrausChannel::operators() const {
  if (fn_) {
    throw ValidationError("KrausChannel: operators depend on theta, use operators_at");
  }
  return ops_;
}

std::vector<Matrix> KrausChannel::operators_at(const ParameterVector &theta) const {
  if (!fn_) return ops_;
  auto ops = fn_(theta);
  validate_operators(ops);
  return ops;
}

Matrix KrausChannel::apply_with(const Matrix &rho,
                                const std::vector<Matrix> &ops) const {
  Matrix acc = Matrix::Zero(dim_, dim_);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    acc += weights_[k] * (ops[k] * rho * ops[k].adjoint());
  }
  return (1.0 - p_) * rho + p_ * acc;
}

Matrix KrausChannel::apply(const Matrix &rho, const ParameterVector &theta) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) {
    throw ValidationError("KrausChannel::apply: dimension mismatch");
  }
  if (depolarizing_) {
    const Matrix id = Matrix::Identity(dim_, dim_);
    return (1.0 - p_) * rho + (p_ * rho.trace() / static_cast<double>(dim_)) * id;
  }
  if (fn_) return apply_with(rho, operators_at(theta));
  return apply_with(rho, ops_);
}

Matrix KrausChannel::apply_adjoint(const Matrix &observable,
                                   const ParameterVector &theta) const {
  if (observable.rows() != dim_ || observable.cols() != dim_) {
    throw ValidationError("KrausChannel::apply_adjoint: dimension mismatch");
  }
  if (depolarizing_) {
    const Matrix id = Matrix::Identity(dim_, dim_);
    return (1.0 - p_) * observable +
           (p_ * observable.trace() / static_cast<double>(dim_)) * id;
  }
  const std::vector<Matrix> ops = fn_ ? operators_at(theta) : ops_;
  Matrix acc = Matrix::Zero(dim_, dim_);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    acc += weights_[k] * (ops[k].adjoint() * observable * ops[k]);
  }
  return (1.0 - p_) * observable + p_ * acc;
}

DensityMatrix apply_channel(const KrausChannel &channel, const DensityMatrix &rho) {
  return DensityMatrix(channel.apply(rho.matrix()));
}

NoiseModel::NoiseModel(std::vector<CoherentError> coherent,
                       std::map<std::size_t, KrausChannel> channels,
                       std::optional<ControlErrorSpec> control,
                       bool allow_mixed_control)
    : coherent_(std::move(coherent)),
      channels_(std::move(channels)),
      control_(std::move(control)) {
  if (control_ && !allow_mixed_control &&
      (!coherent_.empty() || !channels_.empty())) {
    throw ValidationError(
        "NoiseModel: control errors combined with per-layer noise require "
        "allow_mixed_control");
  }
}

bool NoiseModel::has_theta_dependent_channel() const {
  for (const auto &[j, ch] : channels_) {
    if (ch.depends_on_theta()) return true;
  }
  return false;
}

const KrausChannel *NoiseModel::channel_on(std::size_t layer) const {
  const auto it = channels_.find(layer);
  return it == channels_.end() ? nullptr : &it->second;
}

void NoiseModel::validate_for(const Circuit &circuit) const {
  for (const auto &e : coherent_) {
    if (e.layer >= circuit.depth()) {
      throw ValidationError("coherent error on layer " + std::to_string(e.layer) +
                            " but circuit depth is " +
                            std::to_string(circuit.depth()));
    }
    if (e.generator.dim() != circuit.dim()) {
      throw ValidationError("coherent error generator has the wrong dimension");
    }
  }
  for (const auto &[j, ch] : channels_) {
    if (j >= circuit.depth()) {
      throw ValidationError("channel on layer " + std::to_string(j) +
                            " but circuit depth is " +
                            std::to_string(circuit.depth()));
    }
    if (ch.dim() != circuit.dim()) {
      throw ValidationError("channel on layer " + std::to_string(j) +
                            " has the wrong dimension");
    }
  }
  if (control_) {
    if (static_cast<std::size_t>(control_->relative_errors().size()) !=
        circuit.total_params()) {
      throw ValidationError("control error spec length does not match the circuit");
    }
    for (std::size_t j = 0; j < circuit.depth(); ++j) {
      if (!std::holds_alternative<ProductLayer>(circuit.layer(j))) {
        throw ValidationError("control errors need product layers; layer " +
                              std::to_string(j) + " is an SU(N) layer");
      }
    }
  }
}

Matrix noisy_propagate(const Circuit &circuit, const ParameterVector &theta,
                       const NoiseModel &noise, const Matrix &rho0) {
  check_parameters(circuit, theta);
  noise.validate_for(circuit);
  if (rho0.rows() != circuit.dim() || rho0.cols() != circuit.dim()) {
    throw ValidationError("noisy_apply: input state has the wrong dimension");
  }
  const ParameterVector gate_theta =
      noise.control() ? control_error_cost_map(theta, *noise.control()) : theta;
  Matrix rho = rho0;
  for (std::size_t j = 0; j < circuit.depth(); ++j) {
    const Matrix u =
        layer_unitary(circuit.layer(j), layer_params(circuit, gate_theta, j));
    rho = conjugate(u, rho);
    for (const auto &e : noise.coherent()) {
      if (e.layer == j) rho = conjugate(e.unitary(), rho);
    }
    if (const auto *ch = noise.channel_on(j)) rho = ch->apply(rho, theta);
  }
  return rho;
}

DensityMatrix noisy_apply(const Circuit &circuit, const ParameterVector &theta,
                          const NoiseModel &noise, const DensityMatrix &rho0) {
  return DensityMatrix(noisy_propagate(circuit, theta, noise, rho0.matrix()));
}

double bit_flip_prob_for_epsilon(double epsilon, std::size_t depth) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ValidationError("perturbation level must be finite and >= 0");
  }
  if (depth < 1) throw ValidationError("depth must be >= 1");
  return 1.0 - std::pow(1.0 / (1.0 + epsilon), 1.0 / static_cast<double>(depth));
}

Circuit split_into_gates(const Circuit &circuit) {
  std::vector<Layer> layers;
  for (const auto &layer : circuit.layers()) {
    if (const auto *prod = std::get_if<ProductLayer>(&layer)) {
      for (std::size_t k = 0; k < prod->param_count(); ++k) {
        layers.emplace_back(ProductLayer({prod->generator(k)}));
      }
    } else {
      layers.push_back(layer);
    }
  }
  return Circuit(circuit.qubits(), std::move(layers));
}

}  // namespace noisyvqe
