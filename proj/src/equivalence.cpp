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

#include "noisyvqe/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "noisyvqe/errors.hpp"

namespace noisyvqe {

namespace {

RealVector layer_params(const Circuit &c, const ParameterVector &theta,
                        std::size_t j) {
  return theta.segment(static_cast<Eigen::Index>(c.param_offset(j)),
                       static_cast<Eigen::Index>(c.param_count(j)));
}

// Product U_{last} ... U_{first}; identity when first > last.
Matrix layer_product(const Circuit &c, const ParameterVector &theta,
                     std::size_t first, std::size_t end) {
  Matrix v = Matrix::Identity(c.dim(), c.dim());
  for (std::size_t m = first; m < end; ++m) {
    v = layer_unitary(c.layer(m), layer_params(c, theta, m)) * v;
  }
  return v;
}

// Hermitian part, removing rounding-level asymmetry before validation.
HermitianOperator hermitize(const Matrix &m) {
  return HermitianOperator(0.5 * (m + m.adjoint()));
}

struct Term {
  double weight;
  Matrix op;
};

bool same_up_to_phase(const Matrix &a, const Matrix &b) {
  const double na = a.norm();
  const double nb = b.norm();
  const double scale = std::max(na, nb);
  if (scale == 0.0) return true;
  if (std::abs(na - nb) > 1e-12 * scale) return false;
  return std::abs(std::abs(hs_inner(a, b)) - na * nb) <= 1e-12 * scale * scale;
}

void add_term(std::vector<Term> &terms, double weight, Matrix op) {
  if (weight == 0.0) return;
  for (auto &t : terms) {
    if (same_up_to_phase(t.op, op)) {
      t.weight += weight;
      return;
    }
  }
  terms.push_back({weight, std::move(op)});
}

}  // namespace

UnitaryOperator suffix_unitary(const Circuit &circuit, const ParameterVector &theta,
                               std::size_t j) {
  check_parameters(circuit, theta);
  if (j >= circuit.depth()) {
    throw ValidationError("suffix index " + std::to_string(j) +
                          " out of range for depth " +
                          std::to_string(circuit.depth()));
  }
  return UnitaryOperator(layer_product(circuit, theta, j, circuit.depth()));
}

Matrix suffix_after(const Circuit &circuit, const ParameterVector &theta,
                    std::size_t j) {
  check_parameters(circuit, theta);
  if (j >= circuit.depth()) {
    throw ValidationError("layer index " + std::to_string(j) +
                          " out of range for depth " +
                          std::to_string(circuit.depth()));
  }
  return layer_product(circuit, theta, j + 1, circuit.depth());
}

std::vector<HermitianOperator> push_coherent_to_last(
    const Circuit &circuit, const ParameterVector &theta,
    const std::vector<CoherentError> &errors) {
  std::vector<HermitianOperator> out;
  out.reserve(errors.size());
  for (const auto &e : errors) {
    if (e.generator.dim() != circuit.dim()) {
      throw ValidationError("coherent error generator has the wrong dimension");
    }
    const Matrix v = suffix_after(circuit, theta, e.layer);
    out.push_back(hermitize(conjugate(v, e.generator.matrix())));
  }
  return out;
}

Matrix pushed_error_unitary(const Circuit &circuit, const ParameterVector &theta,
                            const std::vector<CoherentError> &errors) {
  const auto hats = push_coherent_to_last(circuit, theta, errors);
  std::vector<std::size_t> order(errors.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return errors[a].layer < errors[b].layer;
  });
  Matrix u = Matrix::Identity(circuit.dim(), circuit.dim());
  for (std::size_t idx : order) {
    u = hermitian_exp(hats[idx], errors[idx].angle).matrix() * u;
  }
  return u;
}

double PerturbedObservableForm::perturbation_term(const Circuit &circuit,
                                                  const ParameterVector &theta,
                                                  const DensityMatrix &rho0) const {
  const DensityMatrix rho = apply(circuit, theta, rho0);
  return expectation(perturbation(theta), rho);
}

double PerturbedObservableForm::cost(const Circuit &circuit,
                                     const ParameterVector &theta,
                                     const DensityMatrix &rho0) const {
  const DensityMatrix rho = apply(circuit, theta, rho0);
  return scale * (expectation(base, rho) + level * expectation(perturbation(theta), rho));
}

PerturbedObservableForm first_order_observable(const HermitianOperator &observable,
                                               const Circuit &circuit,
                                               std::vector<CoherentError> errors) {
  double level = 0.0;
  for (const auto &e : errors) level = std::max(level, std::abs(e.angle));
  const Eigen::Index d = observable.dim();
  if (level == 0.0) {
    return {observable,
            [d](const ParameterVector &) { return HermitianOperator(Matrix::Zero(d, d)); },
            0.0, 1.0};
  }
  auto perturbation = [observable, circuit, errors = std::move(errors),
                       level](const ParameterVector &theta) {
    const auto hats = push_coherent_to_last(circuit, theta, errors);
    const Matrix &o = observable.matrix();
    Matrix acc = Matrix::Zero(o.rows(), o.cols());
    for (std::size_t j = 0; j < errors.size(); ++j) {
      acc += (errors[j].angle / level) * commutator(hats[j].matrix(), o);
    }
    return hermitize(Complex(0.0, 1.0) * acc);
  };
  return {observable, std::move(perturbation), level, 1.0};
}

PerturbedObservableForm incoherent_to_observable(const HermitianOperator &observable,
                                                 const KrausChannel &channel) {
  const double p = channel.error_prob();
  if (p >= 1.0) {
    throw ValidationError(
        "incoherent_to_observable: error probability 1 gives a singular "
        "perturbation level");
  }
  if (channel.dim() != observable.dim()) {
    throw ValidationError("incoherent_to_observable: dimension mismatch");
  }
  auto perturbation = [observable, channel](const ParameterVector &theta) {
    const auto ops = channel.operators_at(theta);
    const Matrix &o = observable.matrix();
    Matrix acc = Matrix::Zero(o.rows(), o.cols());
    for (std::size_t k = 0; k < ops.size(); ++k) {
      acc += channel.weights()[k] * (ops[k].adjoint() * o * ops[k]);
    }
    return hermitize(acc);
  };
  return {observable, std::move(perturbation), p / (1.0 - p), 1.0 - p};
}

Matrix PushedChannel::apply(const Matrix &rho) const {
  Matrix acc = Matrix::Zero(rho.rows(), rho.cols());
  for (std::size_t k = 0; k < operators.size(); ++k) {
    acc += weights[k] * (operators[k] * rho * operators[k].adjoint());
  }
  return (1.0 - error_prob) * rho + error_prob * acc;
}

KrausChannel PushedChannel::as_channel() const {
  if (!standard_form) return KrausChannel::mixture(error_prob, weights, operators);
  std::vector<Matrix> kraus;
  kraus.reserve(operators.size());
  for (std::size_t k = 0; k < operators.size(); ++k) {
    kraus.push_back(std::sqrt(weights[k]) * operators[k]);
  }
  return KrausChannel::standard(std::move(kraus));
}

PushedChannel push_channel_to_last(const Circuit &circuit,
                                   const ParameterVector &theta,
                                   const NoiseModel &noise) {
  check_parameters(circuit, theta);
  if (!noise.coherent().empty() || noise.control()) {
    throw ValidationError(
        "push_channel_to_last: noise model must contain only channels");
  }
  noise.validate_for(circuit);

  const Eigen::Index d = circuit.dim();
  // Running composite: survival probability q = prod (1 - p_j) and the
  // unnormalized error terms c_k E_k (so that p w_k = c_k).
  double survival = 1.0;
  std::vector<Term> terms;
  bool standard = false;

  for (const auto &[j, channel] : noise.channels()) {
    const Matrix v = suffix_after(circuit, theta, j);
    const auto ops = channel.operators_at(theta);
    std::vector<Matrix> pushed;
    pushed.reserve(ops.size());
    for (const auto &e : ops) pushed.push_back(conjugate(v, e));

    const double pj = channel.error_prob();
    standard = standard || channel.form() == KrausChannel::Form::standard;
    const std::size_t candidates = terms.size() + pushed.size() * (terms.size() + 1);
    if (candidates > 16 * kMaxPushedOperators) {
      throw ValidationError("push_channel_to_last: composed channel exceeds " +
                            std::to_string(kMaxPushedOperators) + " operators");
    }

    // New channel acts after the composite so far:
    //   identity branch  q (1 - pj)
    //   old terms        c_k (1 - pj)
    //   new terms alone  q pj w_m
    //   new after old    c_k pj w_m  (operator F_m E_k)
    std::vector<Term> next;
    next.reserve(candidates);
    for (const auto &t : terms) add_term(next, t.weight * (1.0 - pj), t.op);
    for (std::size_t m = 0; m < pushed.size(); ++m) {
      add_term(next, survival * pj * channel.weights()[m], pushed[m]);
    }
    for (const auto &t : terms) {
      for (std::size_t m = 0; m < pushed.size(); ++m) {
        add_term(next, t.weight * pj * channel.weights()[m], pushed[m] * t.op);
      }
    }
    if (next.size() > kMaxPushedOperators) {
      throw ValidationError("push_channel_to_last: composed channel exceeds " +
                            std::to_string(kMaxPushedOperators) + " operators");
    }
    terms = std::move(next);
    survival *= (1.0 - pj);
  }

  PushedChannel out;
  out.standard_form = standard;
  out.error_prob = 1.0 - survival;
  if (terms.empty()) {
    out.weights = {1.0};
    out.operators = {Matrix::Identity(d, d)};
    return out;
  }
  for (auto &t : terms) {
    out.weights.push_back(t.weight / out.error_prob);
    out.operators.push_back(std::move(t.op));
  }
  return out;
}

double perturbation_level_for_depth(double p, std::size_t depth) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw ValidationError("perturbation_level_for_depth: p must lie in [0, 1)");
  }
  return std::pow(1.0 - p, -static_cast<double>(depth)) - 1.0;
}

}  // namespace noisyvqe
