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

#include "noisyvqe/engine.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "noisyvqe/errors.hpp"

namespace noisyvqe {

namespace {

RealVector layer_params(const Circuit &c, const ParameterVector &theta,
                        std::size_t j) {
  return theta.segment(static_cast<Eigen::Index>(c.param_offset(j)),
                       static_cast<Eigen::Index>(c.param_count(j)));
}

}  // namespace

VQEProblem VQEProblem::make(HermitianOperator observable,
                            DensityMatrix input_state, Circuit circuit,
                            std::optional<NoiseModel> noise,
                            std::optional<double> cost_shift) {
  if (observable.dim() != circuit.dim() || input_state.dim() != circuit.dim()) {
    throw ValidationError("VQEProblem: observable, state and circuit dimensions differ");
  }
  if (noise) noise->validate_for(circuit);
  const double shift = cost_shift ? *cost_shift : ground_energy(observable);
  if (!std::isfinite(shift)) throw ValidationError("VQEProblem: cost shift is not finite");
  return VQEProblem{std::move(observable), std::move(input_state), std::move(circuit),
                    std::move(noise), shift};
}

VQEProblem VQEProblem::with_noise(std::optional<NoiseModel> model) const {
  if (model) model->validate_for(circuit);
  VQEProblem out = *this;
  out.noise = std::move(model);
  return out;
}

void OptimizerConfig::validate() const {
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw ValidationError("optimizer step size must be finite and > 0");
  }
  if (max_iters < 1) throw ValidationError("optimizer max_iters must be >= 1");
  if (!(grad_tol >= 0.0)) throw ValidationError("optimizer grad_tol must be >= 0");
}

std::string to_string(StopReason r) {
  return r == StopReason::grad_tol ? "grad_tol" : "max_iters";
}

double expectation_value(const VQEProblem &problem, const ParameterVector &theta) {
  check_parameters(problem.circuit, theta);
  const Matrix &o = problem.observable.matrix();
  if (problem.noisy()) {
    return expectation(o, noisy_propagate(problem.circuit, theta, *problem.noise,
                                          problem.input_state.matrix()));
  }
  const Matrix u = unitary_matrix(problem.circuit, theta);
  return expectation(o, conjugate(u, problem.input_state.matrix()));
}

double cost(const VQEProblem &problem, const ParameterVector &theta) {
  return expectation_value(problem, theta) - problem.cost_shift;
}

RealVector riemannian_gradient(const VQEProblem &problem,
                               const ParameterVector &theta) {
  const auto om = omegas(problem.circuit, theta);
  const Matrix u = unitary_matrix(problem.circuit, theta);
  const Matrix heisenberg = u.adjoint() * problem.observable.matrix() * u;
  const Matrix grad_l = commutator(heisenberg, problem.input_state.matrix());
  RealVector g(static_cast<Eigen::Index>(om.size()));
  for (std::size_t j = 0; j < om.size(); ++j) {
    g(static_cast<Eigen::Index>(j)) = hs_inner(grad_l, om[j]).real();
  }
  return g;
}

RealVector adjoint_gradient(const VQEProblem &problem,
                            const ParameterVector &theta) {
  const Circuit &c = problem.circuit;
  check_parameters(c, theta);
  const NoiseModel empty;
  const NoiseModel &noise = problem.noise ? *problem.noise : empty;
  noise.validate_for(c);

  const ParameterVector gate_theta =
      noise.control() ? control_error_cost_map(theta, *noise.control()) : theta;
  const std::size_t depth = c.depth();
  const Eigen::Index d = c.dim();

  std::vector<LayerJacobian> jac;
  std::vector<Matrix> errors(depth, Matrix::Identity(d, d));
  std::vector<Matrix> sigma;  // state entering layer j
  jac.reserve(depth);
  sigma.reserve(depth);
  for (const auto &e : noise.coherent()) errors[e.layer] = e.unitary() * errors[e.layer];

  Matrix rho = problem.input_state.matrix();
  for (std::size_t j = 0; j < depth; ++j) {
    sigma.push_back(rho);
    jac.push_back(layer_jacobian(c.layer(j), layer_params(c, gate_theta, j)));
    rho = conjugate(errors[j] * jac[j].unitary, rho);
    if (const auto *ch = noise.channel_on(j)) rho = ch->apply(rho, theta);
  }

  RealVector g(static_cast<Eigen::Index>(c.total_params()));
  Matrix obs = problem.observable.matrix();
  for (std::size_t j = depth; j-- > 0;) {
    if (const auto *ch = noise.channel_on(j)) obs = ch->apply_adjoint(obs, theta);
    obs = errors[j].adjoint() * obs * errors[j];
    const Matrix right = sigma[j] * jac[j].unitary.adjoint();
    const std::size_t offset = c.param_offset(j);
    for (std::size_t k = 0; k < jac[j].partials.size(); ++k) {
      const auto idx = static_cast<Eigen::Index>(offset + k);
      double gk = 2.0 * (obs * jac[j].partials[k] * right).trace().real();
      if (noise.control()) gk *= 1.0 + noise.control()->relative_errors()(idx);
      g(idx) = gk;
    }
    obs = jac[j].unitary.adjoint() * obs * jac[j].unitary;
  }
  return g;
}

RealVector gradient(const VQEProblem &problem, const ParameterVector &theta) {
  if (!problem.noisy()) return riemannian_gradient(problem, theta);
  if (problem.noise->has_theta_dependent_channel()) return fd_gradient(problem, theta);
  return adjoint_gradient(problem, theta);
}

RealVector fd_gradient(const VQEProblem &problem, const ParameterVector &theta,
                       double step) {
  if (!(step > 0.0)) throw ValidationError("finite-difference step must be > 0");
  check_parameters(problem.circuit, theta);
  RealVector g(theta.size());
  ParameterVector probe = theta;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    probe(j) = theta(j) + step;
    const double up = expectation_value(problem, probe);
    probe(j) = theta(j) - step;
    const double down = expectation_value(problem, probe);
    probe(j) = theta(j);
    g(j) = (up - down) / (2.0 * step);
  }
  return g;
}

TrainingTrace train(const VQEProblem &problem, const ParameterVector &theta0,
                    const OptimizerConfig &config) {
  config.validate();
  check_parameters(problem.circuit, theta0);
  TrainingTrace trace;
  trace.thetas.reserve(config.max_iters + 1);
  trace.costs.reserve(config.max_iters + 1);

  ParameterVector theta = theta0;
  double c = cost(problem, theta);
  if (!std::isfinite(c)) throw DivergenceError("non-finite cost at start", 0);
  trace.thetas.push_back(theta);
  trace.costs.push_back(c);

  for (std::size_t it = 0; it < config.max_iters; ++it) {
    const RealVector g = gradient(problem, theta);
    if (!g.allFinite()) {
      throw DivergenceError("non-finite gradient at iteration " + std::to_string(it), it);
    }
    if (g.lpNorm<Eigen::Infinity>() < config.grad_tol) {
      trace.stop_reason = StopReason::grad_tol;
      break;
    }
    theta -= config.step_size * g;
    if (!theta.allFinite()) {
      throw DivergenceError("non-finite parameters at iteration " + std::to_string(it), it);
    }
    c = cost(problem, theta);
    if (!std::isfinite(c)) {
      throw DivergenceError("non-finite cost at iteration " + std::to_string(it), it);
    }
    trace.thetas.push_back(theta);
    trace.costs.push_back(c);
    ++trace.iterations_run;
  }
  trace.final_theta = trace.thetas.back();
  trace.final_cost = trace.costs.back();
  return trace;
}

double tune_step_size(const VQEProblem &problem, const ParameterVector &theta0,
                      double initial, std::size_t probe_iters,
                      std::size_t max_halvings) {
  double step = initial;
  for (std::size_t h = 0; h <= max_halvings; ++h, step *= 0.5) {
    OptimizerConfig probe{step, probe_iters, 0.0, 0};
    try {
      const auto trace = train(problem, theta0, probe);
      bool monotone = true;
      for (std::size_t k = 1; k < trace.costs.size(); ++k) {
        if (trace.costs[k] > trace.costs[k - 1] + 1e-12) {
          monotone = false;
          break;
        }
      }
      if (monotone) return step;
    } catch (const DivergenceError &) {
    }
  }
  throw ValidationError("tune_step_size: no monotone step size found");
}

void write_trace(std::ostream &os, const TrainingTrace &trace,
                 std::size_t snapshot_every) {
  os << "# iteration\tcost\ttheta\n";
  os << std::setprecision(17);
  for (std::size_t k = 0; k < trace.costs.size(); ++k) {
    os << k << '\t' << trace.costs[k];
    const bool last = k + 1 == trace.costs.size();
    if (snapshot_every > 0 && (k % snapshot_every == 0 || last)) {
      os << '\t';
      const auto &t = trace.thetas[k];
      for (Eigen::Index i = 0; i < t.size(); ++i) {
        if (i) os << ',';
        os << t(i);
      }
    }
    os << '\n';
  }
}

std::vector<TraceLine> read_trace(std::istream &is) {
  std::vector<TraceLine> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ls(line);
    TraceLine tl;
    std::string field;
    if (!std::getline(ls, field, '\t')) continue;
    tl.index = std::stoul(field);
    if (!std::getline(ls, field, '\t')) {
      throw ValidationError("trace line without a cost: " + line);
    }
    tl.cost = std::stod(field);
    if (std::getline(ls, field, '\t') && !field.empty()) {
      std::vector<double> vals;
      std::istringstream fs(field);
      std::string v;
      while (std::getline(fs, v, ',')) vals.push_back(std::stod(v));
      tl.theta = Eigen::Map<RealVector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
    }
    out.push_back(std::move(tl));
  }
  return out;
}

}  // namespace noisyvqe
