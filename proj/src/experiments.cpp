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

#include "noisyvqe/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "noisyvqe/errors.hpp"

namespace noisyvqe {

namespace {

void check_problem_qubits(int n) {
  if (n < 1 || n > kMaxProblemQubits) {
    throw ValidationError("problem size n = " + std::to_string(n) +
                          " unsupported (1.." + std::to_string(kMaxProblemQubits) + ")");
  }
}

Matrix random_complex(Eigen::Index d, std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double re = normal(rng);
      a(i, j) = Complex(re, normal(rng));
    }
  }
  return a;
}

HermitianOperator random_generator(Eigen::Index d, std::mt19937_64 &rng,
                                   bool traceless) {
  const Matrix a = random_complex(d, rng);
  Matrix h = 0.25 * (a + a.adjoint());
  if (traceless) {
    h -= (h.trace() / static_cast<double>(d)) * Matrix::Identity(d, d);
  }
  return HermitianOperator(0.5 * (h + h.adjoint()));
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

VQEProblem make_random_vqe(int n, std::size_t depth, std::uint64_t seed) {
  check_problem_qubits(n);
  const QubitCount qc(n);
  return VQEProblem::make(random_hermitian(qc, seed), DensityMatrix::basis_state(qc, 0),
                          build_locally_surjective(n, depth));
}

VQEProblem make_qaoa_maxcut(const Graph &graph, std::size_t depth) {
  validate_graph(graph);
  check_problem_qubits(graph.vertices);
  const QubitCount qc(graph.vertices);
  Eigen::VectorXcd plus =
      Eigen::VectorXcd::Constant(qc.dim(), 1.0 / std::sqrt(static_cast<double>(qc.dim())));
  return VQEProblem::make(maxcut_hamiltonian(graph), DensityMatrix::pure(plus),
                          build_qaoa(graph, depth));
}

VQEProblem make_single_qubit_rotation() {
  const QubitCount one(1);
  Circuit c(one, {ProductLayer({pauli_operator({"Y", 0.5})})});
  return VQEProblem::make(pauli_operator({"Z", 1.0}), DensityMatrix::basis_state(one, 0),
                          std::move(c));
}

ParameterVector initial_parameters(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-std::numbers::pi, std::numbers::pi);
  ParameterVector t(static_cast<Eigen::Index>(count));
  for (Eigen::Index i = 0; i < t.size(); ++i) t(i) = uni(rng);
  return t;
}

Circuit random_circuit(int n, std::size_t depth, std::uint64_t seed, bool sun_layers) {
  const QubitCount qc(n);
  std::mt19937_64 rng(seed);
  std::vector<Layer> layers;
  for (std::size_t j = 0; j < depth; ++j) {
    if (sun_layers) {
      std::vector<HermitianOperator> gens;
      for (int k = 0; k < 3; ++k) gens.push_back(random_generator(qc.dim(), rng, true));
      layers.emplace_back(SunLayer(std::move(gens)));
    } else {
      std::vector<HermitianOperator> gens;
      for (int k = 0; k < 2; ++k) gens.push_back(random_generator(qc.dim(), rng, false));
      layers.emplace_back(ProductLayer(std::move(gens)));
    }
  }
  return Circuit(qc, std::move(layers));
}

DensityMatrix random_density_matrix(int n, std::uint64_t seed) {
  const QubitCount qc(n);
  std::mt19937_64 rng(seed);
  const Matrix a = random_complex(qc.dim(), rng);
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

std::string to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::random_vqe:
      return "random_vqe";
    case ProblemKind::qaoa_maxcut:
      return "qaoa_maxcut";
    case ProblemKind::single_qubit_rotation:
      return "single_qubit_rotation";
  }
  return "unknown";
}

std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::coherent_z:
      return "coherent_z";
    case NoiseKind::bit_flip:
      return "bit_flip";
    case NoiseKind::control:
      return "control";
  }
  return "unknown";
}

std::string to_string(Placement p) {
  return p == Placement::per_gate ? "per_gate" : "per_layer";
}

VQEProblem ProblemSpec::build() const {
  switch (kind) {
    case ProblemKind::random_vqe:
      return make_random_vqe(n, depth, seed);
    case ProblemKind::qaoa_maxcut:
      return make_qaoa_maxcut(graph, depth);
    case ProblemKind::single_qubit_rotation:
      return make_single_qubit_rotation();
  }
  throw ValidationError("unknown problem kind");
}

std::string ProblemSpec::id() const {
  std::ostringstream os;
  switch (kind) {
    case ProblemKind::random_vqe:
      os << "random_vqe_n" << n << "_L" << depth << "_s" << seed;
      break;
    case ProblemKind::qaoa_maxcut:
      os << "qaoa_maxcut_n" << graph.vertices << "_e" << graph.edges.size() << "_L"
         << depth;
      break;
    case ProblemKind::single_qubit_rotation:
      os << "single_qubit_rotation";
      break;
  }
  return os.str();
}

void SweepConfig::validate() const {
  if (epsilons.empty()) throw ValidationError("sweep needs at least one epsilon");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0) || !std::isfinite(epsilons[i])) {
      throw ValidationError("sweep epsilons must be finite and > 0, got " +
                            format_double(epsilons[i]));
    }
    if (i > 0 && !(epsilons[i] > epsilons[i - 1])) {
      throw ValidationError("sweep epsilons must be strictly ascending");
    }
  }
  if (!auto_step) optimizer.validate();
  if (problem.kind == ProblemKind::random_vqe) check_problem_qubits(problem.n);
  if (problem.kind == ProblemKind::qaoa_maxcut) validate_graph(problem.graph);
}

std::vector<double> log_spaced(double lo_exp, double hi_exp, std::size_t count) {
  if (count < 2) throw ValidationError("log_spaced needs at least 2 points");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = std::pow(10.0, lo_exp + t * (hi_exp - lo_exp));
  }
  return out;
}

NoiseModel make_sweep_noise(const Circuit &circuit, NoiseKind kind, double epsilon,
                            int qubit) {
  const QubitCount n = circuit.qubits();
  switch (kind) {
    case NoiseKind::coherent_z: {
      const HermitianOperator z = pauli_operator({pauli_on(n, qubit, 'Z'), 0.5});
      std::vector<CoherentError> errs;
      for (std::size_t j = 0; j < circuit.depth(); ++j) errs.push_back({j, z, epsilon});
      return NoiseModel(std::move(errs), {});
    }
    case NoiseKind::bit_flip: {
      const double p = bit_flip_prob_for_epsilon(epsilon, circuit.depth());
      std::map<std::size_t, KrausChannel> channels;
      for (std::size_t j = 0; j < circuit.depth(); ++j) {
        channels.emplace(j, KrausChannel::bit_flip(n, qubit, p));
      }
      return NoiseModel({}, std::move(channels));
    }
    case NoiseKind::control: {
      const RealVector eta =
          RealVector::Constant(static_cast<Eigen::Index>(circuit.total_params()), epsilon);
      NoiseModel model({}, {}, ControlErrorSpec(eta));
      model.validate_for(circuit);
      return model;
    }
  }
  throw ValidationError("unknown noise kind");
}

std::vector<SweepRecord> run_sweep(const SweepConfig &config) {
  config.validate();
  VQEProblem problem = config.problem.build();
  if (config.placement == Placement::per_gate) {
    problem.circuit = split_into_gates(problem.circuit);
  }
  const ParameterVector theta0 =
      initial_parameters(problem.circuit.total_params(), config.shared_init_seed);
  OptimizerConfig opt = config.optimizer;
  if (config.auto_step) opt.step_size = tune_step_size(problem, theta0);

  const TrainingTrace clean = train(problem, theta0, opt);
  const std::string id = config.problem.id();
  const std::string kind = to_string(config.noise_kind);

  std::vector<SweepRecord> records(config.epsilons.size());
  auto run_one = [&](std::size_t i) {
    SweepRecord r;
    r.problem_id = id;
    r.noise_kind = kind;
    r.epsilon = config.epsilons[i];
    r.final_cost_clean = clean.final_cost;
    try {
      const VQEProblem noisy = problem.with_noise(make_sweep_noise(
          problem.circuit, config.noise_kind, r.epsilon, config.noise_qubit));
      const TrainingTrace t = train(noisy, theta0, opt);
      const RealVector diff = t.final_theta - clean.final_theta;
      r.distance_l2 = diff.norm();
      r.distance_linf = diff.lpNorm<Eigen::Infinity>();
      r.final_cost_noisy = t.final_cost;
      r.iterations = t.iterations_run;
      if (r.distance_l2 < kDegenerateDistance) r.flag = "zero_distance";
    } catch (const DivergenceError &e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      r.distance_l2 = r.distance_linf = r.final_cost_noisy = nan;
      r.iterations = e.iteration();
      r.flag = "diverged";
    }
    records[i] = std::move(r);
  };

  unsigned workers = config.workers == 0 ? std::thread::hardware_concurrency() : config.workers;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(records.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < records.size(); ++i) run_one(i);
    return records;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < records.size(); i = next++) run_one(i);
    });
  }
  pool.clear();
  return records;
}

void write_sweep_csv(std::ostream &os, const std::vector<SweepRecord> &records) {
  os << kSweepCsvHeader << '\n';
  for (const auto &r : records) {
    os << r.problem_id << ',' << r.noise_kind << ',' << format_double(r.epsilon) << ','
       << format_double(r.distance_l2) << ',' << format_double(r.distance_linf) << ','
       << format_double(r.final_cost_noisy) << ',' << format_double(r.final_cost_clean)
       << ',' << r.iterations << ',' << r.flag << '\n';
  }
}

std::vector<SweepRecord> read_sweep_csv(std::istream &is) {
  std::string line;
  if (!std::getline(is, line) || line != kSweepCsvHeader) {
    throw ValidationError("sweep CSV: header does not match the expected schema");
  }
  std::vector<SweepRecord> out;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 9) {
      throw ValidationError("sweep CSV: row " + std::to_string(row) + " has " +
                            std::to_string(f.size()) + " fields, expected 9");
    }
    SweepRecord r;
    try {
      r.problem_id = f[0];
      r.noise_kind = f[1];
      r.epsilon = std::stod(f[2]);
      r.distance_l2 = std::stod(f[3]);
      r.distance_linf = std::stod(f[4]);
      r.final_cost_noisy = std::stod(f[5]);
      r.final_cost_clean = std::stod(f[6]);
      r.iterations = std::stoul(f[7]);
      r.flag = f[8];
    } catch (const std::logic_error &) {
      throw ValidationError("sweep CSV: row " + std::to_string(row) + " is malformed");
    }
    out.push_back(std::move(r));
  }
  return out;
}

SlopeFit fit_loglog_slope(const std::vector<SweepRecord> &records) {
  std::vector<double> xs, ys;
  SlopeFit fit;
  for (const auto &r : records) {
    const bool usable = r.flag != "diverged" && std::isfinite(r.distance_l2) &&
                        r.distance_l2 > kDegenerateDistance && r.epsilon > 0.0;
    if (!usable) {
      ++fit.excluded;
      continue;
    }
    xs.push_back(std::log(r.epsilon));
    ys.push_back(std::log(r.distance_l2));
  }
  if (xs.size() < 3) {
    throw ValidationError("fit_loglog_slope: need at least 3 usable points, have " +
                          std::to_string(xs.size()));
  }
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("fit_loglog_slope: all epsilons are equal");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += e * e;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.n_points = xs.size();
  return fit;
}

}  // namespace noisyvqe
