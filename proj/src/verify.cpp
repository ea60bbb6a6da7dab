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


#include "noisyvqe/verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "noisyvqe/equivalence.hpp"
#include "noisyvqe/errors.hpp"
#include "noisyvqe/experiments.hpp"

namespace noisyvqe {

namespace {

struct Instance {
  int n;
  std::size_t depth;
  bool sun;
};

// Cycles through n in {1, 2}, L in {1, 2, 3} and both layer kinds.
Instance instance_shape(int i) {
  return {1 + i % 2, static_cast<std::size_t>(1 + (i / 2) % 3), (i / 6) % 2 == 1};
}

Matrix random_unitary(QubitCount n, std::uint64_t seed) {
  return hermitian_exp(random_hermitian(n, seed), 1.0).matrix();
}

KrausChannel random_channel(QubitCount n, std::mt19937_64 &rng, double p,
                            bool allow_depolarizing, bool allow_damping) {
  std::uniform_int_distribution<int> qubit(0, n.qubits() - 1);
  std::uniform_int_distribution<int> kind(0, 4);
  for (;;) {
    switch (kind(rng)) {
      case 0:
        return KrausChannel::bit_flip(n, qubit(rng), p);
      case 1:
        return KrausChannel::phase_flip(n, qubit(rng), p);
      case 2:
        if (!allow_depolarizing) continue;
        return KrausChannel::depolarizing(n, p);
      case 3:
        if (!allow_damping) continue;
        return KrausChannel::amplitude_damping(n, qubit(rng), p);
      default:
        return KrausChannel::mixture(
            p, {0.3, 0.7}, {random_unitary(n, rng()), random_unitary(n, rng())});
    }
  }
}

std::vector<CoherentError> random_coherent(QubitCount n, std::size_t depth,
                                           std::mt19937_64 &rng, double max_angle) {
  std::uniform_int_distribution<std::size_t> layer(0, depth - 1);
  std::uniform_real_distribution<double> angle(-max_angle, max_angle);
  std::vector<CoherentError> errs;
  const int count = 1 + static_cast<int>(rng() % 3);
  for (int k = 0; k < count; ++k) {
    errs.push_back({layer(rng), random_hermitian(n, rng()), angle(rng)});
  }
  return errs;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

SuiteResult finish(std::string name, double measured, double threshold,
                   std::string detail = {}) {
  return {std::move(name), measured <= threshold, measured, threshold, std::move(detail)};
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(suites.begin(), suites.end(),
                     [](const SuiteResult &s) { return s.passed; });
}

SuiteResult check_coherent_push(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const auto [n, depth, sun] = instance_shape(i);
    const Circuit c = random_circuit(n, depth, rng(), sun);
    const DensityMatrix rho0 = random_density_matrix(n, rng());
    const ParameterVector theta = initial_parameters(c.total_params(), rng());
    auto errs = random_coherent(c.qubits(), depth, rng, 1.0);

    const Matrix pushed = pushed_error_unitary(c, theta, errs);
    const Matrix clean = conjugate(unitary_matrix(c, theta), rho0.matrix());
    const Matrix interleaved =
        noisy_propagate(c, theta, NoiseModel(std::move(errs), {}), rho0.matrix());
    worst = std::max(worst, max_abs(conjugate(pushed, clean) - interleaved));
  }
  return finish("coherent push exactness", worst, 1e-10,
                std::to_string(instances) + " instances");
}

SuiteResult check_channel_push(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> prob(0.02, 0.4);
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const auto [n, depth, sun] = instance_shape(i);
    const Circuit c = random_circuit(n, depth, rng(), sun);
    const DensityMatrix rho0 = random_density_matrix(n, rng());
    const ParameterVector theta = initial_parameters(c.total_params(), rng());

    // Two-qubit depolarizing channels multiply out to hundreds of operators
    // per layer, so they are only placed on the last layer there.
    std::map<std::size_t, KrausChannel> channels;
    for (std::size_t j = 0; j < depth; ++j) {
      if (j + 1 < depth && rng() % 4 == 0) continue;
      const bool depol = n == 1 || j + 1 == depth;
      channels.emplace(j, random_channel(c.qubits(), rng, prob(rng), depol, true));
    }
    const NoiseModel noise({}, std::move(channels));
    const PushedChannel pushed = push_channel_to_last(c, theta, noise);
    const Matrix clean = conjugate(unitary_matrix(c, theta), rho0.matrix());
    const Matrix interleaved = noisy_propagate(c, theta, noise, rho0.matrix());
    worst = std::max(worst, max_abs(pushed.apply(clean) - interleaved));
    // The rebuilt channel must validate and act identically.
    worst = std::max(worst, max_abs(pushed.as_channel().apply(clean) - interleaved));
  }
  return finish("channel push exactness", worst, 1e-10,
                std::to_string(instances) + " instances");
}

SuiteResult check_incoherent_cost(std::uint64_t seed, int thetas_per_instance) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  int evaluations = 0;
  for (double p : {0.05, 0.3}) {
    for (int i = 0; i < 6; ++i) {
      const auto [n, depth, sun] = instance_shape(i);
      const Circuit c = random_circuit(n, depth, rng(), sun);
      const QubitCount qc = c.qubits();
      const HermitianOperator obs = random_hermitian(qc, rng());
      const DensityMatrix rho0 = random_density_matrix(n, rng());
      const std::size_t layer = rng() % depth;
      std::map<std::size_t, KrausChannel> channels;
      channels.emplace(layer, random_channel(qc, rng, p, true, false));
      const NoiseModel noise({}, std::move(channels));

      for (int t = 0; t < thetas_per_instance; ++t) {
        const ParameterVector theta = initial_parameters(c.total_params(), rng());
        const double noisy =
            expectation(obs.matrix(), noisy_propagate(c, theta, noise, rho0.matrix()));
        const PushedChannel pushed = push_channel_to_last(c, theta, noise);
        const auto form = incoherent_to_observable(obs, pushed.as_channel());
        const double nominal = expectation(obs, apply(c, theta, rho0));
        const double rebuilt = form.scale * (nominal + form.level * form.perturbation_term(
                                                                      c, theta, rho0));
        worst = std::max(worst, std::abs(noisy - rebuilt));
        worst = std::max(worst, std::abs(noisy - form.cost(c, theta, rho0)));
        ++evaluations;
      }
    }
  }
  return finish("incoherent cost exactness", worst, 1e-10,
                std::to_string(evaluations) + " evaluations");
}

SuiteResult check_first_order_ratio(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  constexpr double kLevel = 1e-2;
  constexpr double kLow = 3.5;
  constexpr double kHigh = 4.5;
  constexpr double kDegenerateResidual = 1e-12;

  auto residual = [](const Circuit &c, const HermitianOperator &obs,
                     const DensityMatrix &rho0, const ParameterVector &theta,
                     std::vector<CoherentError> errs) {
    const NoiseModel noise(errs, {});
    const double exact =
        expectation(obs.matrix(), noisy_propagate(c, theta, noise, rho0.matrix()));
    const auto form = first_order_observable(obs, c, std::move(errs));
    return std::abs(exact - form.cost(c, theta, rho0));
  };

  double worst_dev = 0.0;
  double worst_ratio = 4.0;
  double worst_degenerate = 0.0;
  int generic = 0;
  int degenerate = 0;
  bool ok = true;

  for (int i = 0; i < 12; ++i) {
    const auto [n, depth, sun] = instance_shape(i);
    const Circuit c = random_circuit(n, depth, rng(), sun);
    const HermitianOperator obs = random_hermitian(c.qubits(), rng());
    const DensityMatrix rho0 = random_density_matrix(n, rng());
    const ParameterVector theta = initial_parameters(c.total_params(), rng());
    auto errs = random_coherent(c.qubits(), depth, rng, 1.0);
    double top = 0.0;
    for (const auto &e : errs) top = std::max(top, std::abs(e.angle));
    for (auto &e : errs) e.angle *= kLevel / top;
    auto half = errs;
    for (auto &e : half) e.angle *= 0.5;

    const double r_full = residual(c, obs, rho0, theta, errs);
    const double r_half = residual(c, obs, rho0, theta, half);
    const double ratio = r_full / r_half;
    ++generic;
    if (!(ratio >= kLow && ratio <= kHigh)) ok = false;
    if (std::abs(ratio - 4.0) >= worst_dev) {
      worst_dev = std::abs(ratio - 4.0);
      worst_ratio = ratio;
    }
  }

  // Commuting instances: Z-rotation layers, diagonal observable, Z errors.
  for (int n = 1; n <= 2; ++n) {
    const QubitCount qc(n);
    std::vector<Layer> layers;
    for (int j = 0; j < 2; ++j) {
      layers.emplace_back(ProductLayer({pauli_operator({pauli_on(qc, 0, 'Z'), 0.5})}));
    }
    const Circuit c(qc, std::move(layers));
    const HermitianOperator obs = pauli_operator({pauli_on(qc, n - 1, 'Z'), 1.0});
    const DensityMatrix rho0 = random_density_matrix(n, rng());
    const ParameterVector theta = initial_parameters(c.total_params(), rng());
    std::vector<CoherentError> errs{{0, pauli_operator({pauli_on(qc, 0, 'Z'), 0.5}), kLevel},
                                    {1, pauli_operator({pauli_on(qc, 0, 'Z'), 0.5}), -kLevel}};
    const double r = residual(c, obs, rho0, theta, errs);
    ++degenerate;
    worst_degenerate = std::max(worst_degenerate, r);
    if (r > kDegenerateResidual) ok = false;
  }

  std::ostringstream detail;
  detail << generic << " generic instances, worst ratio " << std::setprecision(4)
         << worst_ratio << " (allowed [" << kLow << ", " << kHigh << "]); " << degenerate
         << " commuting instances, worst residual " << fmt(worst_degenerate);
  return {"first-order residual ratio", ok, worst_dev, kHigh - 4.0, detail.str()};
}

SuiteResult check_gradients(std::uint64_t seed, int problems) {
  std::mt19937_64 rng(seed);
  // Relative to max(||g_fd||_inf, 1e-3), so tiny gradients are held to 1e-9
  // absolute.
  double worst = 0.0;
  int noisy = 0;
  for (int i = 0; i < problems; ++i) {
    const int n = 1 + i % 2;
    const bool sun = (i / 2) % 2 == 1;
    const std::size_t depth = 1 + static_cast<std::size_t>(i % 3);
    const Circuit c = random_circuit(n, depth, rng(), sun);
    const QubitCount qc = c.qubits();
    VQEProblem problem = VQEProblem::make(random_hermitian(qc, rng()),
                                          random_density_matrix(n, rng()), c);
    std::uniform_real_distribution<double> prob(0.05, 0.3);
    switch (i % 5) {
      case 1:
        problem = problem.with_noise(NoiseModel(random_coherent(qc, depth, rng, 0.5), {}));
        break;
      case 2: {
        std::map<std::size_t, KrausChannel> ch;
        for (std::size_t j = 0; j < depth; ++j) {
          ch.emplace(j, random_channel(qc, rng, prob(rng), n == 1 || j + 1 == depth, false));
        }
        problem = problem.with_noise(NoiseModel({}, std::move(ch)));
        break;
      }
      case 3: {
        std::map<std::size_t, KrausChannel> ch;
        ch.emplace(depth - 1, KrausChannel::amplitude_damping(qc, 0, prob(rng)));
        problem = problem.with_noise(
            NoiseModel(random_coherent(qc, depth, rng, 0.5), std::move(ch)));
        break;
      }
      case 4:
        if (!sun) {
          std::uniform_real_distribution<double> eta(-0.2, 0.2);
          RealVector e(static_cast<Eigen::Index>(c.total_params()));
          for (Eigen::Index k = 0; k < e.size(); ++k) e(k) = eta(rng);
          problem = problem.with_noise(NoiseModel({}, {}, ControlErrorSpec(e)));
        } else {
          std::map<std::size_t, KrausChannel> ch;
          ch.emplace(0, KrausChannel::depolarizing(qc, prob(rng)));
          problem = problem.with_noise(NoiseModel({}, std::move(ch)));
        }
        break;
      default:
        break;
    }
    if (problem.noisy()) ++noisy;
    const ParameterVector theta = initial_parameters(c.total_params(), rng());
    const RealVector g = gradient(problem, theta);
    const RealVector fd = fd_gradient(problem, theta);
    const double scale = std::max(fd.lpNorm<Eigen::Infinity>(), 1e-3);
    worst = std::max(worst, (g - fd).lpNorm<Eigen::Infinity>() / scale);
  }
  return finish("gradient vs finite differences", worst, 1e-6,
                std::to_string(problems) + " problems, " + std::to_string(noisy) + " noisy");
}

namespace {

VQEProblem depolarized(const VQEProblem &clean, double p, std::size_t layer) {
  std::map<std::size_t, KrausChannel> ch;
  ch.emplace(layer, KrausChannel::depolarizing(clean.circuit.qubits(), p));
  return clean.with_noise(NoiseModel({}, std::move(ch)));
}

}  // namespace

SuiteResult check_depolarizing_gradient(std::uint64_t seed, int thetas) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  int evaluations = 0;
  for (double p : {0.1, 0.3, 0.6}) {
    for (int i = 0; i < 4; ++i) {
      const int n = 1 + i % 2;
      const std::size_t depth = 2;
      const VQEProblem clean = VQEProblem::make(
          random_hermitian(QubitCount(n), rng()), random_density_matrix(n, rng()),
          random_circuit(n, depth, rng(), i / 2 == 1));
      const VQEProblem noisy = depolarized(clean, p, rng() % depth);
      for (int t = 0; t < thetas / 4 + (i < thetas % 4 ? 1 : 0); ++t) {
        const ParameterVector theta = initial_parameters(clean.circuit.total_params(), rng());
        const RealVector diff = gradient(noisy, theta) - (1.0 - p) * gradient(clean, theta);
        worst = std::max(worst, diff.lpNorm<Eigen::Infinity>());
        ++evaluations;
      }
    }
  }
  return finish("depolarizing gradient proportionality", worst, 1e-10,
                std::to_string(evaluations) + " evaluations");
}

SuiteResult check_depolarizing_traces(std::uint64_t seed) {
  const VQEProblem clean = make_random_vqe(2, 1, seed);
  const ParameterVector theta0 = initial_parameters(clean.circuit.total_params(), seed + 1);
  const OptimizerConfig base{0.05, 300, 0.0, 0};
  const TrainingTrace ref = train(clean, theta0, base);
  double worst = 0.0;
  for (double p : {0.1, 0.3, 0.6}) {
    OptimizerConfig scaled = base;
    scaled.step_size = base.step_size / (1.0 - p);
    const TrainingTrace t = train(depolarized(clean, p, 0), theta0, scaled);
    for (std::size_t k = 0; k < ref.thetas.size(); ++k) {
      worst = std::max(worst, (t.thetas[k] - ref.thetas[k]).lpNorm<Eigen::Infinity>());
    }
  }
  return finish("depolarizing trace equivalence", worst, 1e-8, "300 iterations");
}

SuiteResult check_control_errors() {
  const VQEProblem clean = make_single_qubit_rotation();
  const OptimizerConfig opt{0.1, 1000, 0.0, 0};
  ParameterVector theta0(1);
  theta0 << 3.0;
  const double nominal = train(clean, theta0, opt).final_theta(0);

  double worst_opt = std::abs(nominal - std::numbers::pi);
  double worst_bound = 0.0;
  for (double eta : {0.05, 0.1, 0.2}) {
    RealVector e(1);
    e << eta;
    const VQEProblem noisy = clean.with_noise(NoiseModel({}, {}, ControlErrorSpec(e)));
    ParameterVector start(1);
    start << theta0(0) / (1.0 + eta);
    const double tilde = train(noisy, start, opt).final_theta(0);
    worst_opt = std::max(worst_opt, std::abs(tilde - std::numbers::pi / (1.0 + eta)));
    worst_opt = std::max(worst_opt, std::abs(tilde - nominal / (1.0 + eta)));
    // One parameter: |tilde - nominal| = eta |tilde| exactly.
    worst_bound =
        std::max(worst_bound, std::abs(std::abs(tilde - nominal) - eta * std::abs(tilde)));
  }
  const bool ok = worst_opt <= 1e-6 && worst_bound <= 1e-8;
  return {"control error rescaling", ok, worst_opt, 1e-6,
          "bound equality gap " + fmt(worst_bound) + " (allowed 1.000e-08)"};
}

SuiteResult check_descent_monotone(std::uint64_t seed) {
  double worst = 0.0;
  std::vector<VQEProblem> problems;
  problems.push_back(make_random_vqe(2, 2, seed));
  problems.push_back(make_qaoa_maxcut(Graph{3, {{0, 1}, {1, 2}, {0, 2}}}, 2));
  problems.push_back(make_single_qubit_rotation());
  for (std::size_t i = 0; i < problems.size(); ++i) {
    const ParameterVector theta0 =
        initial_parameters(problems[i].circuit.total_params(), seed + i);
    const auto trace = train(problems[i], theta0, OptimizerConfig{1e-2, 300, 0.0, 0});
    for (std::size_t k = 2; k < trace.costs.size(); ++k) {
      worst = std::max(worst, trace.costs[k] - trace.costs[k - 1]);
    }
  }
  return finish("descent monotonicity", worst, 1e-12, "step 1e-2, 300 iterations");
}

SuiteResult check_surjectivity_rank(std::uint64_t seed) {
  bool ok = true;
  std::ostringstream detail;
  for (int n = 1; n <= 2; ++n) {
    const Circuit c = build_locally_surjective(n, 1);
    const std::size_t full = static_cast<std::size_t>(c.dim() * c.dim() - 1);
    std::size_t lowest = full;
    for (int t = 0; t < 10; ++t) {
      const auto r = local_surjectivity_rank(
          c, initial_parameters(c.total_params(), seed + static_cast<std::uint64_t>(t)));
      lowest = std::min(lowest, r);
    }
    if (lowest != full) ok = false;
    detail << "n=" << n << " min rank " << lowest << "/" << full << "; ";
  }
  const QubitCount one(1);
  std::vector<Layer> layers;
  for (int j = 0; j < 3; ++j) layers.emplace_back(ProductLayer({pauli_operator({"Z", 0.5})}));
  const Circuit z_only(one, std::move(layers));
  const auto r = local_surjectivity_rank(z_only, initial_parameters(3, seed));
  if (r != 1) ok = false;
  detail << "Z-only rank " << r;
  return {"local surjectivity rank", ok, ok ? 0.0 : 1.0, 0.0, detail.str()};
}

SuiteResult check_depth_scaling() {
  double worst = 0.0;
  for (int ip = 0; ip <= 50; ++ip) {
    const double p = 0.01 * ip;
    for (std::size_t depth = 1; depth <= 30; ++depth) {
      const double eps = perturbation_level_for_depth(p, depth);
      worst = std::max(worst, std::abs(bit_flip_prob_for_epsilon(eps, depth) - p));
      double grow = 1.0;
      for (std::size_t k = 0; k < depth; ++k) grow /= (1.0 - p);
      worst = std::max(worst, std::abs(eps - (grow - 1.0)) / std::max(1.0, grow));
    }
  }
  return finish("depth scaling round trip", worst, 1e-12, "p in [0, 0.5], L in [1, 30]");
}

SuiteResult check_spectrum_preserved(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto [n, depth, sun] = instance_shape(i);
    const Circuit c = random_circuit(n, depth, rng(), sun);
    const ParameterVector theta = initial_parameters(c.total_params(), rng());
    const auto errs = random_coherent(c.qubits(), depth, rng, 1.0);
    const auto hats = push_coherent_to_last(c, theta, errs);
    for (std::size_t k = 0; k < errs.size(); ++k) {
      const RealVector diff = eigenvalues(hats[k]) - eigenvalues(errs[k].generator);
      worst = std::max(worst, diff.lpNorm<Eigen::Infinity>());
    }
  }
  return finish("pushed generator spectrum", worst, 1e-10);
}

namespace {

SuiteResult check_corrupt_channel() {
  try {
    [[maybe_unused]] const auto ch = KrausChannel::mixture(0.2, {0.45, 0.45},
                                          {pauli_matrix("X"), pauli_matrix("Z")});
    return {"corrupt channel accepted", true, 0.9, 1.0, "weights summing to 0.9 passed"};
  } catch (const ValidationError &e) {
    return {"corrupt channel accepted", false, 0.9, 1.0, e.what()};
  }
}

}  // namespace

VerifyReport verify_all(const VerifyOptions &options) {
  const std::uint64_t s = options.seed;
  VerifyReport report;
  auto run = [&](auto &&fn) {
    try {
      report.suites.push_back(fn());
    } catch (const std::exception &e) {
      report.suites.push_back({"suite aborted", false, 0.0, 0.0, e.what()});
    }
  };
  run([&] { return check_coherent_push(s); });
  run([&] { return check_channel_push(s + 1); });
  run([&] { return check_incoherent_cost(s + 2); });
  run([&] { return check_first_order_ratio(s + 3); });
  run([&] { return check_gradients(s + 4); });
  run([&] { return check_depolarizing_gradient(s + 5); });
  run([&] { return check_depolarizing_traces(s + 6); });
  run([] { return check_control_errors(); });
  run([&] { return check_descent_monotone(s + 7); });
  run([&] { return check_surjectivity_rank(s + 8); });
  run([] { return check_depth_scaling(); });
  run([&] { return check_spectrum_preserved(s + 9); });
  if (options.inject_corrupt_channel) run([] { return check_corrupt_channel(); });
  return report;
}

void print_report(std::ostream &os, const VerifyReport &report) {
  for (const auto &s : report.suites) {
    os << (s.passed ? "PASS " : "FAIL ") << s.name << ": measured " << fmt(s.measured)
       << ", threshold " << fmt(s.threshold);
    if (!s.detail.empty()) os << " (" << s.detail << ")";
    os << '\n';
  }
  const auto failed = std::count_if(report.suites.begin(), report.suites.end(),
                                    [](const SuiteResult &s) { return !s.passed; });
  os << report.suites.size() - static_cast<std::size_t>(failed) << "/"
     << report.suites.size() << " suites passed\n";
}

}  // namespace noisyvqe
